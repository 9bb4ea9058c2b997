#include "weakflow/observables.hpp"

#include <cmath>

#include "weakflow/errors.hpp"

namespace weakflow {

std::optional<ComplexMomentum> local_momentum(const FieldSample &sample, const SingularityThreshold &threshold) {
  if (threshold.is_singular(sample.amplitude())) return std::nullopt;
  const complex minus_i_over_psi = complex{0.0, -1.0} / sample.psi;
  return ComplexMomentum{sample.grad_psi * minus_i_over_psi};
}

PolarizationState::PolarizationState(complex ex, complex ey) {
  const double len = std::sqrt(std::norm(ex) + std::norm(ey));
  if (!(len > 0.0) || !std::isfinite(len)) throw ValidationError("polarization vector must be nonzero and finite");
  ex_ = ex / len;
  ey_ = ey / len;
}

PolarizationState PolarizationState::circular(int handedness) {
  if (handedness != 1 && handedness != -1) throw ValidationError("circular handedness must be +1 or -1");
  return {1.0, complex{0.0, static_cast<double>(handedness)}};
}

double PolarizationState::s1() const { return std::norm(ex_) - std::norm(ey_); }
double PolarizationState::s2() const { return 2.0 * (std::conj(ex_) * ey_).real(); }
double PolarizationState::s3() const { return 2.0 * (std::conj(ex_) * ey_).imag(); }

PoyntingDecomposition poynting_decomposition(const FieldSample &sample, const PolarizationState &pol, double omega) {
  const complex conj_psi = std::conj(sample.psi);
  const CVec3 flux = conj_psi * sample.grad_psi;  // psi* grad psi
  PoyntingDecomposition dec;
  dec.orbital = imag_part(flux) / (2.0 * omega);
  // curl Im[E* x E] = S3 grad|psi|^2 x z_hat for uniform transverse polarization.
  const RVec3 grad_intensity = 2.0 * real_part(flux);
  const double s3 = pol.s3();
  if (s3 != 0.0) {
    dec.spin = cross(grad_intensity, RVec3{0.0, 0.0, 1.0}) * (s3 / (4.0 * omega));
  }
  dec.energy_density = 0.5 * std::norm(sample.psi);
  return dec;
}

PoyntingDecomposition poynting_decomposition(const FieldSpec &spec, const PolarizationState &pol, const RVec3 &point) {
  return poynting_decomposition(evaluate(spec, point), pol, spec.wave().omega());
}

std::optional<RVec3> momentum_ratio(const PoyntingDecomposition &dec, const SingularityThreshold &threshold) {
  if (!(dec.energy_density > threshold.energy_floor())) return std::nullopt;
  return dec.orbital / dec.energy_density;
}

std::optional<RVec3> group_velocity(const std::optional<ComplexMomentum> &mom, double k) {
  if (!mom) return std::nullopt;
  return mom->re() / k;
}

bool is_superoscillating(const ComplexMomentum &mom, double bound) { return norm(mom.re()) > bound; }

}  // namespace weakflow
