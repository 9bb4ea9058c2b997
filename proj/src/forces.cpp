#include "weakflow/forces.hpp"

#include <sstream>

namespace weakflow {

std::optional<std::string> passivity_warning(const Polarizability &alpha) {
  if (alpha.is_passive()) return std::nullopt;
  std::ostringstream os;
  os << "Im chi = " << alpha.chi.imag() << " < 0 describes an active particle";
  return os.str();
}

OpticalForce optical_force(const FieldSample &sample, const Polarizability &alpha) {
  const CVec3 flux = std::conj(sample.psi) * sample.grad_psi;
  return {real_part(flux) * (0.5 * alpha.chi.real()), imag_part(flux) * (0.5 * alpha.chi.imag())};
}

OpticalForce optical_force(const FieldSpec &spec, const PolarizationState & /*pol*/, const Polarizability &alpha,
                           const RVec3 &point) {
  // e* . e = 1 for every PolarizationState, so the polarization drops out.
  return optical_force(evaluate(spec, point), alpha);
}

std::optional<OpticalForce> normalized_forces(const OpticalForce &force, double energy_density,
                                              const SingularityThreshold &threshold) {
  if (!(energy_density > threshold.energy_floor())) return std::nullopt;
  return OpticalForce{force.gradient / energy_density, force.scattering / energy_density};
}

}  // namespace weakflow
