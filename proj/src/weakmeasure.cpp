#include "weakflow/weakmeasure.hpp"

#include <cmath>
#include <sstream>

#include "weakflow/errors.hpp"

namespace weakflow {

namespace {

bool is_diagonal_input(const PolarizationState &pol) {
  return std::abs(pol.s1()) < 1e-12 && std::abs(pol.s2() - 1.0) < 1e-12 && std::abs(pol.s3()) < 1e-12;
}

}  // namespace

std::optional<std::string> weakness_warning(const CalciteSpec &cal, const FieldSpec &spec) {
  const auto *g = spec.get_if<GaussianPairSpec>();
  if (g == nullptr || std::abs(cal.delta_x) <= g->w0 / 100.0) return std::nullopt;
  std::ostringstream os;
  os << "calcite shift " << cal.delta_x << " mm exceeds w0/100 = " << g->w0 / 100.0
     << " mm; the first-order pointer relation degrades";
  return os.str();
}

PerturbedField apply_calcite(const FieldSpec &spec, const CalciteSpec &cal, const RVec3 &point) {
  const complex shifted = evaluate(spec, RVec3{point.x - cal.delta_x, point.y, point.z}).psi;
  const complex here = cal.delta_x == 0.0 ? shifted : evaluate(spec, point).psi;
  return {cal.input.ex() * shifted, cal.input.ey() * here};
}

std::optional<StokesVector> exact_stokes(const PerturbedField &field) {
  const double ix = std::norm(field.ex);
  const double iy = std::norm(field.ey);
  const double intensity = ix + iy;
  if (!(intensity > 0.0)) return std::nullopt;
  const complex cross = std::conj(field.ex) * field.ey;
  return StokesVector{(ix - iy) / intensity, 2.0 * cross.real() / intensity, 2.0 * cross.imag() / intensity};
}

std::optional<StokesVector> predicted_stokes(const std::optional<ComplexMomentum> &mom, const CalciteSpec &cal) {
  if (!is_diagonal_input(cal.input)) {
    throw ValidationError("first-order Stokes prediction requires the diagonal input polarization (0, 1, 0)");
  }
  if (!mom) return std::nullopt;
  StokesVector s{cal.delta_x * mom->p.x.imag(), 1.0, cal.delta_x * mom->p.x.real()};
  const double len = s.length();
  return StokesVector{s.s1 / len, s.s2 / len, s.s3 / len};
}

PointerReadout momentum_from_stokes(const StokesVector &stokes, const CalciteSpec &cal) {
  if (cal.delta_x == 0.0) throw DegeneratePointerError("delta_x = 0: the Stokes pointer is not coupled to momentum");
  return {stokes.s3 / cal.delta_x, stokes.s1 / cal.delta_x};
}

}  // namespace weakflow
