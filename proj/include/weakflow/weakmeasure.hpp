#pragma once

#include <optional>
#include <string>

#include "weakflow/observables.hpp"

namespace weakflow {

/// Thin birefringent plate acting as a weak polarization-momentum coupler.
///
/// For a crystal whose extraordinary-wave phase varies with incidence as
/// phi(alpha) = phi0 + zeta * k_x / k, the x-polarized component is displaced by
/// delta_x = zeta / k = d phi / d k_x relative to the y-polarized one. Crystal
/// constants (zeta, the optic-axis tilt alpha0) are not modelled: delta_x is given
/// directly and phi0 = 0 (mod 2 pi) is assumed.
struct CalciteSpec {
  double delta_x = 1e-4;  ///< mm
  PolarizationState input = PolarizationState::diagonal();
};

/// Warning text when the shift is not small against the Gaussian waist.
std::optional<std::string> weakness_warning(const CalciteSpec &cal, const FieldSpec &spec);

struct StokesVector {
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;

  double length() const { return std::sqrt(s1 * s1 + s2 * s2 + s3 * s3); }
};

/// Field components after the plate.
struct PerturbedField {
  complex ex;
  complex ey;
};

/// E'_x = e_x psi(x - delta_x, z), E'_y = e_y psi(x, z), evaluated exactly.
PerturbedField apply_calcite(const FieldSpec &spec, const CalciteSpec &cal, const RVec3 &point);

/// Normalized Stokes parameters; nullopt for zero intensity.
std::optional<StokesVector> exact_stokes(const PerturbedField &field);

/// First-order pointer prediction (delta_x Im p_x, 1, delta_x Re p_x), renormalized to unit length.
/// Requires the diagonal input polarization S = (0, 1, 0).
std::optional<StokesVector> predicted_stokes(const std::optional<ComplexMomentum> &mom, const CalciteSpec &cal);

struct PointerReadout {
  double re_px = 0.0;
  double im_px = 0.0;
};

/// Inverts the pointer: Re p_x = S'_3 / delta_x, Im p_x = S'_1 / delta_x.
PointerReadout momentum_from_stokes(const StokesVector &stokes, const CalciteSpec &cal);

}  // namespace weakflow
