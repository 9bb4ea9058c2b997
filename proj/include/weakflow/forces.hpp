#pragma once

#include <optional>
#include <string>

#include "weakflow/observables.hpp"

namespace weakflow {

/// Complex dipole polarizability of a Rayleigh probe particle.
struct Polarizability {
  complex chi{1.0, 0.0};

  bool is_passive() const { return chi.imag() >= 0.0; }
};

/// Warning text for an active (gain) particle, Im chi < 0.
std::optional<std::string> passivity_warning(const Polarizability &alpha);

/// Dipole force split. Units are 1/2 |chi| psi^2 / mm; only ratios are meaningful.
struct OpticalForce {
  RVec3 gradient;
  RVec3 scattering;
};

/// F_grad = 1/2 Re chi Re[psi* grad psi], F_scat = 1/2 Im chi Im[psi* grad psi].
/// Uniform polarization makes E* . (grad) E = psi* grad psi, so only the sample is needed.
OpticalForce optical_force(const FieldSample &sample, const Polarizability &alpha);
OpticalForce optical_force(const FieldSpec &spec, const PolarizationState &pol, const Polarizability &alpha,
                           const RVec3 &point);

/// Forces divided by the energy density W = |psi|^2 / 2:
/// F_grad / W = -Re chi Im p and F_scat / W = Im chi Re p.
std::optional<OpticalForce> normalized_forces(const OpticalForce &force, double energy_density,
                                              const SingularityThreshold &threshold);

}  // namespace weakflow
