#pragma once

#include <optional>

#include "weakflow/fields.hpp"

namespace weakflow {

/// Amplitude floor below which a sample counts as a phase singularity.
/// Fixed at 1e-12 of the maximum amplitude over the active domain.
class SingularityThreshold {
 public:
  static constexpr double relative_floor = 1e-12;

  explicit SingularityThreshold(double max_amplitude) : amplitude_floor_(relative_floor * max_amplitude) {}
  static SingularityThreshold for_field(const FieldSpec &spec) {
    return SingularityThreshold(spec.reference_amplitude());
  }

  double amplitude_floor() const { return amplitude_floor_; }
  /// Matching floor on W = |psi|^2 / 2.
  double energy_floor() const { return 0.5 * amplitude_floor_ * amplitude_floor_; }
  bool is_singular(double amplitude) const { return !(amplitude > amplitude_floor_); }

 private:
  double amplitude_floor_;
};

/// p = -i grad ln psi. Re p is the phase gradient (current), Im p = -grad ln A (osmotic).
struct ComplexMomentum {
  CVec3 p;

  RVec3 re() const { return real_part(p); }
  RVec3 im() const { return imag_part(p); }
};

/// std::nullopt marks a singular sample.
std::optional<ComplexMomentum> local_momentum(const FieldSample &sample, const SingularityThreshold &threshold);

/// Uniform transverse polarization e = (e_x, e_y), e* . e = 1.
class PolarizationState {
 public:
  /// Normalizes (ex, ey); throws ValidationError for the zero vector.
  PolarizationState(complex ex, complex ey);

  static PolarizationState linear_x() { return {1.0, 0.0}; }
  static PolarizationState diagonal() { return {1.0, 1.0}; }
  /// handedness +1 gives S3 = +1, -1 gives S3 = -1.
  static PolarizationState circular(int handedness);

  complex ex() const { return ex_; }
  complex ey() const { return ey_; }
  double s1() const;
  double s2() const;
  double s3() const;

 private:
  complex ex_, ey_;
};

/// Orbital/spin split of the Poynting vector for a uniformly polarized scalar field.
struct PoyntingDecomposition {
  RVec3 orbital;
  RVec3 spin;
  double energy_density = 0.0;

  RVec3 total() const { return orbital + spin; }
};

PoyntingDecomposition poynting_decomposition(const FieldSample &sample, const PolarizationState &pol, double omega);
PoyntingDecomposition poynting_decomposition(const FieldSpec &spec, const PolarizationState &pol, const RVec3 &point);

/// P_O / W, which equals Re p / k with c = 1.
std::optional<RVec3> momentum_ratio(const PoyntingDecomposition &dec, const SingularityThreshold &threshold);

/// Local group velocity Re p / k in units of c.
std::optional<RVec3> group_velocity(const std::optional<ComplexMomentum> &mom, double k);

/// |Re p| > bound: superoscillation, reported separately from the backflow/superluminal labels.
bool is_superoscillating(const ComplexMomentum &mom, double bound);

}  // namespace weakflow
