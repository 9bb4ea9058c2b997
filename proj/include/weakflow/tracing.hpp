#pragma once

#include <string_view>
#include <vector>

#include "weakflow/observables.hpp"

namespace weakflow {

enum class Parameterization {
  paraxial_z,  ///< dx/dz = p_x / p_z, dy/dz = p_y / p_z
  arc_length,  ///< dr/ds = p / |p|
};

enum class MomentumPart { real, imaginary };

enum class Termination {
  left_domain,
  max_steps,
  vortex_proximity,    ///< 8 consecutive step halvings, or p_z <= 0 under paraxial_z
  singular_amplitude,  ///< a stage landed below the singularity threshold
  stagnation,          ///< |p| = 0 under arc_length (e.g. Im p at an intensity maximum)
};

std::string_view termination_name(Termination t);

struct Box {
  RVec3 lo;
  RVec3 hi;

  bool contains(const RVec3 &p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y && p.z >= lo.z && p.z <= hi.z;
  }
};

struct TraceConfig {
  std::vector<RVec3> seeds;
  Parameterization parameterization = Parameterization::paraxial_z;
  double step = 1.0;  ///< mm of z or of arc length
  int max_steps = 10000;
  Box domain;
  double vortex_guard = 10.0;  ///< |p| cutoff in units of k; must exceed 1

  /// Throws ValidationError on a bad configuration.
  void validate() const;
};

struct TracePoint {
  double parameter = 0.0;  ///< z (paraxial_z) or arc length s
  RVec3 position;
  RVec3 momentum;  ///< traced part of p at this point
};

struct Trajectory {
  std::vector<TracePoint> points;
  Termination termination = Termination::max_steps;
};

/// RK4 streamline of Re p or Im p from one seed. Throws SingularSeedError when the
/// seed itself is singular.
Trajectory trace_streamline(const FieldSpec &spec, const TraceConfig &cfg, const RVec3 &seed, MomentumPart which);

/// One trajectory per seed of the config, in seed order.
std::vector<Trajectory> trace_streamlines(const FieldSpec &spec, const TraceConfig &cfg, MomentumPart which);

/// Streamline of Re p in a Bessel beam from (r0, phi0, z = 0) to z_end, integrated
/// numerically in Cartesian coordinates. Throws SingularSeedError when r0 sits on
/// a zero of J_|l| (within 1e-6 relative).
Trajectory trace_bessel_helix(const BesselSpec &spec, double r0, double phi0, double z_end, double step = 0.0);

}  // namespace weakflow
