#include "weakflow/tracing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "weakflow/errors.hpp"

namespace weakflow {

namespace {

constexpr int kMaxConsecutiveHalvings = 8;

struct Slope {
  bool ok = false;
  Termination failure = Termination::singular_amplitude;
  RVec3 momentum;
  RVec3 derivative;
};

class StreamField {
 public:
  StreamField(const FieldSpec &spec, Parameterization param, MomentumPart which)
      : spec_(spec), threshold_(SingularityThreshold::for_field(spec)), param_(param), which_(which) {}

  Slope operator()(const RVec3 &pos) const {
    Slope out;
    const auto mom = local_momentum(evaluate(spec_, pos), threshold_);
    if (!mom) return out;
    out.momentum = which_ == MomentumPart::real ? mom->re() : mom->im();
    if (param_ == Parameterization::paraxial_z) {
      if (!(out.momentum.z > 0.0)) {
        out.failure = Termination::vortex_proximity;
        return out;
      }
      out.derivative = RVec3{out.momentum.x / out.momentum.z, out.momentum.y / out.momentum.z, 1.0};
    } else {
      const double len = norm(out.momentum);
      if (!(len > 0.0)) {
        out.failure = Termination::stagnation;
        return out;
      }
      out.derivative = out.momentum / len;
    }
    out.ok = true;
    return out;
  }

 private:
  const FieldSpec &spec_;
  SingularityThreshold threshold_;
  Parameterization param_;
  MomentumPart which_;
};

}  // namespace

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::left_domain: return "left-domain";
    case Termination::max_steps: return "max-steps";
    case Termination::vortex_proximity: return "vortex-proximity";
    case Termination::singular_amplitude: return "singular-amplitude";
    case Termination::stagnation: return "stagnation";
  }
  return "unknown";
}

void TraceConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw ValidationError("trace step must be positive");
  if (max_steps < 1) throw ValidationError("max_steps must be at least 1");
  if (!(vortex_guard > 1.0)) throw ValidationError("vortex_guard must exceed 1");
  if (!(domain.lo.x <= domain.hi.x && domain.lo.y <= domain.hi.y && domain.lo.z <= domain.hi.z)) {
    throw ValidationError("trace domain box must be ordered");
  }
}

Trajectory trace_streamline(const FieldSpec &spec, const TraceConfig &cfg, const RVec3 &seed, MomentumPart which) {
  cfg.validate();
  if (!cfg.domain.contains(seed)) throw ValidationError("trace seed lies outside the domain box");

  const StreamField field(spec, cfg.parameterization, which);
  const bool paraxial = cfg.parameterization == Parameterization::paraxial_z;
  const double guard = cfg.vortex_guard * spec.k();

  Slope here = field(seed);
  if (!here.ok && here.failure == Termination::singular_amplitude) {
    throw SingularSeedError("trace seed is at a singular (zero-amplitude) point");
  }

  Trajectory traj;
  traj.points.push_back({paraxial ? seed.z : 0.0, seed, here.momentum});
  if (!here.ok) {
    traj.termination = here.failure;
    return traj;
  }

  RVec3 pos = seed;
  double param = traj.points.back().parameter;
  double step = cfg.step;
  int halvings = 0;

  for (int n = 0; n < cfg.max_steps; ++n) {
    if (norm(here.momentum) > guard) {
      step *= 0.5;
      if (++halvings >= kMaxConsecutiveHalvings) {
        traj.termination = Termination::vortex_proximity;
        return traj;
      }
    } else {
      step = cfg.step;
      halvings = 0;
    }

    double h = step;
    if (paraxial) {
      const double remaining = cfg.domain.hi.z - pos.z;
      if (!(remaining > 0.0)) {
        traj.termination = Termination::left_domain;
        return traj;
      }
      h = std::min(h, remaining);
    }

    const Slope k1 = here;
    const Slope k2 = field(pos + k1.derivative * (0.5 * h));
    if (!k2.ok) {
      traj.termination = k2.failure;
      return traj;
    }
    const Slope k3 = field(pos + k2.derivative * (0.5 * h));
    if (!k3.ok) {
      traj.termination = k3.failure;
      return traj;
    }
    const Slope k4 = field(pos + k3.derivative * h);
    if (!k4.ok) {
      traj.termination = k4.failure;
      return traj;
    }

    RVec3 next = pos + (k1.derivative + 2.0 * k2.derivative + 2.0 * k3.derivative + k4.derivative) * (h / 6.0);
    if (paraxial && h == cfg.domain.hi.z - pos.z) next.z = cfg.domain.hi.z;
    if (!cfg.domain.contains(next)) {
      traj.termination = Termination::left_domain;
      return traj;
    }

    here = field(next);
    if (!here.ok && here.failure == Termination::singular_amplitude) {
      traj.termination = Termination::singular_amplitude;
      return traj;
    }
    pos = next;
    param = paraxial ? pos.z : param + h;
    traj.points.push_back({param, pos, here.momentum});
    if (!here.ok) {
      traj.termination = here.failure;
      return traj;
    }
  }
  traj.termination = Termination::max_steps;
  return traj;
}

std::vector<Trajectory> trace_streamlines(const FieldSpec &spec, const TraceConfig &cfg, MomentumPart which) {
  std::vector<Trajectory> out;
  out.reserve(cfg.seeds.size());
  for (const auto &seed : cfg.seeds) out.push_back(trace_streamline(spec, cfg, seed, which));
  return out;
}

Trajectory trace_bessel_helix(const BesselSpec &spec, double r0, double phi0, double z_end, double step) {
  const FieldSpec field = FieldSpec::bessel(spec);
  if (!(r0 >= 0.0) || !std::isfinite(r0)) throw ValidationError("helix radius must be non-negative");
  if (!(z_end > 0.0) || !std::isfinite(z_end)) throw ValidationError("helix z_end must be positive");

  const int m = std::abs(spec.ell);
  if (m > 0) {
    const double arg = spec.k_perp * r0;
    const double j = bessel_j(m, arg);
    const double dj = bessel_j_derivative(m, arg);
    // Newton distance to the nearest zero of J_m, relative to the argument.
    if (r0 == 0.0 || std::abs(j) <= 1e-6 * std::abs(dj) * arg) {
      throw SingularSeedError("helix seed radius " + std::to_string(r0) + " mm sits on a zero of J_" +
                              std::to_string(m));
    }
  }

  TraceConfig cfg;
  cfg.parameterization = Parameterization::paraxial_z;
  cfg.step = step > 0.0 ? step : z_end / 200.0;
  cfg.max_steps = static_cast<int>(std::ceil(z_end / cfg.step)) + 16;
  const double reach = 2.0 * r0 + spec.wave.lambda();
  cfg.domain = Box{RVec3{-reach, -reach, 0.0}, RVec3{reach, reach, z_end}};
  // The traced helix has |Re p| ~ k_z; the guard only matters for seeds near the axis.
  cfg.vortex_guard = std::max(10.0, 2.0 * std::abs(spec.ell) / (std::max(r0, 1e-300) * spec.wave.k()));
  const RVec3 seed{r0 * std::cos(phi0), r0 * std::sin(phi0), 0.0};
  return trace_streamline(field, cfg, seed, MomentumPart::real);
}

}  // namespace weakflow
