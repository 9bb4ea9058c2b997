#include <doctest.h>

#include <vector>

#include "oracles.hpp"
#include "weakflow/errors.hpp"
#include "weakflow/tracing.hpp"

using namespace weakflow;

namespace {

FieldSpec fig1_pair() { return FieldSpec::gaussian_pair({WaveParameters(0.943e-3), 0.608, 4.69 / 2.0}); }

TraceConfig pair_config(double step) {
  TraceConfig cfg;
  cfg.parameterization = Parameterization::paraxial_z;
  cfg.step = step;
  cfg.max_steps = 100000;
  cfg.domain = {{-10, -1, 0}, {10, 1, 3000}};
  return cfg;
}

BesselSpec helix_beam() {
  const WaveParameters wave(1e-3);
  const double k = wave.k();
  return {wave, 2, k * std::sqrt(1.0 - 0.99 * 0.99)};
}

}  // namespace

TEST_CASE("plane wave streamline is a straight line") {
  const FieldSpec pw = FieldSpec::plane_wave({WaveParameters(1.0), {0, 0, 1}});
  TraceConfig cfg;
  cfg.step = 0.1;
  cfg.domain = {{-1, -1, 0}, {1, 1, 5}};
  const auto t = trace_streamline(pw, cfg, {0.37, 0, 0}, MomentumPart::real);
  CHECK(t.termination == Termination::left_domain);
  CHECK(t.points.back().position.z == 5.0);
  for (const auto &pt : t.points) REQUIRE(pt.position.x == 0.37);
}

TEST_CASE("Gaussian pair streamline from the axis stays on the axis") {
  const auto t = trace_streamline(fig1_pair(), pair_config(5.0), {0, 0, 0}, MomentumPart::real);
  CHECK(t.termination == Termination::left_domain);
  CHECK(t.points.back().position.z == 3000.0);
  for (const auto &pt : t.points) REQUIRE(pt.position.x == 0.0);
}

TEST_CASE("Bessel helix reproduces phi(z) = phi0 + z l / (k_z r0^2) and r(z) = r0") {
  const BesselSpec b = helix_beam();
  REQUIRE(b.k_z() / b.wave.k() == doctest::Approx(0.99).epsilon(1e-14));
  const double r0 = 0.5, phi0 = 0.3;
  const auto t = trace_bessel_helix(b, r0, phi0, 10.0);
  REQUIRE(t.points.back().position.z == 10.0);
  double worst_phi = 0.0, worst_r = 0.0;
  for (const auto &pt : t.points) {
    const double z = pt.position.z;
    const double expected = phi0 + z * 2.0 / (b.k_z() * r0 * r0);
    worst_phi = std::max(worst_phi, std::abs(std::remainder(std::atan2(pt.position.y, pt.position.x) - expected, 2 * std::numbers::pi)));
    worst_r = std::max(worst_r, std::abs(std::hypot(pt.position.x, pt.position.y) - r0));
  }
  MESSAGE("helix: phase error " << worst_phi << " rad, radius error " << worst_r << " mm");
  CHECK(worst_phi < 1e-6);
  CHECK(worst_r < 1e-8);
}

TEST_CASE("Bessel helix with l = 0 is a straight line; seeds on J zeros are rejected") {
  BesselSpec b = helix_beam();
  b.ell = 0;
  const auto t = trace_bessel_helix(b, 0.5, 1.0, 10.0);
  for (const auto &pt : t.points) {
    REQUIRE(pt.position.x == doctest::Approx(0.5 * std::cos(1.0)).epsilon(1e-14));
    REQUIRE(pt.position.y == doctest::Approx(0.5 * std::sin(1.0)).epsilon(1e-14));
  }
  const BesselSpec b2 = helix_beam();
  CHECK_THROWS_AS(trace_bessel_helix(b2, 0.0, 0.0, 10.0), SingularSeedError);
  const double zero = 5.135622301840683 / b2.k_perp;
  CHECK_THROWS_AS(trace_bessel_helix(b2, zero, 0.0, 10.0), SingularSeedError);
  CHECK_NOTHROW(trace_bessel_helix(b2, zero * 1.01, 0.0, 1.0));
}

TEST_CASE("singular seed and invalid configurations are errors") {
  const FieldSpec spec = FieldSpec::bessel({WaveParameters(1.0), 2, 0.5});
  TraceConfig cfg;
  cfg.step = 0.1;
  cfg.domain = {{-5, -5, 0}, {5, 5, 5}};
  CHECK_THROWS_AS(trace_streamline(spec, cfg, {0, 0, 0}, MomentumPart::real), SingularSeedError);
  TraceConfig bad = cfg;
  bad.step = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.max_steps = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = cfg;
  bad.vortex_guard = 1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  CHECK_THROWS_AS(trace_streamline(spec, cfg, {9, 0, 0}, MomentumPart::real), ValidationError);
}

TEST_CASE("two-slit trajectory bundle does not cross") {
  const FieldSpec spec = fig1_pair();
  TraceConfig cfg = pair_config(5.0);
  for (int i = 0; i < 25; ++i) cfg.seeds.push_back({-3.0 + 6.0 * i / 24.0, 0, 0});
  const auto bundle = trace_streamlines(spec, cfg, MomentumPart::real);
  REQUIRE(bundle.size() == 25);
  std::size_t len = bundle[0].points.size();
  for (const auto &t : bundle) {
    REQUIRE(t.termination == Termination::left_domain);
    REQUIRE(t.points.size() == len);
  }
  double min_gap = 1e9;
  for (std::size_t n = 0; n < len; ++n) {
    for (std::size_t i = 1; i < bundle.size(); ++i) {
      REQUIRE(bundle[i].points[n].parameter == bundle[i - 1].points[n].parameter);
      const double gap = bundle[i].points[n].position.x - bundle[i - 1].points[n].position.x;
      REQUIRE(gap > 0.0);
      min_gap = std::max(0.0, std::min(min_gap, gap));
    }
  }
  MESSAGE("minimum neighbour separation " << min_gap << " mm");
  CHECK(min_gap > 0.0);
  // lobes fan out: the outermost trajectories end farther from the axis than they started
  CHECK(std::abs(bundle.front().points.back().position.x) > 3.0);
}

TEST_CASE("consecutive points respect the step bound") {
  const FieldSpec spec = build_tir_field(TirTwoWaveSpec::wolter_defaults(1.0));
  TraceConfig cfg;
  cfg.parameterization = Parameterization::arc_length;
  cfg.step = 0.02;
  cfg.max_steps = 2000;
  cfg.domain = {{-5, -1, 0}, {5, 1, 20}};
  const auto t = trace_streamline(spec, cfg, {-0.2, 0, 0.1}, MomentumPart::real);
  for (std::size_t n = 1; n < t.points.size(); ++n) {
    REQUIRE(norm(t.points[n].position - t.points[n - 1].position) <= 2.0 * cfg.step);
  }
}

TEST_CASE("RK4 step halving converges at fourth order on the two-slit field") {
  const FieldSpec spec = fig1_pair();
  auto endpoint = [&](double step) {
    return trace_streamline(spec, pair_config(step), {2.0, 0, 0}, MomentumPart::real).points.back().position.x;
  };
  const double x1 = endpoint(300.0), x2 = endpoint(150.0), x3 = endpoint(75.0);
  const double order = std::log2(std::abs(x1 - x2) / std::abs(x2 - x3));
  MESSAGE("measured RK4 order " << order);
  CHECK(order >= 3.5);
}

TEST_CASE("Im p streamlines of the Bessel beam are radial and run between maxima and zeros") {
  const BesselSpec b{WaveParameters(1.0), 2, 2.0};
  const FieldSpec spec = FieldSpec::bessel(b);
  TraceConfig cfg;
  cfg.parameterization = Parameterization::arc_length;
  cfg.step = 1e-3;
  cfg.max_steps = 20000;
  cfg.domain = {{-10, -10, -1}, {10, 10, 1}};
  const double first_max = 3.0542369 / b.k_perp, first_zero = 5.1356223 / b.k_perp;
  const double phi = 0.8;
  const double r_seed = first_max * 1.05;
  const auto t = trace_streamline(spec, cfg, {r_seed * std::cos(phi), r_seed * std::sin(phi), 0.0}, MomentumPart::imaginary);
  CHECK((t.termination == Termination::vortex_proximity || t.termination == Termination::singular_amplitude));
  for (const auto &pt : t.points) {
    REQUIRE(std::abs(std::atan2(pt.position.y, pt.position.x) - phi) < 1e-12);
    REQUIRE(std::abs(pt.position.z) < 1e-15);
  }
  const double r_end = std::hypot(t.points.back().position.x, t.points.back().position.y);
  CHECK(r_end == doctest::Approx(first_zero).epsilon(1e-2));
  // the radial osmotic momentum changes sign at the maximum, which is the source of the streamlines
  auto radial_im = [&](double r) {
    return dot(local_momentum(evaluate(spec, {r * std::cos(phi), r * std::sin(phi), 0}), SingularityThreshold::for_field(spec))->im(),
               RVec3{std::cos(phi), std::sin(phi), 0});
  };
  CHECK(radial_im(first_max * 0.99) < 0.0);
  CHECK(radial_im(first_max * 1.01) > 0.0);
  CHECK(std::abs(radial_im(first_max)) < 1e-6 * b.k_perp);
}

TEST_CASE("paraxial tracing stops at backflow; arc-length tracing stops where |p| blows up") {
  const FieldSpec spec = build_tir_field(TirTwoWaveSpec::wolter_defaults(1.0));
  const auto th = SingularityThreshold::for_field(spec);
  TraceConfig cfg;
  cfg.step = 0.01;
  cfg.max_steps = 5000;
  cfg.domain = {{-3, -1, 0}, {3, 1, 12}};
  // locate a backflow point by scanning the glass next to the interface
  std::optional<RVec3> backflow;
  for (int i = 0; i < 200 && !backflow; ++i) {
    for (int j = 0; j < 200 && !backflow; ++j) {
      const RVec3 p{-1.0 + 0.99 * i / 199.0, 0.0, 1.2 * j / 199.0};
      const auto mom = local_momentum(evaluate(spec, p), th);
      if (mom && mom->re().z < 0.0) backflow = p;
    }
  }
  REQUIRE(backflow);
  cfg.parameterization = Parameterization::paraxial_z;
  const auto stopped = trace_streamline(spec, cfg, *backflow, MomentumPart::real);
  CHECK(stopped.termination == Termination::vortex_proximity);
  CHECK(stopped.points.size() == 1);
  cfg.parameterization = Parameterization::arc_length;
  const auto near = trace_streamline(spec, cfg, {-0.25, 0, 0.2}, MomentumPart::real);
  CHECK(near.termination == Termination::vortex_proximity);
  CHECK(norm(near.points.back().momentum) > cfg.vortex_guard * spec.k());
  CHECK(termination_name(Termination::vortex_proximity) == "vortex-proximity");
}
