#include <doctest.h>

#include "oracles.hpp"
#include "weakflow/forces.hpp"

using namespace weakflow;

namespace {

FieldSpec fig1_pair() { return FieldSpec::gaussian_pair({WaveParameters(0.943e-3), 0.608, 4.69 / 2.0}); }

double rel(const RVec3 &a, const RVec3 &b) { return oracle::rnorm(a - b) / std::max(oracle::rnorm(b), 1e-300); }

}  // namespace

TEST_CASE("plane wave with chi = i: no gradient force, scattering force k/2 along z") {
  const FieldSpec pw = FieldSpec::plane_wave({WaveParameters(0.5), {0, 0, 1}});
  const auto f = optical_force(pw, PolarizationState::diagonal(), {complex(0, 1)}, {0.2, -0.1, 3.0});
  CHECK(oracle::rnorm(f.gradient) == 0.0);
  CHECK(f.scattering.x == 0.0);
  CHECK(f.scattering.z == doctest::Approx(0.5 * pw.k()).epsilon(1e-14));
}

TEST_CASE("Bessel l = 2 at a radial intensity maximum") {
  const BesselSpec b{WaveParameters(1.0), 2, 2.0};
  const FieldSpec spec = FieldSpec::bessel(b);
  const Polarizability chi{complex(1.0, 0.3)};
  // first maximum of J_2: zero of J_2' by bisection on the integral representation
  double lo = 2.0, hi = 4.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (oracle::bessel_integral_derivative(2, lo) * oracle::bessel_integral_derivative(2, mid) <= 0 ? hi : lo) = mid;
  }
  const double r = 0.5 * (lo + hi) / b.k_perp;
  for (double phi : {0.0, 1.0, 4.0}) {
    const RVec3 p{r * std::cos(phi), r * std::sin(phi), 0.3};
    const auto f = optical_force(spec, PolarizationState::diagonal(), chi, p);
    const RVec3 r_hat{std::cos(phi), std::sin(phi), 0}, phi_hat{-std::sin(phi), std::cos(phi), 0};
    const double j = oracle::bessel_integral(2, b.k_perp * r);
    CHECK(std::abs(dot(f.gradient, r_hat)) < 1e-12 * j * j * b.k_perp);
    CHECK(dot(f.scattering, phi_hat) == doctest::Approx(0.5 * 0.3 * j * j * 2.0 / r).epsilon(1e-10));
  }
}

TEST_CASE("standing wave cos(kx) e^{ikz} with real chi: gradient force follows -sin(2kx)") {
  const double k = 2.0 * std::numbers::pi;
  auto sample = [k](double x, double z) {
    const complex carrier = std::exp(complex(0, k * z));
    return FieldSample{std::cos(k * x) * carrier,
                       CVec3{-k * std::sin(k * x) * carrier, 0.0, complex(0, k) * std::cos(k * x) * carrier}};
  };
  auto intensity = [k](double x) { return std::cos(k * x) * std::cos(k * x); };
  const Polarizability chi{2.0};
  for (double x = -0.5; x <= 0.5; x += 0.037) {
    const auto f = optical_force(sample(x, 0.3), chi);
    const double h = 1e-6;
    const double fd = (intensity(x + h) - intensity(x - h)) / (2 * h);
    // 1/2 Re chi Re[psi* d_x psi] = 1/4 Re chi d_x |psi|^2 = -(k/4) Re chi sin(2kx)
    CHECK(f.gradient.x == doctest::Approx(0.25 * 2.0 * fd).epsilon(1e-7));
    CHECK(f.gradient.x == doctest::Approx(-0.25 * 2.0 * k * std::sin(2 * k * x)).epsilon(1e-12));
    CHECK(oracle::rnorm(f.scattering) == 0.0);
  }
}

TEST_CASE("normalized forces equal Im chi re p and -Re chi im p on the two-slit grid") {
  const FieldSpec spec = fig1_pair();
  const auto th = SingularityThreshold::for_field(spec);
  const Polarizability chi{complex(1.3, 0.4)};
  double worst_scat = 0.0, worst_grad = 0.0;
  for (int i = 0; i < 120; ++i) {
    for (int j = 0; j < 120; ++j) {
      const RVec3 p{-4.0 + 8.0 * i / 119.0, 0.0, 3000.0 * j / 119.0};
      const auto s = evaluate(spec, p);
      const auto mom = local_momentum(s, th);
      const auto nf = normalized_forces(optical_force(s, chi), 0.5 * std::norm(s.psi), th);
      REQUIRE(mom.has_value() == nf.has_value());
      if (!mom) continue;
      worst_scat = std::max(worst_scat, rel(nf->scattering, mom->re() * chi.chi.imag()));
      worst_grad = std::max(worst_grad, rel(nf->gradient, mom->im() * -chi.chi.real()));
      // gradient force is anti-parallel to the osmotic momentum
      if (norm(mom->im()) > 0.0) {
        REQUIRE(dot(nf->gradient, mom->im()) / (norm(nf->gradient) * norm(mom->im())) == doctest::Approx(-1.0).epsilon(1e-12));
      }
    }
  }
  CHECK(worst_scat < 1e-10);
  CHECK(worst_grad < 1e-10);
}

TEST_CASE("Bessel gradient force is anti-parallel to im p at every non-singular radius") {
  const BesselSpec b{WaveParameters(1e-3), 2, 0.05 * 2.0 * std::numbers::pi / 1e-3};
  const FieldSpec spec = FieldSpec::bessel(b);
  const auto th = SingularityThreshold::for_field(spec);
  int checked = 0;
  for (int i = 1; i <= 2000; ++i) {
    const double r = 30.0 / b.k_perp * i / 2000.0;
    const RVec3 p{r * 0.8, -r * 0.6, 0.1};
    const auto s = evaluate(spec, p);
    const auto mom = local_momentum(s, th);
    if (!mom || norm(mom->im()) == 0.0) continue;
    const auto nf = normalized_forces(optical_force(s, {complex(0.7, 0.1)}), 0.5 * std::norm(s.psi), th);
    REQUIRE(nf);
    REQUIRE(dot(nf->gradient, mom->im()) / (norm(nf->gradient) * norm(mom->im())) == doctest::Approx(-1.0).epsilon(1e-12));
    ++checked;
  }
  CHECK(checked > 1900);
}

TEST_CASE("real chi exerts no scattering force, and Re chi > 0 pulls up the intensity gradient") {
  const FieldSpec spec = build_tir_field(TirTwoWaveSpec::wolter_defaults(1.0));
  auto g = oracle::rng(17);
  for (int n = 0; n < 500; ++n) {
    RVec3 p{oracle::uniform(g, -2, 2), 0, oracle::uniform(g, 0, 4)};
    if (std::abs(p.x) < 1e-3) p.x = 0.5;
    const auto f = optical_force(spec, PolarizationState::linear_x(), {1.0}, p);
    REQUIRE(oracle::rnorm(f.scattering) == 0.0);
    const double h = 1e-6;
    auto intensity = [&](RVec3 q) { return std::norm(evaluate(spec, q).psi); };
    const RVec3 grad_i{(intensity(p + RVec3{h, 0, 0}) - intensity(p - RVec3{h, 0, 0})) / (2 * h), 0.0,
                       (intensity(p + RVec3{0, 0, h}) - intensity(p - RVec3{0, 0, h})) / (2 * h)};
    REQUIRE(dot(f.gradient, grad_i) >= -1e-9 * norm(f.gradient) * norm(grad_i));
  }
}

TEST_CASE("passivity warning and singular normalization") {
  CHECK(passivity_warning({complex(1.0, 0.2)}) == std::nullopt);
  CHECK(passivity_warning({complex(1.0, -0.2)}).has_value());
  CHECK_FALSE(Polarizability{complex(0, -1)}.is_passive());
  const SingularityThreshold th(1.0);
  CHECK_FALSE(normalized_forces({}, 0.0, th).has_value());
  CHECK(normalized_forces({}, 0.1, th).has_value());
}
