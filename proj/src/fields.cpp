#include "weakflow/fields.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "weakflow/errors.hpp"

namespace weakflow {

namespace {

constexpr complex I{0.0, 1.0};

void require(bool ok, const std::string &what) {
  if (!ok) throw ValidationError(what);
}

bool finite(const RVec3 &p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z); }

FieldSample evaluate_plane(const PlaneWaveSpec &s, const RVec3 &r) {
  const double k = s.wave.k();
  const complex psi = std::exp(I * (k * dot(s.direction, r)));
  const complex ik = I * k;
  return {psi, CVec3{ik * s.direction.x * psi, ik * s.direction.y * psi, ik * s.direction.z * psi}};
}

FieldSample evaluate_gaussian_pair(const GaussianPairSpec &s, const RVec3 &r) {
  const double k = s.wave.k();
  const double zr = s.rayleigh_range();
  const double z = r.z;
  const double d = z * z + zr * zr;
  const double w = s.width(z);
  const double amp = s.w0 / w;
  const complex q = 1.0 / (w * w) - I * (0.5 * k * s.inverse_curvature(z));
  const complex dq_dz = -2.0 * z * zr * zr / (s.w0 * s.w0 * d * d) - I * (0.5 * k * (zr * zr - z * z) / (d * d));

  const double um = r.x - s.a;
  const double up = r.x + s.a;
  const complex gm = std::exp(-q * (um * um));
  const complex gp = std::exp(-q * (up * up));
  const complex carrier = std::exp(I * (k * z));

  const complex psi = amp * (gm + gp) * carrier;
  const complex dpsi_dx = amp * carrier * (-2.0 * q) * (um * gm + up * gp);
  const complex dpsi_dz =
      psi * (-z / d + I * k) - amp * carrier * dq_dz * (um * um * gm + up * up * gp);
  return {psi, CVec3{dpsi_dx, 0.0, dpsi_dz}};
}

FieldSample evaluate_bessel(const BesselSpec &s, const RVec3 &r) {
  const int m = std::abs(s.ell);
  const double kz = s.k_z();
  const double rho = std::hypot(r.x, r.y);
  const complex axial = std::exp(I * (kz * r.z));

  if (rho == 0.0) {
    // Only |l| <= 1 has a nonzero value or transverse slope on the axis.
    FieldSample out{0.0, CVec3{}};
    if (m == 0) {
      out.psi = axial;
      out.grad_psi.z = I * kz * axial;
    } else if (m == 1) {
      const double sign = s.ell > 0 ? 1.0 : -1.0;
      out.grad_psi.x = 0.5 * s.k_perp * axial;
      out.grad_psi.y = sign * I * (0.5 * s.k_perp) * axial;
    }
    return out;
  }

  const double arg = s.k_perp * rho;
  const double j = bessel_j(m, arg);
  const double dj = s.k_perp * bessel_j_derivative(m, arg);
  const double phi = std::atan2(r.y, r.x);
  const complex angular = std::exp(I * (static_cast<double>(s.ell) * phi));
  const complex psi = j * angular * axial;

  const double cx = r.x / rho;
  const double cy = r.y / rho;
  // grad = J' r_hat + J (i l / rho) phi_hat, times the phase factors; plus i k_z psi z_hat.
  const complex radial = dj * angular * axial;
  const complex azimuthal = I * (static_cast<double>(s.ell) / rho) * psi;
  return {psi, CVec3{radial * cx - azimuthal * cy, radial * cy + azimuthal * cx, I * kz * psi}};
}

FieldSample evaluate_evanescent(const EvanescentSpec &s, const RVec3 &r) {
  const double kz = s.k_z();
  const complex psi = std::exp(complex{-s.kappa * r.x, kz * r.z});
  return {psi, CVec3{-s.kappa * psi, 0.0, I * kz * psi}};
}

FieldSample evaluate_tir(const TirTwoWaveField &f, const RVec3 &r) {
  FieldSample out{0.0, CVec3{}};
  for (const auto &w : f.waves) {
    if (w.amplitude == 0.0) continue;
    const complex along = std::exp(I * (w.k_z * r.z));
    if (r.x < 0.0) {
      const complex inc = std::exp(I * (w.k_x * r.x)) * along;
      const complex ref = w.r * std::exp(-I * (w.k_x * r.x)) * along;
      out.psi += w.amplitude * (inc + ref);
      out.grad_psi.x += w.amplitude * I * w.k_x * (inc - ref);
      out.grad_psi.z += w.amplitude * I * w.k_z * (inc + ref);
    } else {
      const complex tr = w.t * std::exp(-w.kappa * r.x) * along;
      out.psi += w.amplitude * tr;
      out.grad_psi.x += -w.amplitude * w.kappa * tr;
      out.grad_psi.z += w.amplitude * I * w.k_z * tr;
    }
  }
  return out;
}

TirPartialWave make_partial_wave(const TirTwoWaveSpec &s, double theta, double amplitude) {
  const double nk = s.n * s.wave.k();
  TirPartialWave w;
  w.amplitude = amplitude;
  w.k_z = nk * std::sin(theta);
  w.k_x = nk * std::cos(theta);
  w.kappa = std::sqrt(w.k_z * w.k_z - s.wave.k() * s.wave.k());
  const complex denom{w.k_x, w.kappa};
  w.r = complex{w.k_x, -w.kappa} / denom;
  w.t = 2.0 * w.k_x / denom;
  return w;
}

}  // namespace

WaveParameters::WaveParameters(double lambda_mm) : lambda_(lambda_mm) {
  require(std::isfinite(lambda_mm) && lambda_mm > 0.0, "lambda_mm must be positive and finite");
  k_ = 2.0 * std::numbers::pi / lambda_mm;
}

double GaussianPairSpec::width(double z) const {
  const double zr = rayleigh_range();
  return w0 * std::sqrt(1.0 + (z * z) / (zr * zr));
}

double GaussianPairSpec::inverse_curvature(double z) const {
  const double zr = rayleigh_range();
  return z / (z * z + zr * zr);
}

double BesselSpec::k_z() const {
  const double k = wave.k();
  return std::sqrt((k - k_perp) * (k + k_perp));
}

double EvanescentSpec::k_z() const { return std::hypot(wave.k(), kappa); }

double TirTwoWaveSpec::critical_angle() const { return std::asin(1.0 / n); }

TirTwoWaveSpec TirTwoWaveSpec::wolter_defaults(double lambda_mm) {
  TirTwoWaveSpec s;
  s.wave = WaveParameters(lambda_mm);
  s.n = 1.5;
  const double deg = std::numbers::pi / 180.0;
  s.theta1 = s.critical_angle() + 5.0 * deg;
  s.theta2 = s.critical_angle() + 10.0 * deg;
  s.amp1 = 1.0;
  s.amp2 = 1.0;
  return s;
}

std::string_view family_name(FieldFamily family) {
  switch (family) {
    case FieldFamily::plane_wave: return "plane_wave";
    case FieldFamily::gaussian_pair: return "gaussian_pair";
    case FieldFamily::bessel: return "bessel";
    case FieldFamily::evanescent: return "evanescent";
    case FieldFamily::tir_two_wave: return "tir_two_wave";
  }
  return "unknown";
}

FieldSpec FieldSpec::plane_wave(const PlaneWaveSpec &spec) {
  const double len = norm(spec.direction);
  require(finite(spec.direction) && len > 0.0, "plane wave direction must be a nonzero finite vector");
  PlaneWaveSpec s = spec;
  s.direction = spec.direction / len;
  return FieldSpec(s);
}

FieldSpec FieldSpec::gaussian_pair(const GaussianPairSpec &spec) {
  require(std::isfinite(spec.w0) && spec.w0 > 0.0, "gaussian_pair: w0 must be positive");
  require(std::isfinite(spec.a) && spec.a >= 0.0, "gaussian_pair: a must be non-negative");
  return FieldSpec(spec);
}

FieldSpec FieldSpec::bessel(const BesselSpec &spec) {
  require(std::isfinite(spec.k_perp) && spec.k_perp > 0.0 && spec.k_perp < spec.wave.k(),
          "bessel: k_perp must satisfy 0 < k_perp < k");
  return FieldSpec(spec);
}

FieldSpec FieldSpec::evanescent(const EvanescentSpec &spec) {
  require(std::isfinite(spec.kappa) && spec.kappa > 0.0, "evanescent: kappa must be positive");
  return FieldSpec(spec);
}

FieldSpec FieldSpec::tir_two_wave(const TirTwoWaveSpec &spec) { return build_tir_field(spec); }

FieldSpec build_tir_field(const TirTwoWaveSpec &spec) {
  require(std::isfinite(spec.n) && spec.n > 1.0, "tir_two_wave: n must exceed 1");
  require(std::isfinite(spec.amp1) && std::isfinite(spec.amp2), "tir_two_wave: amplitudes must be finite");
  const double half_pi = 0.5 * std::numbers::pi;
  const double crit = spec.critical_angle();
  for (double theta : {spec.theta1, spec.theta2}) {
    require(std::isfinite(theta) && theta < half_pi, "tir_two_wave: incidence angles must lie below 90 deg");
    if (!(theta > crit)) {
      throw RegimeError("tir_two_wave: incidence angle " + std::to_string(theta) +
                        " rad is not above the critical angle " + std::to_string(crit) + " rad");
    }
  }
  TirTwoWaveField f{spec, {make_partial_wave(spec, spec.theta1, spec.amp1),
                           make_partial_wave(spec, spec.theta2, spec.amp2)}};
  return FieldSpec(f);
}

const WaveParameters &FieldSpec::wave() const {
  return std::visit(
      [](const auto &s) -> const WaveParameters & {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, TirTwoWaveField>) {
          return s.spec.wave;
        } else {
          return s.wave;
        }
      },
      variant_);
}

double FieldSpec::reference_amplitude() const {
  switch (family()) {
    case FieldFamily::plane_wave:
    case FieldFamily::bessel:
    case FieldFamily::evanescent: return 1.0;
    case FieldFamily::gaussian_pair: return 2.0;
    case FieldFamily::tir_two_wave: {
      const auto &s = std::get<TirTwoWaveField>(variant_).spec;
      return 2.0 * (std::abs(s.amp1) + std::abs(s.amp2));
    }
  }
  return 1.0;
}

FieldSample evaluate(const FieldSpec &spec, const RVec3 &point) {
  require(finite(point), "evaluation point must be finite");
  return std::visit(
      [&](const auto &s) -> FieldSample {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PlaneWaveSpec>) return evaluate_plane(s, point);
        else if constexpr (std::is_same_v<T, GaussianPairSpec>) return evaluate_gaussian_pair(s, point);
        else if constexpr (std::is_same_v<T, BesselSpec>) return evaluate_bessel(s, point);
        else if constexpr (std::is_same_v<T, EvanescentSpec>) return evaluate_evanescent(s, point);
        else return evaluate_tir(s, point);
      },
      spec.variant());
}

double bessel_j(int m, double x) {
  if (m < 0) return (m % 2 == 0 ? 1.0 : -1.0) * bessel_j(-m, x);
  if (x < 0.0) return (m % 2 == 0 ? 1.0 : -1.0) * bessel_j(m, -x);
  return std::cyl_bessel_j(static_cast<double>(m), x);
}

double bessel_j_derivative(int m, double x) {
  if (m == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}

}  // namespace weakflow
