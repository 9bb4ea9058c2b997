#pragma once

#include <array>
#include <string_view>
#include <variant>

#include "weakflow/vec.hpp"

namespace weakflow {

/// Monochromatic wave constants. Lengths in mm, c = 1, so omega = k.
class WaveParameters {
 public:
  WaveParameters() = default;
  explicit WaveParameters(double lambda_mm);

  double lambda() const { return lambda_; }
  double k() const { return k_; }
  double omega() const { return k_; }

 private:
  double lambda_ = 1.0;
  double k_ = 2.0 * 3.14159265358979323846;
};

struct PlaneWaveSpec {
  WaveParameters wave;
  RVec3 direction{0.0, 0.0, 1.0};  ///< normalized on construction of the FieldSpec
};

/// Two displaced Gaussian beams sharing a waist plane at z = 0:
/// psi = (w0/w) {exp[-q (x-a)^2] + exp[-q (x+a)^2]} exp(ikz), q = 1/w^2 - ik/(2R).
struct GaussianPairSpec {
  WaveParameters wave;
  double w0 = 0.608;  ///< waist (mm)
  double a = 2.345;   ///< half-separation (mm)

  double rayleigh_range() const { return 0.5 * wave.k() * w0 * w0; }
  double width(double z) const;
  /// 1/R(z); zero at the waist.
  double inverse_curvature(double z) const;
};

/// psi = J_|l|(k_perp r) exp(i l phi + i k_z z).
struct BesselSpec {
  WaveParameters wave;
  int ell = 2;
  double k_perp = 1.0;  ///< rad/mm, 0 < k_perp < k

  double k_z() const;
};

/// psi = exp(i k_z z - kappa x), k_z^2 - kappa^2 = k^2.
struct EvanescentSpec {
  WaveParameters wave;
  double kappa = 1.0;  ///< rad/mm

  double k_z() const;
};

/// Two s-polarized plane waves totally reflected at the glass (x < 0) / air (x > 0)
/// interface x = 0. Angles are measured from the interface normal.
struct TirTwoWaveSpec {
  WaveParameters wave;
  double n = 1.5;
  double theta1 = 0.0;
  double theta2 = 0.0;
  double amp1 = 1.0;
  double amp2 = 1.0;

  double critical_angle() const;

  /// n = 1.5, theta_c + 5 deg and theta_c + 10 deg, unit amplitudes.
  static TirTwoWaveSpec wolter_defaults(double lambda_mm);
};

/// Precomputed constants of one incident/reflected/transmitted wave triple.
struct TirPartialWave {
  double amplitude = 0.0;
  double k_x = 0.0;    ///< normal wavenumber in glass
  double k_z = 0.0;    ///< tangential wavenumber, shared by all three waves
  double kappa = 0.0;  ///< decay rate in air
  complex r;           ///< s-polarization reflection coefficient, |r| = 1
  complex t;           ///< s-polarization transmission coefficient, t = 1 + r
};

struct TirTwoWaveField {
  TirTwoWaveSpec spec;
  std::array<TirPartialWave, 2> waves;
};

enum class FieldFamily { plane_wave, gaussian_pair, bessel, evanescent, tir_two_wave };

std::string_view family_name(FieldFamily family);

/// One validated analytic field configuration. Immutable once built.
class FieldSpec {
 public:
  using Variant =
      std::variant<PlaneWaveSpec, GaussianPairSpec, BesselSpec, EvanescentSpec, TirTwoWaveField>;

  static FieldSpec plane_wave(const PlaneWaveSpec &spec);
  static FieldSpec gaussian_pair(const GaussianPairSpec &spec);
  static FieldSpec bessel(const BesselSpec &spec);
  static FieldSpec evanescent(const EvanescentSpec &spec);
  static FieldSpec tir_two_wave(const TirTwoWaveSpec &spec);

  FieldFamily family() const { return static_cast<FieldFamily>(variant_.index()); }
  const Variant &variant() const { return variant_; }
  const WaveParameters &wave() const;
  double k() const { return wave().k(); }
  double lambda() const { return wave().lambda(); }

  /// Upper bound on |psi| used to scale the singularity threshold when no
  /// sampled maximum is available.
  double reference_amplitude() const;

  template <class T>
  const T *get_if() const {
    return std::get_if<T>(&variant_);
  }

 private:
  explicit FieldSpec(Variant v) : variant_(std::move(v)) {}
  friend FieldSpec build_tir_field(const TirTwoWaveSpec &spec);
  Variant variant_;
};

/// Builds the piecewise glass/air field; throws RegimeError below the critical angle.
FieldSpec build_tir_field(const TirTwoWaveSpec &spec);

/// psi = A exp(i Phi) at a point with its exact gradient.
struct FieldSample {
  complex psi;
  CVec3 grad_psi;

  double amplitude() const { return std::abs(psi); }
  double phase() const { return std::arg(psi); }
};

FieldSample evaluate(const FieldSpec &spec, const RVec3 &point);

/// J_m(x) for integer m (negative orders folded via J_{-m} = (-1)^m J_m).
double bessel_j(int m, double x);
/// dJ_m/dx.
double bessel_j_derivative(int m, double x);

}  // namespace weakflow
