#pragma once

#include <cmath>
#include <complex>

namespace weakflow {

using complex = std::complex<double>;

/// Minimal 3-component vector. Two-dimensional (x, z) fields carry y = 0.
template <class T>
struct Vec3 {
  T x{}, y{}, z{};

  constexpr Vec3 &operator+=(const Vec3 &o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3 &operator-=(const Vec3 &o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  template <class S>
  constexpr Vec3 &operator*=(const S &s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3 &b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3 &b) { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3 &a) { return {-a.x, -a.y, -a.z}; }
  template <class S>
  friend constexpr Vec3 operator*(Vec3 a, const S &s) {
    return a *= s;
  }
  template <class S>
  friend constexpr Vec3 operator*(const S &s, Vec3 a) {
    return a *= s;
  }
  template <class S>
  friend constexpr Vec3 operator/(const Vec3 &a, const S &s) {
    return {a.x / s, a.y / s, a.z / s};
  }
  friend constexpr bool operator==(const Vec3 &, const Vec3 &) = default;
};

using RVec3 = Vec3<double>;
using CVec3 = Vec3<complex>;

inline double dot(const RVec3 &a, const RVec3 &b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const RVec3 &a) { return std::sqrt(dot(a, a)); }
inline RVec3 cross(const RVec3 &a, const RVec3 &b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline RVec3 real_part(const CVec3 &v) { return {v.x.real(), v.y.real(), v.z.real()}; }
inline RVec3 imag_part(const CVec3 &v) { return {v.x.imag(), v.y.imag(), v.z.imag()}; }
inline double norm(const CVec3 &v) {
  return std::sqrt(std::norm(v.x) + std::norm(v.y) + std::norm(v.z));
}

}  // namespace weakflow
