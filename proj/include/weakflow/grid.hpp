#pragma once

#include <cstddef>
#include <string>

#include "weakflow/vec.hpp"

namespace weakflow {

enum class Axis { x, y, z };

char axis_name(Axis a);

struct GridAxis {
  Axis axis = Axis::x;
  double lo = 0.0;
  double hi = 1.0;
  int count = 2;

  double spacing() const { return (hi - lo) / (count - 1); }
  double coord(int i) const { return i == count - 1 ? hi : lo + (hi - lo) * i / (count - 1); }
};

/// Rectangular sampling of a plane spanned by two coordinate axes. The remaining
/// coordinate is taken from `origin`. Samples are stored row-major with the first
/// axis as the row index.
struct GridSpec {
  GridAxis first{Axis::x};
  GridAxis second{Axis::z};
  RVec3 origin{};

  /// Throws ValidationError on counts < 2, unordered or non-finite ranges, or repeated axes.
  void validate() const;

  std::size_t size() const { return static_cast<std::size_t>(first.count) * second.count; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * second.count + j; }
  RVec3 point(int i, int j) const;
  /// Point at fractional indices, used for cell centres.
  RVec3 point(double fi, double fj) const;

  /// Parses "x:lo:hi:n,z:lo:hi:m".
  static GridSpec parse(const std::string &text);
};

void set_coord(RVec3 &p, Axis a, double v);
double get_coord(const RVec3 &p, Axis a);

}  // namespace weakflow
