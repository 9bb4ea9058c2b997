#include "weakflow/grid.hpp"

#include <charconv>
#include <cmath>
#include <string_view>
#include <vector>

#include "weakflow/errors.hpp"

namespace weakflow {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view s, const char *what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError(std::string("grid: cannot parse ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

Axis parse_axis(std::string_view s) {
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  if (s == "z") return Axis::z;
  throw ValidationError("grid: unknown axis '" + std::string(s) + "' (expected x, y or z)");
}

GridAxis parse_axis_spec(std::string_view s) {
  const auto parts = split(s, ':');
  if (parts.size() != 4) throw ValidationError("grid: axis spec must be axis:lo:hi:count, got '" + std::string(s) + "'");
  return GridAxis{parse_axis(parts[0]), parse_number<double>(parts[1], "lower bound"),
                  parse_number<double>(parts[2], "upper bound"), parse_number<int>(parts[3], "count")};
}

void validate_axis(const GridAxis &a) {
  if (a.count < 2) throw ValidationError(std::string("grid: axis ") + axis_name(a.axis) + " needs at least 2 samples");
  if (!std::isfinite(a.lo) || !std::isfinite(a.hi) || !(a.lo < a.hi)) {
    throw ValidationError(std::string("grid: axis ") + axis_name(a.axis) + " range must be finite and ordered");
  }
}

}  // namespace

char axis_name(Axis a) {
  switch (a) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
  }
  return '?';
}

void set_coord(RVec3 &p, Axis a, double v) {
  switch (a) {
    case Axis::x: p.x = v; break;
    case Axis::y: p.y = v; break;
    case Axis::z: p.z = v; break;
  }
}

double get_coord(const RVec3 &p, Axis a) {
  switch (a) {
    case Axis::x: return p.x;
    case Axis::y: return p.y;
    case Axis::z: return p.z;
  }
  return 0.0;
}

void GridSpec::validate() const {
  validate_axis(first);
  validate_axis(second);
  if (first.axis == second.axis) throw ValidationError("grid: the two axes must differ");
}

RVec3 GridSpec::point(int i, int j) const {
  RVec3 p = origin;
  set_coord(p, first.axis, first.coord(i));
  set_coord(p, second.axis, second.coord(j));
  return p;
}

RVec3 GridSpec::point(double fi, double fj) const {
  RVec3 p = origin;
  set_coord(p, first.axis, first.lo + first.spacing() * fi);
  set_coord(p, second.axis, second.lo + second.spacing() * fj);
  return p;
}

GridSpec GridSpec::parse(const std::string &text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw ValidationError("grid: expected two comma-separated axis specs, got '" + text + "'");
  GridSpec g;
  g.first = parse_axis_spec(parts[0]);
  g.second = parse_axis_spec(parts[1]);
  g.validate();
  return g;
}

}  // namespace weakflow
