#include "weakflow/anomaly.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "weakflow/errors.hpp"
#include "weakflow/observables.hpp"

namespace weakflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Phase increment from a to b mapped to (-pi, pi].
double phase_step(complex a, complex b) { return std::arg(b * std::conj(a)); }

int rounded_winding(double total) {
  const double turns = total / kTwoPi;
  const double charge = std::round(turns);
  // Wrapped increments around a closed loop always sum to a multiple of 2 pi.
  if (std::abs(turns - charge) >= 0.1) {
    throw std::runtime_error("phase winding residual exceeds 0.1 turns");
  }
  return static_cast<int>(charge);
}

}  // namespace

std::string_view label_name(CellLabel l) {
  switch (l) {
    case CellLabel::normal: return "normal";
    case CellLabel::backflow: return "backflow";
    case CellLabel::superluminal: return "superluminal";
    case CellLabel::singular: return "singular";
  }
  return "unknown";
}

LabelCounts AnomalyMap::counts() const {
  LabelCounts c;
  for (auto l : labels) {
    switch (l) {
      case CellLabel::normal: ++c.normal; break;
      case CellLabel::backflow: ++c.backflow; break;
      case CellLabel::superluminal: ++c.superluminal; break;
      case CellLabel::singular: ++c.singular; break;
    }
  }
  return c;
}

std::vector<complex> sample_field(const FieldSpec &spec, const GridSpec &grid) {
  grid.validate();
  std::vector<complex> out(grid.size());
  for (int i = 0; i < grid.first.count; ++i) {
    for (int j = 0; j < grid.second.count; ++j) out[grid.index(i, j)] = evaluate(spec, grid.point(i, j)).psi;
  }
  return out;
}

void check_vortex_resolution(const GridSpec &grid, double lambda) {
  const double limit = lambda / 8.0;
  for (const auto *a : {&grid.first, &grid.second}) {
    if (!(a->spacing() < limit)) {
      std::ostringstream os;
      os << "grid spacing " << a->spacing() << " mm along " << axis_name(a->axis)
         << " is too coarse to resolve phase winding (needs < lambda/8 = " << limit << " mm)";
      throw ResolutionError(os.str());
    }
  }
}

int contour_winding(std::span<const complex> samples, const GridSpec &grid, int i0, int j0, int i1, int j1) {
  if (samples.size() != grid.size()) throw ValidationError("sample count does not match the grid");
  if (!(0 <= i0 && i0 < i1 && i1 < grid.first.count && 0 <= j0 && j0 < j1 && j1 < grid.second.count)) {
    throw ValidationError("contour rectangle must lie inside the grid and have positive extent");
  }
  double total = 0.0;
  auto at = [&](int i, int j) { return samples[grid.index(i, j)]; };
  for (int i = i0; i < i1; ++i) total += phase_step(at(i, j0), at(i + 1, j0));
  for (int j = j0; j < j1; ++j) total += phase_step(at(i1, j), at(i1, j + 1));
  for (int i = i1; i > i0; --i) total += phase_step(at(i, j1), at(i - 1, j1));
  for (int j = j1; j > j0; --j) total += phase_step(at(i0, j), at(i0, j - 1));
  return rounded_winding(total);
}

std::vector<VortexRecord> detect_vortices(std::span<const complex> samples, const GridSpec &grid,
                                          double amplitude_floor) {
  grid.validate();
  if (samples.size() != grid.size()) throw ValidationError("sample count does not match the grid");
  const int nu = grid.first.count;
  const int nv = grid.second.count;
  auto singular = [&](int i, int j) { return !(std::abs(samples[grid.index(i, j)]) > amplitude_floor); };

  std::vector<VortexRecord> out;
  for (int i = 0; i + 1 < nu; ++i) {
    for (int j = 0; j + 1 < nv; ++j) {
      if (singular(i, j) || singular(i + 1, j) || singular(i + 1, j + 1) || singular(i, j + 1)) continue;
      const int charge = contour_winding(samples, grid, i, j, i + 1, j + 1);
      if (charge != 0) out.push_back({grid.point(i + 0.5, j + 0.5), charge});
    }
  }
  // A singularity sitting exactly on a node: wind around its 8-neighbour ring instead.
  for (int i = 1; i + 1 < nu; ++i) {
    for (int j = 1; j + 1 < nv; ++j) {
      if (!singular(i, j)) continue;
      const int charge = contour_winding(samples, grid, i - 1, j - 1, i + 1, j + 1);
      if (charge != 0) out.push_back({grid.point(i, j), charge});
    }
  }
  return out;
}

std::vector<VortexRecord> detect_vortices(const FieldSpec &spec, const GridSpec &grid) {
  grid.validate();
  check_vortex_resolution(grid, spec.lambda());
  const auto samples = sample_field(spec, grid);
  double max_amp = 0.0;
  for (const auto &s : samples) max_amp = std::max(max_amp, std::abs(s));
  const double floor = SingularityThreshold(max_amp).amplitude_floor();
  auto records = detect_vortices(samples, grid, floor);

  // Plaquettes with an edge step beyond pi/2 are re-wound along bisected edges of the
  // analytic field; this resolves higher charges sitting inside a single cell.
  constexpr double kCoarse = 0.5 * std::numbers::pi;
  constexpr double kFine = 0.25 * std::numbers::pi;
  constexpr int kMaxDepth = 24;
  std::function<double(const RVec3 &, const RVec3 &, complex, complex, int)> edge =
      [&](const RVec3 &pa, const RVec3 &pb, complex a, complex b, int depth) {
        const double d = phase_step(a, b);
        if (std::abs(d) <= kFine || depth == kMaxDepth) return d;
        const RVec3 pm = (pa + pb) * 0.5;
        const complex m = evaluate(spec, pm).psi;
        if (!(std::abs(m) > floor)) return d;
        return edge(pa, pm, a, m, depth + 1) + edge(pm, pb, m, b, depth + 1);
      };

  const int nu = grid.first.count;
  const int nv = grid.second.count;
  auto at = [&](int i, int j) { return samples[grid.index(i, j)]; };
  for (int i = 0; i + 1 < nu; ++i) {
    for (int j = 0; j + 1 < nv; ++j) {
      const int ci[4] = {i, i + 1, i + 1, i};
      const int cj[4] = {j, j, j + 1, j + 1};
      bool usable = true, ambiguous = false;
      for (int c = 0; c < 4; ++c) {
        usable &= std::abs(at(ci[c], cj[c])) > floor;
        ambiguous |= std::abs(phase_step(at(ci[c], cj[c]), at(ci[(c + 1) % 4], cj[(c + 1) % 4]))) > kCoarse;
      }
      if (!usable || !ambiguous) continue;
      double total = 0.0;
      for (int c = 0; c < 4; ++c) {
        const int n = (c + 1) % 4;
        total += edge(grid.point(ci[c], cj[c]), grid.point(ci[n], cj[n]), at(ci[c], cj[c]), at(ci[n], cj[n]), 0);
      }
      const int charge = rounded_winding(total);
      const RVec3 centre = grid.point(i + 0.5, j + 0.5);
      std::erase_if(records, [&](const VortexRecord &r) { return r.position == centre; });
      if (charge != 0) records.push_back({centre, charge});
    }
  }
  std::sort(records.begin(), records.end(), [&](const VortexRecord &a, const VortexRecord &b) {
    const double au = get_coord(a.position, grid.first.axis), bu = get_coord(b.position, grid.first.axis);
    if (au != bu) return au < bu;
    return get_coord(a.position, grid.second.axis) < get_coord(b.position, grid.second.axis);
  });
  return records;
}

double default_bound_tolerance(const FieldSpec &spec) {
  return spec.get_if<GaussianPairSpec>() != nullptr ? 1e-4 : 0.0;
}

AnomalyMap classify_anomalies(const FieldSpec &spec, const GridSpec &grid, BoundModel model,
                              std::optional<double> tolerance) {
  grid.validate();
  const double slack = tolerance.value_or(default_bound_tolerance(spec));
  if (!(slack >= 0.0) || !std::isfinite(slack)) throw ValidationError("bound tolerance must be non-negative");
  const auto *tir = spec.get_if<TirTwoWaveField>();
  if (model == BoundModel::piecewise && tir == nullptr) {
    throw ValidationError("piecewise bound model requires a tir_two_wave field");
  }
  const double k = spec.k();
  const double glass_bound = tir != nullptr ? tir->spec.n * k : k;

  std::vector<FieldSample> samples(grid.size());
  double max_amp = 0.0;
  for (int i = 0; i < grid.first.count; ++i) {
    for (int j = 0; j < grid.second.count; ++j) {
      auto &s = samples[grid.index(i, j)];
      s = evaluate(spec, grid.point(i, j));
      max_amp = std::max(max_amp, s.amplitude());
    }
  }
  const SingularityThreshold threshold(max_amp);

  AnomalyMap map{grid, std::vector<CellLabel>(grid.size(), CellLabel::singular), std::vector<double>(grid.size(), k),
                 std::vector<std::uint8_t>(grid.size(), 0)};
  for (int i = 0; i < grid.first.count; ++i) {
    for (int j = 0; j < grid.second.count; ++j) {
      const std::size_t idx = grid.index(i, j);
      const double b = (model == BoundModel::piecewise && grid.point(i, j).x < 0.0 ? glass_bound : k) * (1.0 + slack);
      map.bound[idx] = b;
      const auto mom = local_momentum(samples[idx], threshold);
      if (!mom) continue;
      const double pz = mom->p.z.real();
      map.labels[idx] = pz < 0.0 ? CellLabel::backflow : (pz > b ? CellLabel::superluminal : CellLabel::normal);
      map.superoscillating[idx] = is_superoscillating(*mom, b) ? 1 : 0;
    }
  }
  return map;
}

std::vector<std::vector<std::size_t>> connected_components(const AnomalyMap &map, CellLabel label) {
  const int nu = map.grid.first.count;
  const int nv = map.grid.second.count;
  std::vector<std::uint8_t> seen(map.labels.size(), 0);
  std::vector<std::vector<std::size_t>> comps;
  std::vector<std::pair<int, int>> stack;
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      const std::size_t start = map.grid.index(i, j);
      if (seen[start] || map.labels[start] != label) continue;
      comps.emplace_back();
      seen[start] = 1;
      stack.push_back({i, j});
      while (!stack.empty()) {
        const auto [ci, cj] = stack.back();
        stack.pop_back();
        comps.back().push_back(map.grid.index(ci, cj));
        const std::pair<int, int> nbrs[] = {{ci - 1, cj}, {ci + 1, cj}, {ci, cj - 1}, {ci, cj + 1}};
        for (const auto &[ni, nj] : nbrs) {
          if (ni < 0 || nj < 0 || ni >= nu || nj >= nv) continue;
          const std::size_t n = map.grid.index(ni, nj);
          if (seen[n] || map.labels[n] != label) continue;
          seen[n] = 1;
          stack.push_back({ni, nj});
        }
      }
      std::sort(comps.back().begin(), comps.back().end());
    }
  }
  return comps;
}

}  // namespace weakflow
