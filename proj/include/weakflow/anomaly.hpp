#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "weakflow/fields.hpp"
#include "weakflow/grid.hpp"

namespace weakflow {

enum class CellLabel : std::uint8_t { normal, backflow, superluminal, singular };

std::string_view label_name(CellLabel l);

/// Local bound b on Re p_z: k everywhere, or n k in glass (x < 0) and k in air for TIR fields.
enum class BoundModel { free_space, piecewise };

struct LabelCounts {
  std::size_t normal = 0, backflow = 0, superluminal = 0, singular = 0;
};

struct AnomalyMap {
  GridSpec grid;
  std::vector<CellLabel> labels;
  std::vector<double> bound;               ///< b per cell, rad/mm
  std::vector<std::uint8_t> superoscillating;  ///< |Re p| > b, independent of the label

  LabelCounts counts() const;
};

struct VortexRecord {
  RVec3 position;  ///< plaquette centre (or the node itself when a node is exactly singular)
  int charge = 0;  ///< counter-clockwise winding in the (first, second) axis plane
};

/// Throws ResolutionError unless both grid spacings are below lambda / 8.
void check_vortex_resolution(const GridSpec &grid, double lambda);

/// Plaquette phase winding on pre-sampled values (row-major per GridSpec).
std::vector<VortexRecord> detect_vortices(std::span<const complex> samples, const GridSpec &grid,
                                          double amplitude_floor = 0.0);
std::vector<VortexRecord> detect_vortices(const FieldSpec &spec, const GridSpec &grid);

/// Winding number of the phase along the boundary of the index rectangle [i0, i1] x [j0, j1].
int contour_winding(std::span<const complex> samples, const GridSpec &grid, int i0, int j0, int i1, int j1);

/// Relative slack on the superluminal bound: 1e-4 for the paraxial gaussian_pair field,
/// whose Re p_z exceeds k by O(k x^2 / z_R^2) off axis, and 0 for the exact fields.
double default_bound_tolerance(const FieldSpec &spec);

/// Labels every grid node. The stored bound is b (1 + tolerance); the tolerance defaults
/// to default_bound_tolerance(spec).
AnomalyMap classify_anomalies(const FieldSpec &spec, const GridSpec &grid, BoundModel model,
                              std::optional<double> tolerance = std::nullopt);

/// 4-neighbour connected components of cells carrying `label`; each entry lists flat cell indices.
std::vector<std::vector<std::size_t>> connected_components(const AnomalyMap &map, CellLabel label);

/// Samples psi over the grid in row-major order.
std::vector<complex> sample_field(const FieldSpec &spec, const GridSpec &grid);

}  // namespace weakflow
