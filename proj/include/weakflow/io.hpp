#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weakflow/fields.hpp"
#include "weakflow/grid.hpp"
#include "weakflow/tracing.hpp"

namespace weakflow {

using json = nlohmann::ordered_json;

inline constexpr const char *kToolVersion = "1.0.0";

/// {"family": ..., "lambda_mm": ..., family keys}. Unknown keys are rejected.
json field_to_json(const FieldSpec &spec);
FieldSpec field_from_json(const json &j);
FieldSpec load_field_file(const std::string &path);

/// One named observable per grid sample; `components` is 1 (scalar) or 3 (vector).
struct Layer {
  std::string name;
  int components = 1;
  std::vector<double> values;         ///< size = samples * components
  std::vector<std::uint8_t> singular;  ///< size = samples

  Layer() = default;
  Layer(std::string n, int comps, std::size_t samples)
      : name(std::move(n)), components(comps), values(samples * comps, 0.0), singular(samples, 0) {}

  void set(std::size_t idx, double v) { values[idx] = v; }
  void set(std::size_t idx, const RVec3 &v) {
    values[3 * idx] = v.x;
    values[3 * idx + 1] = v.y;
    values[3 * idx + 2] = v.z;
  }
  void mark_singular(std::size_t idx) { singular[idx] = 1; }
};

struct GridResult {
  GridSpec grid;
  std::vector<Layer> layers;
  json provenance = json::object();

  const Layer *find(const std::string &name) const;
};

json grid_to_json(const GridSpec &grid);
GridSpec grid_from_json(const json &j);

/// Singular samples are written as the string "singular".
json layer_values_to_json(const Layer &layer);
json grid_result_to_json(const GridResult &result);
GridResult grid_result_from_json(const json &j);

/// Shortest round-trip decimal text of a double.
std::string format_number(double v);

/// One row per trajectory point: traj_id, s_or_z, x, y, z, px, py, pz.
std::string trajectories_to_csv(const std::vector<Trajectory> &trajs);

/// Reads seed positions, one per line as "x,z" (two columns) or "x,y,z". A leading
/// non-numeric header line and blank lines are skipped.
std::vector<RVec3> parse_seeds_csv(const std::string &text);

/// Binary 8-bit PGM (P5) of a scalar layer, or one component of a vector layer.
/// Min-max normalized over non-singular samples; a constant layer maps to 128 and
/// singular samples to 0. Image rows run along the first grid axis with its upper
/// end at the top; columns run along the second axis.
std::string render_pgm(const GridResult &result, const std::string &layer, std::optional<Axis> component);

void write_file(const std::string &path, const std::string &bytes);
std::string read_file(const std::string &path);

}  // namespace weakflow
