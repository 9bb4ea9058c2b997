#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "weakflow/anomaly.hpp"
#include "weakflow/io.hpp"
#include "weakflow/observables.hpp"

namespace weakflow::cli {

/// Scalar layers: amp, phase, re_px, re_py, re_pz, im_px, im_py, im_pz, S1, S2, S3, W, label.
/// Vector layers: P_O, P_S.
const std::vector<std::string> &known_layers();

struct FieldmapOptions {
  std::vector<std::string> layers{"amp", "re_px", "im_px"};
  double delta_x = 1e-4;  ///< calcite shift for the S1..S3 layers (mm)
  PolarizationState pol = PolarizationState::diagonal();
  BoundModel bound = BoundModel::free_space;
  std::optional<double> bound_tolerance;  ///< defaults to default_bound_tolerance(spec)
};

GridResult compute_fieldmap(const FieldSpec &spec, const GridSpec &grid, const FieldmapOptions &opts);

/// "diagonal", "x", "y", "rcp", "lcp", or "ex_re,ex_im,ey_re,ey_im".
PolarizationState parse_polarization(const std::string &text);

/// Runs one subcommand. `args` excludes the program name.
/// Returns 0 on success, 2 on validation errors, 1 on runtime errors.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace weakflow::cli
