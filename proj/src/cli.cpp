#include "weakflow/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "weakflow/errors.hpp"
#include "weakflow/forces.hpp"
#include "weakflow/tracing.hpp"
#include "weakflow/weakmeasure.hpp"

namespace weakflow::cli {

namespace {

struct FieldArgs {
  std::string file;
  std::string inline_json;
};

void add_field_options(CLI::App *sub, FieldArgs &args) {
  sub->add_option("--field", args.file, "Field spec JSON file");
  sub->add_option("--field-json", args.inline_json, "Inline field spec JSON (keys override --field)");
}

FieldSpec resolve_field(const FieldArgs &args) {
  if (args.file.empty() && args.inline_json.empty()) throw ValidationError("one of --field or --field-json is required");
  json merged = json::object();
  auto parse = [](const std::string &text, const std::string &what) {
    try {
      return json::parse(text);
    } catch (const json::exception &e) {
      throw ValidationError("cannot parse " + what + ": " + e.what());
    }
  };
  if (!args.file.empty()) merged = parse(read_file(args.file), args.file);
  if (!args.inline_json.empty()) {
    const json inline_spec = parse(args.inline_json, "--field-json");
    if (!inline_spec.is_object() || !merged.is_object()) throw ValidationError("field spec must be a JSON object");
    for (const auto &item : inline_spec.items()) merged[item.key()] = item.value();
  }
  return field_from_json(merged);
}

std::pair<double, double> parse_pair(const std::string &text, const char *what) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception &) {
    throw ValidationError(std::string("cannot parse ") + what + " '" + text + "'");
  }
}

BoundModel parse_bound(const std::string &text) {
  if (text == "free") return BoundModel::free_space;
  if (text == "piecewise") return BoundModel::piecewise;
  throw ValidationError("--bound must be 'free' or 'piecewise'");
}

std::vector<std::string> split_list(const std::string &text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

json provenance(const FieldSpec &spec, const std::vector<std::string> &args) {
  std::string line;
  for (const auto &a : args) {
    if (!line.empty()) line += ' ';
    line += a;
  }
  return {{"tool", "weakflow"}, {"tool_version", kToolVersion}, {"command_line", line}, {"field", field_to_json(spec)}};
}

double max_amplitude(const std::vector<FieldSample> &samples) {
  double m = 0.0;
  for (const auto &s : samples) m = std::max(m, s.amplitude());
  return m;
}

std::vector<FieldSample> sample_grid(const FieldSpec &spec, const GridSpec &grid) {
  std::vector<FieldSample> samples(grid.size());
  for (int i = 0; i < grid.first.count; ++i) {
    for (int j = 0; j < grid.second.count; ++j) samples[grid.index(i, j)] = evaluate(spec, grid.point(i, j));
  }
  return samples;
}

void write_output(const std::string &path, const std::string &bytes, std::ostream &out) {
  if (path.empty() || path == "-") {
    out << bytes;
  } else {
    write_file(path, bytes);
  }
}

// ---- subcommand bodies ----------------------------------------------------

struct CommonArgs {
  FieldArgs field;
  std::string grid;
  std::string out;
};

GridResult stokes_result(const FieldSpec &spec, const GridSpec &grid, const CalciteSpec &cal) {
  const auto samples = sample_grid(spec, grid);
  const SingularityThreshold threshold(max_amplitude(samples));
  const bool diagonal = std::abs(cal.input.s2() - 1.0) < 1e-12;
  const std::size_t n = grid.size();

  std::vector<Layer> layers;
  for (const char *name : {"S1", "S2", "S3"}) layers.emplace_back(name, 1, n);
  if (diagonal) {
    for (const char *name : {"S1_pred", "S2_pred", "S3_pred"}) layers.emplace_back(name, 1, n);
  }
  for (const char *name : {"re_px_readout", "im_px_readout", "re_px", "im_px"}) layers.emplace_back(name, 1, n);
  auto layer = [&](const std::string &name) -> Layer & {
    return *std::find_if(layers.begin(), layers.end(), [&](const Layer &l) { return l.name == name; });
  };

  for (int i = 0; i < grid.first.count; ++i) {
    for (int j = 0; j < grid.second.count; ++j) {
      const std::size_t idx = grid.index(i, j);
      const auto mom = local_momentum(samples[idx], threshold);
      const auto exact = mom ? exact_stokes(apply_calcite(spec, cal, grid.point(i, j))) : std::nullopt;
      if (exact) {
        layer("S1").set(idx, exact->s1);
        layer("S2").set(idx, exact->s2);
        layer("S3").set(idx, exact->s3);
        const auto readout = momentum_from_stokes(*exact, cal);
        layer("re_px_readout").set(idx, readout.re_px);
        layer("im_px_readout").set(idx, readout.im_px);
      } else {
        for (const char *name : {"S1", "S2", "S3", "re_px_readout", "im_px_readout"}) layer(name).mark_singular(idx);
      }
      if (mom) {
        layer("re_px").set(idx, mom->p.x.real());
        layer("im_px").set(idx, mom->p.x.imag());
      } else {
        layer("re_px").mark_singular(idx);
        layer("im_px").mark_singular(idx);
      }
      if (diagonal) {
        if (const auto pred = predicted_stokes(mom, cal)) {
          layer("S1_pred").set(idx, pred->s1);
          layer("S2_pred").set(idx, pred->s2);
          layer("S3_pred").set(idx, pred->s3);
        } else {
          for (const char *name : {"S1_pred", "S2_pred", "S3_pred"}) layer(name).mark_singular(idx);
        }
      }
    }
  }
  return GridResult{grid, std::move(layers)};
}

GridResult force_result(const FieldSpec &spec, const GridSpec &grid, const Polarizability &alpha) {
  const auto samples = sample_grid(spec, grid);
  const SingularityThreshold threshold(max_amplitude(samples));
  const std::size_t n = grid.size();
  std::vector<Layer> layers{{"F_grad", 3, n}, {"F_scat", 3, n}, {"F_grad_over_W", 3, n}, {"F_scat_over_W", 3, n}};
  for (std::size_t idx = 0; idx < n; ++idx) {
    const auto f = optical_force(samples[idx], alpha);
    layers[0].set(idx, f.gradient);
    layers[1].set(idx, f.scattering);
    const double w = 0.5 * std::norm(samples[idx].psi);
    if (const auto nf = normalized_forces(f, w, threshold)) {
      layers[2].set(idx, nf->gradient);
      layers[3].set(idx, nf->scattering);
    } else {
      layers[2].mark_singular(idx);
      layers[3].mark_singular(idx);
    }
  }
  return GridResult{grid, std::move(layers)};
}

struct TraceArgs {
  std::string seeds;
  std::string mode;
  std::string part = "re";
  std::string param;
  double step = 0.0;
  int max_steps = 100000;
  std::string box;
  double guard = 10.0;
};

Box default_box(const FieldSpec &spec, double &step, Parameterization &param) {
  const double lam = spec.lambda();
  switch (spec.family()) {
    case FieldFamily::gaussian_pair:
      step = 5.0;
      param = Parameterization::paraxial_z;
      return {{-10.0, -1.0, 0.0}, {10.0, 1.0, 3000.0}};
    case FieldFamily::bessel: {
      const double reach = std::max(1.0, 40.0 / spec.get_if<BesselSpec>()->k_perp);
      step = 0.05;
      param = Parameterization::paraxial_z;
      return {{-reach, -reach, 0.0}, {reach, reach, 10.0}};
    }
    case FieldFamily::tir_two_wave:
      step = lam / 50.0;
      param = Parameterization::arc_length;
      return {{-5.0 * lam, -lam, 0.0}, {5.0 * lam, lam, 20.0 * lam}};
    case FieldFamily::plane_wave:
    case FieldFamily::evanescent:
      break;
  }
  step = lam / 10.0;
  param = Parameterization::paraxial_z;
  return {{-100.0 * lam, -lam, 0.0}, {100.0 * lam, lam, 100.0 * lam}};
}

void apply_box_override(Box &box, const std::string &text) {
  for (const auto &part : split_list(text)) {
    std::stringstream ss(part);
    std::string axis, lo, hi;
    if (!std::getline(ss, axis, ':') || !std::getline(ss, lo, ':') || !std::getline(ss, hi)) {
      throw ValidationError("--box entries must be axis:lo:hi, got '" + part + "'");
    }
    double l = 0.0, h = 0.0;
    try {
      l = std::stod(lo);
      h = std::stod(hi);
    } catch (const std::exception &) {
      throw ValidationError("--box: cannot parse '" + part + "'");
    }
    if (axis == "x") {
      box.lo.x = l, box.hi.x = h;
    } else if (axis == "y") {
      box.lo.y = l, box.hi.y = h;
    } else if (axis == "z") {
      box.lo.z = l, box.hi.z = h;
    } else {
      throw ValidationError("--box: unknown axis '" + axis + "'");
    }
  }
}

std::string run_trace(const FieldSpec &spec, const TraceArgs &ta, std::ostream &out) {
  TraceConfig cfg;
  double default_step = 0.0;
  cfg.domain = default_box(spec, default_step, cfg.parameterization);
  cfg.step = ta.step > 0.0 ? ta.step : default_step;
  cfg.max_steps = ta.max_steps;
  cfg.vortex_guard = ta.guard;
  if (!ta.param.empty()) {
    if (ta.param == "paraxial") cfg.parameterization = Parameterization::paraxial_z;
    else if (ta.param == "arc") cfg.parameterization = Parameterization::arc_length;
    else throw ValidationError("--param must be 'paraxial' or 'arc'");
  }
  if (!ta.box.empty()) apply_box_override(cfg.domain, ta.box);

  std::string mode = ta.mode;
  if (mode.empty()) mode = spec.family() == FieldFamily::bessel ? "3d" : "2d";
  if (mode != "2d" && mode != "3d") throw ValidationError("--mode must be '2d' or '3d'");

  if (!ta.seeds.empty()) {
    cfg.seeds = parse_seeds_csv(read_file(ta.seeds));
  } else if (spec.family() == FieldFamily::gaussian_pair) {
    for (int i = 0; i < 25; ++i) cfg.seeds.push_back({-3.0 + 0.25 * i, 0.0, 0.0});
  } else {
    throw ValidationError("--seeds is required for this field family");
  }
  if (mode == "2d") {
    for (const auto &s : cfg.seeds) {
      if (s.y != 0.0) throw ValidationError("2d mode requires seeds in the y = 0 plane");
    }
    cfg.domain.lo.y = 0.0;
    cfg.domain.hi.y = 0.0;
  }

  MomentumPart which = MomentumPart::real;
  if (ta.part == "im") which = MomentumPart::imaginary;
  else if (ta.part != "re") throw ValidationError("--part must be 're' or 'im'");

  const auto trajs = trace_streamlines(spec, cfg, which);
  for (std::size_t i = 0; i < trajs.size(); ++i) {
    out << "traj " << i << ": " << trajs[i].points.size() << " points, " << termination_name(trajs[i].termination)
        << "\n";
  }
  return trajectories_to_csv(trajs);
}

json anomaly_json(const FieldSpec &spec, const GridSpec &grid, BoundModel bound, std::optional<double> tolerance,
                  bool include_labels) {
  const auto vortices = detect_vortices(spec, grid);
  const auto map = classify_anomalies(spec, grid, bound, tolerance);
  const auto counts = map.counts();
  std::size_t superosc = 0;
  for (auto f : map.superoscillating) superosc += f;

  json vlist = json::array();
  for (const auto &v : vortices) {
    vlist.push_back({{"position", json::array({v.position.x, v.position.y, v.position.z})}, {"charge", v.charge}});
  }
  json out = {{"format", "weakflow.anomaly/1"},
              {"grid", grid_to_json(grid)},
              {"bound", bound == BoundModel::piecewise ? "piecewise" : "free"},
              {"bound_tolerance", tolerance.value_or(default_bound_tolerance(spec))},
              {"vortices", vlist},
              {"counts",
               {{"normal", counts.normal},
                {"backflow", counts.backflow},
                {"superluminal", counts.superluminal},
                {"singular", counts.singular}}},
              {"superoscillating_cells", superosc}};
  if (include_labels) {
    json labels = json::array();
    for (auto l : map.labels) labels.push_back(std::string(label_name(l)));
    out["labels"] = labels;
  }
  return out;
}

}  // namespace

const std::vector<std::string> &known_layers() {
  static const std::vector<std::string> names{"amp", "phase", "re_px", "re_py", "re_pz", "im_px", "im_py", "im_pz",
                                              "S1",  "S2",    "S3",    "W",     "P_O",   "P_S",   "label"};
  return names;
}

PolarizationState parse_polarization(const std::string &text) {
  if (text == "diagonal") return PolarizationState::diagonal();
  if (text == "x") return PolarizationState::linear_x();
  if (text == "y") return {0.0, 1.0};
  if (text == "rcp") return PolarizationState::circular(+1);
  if (text == "lcp") return PolarizationState::circular(-1);
  const auto parts = split_list(text);
  if (parts.size() != 4) throw ValidationError("--pol must be diagonal|x|y|rcp|lcp or ex_re,ex_im,ey_re,ey_im");
  double v[4];
  for (int i = 0; i < 4; ++i) {
    try {
      v[i] = std::stod(parts[i]);
    } catch (const std::exception &) {
      throw ValidationError("--pol: cannot parse '" + parts[i] + "'");
    }
  }
  return {complex{v[0], v[1]}, complex{v[2], v[3]}};
}

GridResult compute_fieldmap(const FieldSpec &spec, const GridSpec &grid, const FieldmapOptions &opts) {
  grid.validate();
  for (const auto &name : opts.layers) {
    if (std::find(known_layers().begin(), known_layers().end(), name) == known_layers().end()) {
      throw ValidationError("unknown layer '" + name + "'");
    }
  }
  const auto samples = sample_grid(spec, grid);
  const SingularityThreshold threshold(max_amplitude(samples));
  const std::size_t n = grid.size();
  const CalciteSpec cal{opts.delta_x, opts.pol};

  std::optional<AnomalyMap> anomalies;
  if (std::find(opts.layers.begin(), opts.layers.end(), "label") != opts.layers.end()) {
    anomalies = classify_anomalies(spec, grid, opts.bound, opts.bound_tolerance);
  }

  GridResult result{grid, {}};
  for (const auto &name : opts.layers) {
    const bool vector = name == "P_O" || name == "P_S";
    Layer layer(name, vector ? 3 : 1, n);
    for (int i = 0; i < grid.first.count; ++i) {
      for (int j = 0; j < grid.second.count; ++j) {
        const std::size_t idx = grid.index(i, j);
        const FieldSample &s = samples[idx];
        const auto mom = local_momentum(s, threshold);
        auto momentum_component = [&](bool real, Axis a) {
          if (!mom) return layer.mark_singular(idx);
          const RVec3 v = real ? mom->re() : mom->im();
          layer.set(idx, get_coord(v, a));
        };
        if (name == "amp") layer.set(idx, s.amplitude());
        else if (name == "phase") mom ? layer.set(idx, s.phase()) : layer.mark_singular(idx);
        else if (name == "re_px") momentum_component(true, Axis::x);
        else if (name == "re_py") momentum_component(true, Axis::y);
        else if (name == "re_pz") momentum_component(true, Axis::z);
        else if (name == "im_px") momentum_component(false, Axis::x);
        else if (name == "im_py") momentum_component(false, Axis::y);
        else if (name == "im_pz") momentum_component(false, Axis::z);
        else if (name == "W") layer.set(idx, 0.5 * std::norm(s.psi));
        else if (name == "P_O" || name == "P_S") {
          const auto dec = poynting_decomposition(s, opts.pol, spec.wave().omega());
          layer.set(idx, name == "P_O" ? dec.orbital : dec.spin);
        } else if (name == "label") {
          const CellLabel l = anomalies->labels[idx];
          l == CellLabel::singular ? layer.mark_singular(idx) : layer.set(idx, static_cast<double>(l));
        } else {
          // S1, S2, S3
          const auto st = mom ? exact_stokes(apply_calcite(spec, cal, grid.point(i, j))) : std::nullopt;
          if (!st) {
            layer.mark_singular(idx);
          } else {
            layer.set(idx, name == "S1" ? st->s1 : name == "S2" ? st->s2 : st->s3);
          }
        }
      }
    }
    result.layers.push_back(std::move(layer));
  }
  return result;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"weakflow: local photon momentum, Poynting currents and weak-measurement maps of analytic optical fields",
               "weakflow"};
  app.require_subcommand(1);

  CommonArgs common;
  FieldmapOptions fm;
  std::string layers_text = "amp,re_px,im_px";
  std::string pol_text = "diagonal";
  std::string bound_text = "free";
  std::optional<double> bound_tolerance;
  auto set_tolerance = [&](double v) { bound_tolerance = v; };
  double delta_x = 1e-4;
  std::string chi_text = "1,0.1";
  bool include_labels = false;
  TraceArgs ta;
  std::string render_in, render_layer, render_component, palette = "gray";

  auto *fieldmap = app.add_subcommand("fieldmap", "Sample observables over a grid and write JSON layers");
  add_field_options(fieldmap, common.field);
  fieldmap->add_option("--grid", common.grid, "Grid as axis:lo:hi:n,axis:lo:hi:m")->required();
  fieldmap->add_option("--layers", layers_text, "Comma-separated layer names");
  fieldmap->add_option("--delta-x", delta_x, "Calcite shift for S1..S3 layers (mm)");
  fieldmap->add_option("--pol", pol_text, "Polarization: diagonal|x|y|rcp|lcp|ex_re,ex_im,ey_re,ey_im");
  fieldmap->add_option("--bound", bound_text, "Bound model for the label layer: free|piecewise");
  fieldmap->add_option_function<double>("--bound-tolerance", set_tolerance,
                                        "Relative slack on the superluminal bound (default 1e-4 for gaussian_pair, else 0)");
  fieldmap->add_option("--out", common.out, "Output JSON path ('-' for stdout)");

  auto *stokes = app.add_subcommand("stokes", "Exact and first-order Stokes maps after the calcite shift");
  add_field_options(stokes, common.field);
  stokes->add_option("--grid", common.grid, "Grid as axis:lo:hi:n,axis:lo:hi:m")->required();
  stokes->add_option("--delta-x", delta_x, "Calcite shift (mm)");
  stokes->add_option("--pol", pol_text, "Input polarization");
  stokes->add_option("--out", common.out, "Output JSON path");

  auto *trace = app.add_subcommand("trace", "Integrate streamlines of Re p or Im p and write CSV");
  add_field_options(trace, common.field);
  trace->add_option("--seeds", ta.seeds, "CSV of seed positions (x,z or x,y,z per row)");
  trace->add_option("--mode", ta.mode, "2d (y = 0 plane) or 3d");
  trace->add_option("--part", ta.part, "re or im");
  trace->add_option("--param", ta.param, "paraxial or arc");
  trace->add_option("--step", ta.step, "Base step (mm)");
  trace->add_option("--max-steps", ta.max_steps, "Maximum steps per trajectory");
  trace->add_option("--box", ta.box, "Domain overrides, e.g. x:-5:5,z:0:100");
  trace->add_option("--guard", ta.guard, "Vortex guard in units of k");
  trace->add_option("--out", common.out, "Output CSV path");

  auto *anomaly = app.add_subcommand("anomaly", "Detect vortices and classify backflow/superluminal cells");
  add_field_options(anomaly, common.field);
  anomaly->add_option("--grid", common.grid, "Grid as axis:lo:hi:n,axis:lo:hi:m")->required();
  anomaly->add_option("--bound", bound_text, "free or piecewise");
  anomaly->add_option_function<double>("--bound-tolerance", set_tolerance,
                                       "Relative slack on the superluminal bound (default 1e-4 for gaussian_pair, else 0)");
  anomaly->add_flag("--labels", include_labels, "Include the per-cell label grid");
  anomaly->add_option("--out", common.out, "Output JSON path");

  auto *force = app.add_subcommand("force", "Gradient and scattering forces on a Rayleigh particle");
  add_field_options(force, common.field);
  force->add_option("--grid", common.grid, "Grid as axis:lo:hi:n,axis:lo:hi:m")->required();
  force->add_option("--chi", chi_text, "Polarizability as re,im");
  force->add_option("--pol", pol_text, "Polarization");
  force->add_option("--out", common.out, "Output JSON path");

  auto *render = app.add_subcommand("render", "Write a grayscale PGM of one layer of a grid JSON file");
  render->add_option("--in", render_in, "Grid JSON produced by fieldmap/stokes/force")->required();
  render->add_option("--layer", render_layer, "Layer name")->required();
  render->add_option("--component", render_component, "x, y or z for vector layers");
  render->add_option("--palette", palette, "Only 'gray' is supported");
  render->add_option("--out", common.out, "Output PGM path")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (render->parsed()) {
      if (palette != "gray") throw ValidationError("--palette: only 'gray' is supported");
      std::optional<Axis> comp;
      if (!render_component.empty()) {
        if (render_component == "x") comp = Axis::x;
        else if (render_component == "y") comp = Axis::y;
        else if (render_component == "z") comp = Axis::z;
        else throw ValidationError("--component must be x, y or z");
      }
      json j;
      try {
        j = json::parse(read_file(render_in));
      } catch (const json::exception &e) {
        throw ValidationError("cannot parse " + render_in + ": " + e.what());
      }
      write_file(common.out, render_pgm(grid_result_from_json(j), render_layer, comp));
      return 0;
    }

    const FieldSpec spec = resolve_field(common.field);
    if (trace->parsed()) {
      write_output(common.out, run_trace(spec, ta, common.out.empty() || common.out == "-" ? err : out), out);
      return 0;
    }

    const GridSpec grid = GridSpec::parse(common.grid);
    const PolarizationState pol = parse_polarization(pol_text);
    if (fieldmap->parsed()) {
      fm.layers = split_list(layers_text);
      fm.delta_x = delta_x;
      fm.pol = pol;
      fm.bound = parse_bound(bound_text);
      fm.bound_tolerance = bound_tolerance;
      GridResult r = compute_fieldmap(spec, grid, fm);
      r.provenance = provenance(spec, args);
      write_output(common.out, grid_result_to_json(r).dump() + "\n", out);
    } else if (stokes->parsed()) {
      const CalciteSpec cal{delta_x, pol};
      if (const auto w = weakness_warning(cal, spec)) err << "warning: " << *w << "\n";
      GridResult r = stokes_result(spec, grid, cal);
      r.provenance = provenance(spec, args);
      r.provenance["delta_x_mm"] = delta_x;
      write_output(common.out, grid_result_to_json(r).dump() + "\n", out);
    } else if (force->parsed()) {
      const auto [re, im] = parse_pair(chi_text, "--chi");
      const Polarizability alpha{complex{re, im}};
      if (const auto w = passivity_warning(alpha)) err << "warning: " << *w << "\n";
      GridResult r = force_result(spec, grid, alpha);
      r.provenance = provenance(spec, args);
      r.provenance["chi"] = json::array({re, im});
      write_output(common.out, grid_result_to_json(r).dump() + "\n", out);
    } else if (anomaly->parsed()) {
      json j = anomaly_json(spec, grid, parse_bound(bound_text), bound_tolerance, include_labels);
      j["provenance"] = provenance(spec, args);
      write_output(common.out, j.dump() + "\n", out);
    }
    return 0;
  } catch (const ValidationError &e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    err << "runtime error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace weakflow::cli
