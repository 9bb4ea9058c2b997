#include "weakflow/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "weakflow/errors.hpp"

namespace weakflow {

namespace {

void check_keys(const json &j, std::initializer_list<const char *> allowed) {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto &item : j.items()) {
    if (!ok.contains(item.key())) throw ValidationError("field spec: unexpected key '" + item.key() + "'");
  }
}

double number(const json &j, const char *key) {
  if (!j.contains(key)) throw ValidationError(std::string("field spec: missing key '") + key + "'");
  const auto &v = j.at(key);
  if (!v.is_number()) throw ValidationError(std::string("field spec: '") + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json &j, const char *key, double fallback) { return j.contains(key) ? number(j, key) : fallback; }

json vec_to_json(const RVec3 &v) { return json::array({v.x, v.y, v.z}); }

RVec3 vec_from_json(const json &j, const char *what) {
  if (!j.is_array() || j.size() != 3 || !std::all_of(j.begin(), j.end(), [](const json &e) { return e.is_number(); })) {
    throw ValidationError(std::string(what) + " must be an array of three numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Axis axis_from_string(const std::string &s) {
  if (s == "x") return Axis::x;
  if (s == "y") return Axis::y;
  if (s == "z") return Axis::z;
  throw ValidationError("unknown axis '" + s + "'");
}

}  // namespace

json field_to_json(const FieldSpec &spec) {
  json j;
  j["family"] = std::string(family_name(spec.family()));
  j["lambda_mm"] = spec.lambda();
  if (const auto *s = spec.get_if<PlaneWaveSpec>()) {
    j["direction"] = vec_to_json(s->direction);
  } else if (const auto *s = spec.get_if<GaussianPairSpec>()) {
    j["w0_mm"] = s->w0;
    j["a_mm"] = s->a;
  } else if (const auto *s = spec.get_if<BesselSpec>()) {
    j["ell"] = s->ell;
    j["k_perp"] = s->k_perp;
  } else if (const auto *s = spec.get_if<EvanescentSpec>()) {
    j["kappa"] = s->kappa;
  } else if (const auto *s = spec.get_if<TirTwoWaveField>()) {
    j["n"] = s->spec.n;
    j["theta1_rad"] = s->spec.theta1;
    j["theta2_rad"] = s->spec.theta2;
    j["amp1"] = s->spec.amp1;
    j["amp2"] = s->spec.amp2;
  }
  return j;
}

FieldSpec field_from_json(const json &j) {
  if (!j.is_object()) throw ValidationError("field spec must be a JSON object");
  if (!j.contains("family") || !j.at("family").is_string()) throw ValidationError("field spec: missing 'family'");
  const std::string family = j.at("family").get<std::string>();
  const WaveParameters wave(number(j, "lambda_mm"));

  if (family == "plane_wave") {
    check_keys(j, {"family", "lambda_mm", "direction"});
    PlaneWaveSpec s{wave};
    if (j.contains("direction")) s.direction = vec_from_json(j.at("direction"), "direction");
    return FieldSpec::plane_wave(s);
  }
  if (family == "gaussian_pair") {
    check_keys(j, {"family", "lambda_mm", "w0_mm", "a_mm"});
    return FieldSpec::gaussian_pair(GaussianPairSpec{wave, number(j, "w0_mm"), number(j, "a_mm")});
  }
  if (family == "bessel") {
    check_keys(j, {"family", "lambda_mm", "ell", "k_perp"});
    if (!j.contains("ell") || !j.at("ell").is_number_integer()) throw ValidationError("field spec: 'ell' must be an integer");
    return FieldSpec::bessel(BesselSpec{wave, j.at("ell").get<int>(), number(j, "k_perp")});
  }
  if (family == "evanescent") {
    check_keys(j, {"family", "lambda_mm", "kappa"});
    return FieldSpec::evanescent(EvanescentSpec{wave, number(j, "kappa")});
  }
  if (family == "tir_two_wave") {
    check_keys(j, {"family", "lambda_mm", "n", "theta1_rad", "theta2_rad", "amp1", "amp2"});
    TirTwoWaveSpec s = TirTwoWaveSpec::wolter_defaults(wave.lambda());
    s.n = number_or(j, "n", s.n);
    if (j.contains("n") && !(j.contains("theta1_rad") && j.contains("theta2_rad"))) {
      // Keep the default offsets above the critical angle of the requested index.
      const TirTwoWaveSpec d = TirTwoWaveSpec::wolter_defaults(wave.lambda());
      s.theta1 = s.critical_angle() + (d.theta1 - d.critical_angle());
      s.theta2 = s.critical_angle() + (d.theta2 - d.critical_angle());
    }
    s.theta1 = number_or(j, "theta1_rad", s.theta1);
    s.theta2 = number_or(j, "theta2_rad", s.theta2);
    s.amp1 = number_or(j, "amp1", s.amp1);
    s.amp2 = number_or(j, "amp2", s.amp2);
    return build_tir_field(s);
  }
  throw ValidationError("field spec: unknown family '" + family + "'");
}

FieldSpec load_field_file(const std::string &path) {
  const std::string text = read_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw ValidationError("cannot parse field file " + path + ": " + e.what());
  }
  return field_from_json(j);
}

const Layer *GridResult::find(const std::string &name) const {
  for (const auto &l : layers) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

json grid_to_json(const GridSpec &grid) {
  json axes = json::array();
  for (const auto *a : {&grid.first, &grid.second}) {
    axes.push_back({{"axis", std::string(1, axis_name(a->axis))}, {"lo", a->lo}, {"hi", a->hi}, {"count", a->count}});
  }
  return {{"axes", axes}, {"origin", vec_to_json(grid.origin)}};
}

GridSpec grid_from_json(const json &j) {
  try {
    GridSpec g;
    const auto &axes = j.at("axes");
    if (!axes.is_array() || axes.size() != 2) throw ValidationError("grid: 'axes' must hold two entries");
    GridAxis *dst[] = {&g.first, &g.second};
    for (int n = 0; n < 2; ++n) {
      const auto &a = axes[n];
      *dst[n] = GridAxis{axis_from_string(a.at("axis").get<std::string>()), a.at("lo").get<double>(),
                         a.at("hi").get<double>(), a.at("count").get<int>()};
    }
    if (j.contains("origin")) g.origin = vec_from_json(j.at("origin"), "grid origin");
    g.validate();
    return g;
  } catch (const json::exception &e) {
    throw ValidationError(std::string("grid: malformed JSON: ") + e.what());
  }
}

json layer_values_to_json(const Layer &layer) {
  json values = json::array();
  const std::size_t n = layer.singular.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (layer.singular[i]) {
      values.push_back("singular");
    } else if (layer.components == 1) {
      values.push_back(layer.values[i]);
    } else {
      values.push_back(json::array({layer.values[3 * i], layer.values[3 * i + 1], layer.values[3 * i + 2]}));
    }
  }
  return values;
}

json grid_result_to_json(const GridResult &result) {
  json layers = json::object();
  for (const auto &l : result.layers) {
    layers[l.name] = {{"components", l.components}, {"values", layer_values_to_json(l)}};
  }
  return {{"format", "weakflow.grid/1"},
          {"grid", grid_to_json(result.grid)},
          {"layers", layers},
          {"provenance", result.provenance}};
}

GridResult grid_result_from_json(const json &j) {
  GridResult r;
  r.grid = grid_from_json(j.at("grid"));
  const std::size_t n = r.grid.size();
  try {
    for (const auto &item : j.at("layers").items()) {
      const int comps = item.value().at("components").get<int>();
      if (comps != 1 && comps != 3) throw ValidationError("layer '" + item.key() + "' must have 1 or 3 components");
      Layer layer(item.key(), comps, n);
      const auto &values = item.value().at("values");
      if (!values.is_array() || values.size() != n) {
        throw ValidationError("layer '" + item.key() + "' does not match the grid sample count");
      }
      for (std::size_t i = 0; i < n; ++i) {
        const auto &v = values[i];
        if (v.is_string()) {
          if (v.get<std::string>() != "singular") throw ValidationError("unexpected string in layer '" + item.key() + "'");
          layer.mark_singular(i);
        } else if (comps == 1) {
          layer.set(i, v.get<double>());
        } else {
          layer.set(i, vec_from_json(v, "vector layer entry"));
        }
      }
      r.layers.push_back(std::move(layer));
    }
    if (j.contains("provenance")) r.provenance = j.at("provenance");
  } catch (const json::exception &e) {
    throw ValidationError(std::string("grid result: malformed JSON: ") + e.what());
  }
  return r;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string trajectories_to_csv(const std::vector<Trajectory> &trajs) {
  std::string out = "traj_id,s_or_z,x,y,z,px,py,pz\n";
  for (std::size_t id = 0; id < trajs.size(); ++id) {
    for (const auto &p : trajs[id].points) {
      out += std::to_string(id);
      for (double v : {p.parameter, p.position.x, p.position.y, p.position.z, p.momentum.x, p.momentum.y, p.momentum.z}) {
        out += ',';
        out += format_number(v);
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<RVec3> parse_seeds_csv(const std::string &text) {
  std::vector<RVec3> seeds;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> cols;
    bool numeric = true;
    std::size_t start = 0;
    while (start <= line.size()) {
      const auto comma = line.find(',', start);
      std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      cell.erase(0, cell.find_first_not_of(" \t"));
      cell.erase(cell.find_last_not_of(" \t") + 1);
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (cell.empty() || res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
        numeric = false;
        break;
      }
      cols.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (!numeric) {
      if (seeds.empty() && line_no == 1) continue;  // header
      throw ValidationError("seeds: line " + std::to_string(line_no) + " is not numeric");
    }
    if (cols.size() == 2) {
      seeds.push_back({cols[0], 0.0, cols[1]});
    } else if (cols.size() == 3) {
      seeds.push_back({cols[0], cols[1], cols[2]});
    } else {
      throw ValidationError("seeds: line " + std::to_string(line_no) + " must have 2 (x,z) or 3 (x,y,z) columns");
    }
  }
  if (seeds.empty()) throw ValidationError("seeds: no seed positions found");
  return seeds;
}

std::string render_pgm(const GridResult &result, const std::string &name, std::optional<Axis> component) {
  const Layer *layer = result.find(name);
  if (layer == nullptr) throw ValidationError("render: no layer named '" + name + "'");
  int offset = 0;
  if (layer->components == 3) {
    if (!component) throw ValidationError("render: layer '" + name + "' is a vector; select a component");
    offset = static_cast<int>(*component);
  } else if (component) {
    throw ValidationError("render: layer '" + name + "' is scalar; drop the component selector");
  }

  const std::size_t n = layer->singular.size();
  auto value = [&](std::size_t i) { return layer->values[i * layer->components + offset]; };
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < n; ++i) {
    if (layer->singular[i]) continue;
    lo = std::min(lo, value(i));
    hi = std::max(hi, value(i));
  }

  const int rows = result.grid.first.count;
  const int cols = result.grid.second.count;
  std::string out = "P5\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  out.reserve(out.size() + n);
  for (int r = 0; r < rows; ++r) {
    const int i = rows - 1 - r;
    for (int j = 0; j < cols; ++j) {
      const std::size_t idx = result.grid.index(i, j);
      unsigned char px = 0;
      if (!layer->singular[idx]) {
        if (!(hi > lo)) {
          px = 128;
        } else {
          px = static_cast<unsigned char>(std::lround(255.0 * (value(idx) - lo) / (hi - lo)));
        }
      }
      out.push_back(static_cast<char>(px));
    }
  }
  return out;
}

void write_file(const std::string &path, const std::string &bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("failed writing " + path);
}

std::string read_file(const std::string &path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace weakflow
