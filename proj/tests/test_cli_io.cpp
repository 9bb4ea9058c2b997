#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "weakflow/cli.hpp"
#include "weakflow/errors.hpp"
#include "weakflow/io.hpp"

using namespace weakflow;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string &name) { return std::string(WEAKFLOW_DATA_DIR) + "/" + name; }

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::temp_directory_path() / "weakflow_cli_io_test";
  std::filesystem::create_directories(dir);
  return dir;
}

GridResult small_result() {
  GridResult r{GridSpec::parse("x:0:1:2,z:0:2:3"), {}};
  Layer a("a", 1, 6);
  for (std::size_t i = 0; i < 6; ++i) a.set(i, 0.1 * static_cast<double>(i));
  a.mark_singular(4);
  Layer v("v", 3, 6);
  for (std::size_t i = 0; i < 6; ++i) v.set(i, RVec3{1.0 * i, -2.0 * i, 1.0 / 3.0});
  r.layers = {a, v};
  r.provenance = {{"tool", "weakflow"}};
  return r;
}

}  // namespace

TEST_CASE("grid spec parsing") {
  const GridSpec g = GridSpec::parse("x:-4:4:400,z:0:3000:600");
  CHECK(g.first.axis == Axis::x);
  CHECK(g.second.axis == Axis::z);
  CHECK(g.size() == 240000);
  CHECK(g.point(399, 599).x == 4.0);
  CHECK(g.point(399, 599).z == 3000.0);
  CHECK(g.index(2, 3) == 2 * 600 + 3);
  CHECK_THROWS_AS(GridSpec::parse("x:-4:4:1,z:0:1:5"), ValidationError);
  CHECK_THROWS_AS(GridSpec::parse("x:4:-4:10,z:0:1:5"), ValidationError);
  CHECK_THROWS_AS(GridSpec::parse("x:-4:4:10,x:0:1:5"), ValidationError);
  CHECK_THROWS_AS(GridSpec::parse("x:-4:4:10"), ValidationError);
  CHECK_THROWS_AS(GridSpec::parse("q:0:1:10,z:0:1:5"), ValidationError);
  CHECK_THROWS_AS(GridSpec::parse("x:0:nan:10,z:0:1:5"), ValidationError);
}

TEST_CASE("field spec JSON round-trips for every family") {
  for (const char *name : {"gaussian_pair_fig1.json", "tir_two_wave.json", "bessel_l2.json", "evanescent.json", "plane_wave.json"}) {
    CAPTURE(name);
    const FieldSpec spec = load_field_file(data(name));
    const json once = field_to_json(spec);
    const json twice = field_to_json(field_from_json(once));
    CHECK(once == twice);
    CHECK(once.dump() == twice.dump());
    CHECK(once["family"] == std::string(family_name(spec.family())));
  }
}

TEST_CASE("field spec JSON validation") {
  CHECK_THROWS_AS(field_from_json(json::parse(R"({"family":"nope","lambda_mm":1})")), ValidationError);
  CHECK_THROWS_AS(field_from_json(json::parse(R"({"family":"bessel","lambda_mm":1,"ell":2})")), ValidationError);
  CHECK_THROWS_AS(field_from_json(json::parse(R"({"family":"bessel","lambda_mm":1,"ell":2.5,"k_perp":1})")), ValidationError);
  CHECK_THROWS_AS(field_from_json(json::parse(R"({"family":"evanescent","lambda_mm":1,"kappa":1,"extra":0})")), ValidationError);
  CHECK_THROWS_AS(field_from_json(json::parse(R"({"family":"evanescent","lambda_mm":"1","kappa":1})")), ValidationError);
  CHECK_THROWS_AS(field_from_json(json::parse(R"({"family":"evanescent","lambda_mm":-1,"kappa":1})")), ValidationError);
  CHECK_THROWS_AS(field_from_json(json::parse(R"([1,2])")), ValidationError);
  CHECK_THROWS_AS(field_from_json(json::parse(R"({"family":"tir_two_wave","lambda_mm":1,"n":1.5,"theta1_rad":0.5})")),
                  RegimeError);
}

TEST_CASE("grid results round-trip through JSON and keep singular markers") {
  const GridResult r = small_result();
  const json j = grid_result_to_json(r);
  CHECK(j["format"] == "weakflow.grid/1");
  CHECK(j["layers"]["a"]["values"][4] == "singular");
  const GridResult back = grid_result_from_json(j);
  REQUIRE(back.layers.size() == 2);
  CHECK(back.find("a")->singular[4] == 1);
  CHECK(back.find("a")->values[5] == r.find("a")->values[5]);
  CHECK(back.find("v")->components == 3);
  CHECK(back.find("v")->values == r.find("v")->values);
  CHECK(grid_result_to_json(back).dump() == j.dump());
  CHECK(back.find("missing") == nullptr);
}

TEST_CASE("numbers use the shortest round-trip decimal") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
  CHECK(format_number(-2.0) == "-2");
  CHECK(format_number(1e-300) == "1e-300");
  for (double v : {0.1 + 0.2, 6220.35345410779, -1.2345678901234567e-9}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("trajectory CSV and seed parsing") {
  Trajectory t;
  t.points.push_back({0.0, {0.5, 0.0, 0.0}, {0.0, 4.0, 6220.0}});
  t.points.push_back({0.25, {0.5, 0.1, 0.25}, {0.0, 4.0, 6220.0}});
  const std::string csv = trajectories_to_csv({t, t});
  CHECK(csv.rfind("traj_id,s_or_z,x,y,z,px,py,pz\n", 0) == 0);
  CHECK(csv.find("1,0.25,0.5,0.1,0.25,0,4,6220\n") != std::string::npos);
  const auto two = parse_seeds_csv("x,z\n0.5,10\n\n-1,0\n");
  REQUIRE(two.size() == 2);
  CHECK(two[0] == RVec3{0.5, 0.0, 10.0});
  const auto three = parse_seeds_csv("0.1,0.2,0.3\n");
  REQUIRE(three.size() == 1);
  CHECK(three[0] == RVec3{0.1, 0.2, 0.3});
  CHECK_THROWS_AS(parse_seeds_csv("1,2\n3\n"), ValidationError);
  CHECK_THROWS_AS(parse_seeds_csv("1,abc\n"), ValidationError);
}

TEST_CASE("PGM rendering rules") {
  GridResult r = small_result();
  SUBCASE("scalar layer: header, normalization, singular pixel") {
    const std::string pgm = render_pgm(r, "a", std::nullopt);
    const std::string header = "P5\n3 2\n255\n";
    REQUIRE(pgm.rfind(header, 0) == 0);
    REQUIRE(pgm.size() == header.size() + 6);
    const auto *px = reinterpret_cast<const unsigned char *>(pgm.data() + header.size());
    // top row is the upper end of the first axis (i = 1): samples 3, 4, 5
    CHECK(px[0] == 153);  // 0.3 on the finite range [0, 0.5]
    CHECK(px[1] == 0);
    CHECK(px[2] == 255);
    CHECK(px[3] == 0);
  }
  SUBCASE("constant layer maps to mid-gray") {
    Layer c("c", 1, 6);
    for (std::size_t i = 0; i < 6; ++i) c.set(i, 7.0);
    r.layers.push_back(c);
    const std::string pgm = render_pgm(r, "c", std::nullopt);
    for (std::size_t i = pgm.size() - 6; i < pgm.size(); ++i) CHECK(static_cast<unsigned char>(pgm[i]) == 128);
  }
  SUBCASE("vector layers need a component, scalar layers refuse one") {
    CHECK_THROWS_AS(render_pgm(r, "v", std::nullopt), ValidationError);
    CHECK_NOTHROW(render_pgm(r, "v", Axis::y));
    CHECK_THROWS_AS(render_pgm(r, "a", Axis::x), ValidationError);
    CHECK_THROWS_AS(render_pgm(r, "zzz", std::nullopt), ValidationError);
  }
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"bogus"}).code == 2);
  const auto unknown_flag = run_cli({"fieldmap", "--field", data("plane_wave.json"), "--grid", "x:0:1:3,z:0:1:3", "--nope"});
  CHECK(unknown_flag.code == 2);
  CHECK(unknown_flag.err.find("fieldmap") != std::string::npos);
  CHECK(run_cli({"fieldmap", "--grid", "x:0:1:3,z:0:1:3"}).code == 2);
  CHECK(run_cli({"fieldmap", "--field", data("plane_wave.json"), "--grid", "x:0:1:1,z:0:1:3"}).code == 2);
  CHECK(run_cli({"fieldmap", "--field", data("plane_wave.json"), "--grid", "x:0:1:3,z:0:1:3", "--layers", "amp,bad"}).code == 2);
  CHECK(run_cli({"fieldmap", "--field-json", R"({"family":"bessel","lambda_mm":1,"ell":1,"k_perp":9})", "--grid",
                 "x:0:1:3,z:0:1:3"})
            .code == 2);
  CHECK(run_cli({"anomaly", "--field", data("tir_two_wave.json"), "--grid", "x:-2:2:20,z:0:4:20"}).code == 2);
  CHECK(run_cli({"fieldmap", "--field", "/nonexistent/field.json", "--grid", "x:0:1:3,z:0:1:3"}).code != 0);
  const auto ok = run_cli({"fieldmap", "--field", data("plane_wave.json"), "--grid", "x:0:1:3,z:0:1:3", "--layers", "amp"});
  CHECK(ok.code == 0);
  CHECK(json::parse(ok.out)["layers"]["amp"]["values"].size() == 9);
}

TEST_CASE("inline field JSON overrides file keys") {
  const auto r = run_cli({"fieldmap", "--field", data("evanescent.json"), "--field-json", R"({"kappa":2.5})", "--grid",
                          "x:0:1:3,z:0:1:3", "--layers", "im_px"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["provenance"]["field"]["kappa"] == 2.5);
  CHECK(j["layers"]["im_px"]["values"][0].get<double>() == doctest::Approx(2.5));
}

TEST_CASE("every pipeline is deterministic") {
  const auto dir = scratch_dir();
  const std::vector<std::vector<std::string>> pipelines{
      {"fieldmap", "--field", data("gaussian_pair_fig1.json"), "--grid", "x:-4:4:40,z:0:3000:30", "--layers",
       "amp,phase,re_px,re_pz,im_px,im_pz,S1,S2,S3,W,P_O,P_S,label"},
      {"stokes", "--field", data("gaussian_pair_fig1.json"), "--grid", "x:-4:4:40,z:0:3000:30"},
      {"force", "--field", data("bessel_l2.json"), "--grid", "x:-0.01:0.01:20,y:-0.01:0.01:20"},
      {"anomaly", "--field", data("tir_two_wave.json"), "--grid", "x:-2:2:100,z:0:4:100", "--bound", "piecewise", "--labels"},
      {"trace", "--field", data("bessel_l2.json"), "--seeds", data("bessel_seeds.csv"), "--mode", "3d"},
      {"trace", "--field", data("gaussian_pair_fig1.json"), "--seeds", data("fig2_seeds.csv"), "--step", "20"},
  };
  for (const auto &args : pipelines) {
    CAPTURE(args[0]);
    const auto a = run_cli(args), b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.err == b.err);
    CHECK(!a.out.empty());
  }
  const auto fm = run_cli({"fieldmap", "--field", data("gaussian_pair_fig1.json"), "--grid", "x:-4:4:40,z:0:3000:30",
                           "--layers", "amp", "--out", (dir / "fm.json").string()});
  REQUIRE(fm.code == 0);
  for (int rep = 0; rep < 2; ++rep) {
    const auto render = run_cli({"render", "--in", (dir / "fm.json").string(), "--layer", "amp", "--out",
                                 (dir / ("amp" + std::to_string(rep) + ".pgm")).string()});
    REQUIRE(render.code == 0);
  }
  CHECK(read_file((dir / "amp0.pgm").string()) == read_file((dir / "amp1.pgm").string()));
  CHECK(run_cli({"render", "--in", (dir / "fm.json").string(), "--layer", "amp", "--palette", "viridis", "--out",
                 (dir / "x.pgm").string()})
            .code == 2);
}

TEST_CASE("stokes output carries predictions and pointer readouts") {
  const auto r = run_cli({"stokes", "--field", data("gaussian_pair_fig1.json"), "--grid", "x:-4:4:9,z:0:100:3"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  for (const char *name : {"S1", "S2", "S3", "S1_pred", "S2_pred", "S3_pred", "re_px", "im_px"}) {
    CAPTURE(name);
    CHECK(j["layers"].contains(name));
  }
  const auto warned = run_cli({"stokes", "--field", data("gaussian_pair_fig1.json"), "--grid", "x:-4:4:9,z:0:100:3",
                               "--delta-x", "0.05"});
  CHECK(warned.code == 0);
  CHECK(warned.err.find("warning") != std::string::npos);
}
