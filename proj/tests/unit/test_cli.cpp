#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "optomech_cli/app.hpp"
#include "optomech_cli/config.hpp"
#include "optomech_cli/output.hpp"

using namespace optomech;
using namespace optomech::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json fig2_doc() {
  return json{{"kappa1_per_wm", 0.6}, {"kappa2_per_wm", 0.6}, {"gamma_m_per_wm", 1e-5},
              {"J_per_wm", 1.0},      {"g_per_wm", 8.5e-5},   {"E_per_wm", 3.7e5},
              {"Omega_p_per_wm", 0.5}, {"delta2_per_wm", 0.52}, {"delta_per_wm", 0.5}};
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("optomech_test_" + tag + "_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
};

fs::path write_doc(const fs::path& dir, const json& doc, const std::string& name = "config.json") {
  const fs::path file = dir / name;
  std::ofstream(file) << doc.dump(2);
  return file;
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::set<std::string> listing(const fs::path& dir) {
  std::set<std::string> names;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    names.insert(fs::relative(entry.path(), dir).generic_string());
  }
  return names;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("minimal fig2 document") {
  const RunConfig c = parse_config(fig2_doc());
  CHECK(c.params.kappa1 == 0.6);
  CHECK(c.params.kappa2 == 0.6);
  CHECK(c.params.gamma_m == 1e-5);
  CHECK(c.params.J == 1.0);
  CHECK(c.params.g == 8.5e-5);
  CHECK(c.params.E == 3.7e5);
  CHECK(std::get<PumpAmplitude>(c.params.pump).omega_p == 0.5);
  CHECK(c.params.delta2 == 0.52);
  CHECK(c.params.delta == 0.5);
  CHECK(c.params.theta == 0.0);
  CHECK(c.params.mbar == 0.0);
  CHECK(c.params.detuning_mode == DetuningMode::FixedRed);
  CHECK(c.params == fig2_params());
  CHECK_FALSE(c.omega_m_hz.has_value());
  CHECK(c.pair == ModePair{Mode::A2, Mode::B});
}

TEST_CASE("empty document lists every required key") {
  try {
    parse_config(json::object());
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    for (const auto& key : required_keys()) {
      CHECK(std::string(e.what()).find(key) != std::string::npos);
    }
    CHECK(e.missing().size() == required_keys().size() + 1);
  }
}

TEST_CASE("pump beyond the arctanh domain") {
  json doc = fig2_doc();
  doc["Omega_p_per_wm"] = 0.6;
  try {
    parse_config(doc);
    FAIL("expected a validation error");
  } catch (const ValidationError& e) {
    CHECK(e.key_path() == "Omega_p_per_wm");
    CHECK(std::string(e.what()).find("arctanh") != std::string::npos);
  }
}

TEST_CASE("bad documents name the offending key") {
  auto key_of = [](const json& doc) {
    try {
      parse_config(doc);
    } catch (const ValidationError& e) {
      return e.key_path();
    }
    return std::string("<accepted>");
  };
  json doc = fig2_doc();
  doc["kappa3_per_wm"] = 1.0;
  CHECK(key_of(doc) == "kappa3_per_wm");
  doc = fig2_doc();
  doc["kappa1_per_wm"] = "fast";
  CHECK(key_of(doc) == "kappa1_per_wm");
  doc = fig2_doc();
  doc["kappa2_per_wm"] = -0.1;
  CHECK(key_of(doc) == "kappa2_per_wm");
  doc = fig2_doc();
  doc["r"] = 1.0;
  CHECK(key_of(doc) == "r");
  doc = fig2_doc();
  doc["mbar"] = -1.0;
  CHECK(key_of(doc) == "mbar");
  doc = fig2_doc();
  doc["pair"] = "a2-c";
  CHECK(key_of(doc) == "pair");
  doc = fig2_doc();
  doc["axes"] = {"delta2=0.1:1:5", "E=1:0:3"};
  CHECK(key_of(doc) == "axes");
  doc = fig2_doc();
  doc["axes"] = {"delta2=0.1:1:5", "bogus"};
  CHECK(key_of(doc) == "axes[1]");
  doc = fig2_doc();
  doc["detuning_mode"] = "self-consistent";
  CHECK(key_of(doc) == "Delta1_per_wm");
  doc = fig2_doc();
  doc["stride"] = 0;
  CHECK(key_of(doc) == "stride");
  CHECK(key_of(json::array()) == "");
  CHECK_THROWS_AS(parse_config_text("{\"kappa1_per_wm\": 0.6,"), ParseError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ParseError);
}

TEST_CASE("emit then parse is the identity") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int k = 0; k < 200; ++k) {
    RunConfig c;
    PhysicalParams& p = c.params;
    p.kappa1 = u(rng);
    p.kappa2 = u(rng);
    p.gamma_m = u(rng) * 1e-5;
    p.J = u(rng);
    p.g = u(rng) * 1e-4;
    p.E = u(rng) * 1e5;
    p.delta2 = u(rng);
    p.delta = u(rng) - 1.5;
    p.theta = u(rng);
    p.mbar = u(rng);
    if (coin(rng)) {
      p.pump = PumpAmplitude{p.delta2 * (u(rng) / 3.5)};
    } else {
      p.pump = SqueezingParameter{u(rng)};
    }
    if (coin(rng)) {
      p.detuning_mode = DetuningMode::SelfConsistent;
      p.Delta1 = u(rng);
    }
    if (coin(rng)) {
      c.omega_m_hz = u(rng) * 1e7;
      p.omega_m_rad_s = 2.0 * std::numbers::pi * *c.omega_m_hz;
    }
    c.threshold = u(rng) * 1e-6;
    c.pair = coin(rng) ? ModePair{Mode::A1, Mode::A2} : ModePair{Mode::B, Mode::A2};
    if (coin(rng)) {
      c.axes = {Axis{AxisParam::J, 0.1 * u(rng), 3.0 + u(rng), 7, Scale::Log},
                Axis{AxisParam::Kappa2, 0.0, u(rng), 3, Scale::Linear}};
    }
    if (coin(rng)) c.figure = "fig4a";
    if (coin(rng)) c.out = "grid.csv";
    if (coin(rng)) c.t_max = u(rng) * 100;
    if (coin(rng)) c.stride = static_cast<std::size_t>(1 + k);
    if (coin(rng)) c.dt = u(rng) * 1e-2;

    const json doc = emit_config(c);
    CHECK(parse_config(doc) == c);
    CHECK(parse_config_text(doc.dump()) == c);
  }
}

TEST_CASE("csv numbers carry nine significant digits") {
  CHECK(csv_number(0.5332853206578662) == "5.33285321e-01");
  CHECK(csv_number(0.0) == "0.00000000e+00");
  CHECK(csv_number(-3.7e5) == "-3.70000000e+05");
  CHECK(steering_column(Mode::B, Mode::A2) == "G_b_to_a2");
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"steady"}).code == kExitUsage);
  CHECK(run({"figure", "fig4a"}).code == kExitUsage);
  CHECK(run({"oracles", "--seed", "seven"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("steady subcommand") {
  TempDir tmp("steady");
  json doc = fig2_doc();
  doc.erase("Omega_p_per_wm");
  doc["r"] = 0.0;
  const fs::path cfg = write_doc(tmp.path, doc);
  const fs::path report = tmp.path / "report.json";
  const Run r = run({"steady", "--config", cfg.string(), "--pair", "a2-b", "--out", report.string()});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["EN"].get<double>() == 0.0);
  CHECK(j["G_b_to_a2"].get<double>() == 0.0);
  CHECK(j["G_a2_to_b"].get<double>() == 0.0);
  CHECK(j["region"] == "A");
  CHECK(j["physical"]["ok"] == true);
  CHECK(json::parse(slurp(report)) == j);

  doc["Omega_p_per_wm"] = 0.5;
  doc.erase("r");
  doc["delta2_per_wm"] = 0.4;
  const fs::path bad = write_doc(tmp.path, doc, "bad.json");
  CHECK(run({"steady", "--config", bad.string()}).code == kExitValidation);
  CHECK(run({"steady", "--config", (tmp.path / "missing.json").string()}).code == kExitValidation);
  CHECK(run({"steady", "--config", cfg.string(), "--pair", "a2-x"}).code == kExitValidation);
  CHECK(run({"steady", "--config", cfg.string(), "--out", (tmp.path / "no/such/dir.json").string()})
            .code == kExitValidation);
}

TEST_CASE("evolve subcommand") {
  TempDir tmp("evolve");
  const fs::path cfg = write_doc(tmp.path, fig2_doc());
  const fs::path trace = tmp.path / "trace.csv";
  const Run r = run({"evolve", "--config", cfg.string(), "--t-max", "100", "--stride", "50", "--out",
                     trace.string()});
  REQUIRE(r.code == kExitOk);
  std::istringstream lines(slurp(trace));
  std::string header;
  std::getline(lines, header);
  CHECK(header.rfind("t,EN,G_b_to_a2,G_a2_to_b,var_x_a2,var_y_a2,var_x_b,var_y_b,V00,", 0) == 0);
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == json::parse(r.out)["samples"].get<std::size_t>());
  CHECK(json::parse(r.out)["converged"] == true);

  CHECK(run({"evolve", "--config", cfg.string(), "--stride", "10", "--out", trace.string()}).code ==
        kExitValidation);
  CHECK(run({"evolve", "--config", cfg.string(), "--t-max", "-1", "--out", trace.string()}).code ==
        kExitValidation);
  CHECK(run({"evolve", "--config", cfg.string(), "--t-max", "1e5", "--dt", "10", "--no-halving",
             "--out", trace.string()})
            .code == kExitNumerical);
}

TEST_CASE("sweep subcommand") {
  TempDir tmp("sweep");
  const fs::path cfg = write_doc(tmp.path, fig2_doc());
  const fs::path grid = tmp.path / "grid.csv";
  const Run r = run({"sweep", "--config", cfg.string(), "--axis", "Omega_p=0.0:0.5:6", "--axis",
                     "J=0.5:1.5:3", "--out", grid.string(), "--variances", "--threads", "2"});
  REQUIRE(r.code == kExitOk);
  std::istringstream lines(slurp(grid));
  std::string header;
  std::getline(lines, header);
  CHECK(header ==
        "Omega_p_per_wm,J_per_wm,EN,G_b_to_a2,G_a2_to_b,stable,region,var_x_a1,var_y_a1,var_x_a2,"
        "var_y_a2,var_x_b,var_y_b");
  std::size_t rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 18);
  CHECK(listing(tmp.path) == std::set<std::string>{"config.json", "grid.csv"});

  CHECK(run({"sweep", "--config", cfg.string(), "--axis", "J=1:0:3", "--out", grid.string()}).code ==
        kExitValidation);
  CHECK(run({"sweep", "--config", cfg.string(), "--axis", "J=0:1:3", "--axis", "J=0:1:3", "--out",
             grid.string()})
            .code == kExitValidation);
  CHECK(run({"sweep", "--config", cfg.string(), "--out", grid.string()}).code == kExitValidation);
}

TEST_CASE("figure subcommand writes exactly its three files") {
  TempDir tmp("figure");
  const fs::path out = tmp.path / "fig4a";
  const Run r = run({"figure", "fig4a", "--out", out.string(), "--grid", "6", "--refine", "1"});
  REQUIRE(r.code == kExitOk);
  CHECK(listing(out) == std::set<std::string>{"extrema.json", "grid.csv", "regions.csv"});
  const std::string grid = slurp(out / "grid.csv");
  CHECK(grid.substr(0, grid.find('\n')) == "delta2_per_wm,E_per_wm,EN,G_b_to_a2,G_a2_to_b,stable,region");
  const json meta = json::parse(slurp(out / "extrema.json"));
  CHECK(meta["figure"] == "fig4a");
  CHECK(meta["extrema"].size() == 3);
  CHECK(meta["notes"].size() >= 1);
  CHECK(meta["rwa"].contains("max_ratio"));

  const fs::path group = tmp.path / "fig4";
  REQUIRE(run({"figure", "fig4", "--out", group.string(), "--grid", "4", "--refine", "0"}).code == kExitOk);
  CHECK(fs::exists(group / "fig4a" / "grid.csv"));
  CHECK(fs::exists(group / "fig4d" / "regions.csv"));

  CHECK(run({"figure", "fig9", "--out", (tmp.path / "x").string()}).code == kExitValidation);
}

TEST_CASE("oracles subcommand is deterministic") {
  const Run a = run({"oracles", "--seed", "7", "--cases", "200"});
  const Run b = run({"oracles", "--seed", "7", "--cases", "200"});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  std::istringstream lines(a.out);
  std::size_t n = 0;
  for (std::string line; std::getline(lines, line); ++n) {
    const json j = json::parse(line);
    CHECK(j["pass"] == true);
  }
  CHECK(n == 7);
}

}  // TEST_SUITE
