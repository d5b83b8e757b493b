#include "optomech_cli/app.hpp"

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "optomech/optomech.hpp"
#include "optomech_cli/config.hpp"
#include "optomech_cli/output.hpp"

namespace optomech::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path() && !fs::exists(path.parent_path())) {
    throw IoError("output directory '" + path.parent_path().string() + "' does not exist");
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot write '" + path.string() + "'");
  return os;
}

void write_json(const fs::path& path, const json& j) {
  auto os = open_output(path);
  os << j.dump(2) << '\n';
}

std::string r_label(double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", r);
  return buf;
}

ModePair choose_pair(const std::string& flag, const RunConfig& config) {
  if (flag.empty()) return config.pair;
  try {
    return pair_from_string(flag);
  } catch (const Error& e) {
    throw ValidationError("--pair", e.what());
  }
}

struct SteadyArgs {
  std::string config;
  std::string pair;
  std::string out;
};

int cmd_steady(const SteadyArgs& args, std::ostream& out) {
  const RunConfig config = load_config(args.config);
  const ModePair pair = choose_pair(args.pair, config);
  const PhysicalParams& p = config.params;

  const DerivedParams d = derive_params(p);
  const DriftMatrix m = build_drift(p, d);
  const DiffusionMatrix diff = build_diffusion(p, d);
  const StabilityReport st = stability_check(m);
  if (!st.stable) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "drift matrix is unstable (max Re lambda = %.6e)", st.max_real_part);
    throw UnstableSystem(buf);
  }
  const CovarianceMatrix v = steady_state(m, diff);
  const NonlocalityReport rep = nonlocality(v, pair, config.threshold);
  const PhysicalityReport phys = physicality(v.v);
  const RwaReport rwa = rwa_validity(p, d);

  json j = to_json(rep);
  j["stable"] = true;
  j["max_real_part"] = st.max_real_part;
  j["physical"] = {{"ok", phys.ok}, {"min_symplectic_eigenvalue", phys.min_symplectic_eigenvalue}};
  j["rwa"] = {{"ratio", std::isfinite(rwa.ratio) ? json(rwa.ratio) : json(nullptr)},
              {"warning", rwa.warning},
              {"threshold", rwa.threshold}};
  json variances;
  for (const Mode mode : {Mode::A1, Mode::A2, Mode::B}) {
    const QuadratureVariances q = quadrature_variances(v, mode);
    variances[to_string(mode)] = {{"var_x", q.var_x}, {"var_y", q.var_y}};
  }
  j["variances"] = variances;
  j["derived"] = to_json(d);
  j["residual"] = residual(m, diff, v);
  if (config.omega_m_hz) j["omega_m_hz"] = *config.omega_m_hz;

  out << j.dump(2) << '\n';
  if (!args.out.empty()) write_json(args.out, j);
  return kExitOk;
}

struct EvolveArgs {
  std::string config;
  std::string pair;
  std::string out;
  std::optional<double> t_max;
  std::optional<std::size_t> stride;
  std::optional<double> dt;
  bool no_halving = false;
};

int cmd_evolve(const EvolveArgs& args, std::ostream& out) {
  const RunConfig config = load_config(args.config);
  const ModePair pair = choose_pair(args.pair, config);
  const auto t_max = args.t_max ? args.t_max : config.t_max;
  if (!t_max) throw ValidationError("--t-max", "evolve needs --t-max or t_max_per_wm in the config");
  const std::string path = !args.out.empty() ? args.out : config.out.value_or("");
  if (path.empty()) throw ValidationError("--out", "evolve needs --out or out in the config");

  const PhysicalParams& p = config.params;
  const DerivedParams d = derive_params(p);
  const DriftMatrix m = build_drift(p, d);
  const DiffusionMatrix diff = build_diffusion(p, d);

  DtPolicy policy;
  policy.dt = args.dt ? args.dt : config.dt;
  policy.stride = args.stride.value_or(config.stride.value_or(1));
  policy.check_step_halving = !args.no_halving;
  const EvolutionTrace trace = evolve(m, diff, initial_state(p.mbar), *t_max, policy);

  auto os = open_output(path);
  write_trace_csv(os, trace, pair, config.threshold);

  json j;
  j["samples"] = trace.times.size();
  j["t_max_per_wm"] = *t_max;
  j["dt_per_wm"] = trace.dt;
  j["converged"] = trace.converged;
  j["halving_change"] = policy.check_step_halving ? json(trace.halving_change) : json(nullptr);
  j["final_residual"] = trace.final_residual;
  j["final"] = to_json(nonlocality(trace.covariances.back(), pair, config.threshold));
  out << j.dump(2) << '\n';
  return kExitOk;
}

struct SweepArgs {
  std::string config;
  std::string pair;
  std::string out;
  std::string extrema;
  std::vector<std::string> axes;
  unsigned threads = 0;
  int refine = 3;
  bool variances = false;
  bool diffusion = false;
  bool diagnostics = false;
};

int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
  const RunConfig config = load_config(args.config);
  SweepSpec spec;
  spec.base = config.params;
  spec.pair = choose_pair(args.pair, config);
  spec.threshold = config.threshold;
  spec.threads = args.threads;
  spec.outputs.variances = args.variances;
  spec.outputs.diffusion = args.diffusion;
  spec.outputs.diagnostics = args.diagnostics;
  if (args.axes.empty()) {
    spec.axes = config.axes;
  } else {
    for (std::size_t i = 0; i < args.axes.size(); ++i) {
      try {
        spec.axes.push_back(parse_axis(args.axes[i]));
      } catch (const Error& e) {
        throw ValidationError("--axis", e.what());
      }
    }
  }
  const std::string path = !args.out.empty() ? args.out : config.out.value_or("");
  if (path.empty()) throw ValidationError("--out", "sweep needs --out or out in the config");

  const SweepResult result = run_sweep(spec);
  {
    auto os = open_output(path);
    write_grid_csv(os, result);
  }

  std::vector<Extremum> extrema;
  for (const Objective& obj : default_objectives(spec)) {
    try {
      extrema.push_back(find_extremum(result, obj, args.refine));
    } catch (const EmptyGrid&) {
      // nothing stable to optimise over
    }
  }
  const json summary = extrema_json(result, extrema);
  if (!args.extrema.empty()) write_json(args.extrema, summary);
  out << summary.dump(2) << '\n';
  err << "sweep: " << result.records.size() << " points in " << result.meta.wall_time_s << " s\n";
  return kExitOk;
}

json run_dynamics(const FigureRecipe& fig, const fs::path& dir) {
  const DynamicsRecipe& dyn = *fig.dynamics;
  const SweepSpec& spec = fig.sweep;
  json list = json::array();
  for (const double r : dyn.r_values) {
    PhysicalParams p = spec.base;
    p.pump = SqueezingParameter{r};
    const DerivedParams d = derive_params(p);
    const DriftMatrix m = build_drift(p, d);
    const DiffusionMatrix diff = build_diffusion(p, d);
    const StabilityReport st = stability_check(m);

    json entry;
    entry["r"] = r;
    entry["stable"] = st.stable;
    entry["max_real_part"] = st.max_real_part;
    const std::string file = "trace_r" + r_label(r) + ".csv";
    try {
      DtPolicy policy;
      const double rho = spectral_radius(m);
      const double dt = rho > 0.0 ? policy.courant / rho : dyn.t_max;
      const auto steps = static_cast<std::size_t>(std::ceil(dyn.t_max / dt));
      policy.stride = std::max<std::size_t>(1, steps / std::max<std::size_t>(1, dyn.samples));
      const EvolutionTrace trace = evolve(m, diff, initial_state(p.mbar), dyn.t_max, policy);
      auto os = open_output(dir / file);
      write_trace_csv(os, trace, spec.pair, spec.threshold);
      entry["file"] = file;
      entry["converged"] = trace.converged;
      entry["final"] = to_json(nonlocality(trace.covariances.back(), spec.pair, spec.threshold));
    } catch (const NonFinite& e) {
      entry["error"] = e.what();
    }
    if (st.stable) entry["steady"] = to_json(nonlocality(steady_state(m, diff), spec.pair, spec.threshold));
    list.push_back(entry);
  }
  return list;
}

struct FigureArgs {
  std::string name;
  std::string out;
  std::size_t grid = 101;
  int refine = 3;
  unsigned threads = 0;
};

int cmd_figure(const FigureArgs& args, std::ostream& out, std::ostream& err) {
  std::vector<FigureRecipe> recipes;
  if (args.name == "all") {
    for (const auto& name : figure_names()) recipes.push_back(figure_recipe(name, args.grid));
  } else {
    recipes = figure_group(args.name, args.grid);
  }
  const bool nested = recipes.size() > 1;
  if (!fs::is_directory(args.out)) fs::create_directories(args.out);

  for (FigureRecipe& fig : recipes) {
    const fs::path dir = nested ? fs::path(args.out) / fig.name : fs::path(args.out);
    if (nested) fs::create_directories(dir);
    fig.sweep.threads = args.threads;

    const auto start = std::chrono::steady_clock::now();
    const SweepResult result = run_sweep(fig.sweep);
    std::vector<Extremum> extrema;
    for (const Objective& obj : fig.objectives) {
      try {
        extrema.push_back(find_extremum(result, obj, args.refine));
      } catch (const EmptyGrid&) {
      }
    }
    {
      auto os = open_output(dir / "grid.csv");
      write_grid_csv(os, result);
    }
    {
      auto os = open_output(dir / "regions.csv");
      write_regions_csv(os, result);
    }
    json meta = extrema_json(result, extrema);
    meta["figure"] = fig.name;
    meta["description"] = fig.description;
    meta["refine_iters"] = args.refine;
    json notes = fig.notes;
    for (const auto& note : result.meta.notes) notes.push_back(note);
    meta["notes"] = notes;
    RunConfig base;
    base.params = fig.sweep.base;
    base.pair = fig.sweep.pair;
    base.threshold = fig.sweep.threshold;
    meta["base"] = emit_config(base);
    if (fig.dynamics) meta["dynamics"] = run_dynamics(fig, dir);
    write_json(dir / "extrema.json", meta);

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << fig.name << ": " << result.records.size() << " points -> " << dir.string() << '\n';
    err << fig.name << ": " << secs << " s\n";
  }
  return kExitOk;
}

int cmd_oracles(std::uint64_t seed, std::size_t cases, std::ostream& out) {
  std::vector<oracle::OracleReport> reports;
  const std::array<double, 4> s_values{0.1, 0.25, 0.5, 1.0};
  reports.push_back(oracle::tmsv_oracle(s_values));
  reports.push_back(oracle::pt_symplectic_oracle(cases, seed));
  for (const double r : {0.0, 0.5, 0.983}) {
    PhysicalParams p = fig2_params();
    p.pump = SqueezingParameter{r};
    oracle::OracleReport rep = oracle::longtime_vs_direct(p);
    rep.name += "[r=" + std::string(r == 0.0 ? "0" : r == 0.5 ? "0.5" : "0.983") + "]";
    reports.push_back(rep);
  }
  for (const double r : {0.5, 1.0}) {
    oracle::OracleReport rep = oracle::squeezed_cavity_oracle(r);
    rep.name += "[r=" + r_label(r) + "]";
    reports.push_back(rep);
  }
  bool all = true;
  for (const auto& rep : reports) {
    out << to_json(rep).dump() << '\n';
    all = all && rep.pass;
  }
  return all ? kExitOk : kExitNumerical;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian entanglement and EPR steering in a squeezed optomechanical system",
               "optomech"};
  app.require_subcommand(1);

  SteadyArgs steady;
  auto* c_steady = app.add_subcommand("steady", "steady-state nonlocality report for one mode pair");
  c_steady->add_option("--config", steady.config, "JSON config")->required();
  c_steady->add_option("--pair", steady.pair, "mode pair, e.g. a2-b");
  c_steady->add_option("--out", steady.out, "also write the report to this JSON file");

  EvolveArgs evolve_args;
  auto* c_evolve = app.add_subcommand("evolve", "integrate the covariance from the vacuum state");
  c_evolve->add_option("--config", evolve_args.config, "JSON config")->required();
  c_evolve->add_option("--pair", evolve_args.pair, "mode pair, e.g. a2-b");
  c_evolve->add_option("--t-max", evolve_args.t_max, "final time in units of 1/omega_m");
  c_evolve->add_option("--stride", evolve_args.stride, "record every K-th step");
  c_evolve->add_option("--dt", evolve_args.dt, "fixed step (default: Courant rule)");
  c_evolve->add_flag("--no-halving", evolve_args.no_halving, "skip the dt/2 convergence check");
  c_evolve->add_option("--out", evolve_args.out, "trace CSV");

  SweepArgs sweep;
  auto* c_sweep = app.add_subcommand("sweep", "steady-state grid over one or two parameters");
  c_sweep->add_option("--config", sweep.config, "JSON config")->required();
  c_sweep->add_option("--axis", sweep.axes, "NAME=MIN:MAX:COUNT[:log], repeatable");
  c_sweep->add_option("--pair", sweep.pair, "mode pair, e.g. a2-b");
  c_sweep->add_option("--out", sweep.out, "grid CSV");
  c_sweep->add_option("--extrema", sweep.extrema, "refined extrema JSON");
  c_sweep->add_option("--threads", sweep.threads, "worker threads (0 = all cores)");
  c_sweep->add_option("--refine", sweep.refine, "refinement rounds")->check(CLI::NonNegativeNumber);
  c_sweep->add_flag("--variances", sweep.variances, "add quadrature variance columns");
  c_sweep->add_flag("--diffusion", sweep.diffusion, "add D33, D44 columns");
  c_sweep->add_flag("--diagnostics", sweep.diagnostics, "add derived-parameter columns");

  FigureArgs figure;
  auto* c_figure = app.add_subcommand("figure", "run a figure recipe (fig2 ... fig7, or all)");
  c_figure->add_option("name", figure.name, "panel (fig4a) or figure (fig4)")->required();
  c_figure->add_option("--out", figure.out, "output directory")->required();
  c_figure->add_option("--grid", figure.grid, "points per axis for 2D maps")
      ->check(CLI::Range(2, 10001));
  c_figure->add_option("--refine", figure.refine, "refinement rounds")->check(CLI::NonNegativeNumber);
  c_figure->add_option("--threads", figure.threads, "worker threads (0 = all cores)");

  std::uint64_t seed = 1;
  std::size_t cases = 1000;
  auto* c_oracles = app.add_subcommand("oracles", "run the reference cross-checks");
  c_oracles->add_option("--seed", seed, "random seed for the state sampler");
  c_oracles->add_option("--cases", cases, "random states for the partial-transpose check");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_steady->parsed()) return cmd_steady(steady, out);
    if (c_evolve->parsed()) return cmd_evolve(evolve_args, out);
    if (c_sweep->parsed()) return cmd_sweep(sweep, out, err);
    if (c_figure->parsed()) return cmd_figure(figure, out, err);
    if (c_oracles->parsed()) return cmd_oracles(seed, cases, out);
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const DomainError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const SpecError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const UnknownFigure& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const IndexError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const StepSizeError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace optomech::cli
