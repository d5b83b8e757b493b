#include "optomech/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

struct AxisInfo {
  AxisParam param;
  const char* name;
  const char* column;
};

constexpr AxisInfo kAxes[] = {
    {AxisParam::Delta2, "delta2", "delta2_per_wm"},
    {AxisParam::E, "E", "E_per_wm"},
    {AxisParam::G, "g", "g_per_wm"},
    {AxisParam::J, "J", "J_per_wm"},
    {AxisParam::Kappa1, "kappa1", "kappa1_per_wm"},
    {AxisParam::Kappa2, "kappa2", "kappa2_per_wm"},
    {AxisParam::R, "r", "r"},
    {AxisParam::OmegaP, "Omega_p", "Omega_p_per_wm"},
    {AxisParam::Theta, "theta", "theta"},
    {AxisParam::Mbar, "mbar", "mbar"},
    {AxisParam::Delta, "delta", "delta_per_wm"},
};

const AxisInfo& info(AxisParam param) {
  for (const auto& a : kAxes) {
    if (a.param == param) return a;
  }
  throw SpecError("unknown axis parameter");
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Cartesian product, first axis outermost.
std::vector<std::vector<double>> grid_points(const std::vector<std::vector<double>>& axes) {
  std::vector<std::vector<double>> out{{}};
  for (const auto& values : axes) {
    std::vector<std::vector<double>> next;
    next.reserve(out.size() * values.size());
    for (const auto& prefix : out) {
      for (double v : values) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
      }
    }
    out = std::move(next);
  }
  return out;
}

std::vector<PointRecord> evaluate_points(const SweepSpec& spec,
                                         const std::vector<std::vector<double>>& points) {
  std::vector<PointRecord> records(points.size());
  auto work = [&](std::size_t idx) {
    PhysicalParams p = spec.base;
    for (std::size_t a = 0; a < spec.axes.size(); ++a) apply(p, spec.axes[a].param, points[idx][a]);
    records[idx] = evaluate_point(p, spec.pair, spec.outputs, spec.threshold);
    records[idx].coords = points[idx];
  };

  unsigned n_threads = spec.threads ? spec.threads : std::thread::hardware_concurrency();
  n_threads = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(points.size())));
  if (n_threads == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) work(i);
    return records;
  }
  // Each slot is written by exactly one worker, so the merge order is fixed.
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) work(i);
    });
  }
  pool.clear();
  return records;
}

std::optional<std::size_t> best_index(const std::vector<PointRecord>& records,
                                      const Objective& objective) {
  std::optional<std::size_t> best;
  double best_score = 0.0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto v = evaluate(records[i], objective);
    if (!v) continue;
    const double score = objective.minimize ? -*v : *v;
    if (!best || score > best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

double to_axis_space(const Axis& axis, double x) {
  return axis.scale == Scale::Log ? std::log10(x) : x;
}

double from_axis_space(const Axis& axis, double u) {
  return axis.scale == Scale::Log ? std::pow(10.0, u) : u;
}

}  // namespace

std::string to_string(AxisParam param) { return info(param).name; }

std::string column_name(AxisParam param) { return info(param).column; }

AxisParam axis_param_from_string(const std::string& name) {
  for (const auto& a : kAxes) {
    if (name == a.name || name == a.column) return a.param;
  }
  throw SpecError("unknown sweep axis '" + name + "'");
}

void apply(PhysicalParams& p, AxisParam param, double value) {
  switch (param) {
    case AxisParam::Delta2:
      p.delta2 = value;
      break;
    case AxisParam::E:
      p.E = value;
      break;
    case AxisParam::G:
      p.g = value;
      break;
    case AxisParam::J:
      p.J = value;
      break;
    case AxisParam::Kappa1:
      p.kappa1 = value;
      break;
    case AxisParam::Kappa2:
      p.kappa2 = value;
      break;
    case AxisParam::R:
      p.pump = SqueezingParameter{value};
      break;
    case AxisParam::OmegaP:
      p.pump = PumpAmplitude{value};
      break;
    case AxisParam::Theta:
      p.theta = value;
      break;
    case AxisParam::Mbar:
      p.mbar = value;
      break;
    case AxisParam::Delta:
      p.delta = value;
      break;
  }
}

std::vector<double> Axis::values() const {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = min;
    return out;
  }
  const double lo = scale == Scale::Log ? std::log10(min) : min;
  const double hi = scale == Scale::Log ? std::log10(max) : max;
  for (std::size_t k = 0; k < count; ++k) {
    const double u = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
    out[k] = scale == Scale::Log ? std::pow(10.0, u) : u;
  }
  out.front() = min;
  out.back() = max;
  return out;
}

Axis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw SpecError("axis '" + text + "' must look like NAME=MIN:MAX:COUNT[:log]");
  }
  Axis axis;
  axis.param = axis_param_from_string(text.substr(0, eq));

  std::vector<std::string> parts;
  std::stringstream rest(text.substr(eq + 1));
  for (std::string item; std::getline(rest, item, ':');) parts.push_back(item);
  if (parts.size() < 3 || parts.size() > 4) {
    throw SpecError("axis '" + text + "' must look like NAME=MIN:MAX:COUNT[:log]");
  }
  try {
    std::size_t used = 0;
    axis.min = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
    axis.max = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
    const long long count = std::stoll(parts[2], &used);
    if (used != parts[2].size() || count < 0) throw std::invalid_argument(parts[2]);
    axis.count = static_cast<std::size_t>(count);
  } catch (const std::logic_error&) {
    throw SpecError("axis '" + text + "' has a malformed number");
  }
  if (parts.size() == 4) {
    if (parts[3] == "log") {
      axis.scale = Scale::Log;
    } else if (parts[3] != "linear" && parts[3] != "lin") {
      throw SpecError("axis scale must be 'log' or 'linear', got '" + parts[3] + "'");
    }
  }
  return axis;
}

std::string format_axis(const Axis& axis) {
  std::string out = to_string(axis.param) + "=" + fmt17(axis.min) + ":" + fmt17(axis.max) + ":" +
                    std::to_string(axis.count);
  if (axis.scale == Scale::Log) out += ":log";
  return out;
}

void validate(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2) {
    throw SpecError("a sweep needs one or two axes");
  }
  std::set<AxisParam> seen;
  for (const auto& axis : spec.axes) {
    const std::string name = to_string(axis.param);
    if (!seen.insert(axis.param).second) throw SpecError("axis '" + name + "' given twice");
    if (axis.count < 2) throw SpecError("axis '" + name + "' needs count >= 2");
    if (!(std::isfinite(axis.min) && std::isfinite(axis.max) && axis.min < axis.max)) {
      throw SpecError("axis '" + name + "' needs finite min < max");
    }
    if (axis.scale == Scale::Log && axis.min <= 0.0) {
      throw SpecError("log axis '" + name + "' needs min > 0");
    }
  }
  if (seen.count(AxisParam::R) && seen.count(AxisParam::OmegaP)) {
    throw SpecError("axes r and Omega_p are mutually exclusive");
  }
  if (spec.pair.first == spec.pair.second) throw SpecError("mode pair repeats a mode");
  if (!(spec.threshold >= 0.0)) throw SpecError("threshold must be >= 0");
}

PointRecord evaluate_point(const PhysicalParams& p, const ModePair& pair, const Outputs& outputs,
                           double threshold) {
  PointRecord rec;
  try {
    const DerivedParams d = derive_params(p);
    rec.derived = d;
    rec.rwa = rwa_validity(p, d);
    const DriftMatrix m = build_drift(p, d);
    const DiffusionMatrix diff = build_diffusion(p, d);
    rec.diffusion_a2 = std::array<double, 2>{diff.d(2, 2), diff.d(3, 3)};

    const StabilityReport st = stability_check(m);
    rec.stable = st.stable;
    rec.max_real_part = st.max_real_part;
    if (!st.stable) return rec;

    const CovarianceMatrix v = steady_state(m, diff);
    rec.physical = physicality(v.v);
    if (outputs.nonlocality) rec.report = nonlocality(v, pair, threshold);
    std::array<double, 6> diag{};
    for (int k = 0; k < 6; ++k) diag[k] = v.v(k, k);
    rec.variances = diag;
  } catch (const Error& e) {
    rec.error = e.what();
    rec.report.reset();
  }
  return rec;
}

std::string Objective::name(const ModePair& pair) const {
  const std::string a = to_string(pair.first);
  const std::string b = to_string(pair.second);
  std::string base;
  switch (quantity) {
    case Quantity::LogNegativity:
      base = "EN";
      break;
    case Quantity::Steering12:
      base = "G_" + a + "_to_" + b;
      break;
    case Quantity::Steering21:
      base = "G_" + b + "_to_" + a;
      break;
    case Quantity::VarianceX:
      base = "var_x_" + to_string(mode);
      break;
    case Quantity::VarianceY:
      base = "var_y_" + to_string(mode);
      break;
  }
  return (minimize ? "min_" : "max_") + base;
}

std::optional<double> evaluate(const PointRecord& rec, const Objective& objective) {
  if (!rec.stable || !rec.error.empty()) return std::nullopt;
  switch (objective.quantity) {
    case Quantity::LogNegativity:
      if (rec.report) return rec.report->e_n;
      break;
    case Quantity::Steering12:
      if (rec.report) return rec.report->g_12;
      break;
    case Quantity::Steering21:
      if (rec.report) return rec.report->g_21;
      break;
    case Quantity::VarianceX:
      if (rec.variances) return (*rec.variances)[2 * static_cast<int>(objective.mode)];
      break;
    case Quantity::VarianceY:
      if (rec.variances) return (*rec.variances)[2 * static_cast<int>(objective.mode) + 1];
      break;
  }
  return std::nullopt;
}

std::vector<Objective> default_objectives(const SweepSpec& spec) {
  std::vector<Objective> out;
  if (spec.outputs.nonlocality) {
    out.push_back({Quantity::LogNegativity, spec.pair.first, false});
    out.push_back({Quantity::Steering21, spec.pair.first, false});
    out.push_back({Quantity::Steering12, spec.pair.first, false});
  }
  if (spec.outputs.variances) out.push_back({Quantity::VarianceY, spec.pair.first, true});
  return out;
}

SweepResult run_sweep(const SweepSpec& spec) {
  validate(spec);
  const auto t0 = std::chrono::steady_clock::now();

  SweepResult result;
  result.spec = spec;
  for (const auto& axis : spec.axes) result.axis_values.push_back(axis.values());
  result.records = evaluate_points(spec, grid_points(result.axis_values));

  for (const auto& rec : result.records) {
    if (!rec.error.empty()) {
      ++result.meta.failed_points;
    } else if (!rec.stable) {
      ++result.meta.unstable_points;
    }
  }
  for (const auto& objective : default_objectives(spec)) {
    const auto idx = best_index(result.records, objective);
    if (!idx) continue;
    Extremum ex;
    ex.objective = objective;
    ex.name = objective.name(spec.pair);
    ex.point = result.records[*idx].coords;
    ex.value = *evaluate(result.records[*idx], objective);
    ex.history = {ex.value};
    result.extrema.push_back(std::move(ex));
  }

  result.meta.spec_hash = spec_hash(spec);
  result.meta.threshold = spec.threshold;
  result.meta.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return result;
}

Extremum find_extremum(const SweepSpec& spec, const Objective& objective, int refine_iters) {
  return find_extremum(run_sweep(spec), objective, refine_iters);
}

namespace {

// Local-grid refinement shared by find_extremum and maximize_on_grid.
// `batch` scores a list of points (larger is better; empty = not evaluable).
template <typename Batch>
GridOptimum refine(const std::vector<Axis>& axes, GridOptimum best, int refine_iters,
                   const Batch& batch) {
  std::vector<double> spacing;
  for (const auto& axis : axes) {
    spacing.push_back((to_axis_space(axis, axis.max) - to_axis_space(axis, axis.min)) /
                      static_cast<double>(axis.count - 1));
  }

  constexpr int kRefineFactor = 4;
  for (int round = 0; round < refine_iters; ++round) {
    std::vector<std::vector<double>> local_axes;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const Axis& axis = axes[a];
      const double lo = to_axis_space(axis, axis.min);
      const double hi = to_axis_space(axis, axis.max);
      const double center = to_axis_space(axis, best.point[a]);
      const double step = spacing[a] / kRefineFactor;
      std::vector<double> values;
      for (int k = -kRefineFactor; k <= kRefineFactor; ++k) {
        const double u = center + k * step;
        if (u < lo - 1e-12 * std::abs(hi - lo) || u > hi + 1e-12 * std::abs(hi - lo)) continue;
        values.push_back(from_axis_space(axis, std::clamp(u, lo, hi)));
      }
      local_axes.push_back(std::move(values));
      spacing[a] = step;
    }
    const auto points = grid_points(local_axes);
    const std::vector<std::optional<double>> scores = batch(points);
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (scores[i] && *scores[i] > best.value) {
        best.value = *scores[i];
        best.point = points[i];
      }
    }
    best.history.push_back(best.value);
  }
  return best;
}

}  // namespace

Extremum find_extremum(const SweepResult& coarse, const Objective& objective, int refine_iters) {
  const SweepSpec& spec = coarse.spec;
  const auto idx = best_index(coarse.records, objective);
  if (!idx) throw EmptyGrid("no stable grid point yields objective " + objective.name(spec.pair));

  const double sign = objective.minimize ? -1.0 : 1.0;
  GridOptimum start;
  start.point = coarse.records[*idx].coords;
  start.value = sign * *evaluate(coarse.records[*idx], objective);
  start.history = {start.value};

  const auto batch = [&](const std::vector<std::vector<double>>& points) {
    const auto records = evaluate_points(spec, points);
    std::vector<std::optional<double>> scores;
    for (const auto& rec : records) {
      const auto v = evaluate(rec, objective);
      scores.push_back(v ? std::optional<double>(sign * *v) : std::nullopt);
    }
    return scores;
  };
  const GridOptimum best = refine(spec.axes, std::move(start), refine_iters, batch);

  Extremum ex;
  ex.objective = objective;
  ex.name = objective.name(spec.pair);
  ex.point = best.point;
  ex.value = sign * best.value;
  for (const double h : best.history) ex.history.push_back(sign * h);
  return ex;
}

GridOptimum maximize_on_grid(const std::vector<Axis>& axes, const ScoreFunction& score,
                             int refine_iters) {
  if (axes.empty()) throw SpecError("maximize_on_grid needs at least one axis");
  std::vector<std::vector<double>> values;
  for (const auto& axis : axes) {
    if (axis.count < 2 || !(axis.min < axis.max)) throw SpecError("malformed axis");
    values.push_back(axis.values());
  }
  const auto batch = [&](const std::vector<std::vector<double>>& points) {
    std::vector<std::optional<double>> scores;
    scores.reserve(points.size());
    for (const auto& pt : points) scores.push_back(score(pt));
    return scores;
  };
  const auto points = grid_points(values);
  const auto scores = batch(points);
  std::optional<std::size_t> idx;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (scores[i] && (!idx || *scores[i] > *scores[*idx])) idx = i;
  }
  if (!idx) throw EmptyGrid("objective is undefined on every grid point");

  GridOptimum start;
  start.point = points[*idx];
  start.value = *scores[*idx];
  start.history = {start.value};
  return refine(axes, std::move(start), refine_iters, batch);
}

std::string canonical_description(const SweepSpec& spec) {
  const PhysicalParams& p = spec.base;
  std::ostringstream os;
  os << "kappa1=" << fmt17(p.kappa1) << ";kappa2=" << fmt17(p.kappa2)
     << ";gamma_m=" << fmt17(p.gamma_m) << ";J=" << fmt17(p.J) << ";g=" << fmt17(p.g)
     << ";E=" << fmt17(p.E) << ";theta=" << fmt17(p.theta) << ";delta2=" << fmt17(p.delta2)
     << ";delta=" << fmt17(p.delta) << ";mbar=" << fmt17(p.mbar)
     << ";detuning_mode=" << to_string(p.detuning_mode) << ";Delta1=" << fmt17(p.Delta1);
  if (const auto* amp = std::get_if<PumpAmplitude>(&p.pump)) {
    os << ";Omega_p=" << fmt17(amp->omega_p);
  } else {
    os << ";r=" << fmt17(std::get<SqueezingParameter>(p.pump).r);
  }
  for (const auto& axis : spec.axes) {
    os << ";axis=" << to_string(axis.param) << ':' << fmt17(axis.min) << ':' << fmt17(axis.max)
       << ':' << axis.count << ':' << (axis.scale == Scale::Log ? "log" : "linear");
  }
  os << ";pair=" << to_string(spec.pair) << ";threshold=" << fmt17(spec.threshold)
     << ";outputs=" << spec.outputs.nonlocality << spec.outputs.variances
     << spec.outputs.diffusion << spec.outputs.diagnostics;
  return os.str();
}

std::uint64_t spec_hash(const SweepSpec& spec) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : canonical_description(spec)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace optomech
