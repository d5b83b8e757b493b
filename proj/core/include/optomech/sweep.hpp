#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "optomech/dynamics.hpp"
#include "optomech/measures.hpp"
#include "optomech/model.hpp"

namespace optomech {

enum class AxisParam { Delta2, E, G, J, Kappa1, Kappa2, R, OmegaP, Theta, Mbar, Delta };

/// Short name used on the command line (delta2, E, g, J, kappa1, kappa2, r, Omega_p, theta, mbar, delta).
std::string to_string(AxisParam param);
AxisParam axis_param_from_string(const std::string& name);
/// CSV column header, e.g. "delta2_per_wm" or "r".
std::string column_name(AxisParam param);

/// Writes `value` into the matching field of `p`. Setting r or Omega_p replaces the pump.
void apply(PhysicalParams& p, AxisParam param, double value);

enum class Scale { Linear, Log };

struct Axis {
  AxisParam param = AxisParam::Delta2;
  double min = 0.0;
  double max = 1.0;
  std::size_t count = 2;
  Scale scale = Scale::Linear;

  std::vector<double> values() const;
  friend bool operator==(const Axis&, const Axis&) = default;
};

/// Parses NAME=MIN:MAX:COUNT[:log|:linear]; throws SpecError.
Axis parse_axis(const std::string& text);
/// Inverse of parse_axis (values printed with round-trip precision).
std::string format_axis(const Axis& axis);

struct Outputs {
  bool nonlocality = true;
  bool variances = false;
  bool diffusion = false;
  bool diagnostics = false;
};

struct SweepSpec {
  PhysicalParams base;
  std::vector<Axis> axes;
  ModePair pair;
  Outputs outputs;
  double threshold = kRegionThreshold;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

/// Throws SpecError for malformed axes.
void validate(const SweepSpec& spec);

struct PointRecord {
  std::vector<double> coords;
  bool stable = false;
  double max_real_part = 0.0;
  std::optional<DerivedParams> derived;
  std::optional<RwaReport> rwa;
  std::optional<NonlocalityReport> report;
  /// Diagonal of the steady covariance (var X/Y of a1, a2, b).
  std::optional<std::array<double, 6>> variances;
  /// Diagonal of the squeezed-bath block (D33, D44).
  std::optional<std::array<double, 2>> diffusion_a2;
  std::optional<PhysicalityReport> physical;
  /// Empty unless the point failed with a library error.
  std::string error;
};

enum class Quantity { LogNegativity, Steering12, Steering21, VarianceX, VarianceY };

struct Objective {
  Quantity quantity = Quantity::LogNegativity;
  Mode mode = Mode::A2;  // variances only
  bool minimize = false;

  std::string name(const ModePair& pair) const;
};

/// Objective value at a record; empty for unstable or failed points.
std::optional<double> evaluate(const PointRecord& rec, const Objective& objective);

struct Extremum {
  Objective objective;
  std::string name;
  std::vector<double> point;
  double value = 0.0;
  /// Incumbent objective value after the coarse grid and after each refinement round.
  std::vector<double> history;
};

struct RunMetadata {
  std::uint64_t spec_hash = 0;
  double threshold = kRegionThreshold;
  std::optional<std::uint64_t> seed;
  double wall_time_s = 0.0;
  std::size_t unstable_points = 0;
  std::size_t failed_points = 0;
  std::vector<std::string> notes;
};

struct SweepResult {
  SweepSpec spec;
  std::vector<std::vector<double>> axis_values;
  /// Row-major over axes (first axis outermost).
  std::vector<PointRecord> records;
  std::vector<Extremum> extrema;
  RunMetadata meta;
};

/// Steady-state evaluation of one parameter point; never throws library errors.
PointRecord evaluate_point(const PhysicalParams& p, const ModePair& pair, const Outputs& outputs,
                           double threshold);

SweepResult run_sweep(const SweepSpec& spec);

/// Default objectives for a spec: maxima of E_N and both steerings, plus the
/// minimum Y variance of the pair's first mode when variances are requested.
std::vector<Objective> default_objectives(const SweepSpec& spec);

/// Coarse-grid argmax followed by `refine_iters` rounds of local refinement
/// (spacing shrinks by 4 per round) around the incumbent.
Extremum find_extremum(const SweepSpec& spec, const Objective& objective, int refine_iters = 3);

/// Same, reusing an already computed coarse grid.
Extremum find_extremum(const SweepResult& coarse, const Objective& objective, int refine_iters = 3);

struct GridOptimum {
  std::vector<double> point;
  double value = 0.0;
  std::vector<double> history;
};

using ScoreFunction = std::function<std::optional<double>(const std::vector<double>&)>;

/// Maximizes an arbitrary score over the grid spanned by `axes` with the same
/// coarse-then-local refinement as find_extremum. Points where the score is
/// empty are skipped; EmptyGrid if none is defined.
GridOptimum maximize_on_grid(const std::vector<Axis>& axes, const ScoreFunction& score,
                             int refine_iters = 3);

/// Stable FNV-1a hash of a canonical text rendering of the spec.
std::uint64_t spec_hash(const SweepSpec& spec);
std::string canonical_description(const SweepSpec& spec);

}  // namespace optomech
