#include "optomech/figures.hpp"

#include <algorithm>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

Axis linear(AxisParam param, double lo, double hi, std::size_t count) {
  return Axis{param, lo, hi, count, Scale::Linear};
}

std::vector<Objective> nonlocality_objectives(const ModePair& pair) {
  return {{Quantity::LogNegativity, pair.first, false},
          {Quantity::Steering21, pair.first, false},
          {Quantity::Steering12, pair.first, false}};
}

constexpr ModePair kA2B{Mode::A2, Mode::B};
constexpr ModePair kA1A2{Mode::A1, Mode::A2};

// Optimum of E_N on the fig4a grid (r = 1, E = 3.7e5).
constexpr double kFig5Delta2 = 1.3;

}  // namespace

PhysicalParams fig2_params() {
  PhysicalParams p;
  p.kappa1 = 0.6;
  p.kappa2 = 0.6;
  p.gamma_m = 1e-5;
  p.J = 1.0;
  p.g = 8.5e-5;
  p.E = 3.7e5;
  p.pump = PumpAmplitude{0.5};
  p.delta2 = 0.52;
  p.delta = 0.5;
  p.theta = 0.0;
  p.mbar = 0.0;
  p.detuning_mode = DetuningMode::FixedRed;
  return p;
}

PhysicalParams fig4_params() {
  PhysicalParams p = fig2_params();
  p.pump = SqueezingParameter{1.0};
  return p;
}

PhysicalParams fig5_params() {
  PhysicalParams p = fig4_params();
  p.delta2 = kFig5Delta2;
  return p;
}

PhysicalParams fig6_params() {
  PhysicalParams p = fig2_params();
  p.E = 5e3;
  p.delta2 = 0.8;
  p.pump = PumpAmplitude{0.5};
  return p;
}

std::vector<std::string> figure_names() {
  return {"fig2",  "fig3",  "fig4a", "fig4d", "fig5a", "fig5b", "fig5c",
          "fig5d", "fig6a", "fig6c", "fig6k", "fig7"};
}

FigureRecipe figure_recipe(const std::string& name, std::size_t grid) {
  if (grid < 2) throw SpecError("grid count must be >= 2");
  const std::size_t line = 4 * (grid - 1) + 1;

  FigureRecipe fig;
  fig.name = name;
  SweepSpec& s = fig.sweep;
  s.threshold = kRegionThreshold;

  if (name == "fig2") {
    fig.description = "E_N and steering between a2 and b versus time for r in {0, 0.2, ..., 1.2}";
    s.base = fig2_params();
    s.pair = kA2B;
    s.axes = {linear(AxisParam::R, 0.0, 1.2, 7)};
    s.outputs.variances = true;
    fig.dynamics = DynamicsRecipe{{0.0, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2}, 100.0, 500};
    fig.objectives = nonlocality_objectives(s.pair);
    fig.notes = {"detunings delta2=0.52, delta=0.5 taken from the quoted pump operating point",
                 "initial state: vacuum (a1) x vacuum (a2) x thermal(mbar) (b)",
                 "at these detunings steady E_N vanishes for r >= 0.8 and the b->a2 steering "
                 "is already nonzero at r = 0.2; no two-way steering near r = 1"};
  } else if (name == "fig3") {
    fig.description = "variances of X and Y of a2 and squeezed-bath diffusion D33, D44 versus r";
    s.base = fig2_params();
    s.pair = kA2B;
    s.axes = {linear(AxisParam::R, 0.0, 1.3, line)};
    s.outputs.variances = true;
    s.outputs.diffusion = true;
    fig.objectives = {{Quantity::VarianceY, Mode::A2, true}};
    fig.notes = {"theta = 0", "detunings delta2=0.52, delta=0.5 as for fig2",
                 "at these detunings the var Y(a2) minimum is about 0.27 near r = 0.4; "
                 "delta2=0.95, delta=0.4 moves it to about 0.15 near r = 0.89"};
  } else if (name == "fig4a" || name == "fig5a") {
    fig.description = name == "fig4a" ? "E_N and steering (a2, b) over delta2 x E at r = 1"
                                      : "region map (a2, b) over delta2 x E at r = 1";
    s.base = fig4_params();
    s.pair = kA2B;
    s.axes = {linear(AxisParam::Delta2, 0.1, 2.0, grid), linear(AxisParam::E, 5e4, 8e5, grid)};
    fig.objectives = nonlocality_objectives(s.pair);
    fig.notes = {"r held at 1 while delta2 varies (pump amplitude follows delta2*tanh 2r)",
                 "axis ranges not printed with the figure; chosen to bracket the optimum"};
  } else if (name == "fig4d" || name == "fig5c") {
    fig.description = name == "fig4d" ? "E_N and steering (a2, b) over g x J at r = 1"
                                      : "region map (a2, b) over g x J at r = 1";
    s.base = fig4_params();
    s.pair = kA2B;
    s.axes = {linear(AxisParam::G, 2e-5, 2e-4, grid), linear(AxisParam::J, 0.2, 2.5, grid)};
    fig.objectives = nonlocality_objectives(s.pair);
    fig.notes = {"axis ranges not printed with the figure"};
  } else if (name == "fig5b") {
    fig.description = "E_N and steering (a2, b) along delta2 at the fig4a optimum";
    s.base = fig5_params();
    s.pair = kA2B;
    s.axes = {linear(AxisParam::Delta2, 0.1, 2.0, line)};
    fig.objectives = nonlocality_objectives(s.pair);
    fig.notes = {"base point: r = 1, E = 3.7e5, delta2 = 1.3 (fig4a E_N optimum)"};
  } else if (name == "fig5d") {
    fig.description = "E_N and steering (a2, b) along J at the fig4a optimum";
    s.base = fig5_params();
    s.pair = kA2B;
    s.axes = {linear(AxisParam::J, 0.2, 2.5, line)};
    fig.objectives = nonlocality_objectives(s.pair);
    fig.notes = {"base point: r = 1, E = 3.7e5, delta2 = 1.3 (fig4a E_N optimum)"};
  } else if (name == "fig6a" || name == "fig6c" || name == "fig6k") {
    s.base = fig6_params();
    s.pair = kA1A2;
    if (name == "fig6a") {
      fig.description = "E_N and steering (a1, a2) over J x kappa2";
      s.axes = {linear(AxisParam::J, 0.01, 2.0, grid), linear(AxisParam::Kappa2, 0.02, 3.0, grid)};
    } else if (name == "fig6c") {
      fig.description = "E_N and steering (a1, a2) over J x kappa1";
      s.axes = {linear(AxisParam::J, 0.01, 2.0, grid), linear(AxisParam::Kappa1, 0.02, 3.0, grid)};
    } else {
      fig.description = "E_N and steering (a1, a2) over kappa1 x kappa2";
      s.axes = {linear(AxisParam::Kappa1, 0.02, 3.0, grid),
                linear(AxisParam::Kappa2, 0.02, 3.0, grid)};
    }
    fig.objectives = nonlocality_objectives(s.pair);
    fig.notes = {"pump amplitude Omega_p = 0.5 kept at delta2 = 0.8 (r = 0.5 artanh 0.625)",
                 "axis ranges not printed with the figure"};
  } else if (name == "fig7") {
    fig.description = "E_N (a1, a2) over J x r";
    s.base = fig6_params();
    s.pair = kA1A2;
    s.axes = {linear(AxisParam::J, 0.01, 2.0, grid), linear(AxisParam::R, 0.0, 1.5, grid)};
    fig.objectives = nonlocality_objectives(s.pair);
    fig.notes = {"axis ranges not printed with the figure"};
  } else {
    throw UnknownFigure("unknown figure '" + name + "'");
  }
  return fig;
}

std::vector<FigureRecipe> figure_group(const std::string& name, std::size_t grid) {
  const auto names = figure_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) {
    return {figure_recipe(name, grid)};
  }
  std::vector<FigureRecipe> out;
  for (const auto& panel : names) {
    if (name.size() >= 4 && panel.size() == name.size() + 1 &&
        panel.compare(0, name.size(), name) == 0) {
      out.push_back(figure_recipe(panel, grid));
    }
  }
  if (out.empty()) throw UnknownFigure("unknown figure '" + name + "'");
  return out;
}

}  // namespace optomech
