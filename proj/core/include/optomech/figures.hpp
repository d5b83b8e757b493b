#pragma once

// Pre-filled sweep specifications reproducing the published figure panels.

#include <optional>
#include <string>
#include <vector>

#include "optomech/sweep.hpp"

namespace optomech {

struct DynamicsRecipe {
  std::vector<double> r_values;
  double t_max = 100.0;
  std::size_t samples = 500;
};

struct FigureRecipe {
  std::string name;
  std::string description;
  SweepSpec sweep;
  std::optional<DynamicsRecipe> dynamics;
  std::vector<Objective> objectives;
  /// Where a parameter was not printed with the figure, how it was chosen.
  std::vector<std::string> notes;
};

/// κ₁ = κ₂ = 0.6, γ_m = 1e-5, J = 1, g = 8.5e-5, E = 3.7e5, Ω_p = 0.5,
/// δ₂ = 0.52, δ = 0.5 (all per ω_m).
PhysicalParams fig2_params();
/// fig2_params with the pump fixed at r = 1.
PhysicalParams fig4_params();
/// fig4_params at the δ₂ of maximal E_N on the fig4a grid.
PhysicalParams fig5_params();
/// E = 5e3 and δ₂ = 0.8 with the pump amplitude Ω_p = 0.5 kept.
PhysicalParams fig6_params();

/// Every panel name accepted by figure_recipe.
std::vector<std::string> figure_names();

/// One panel (fig2, fig3, fig4a, fig4d, fig5a-d, fig6a, fig6c, fig6k, fig7).
/// `grid` is the per-axis count for 2D maps; 1D cuts use 4·(grid−1)+1 points.
FigureRecipe figure_recipe(const std::string& name, std::size_t grid = 101);

/// Panel name → that panel; figure name (fig4, fig5, fig6) → all of its panels.
std::vector<FigureRecipe> figure_group(const std::string& name, std::size_t grid = 101);

}  // namespace optomech
