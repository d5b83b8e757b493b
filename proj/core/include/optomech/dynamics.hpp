#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "optomech/linalg.hpp"
#include "optomech/model.hpp"

namespace optomech {

/// Quadrature covariance matrix over (X_a1, Y_a1, X_a2, Y_a2, X_b, Y_b).
///
/// Vacuum variance is 1/2 per quadrature.
struct CovarianceMatrix {
  Mat6 v = Mat6::Identity() / 2.0;
};

/// Uncorrelated vacuum ⊗ vacuum ⊗ thermal(mbar) state.
CovarianceMatrix initial_state(double mbar);

struct DtPolicy {
  /// Explicit step; when unset dt is chosen so that dt·ρ(M) ≤ courant.
  std::optional<double> dt;
  double courant = 0.1;
  /// Record every `stride`-th step (the initial and final states are always kept).
  std::size_t stride = 1;
  /// Repeat the integration at dt/2 and compare final states.
  bool check_step_halving = true;
};

struct EvolutionTrace {
  std::vector<double> times;
  std::vector<CovarianceMatrix> covariances;
  /// Step-halving check passed (always true when the check is disabled).
  bool converged = false;
  double final_residual = 0.0;
  double dt = 0.0;
  /// Largest entrywise relative change between the dt and dt/2 runs.
  double halving_change = 0.0;
};

inline constexpr double kStabilityThreshold = -1e-12;
inline constexpr double kHalvingTolerance = 1e-8;

struct StabilityReport {
  bool stable = false;
  double max_real_part = 0.0;
};

/// Integrates dV/dt = MV + VMᵀ + D with classical RK4 from v0 to t_max.
EvolutionTrace evolve(const DriftMatrix& m, const DiffusionMatrix& d, const CovarianceMatrix& v0,
                      double t_max, const DtPolicy& policy = {});

/// Solves MV + VMᵀ + D = 0. Throws UnstableSystem / SingularSystem.
CovarianceMatrix steady_state(const DriftMatrix& m, const DiffusionMatrix& d);

StabilityReport stability_check(const DriftMatrix& m);

/// ‖MV + VMᵀ + D‖_max.
double residual(const DriftMatrix& m, const DiffusionMatrix& d, const CovarianceMatrix& v);

/// Spectral radius of the drift matrix.
double spectral_radius(const DriftMatrix& m);

/// Entrywise relative difference |a−b| / max(|b|, floor·‖b‖_max), maximized over entries.
double entrywise_relative_difference(const Mat6& a, const Mat6& b, double floor = 1e-6);

}  // namespace optomech
