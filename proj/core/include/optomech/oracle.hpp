#pragma once

// Independent closed-form and brute-force cross-checks for the measures and
// the covariance solvers.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>

#include "optomech/measures.hpp"
#include "optomech/model.hpp"

namespace optomech::oracle {

struct OracleReport {
  std::string name;
  double max_abs_error = 0.0;
  double max_rel_error = 0.0;
  std::size_t cases_run = 0;
  bool pass = false;
  double tolerance = 0.0;
  std::optional<std::uint64_t> seed;
};

inline constexpr double kMeasureTolerance = 1e-9;
inline constexpr double kLongtimeTolerance = 1e-6;
inline constexpr double kMaxSqueezing = 1.5;

/// Two-mode squeezed vacuum with squeezing s (E_N = 2s, both steerings ln cosh 2s).
TwoModeCovariance two_mode_squeezed_vacuum(double s);

/// Minimum symplectic eigenvalue of the partial transpose (Y of the second mode flipped),
/// computed from the spectrum of −(ΩṼ)².
double pt_min_symplectic_eigenvalue(const Mat4& v);

/// Random physical two-mode covariance: thermal diagonal conjugated by a random
/// composition of local rotations, single-mode squeezers and a two-mode squeezer.
Mat4 random_physical_two_mode(std::mt19937_64& rng);

OracleReport tmsv_oracle(std::span<const double> s_values);

/// Integrates from vacuum ⊗ vacuum ⊗ thermal until transients are below
/// round-off and compares entrywise with the direct Lyapunov solve.
OracleReport longtime_vs_direct(const PhysicalParams& params, double max_time = 1e4);

OracleReport pt_symplectic_oracle(std::size_t n_random, std::uint64_t seed);

/// Single squeezed cavity (Δ₂ = 0, no coupling): steady state vs diag(e^{2r}/2, e^{−2r}/2).
OracleReport squeezed_cavity_oracle(double r, double kappa2 = 0.6);

}  // namespace optomech::oracle
