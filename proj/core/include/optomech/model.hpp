#pragma once

// Effective linearized model of the coupled optomechanical / χ(2) resonator
// system in the squeezing picture of resonator a2.
//
// Every rate, detuning and coupling is a dimensionless multiple of the
// mechanical frequency ω_m; ω_m itself only labels reports.

#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <variant>

#include "optomech/linalg.hpp"

namespace optomech {

/// Pump specified by its amplitude Ω_p; the squeezing follows from β = Ω_p/δ₂.
struct PumpAmplitude {
  double omega_p = 0.0;
  friend bool operator==(const PumpAmplitude&, const PumpAmplitude&) = default;
};

/// Pump specified directly by the squeezing parameter r.
struct SqueezingParameter {
  double r = 0.0;
  friend bool operator==(const SqueezingParameter&, const SqueezingParameter&) = default;
};

using Pump = std::variant<PumpAmplitude, SqueezingParameter>;

enum class DetuningMode {
  /// Δ₁′ := ω_m (red sideband).
  FixedRed,
  /// Δ₁′ = Δ₁ − 2g·Re(b_s), solved together with the mean fields.
  SelfConsistent,
};

std::string to_string(DetuningMode mode);
DetuningMode detuning_mode_from_string(const std::string& name);

struct PhysicalParams {
  double omega_m_rad_s = 2.0 * std::numbers::pi * 23.4e6;  // labeling only
  double kappa1 = 0.6;
  double kappa2 = 0.6;
  double gamma_m = 1e-5;
  double J = 1.0;
  double g = 8.5e-5;
  double E = 3.7e5;
  Pump pump = PumpAmplitude{0.5};
  double theta = 0.0;
  double delta2 = 0.52;
  double delta = 0.5;
  double mbar = 0.0;
  DetuningMode detuning_mode = DetuningMode::FixedRed;
  /// Bare detuning Δ₁; read only in self-consistent mode.
  double Delta1 = 1.0;

  friend bool operator==(const PhysicalParams&, const PhysicalParams&) = default;
};

/// Throws DomainError when an invariant of PhysicalParams is violated.
void validate(const PhysicalParams& p);

struct DerivedParams {
  double beta = 0.0;
  double r = 0.0;
  /// Pump amplitude, reconstructed as β·δ₂ when r was given directly.
  double omega_p = 0.0;
  double n_bath = 0.0;
  std::complex<double> m_bath{0.0, 0.0};
  double delta2_s = 0.0;
  double J_s = 0.0;
  double Delta2 = 0.0;
  double Delta1p = 1.0;
  std::complex<double> a1s{0.0, 0.0};
  std::complex<double> bs{0.0, 0.0};
  double G = 0.0;
  std::optional<double> eta;
  std::optional<double> lambda;
};

struct SteadyAmplitudes {
  std::complex<double> a1s{0.0, 0.0};
  std::complex<double> bs{0.0, 0.0};
  double G = 0.0;
  double Delta1p = 1.0;
  int iterations = 0;
};

struct BogoliubovDiagnostics {
  std::optional<double> eta;
  std::optional<double> lambda;
  bool defined = false;
};

struct RwaReport {
  /// sinh r·J / (δ₁ + δ₂ˢ); +∞ when the denominator is not positive.
  double ratio = 0.0;
  bool warning = false;
  double threshold = 0.1;
};

struct DriftMatrix {
  Mat6 m = Mat6::Zero();
};

struct DiffusionMatrix {
  Mat6 d = Mat6::Zero();
};

inline constexpr double kSelfConsistentTolerance = 1e-12;
inline constexpr int kSelfConsistentMaxIterations = 200;
inline constexpr double kSelfConsistentDamping = 0.5;
inline constexpr double kRwaWarningThreshold = 0.1;

/// Squeezing-picture parameters, mean fields and Bogoliubov diagnostics.
DerivedParams derive_params(const PhysicalParams& p);

/// Mean fields a₁ₛ, b_s and G = g|a₁ₛ|.
///
/// `d` must carry the squeezing-picture quantities (J_s, Delta2); in
/// self-consistent mode Δ₁′ is iterated with a damped fixed point and
/// NonConvergence is thrown if it does not settle.
SteadyAmplitudes steady_amplitudes(const PhysicalParams& p, const DerivedParams& d);

DriftMatrix build_drift(const PhysicalParams& p, const DerivedParams& d);
DiffusionMatrix build_diffusion(const PhysicalParams& p, const DerivedParams& d);

RwaReport rwa_validity(const PhysicalParams& p, const DerivedParams& d,
                       double threshold = kRwaWarningThreshold);

/// η = √(G² − Jˢ²) and λ = artanh(Jˢ/G), defined only for G > Jˢ.
BogoliubovDiagnostics bogoliubov_diagnostics(const DerivedParams& d);

/// Squeezing parameter implied by the pump specification.
double squeezing_of(const PhysicalParams& p);

}  // namespace optomech
