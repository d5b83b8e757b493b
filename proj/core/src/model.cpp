#include "optomech/model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

bool finite(double x) { return std::isfinite(x); }

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

// a₁ₛ from the stationary mean-field equations at a given Δ₁′.
cd mean_optical_amplitude(const PhysicalParams& p, double J_s, double Delta2, double Delta1p) {
  const cd a2_factor = kI * Delta2 + p.kappa2 / 2.0;
  const cd denom = J_s * J_s + (kI * Delta1p + p.kappa1 / 2.0) * a2_factor;
  return p.E * a2_factor / denom;
}

cd mean_mechanical_amplitude(const PhysicalParams& p, cd a1s) {
  return kI * p.g * std::norm(a1s) / (kI + p.gamma_m / 2.0);
}

}  // namespace

std::string to_string(DetuningMode mode) {
  return mode == DetuningMode::FixedRed ? "fixed-red" : "self-consistent";
}

DetuningMode detuning_mode_from_string(const std::string& name) {
  if (name == "fixed-red") return DetuningMode::FixedRed;
  if (name == "self-consistent") return DetuningMode::SelfConsistent;
  throw DomainError("unknown detuning mode '" + name +
                    "' (expected fixed-red or self-consistent)");
}

void validate(const PhysicalParams& p) {
  require(finite(p.omega_m_rad_s) && p.omega_m_rad_s > 0.0, "omega_m must be > 0");
  require(finite(p.kappa1) && p.kappa1 > 0.0, "kappa1 must be > 0");
  require(finite(p.kappa2) && p.kappa2 > 0.0, "kappa2 must be > 0");
  require(finite(p.gamma_m) && p.gamma_m > 0.0, "gamma_m must be > 0");
  require(finite(p.mbar) && p.mbar >= 0.0, "mbar must be >= 0");
  require(finite(p.J) && finite(p.g) && finite(p.E) && finite(p.theta) &&
              finite(p.delta2) && finite(p.delta) && finite(p.Delta1),
          "parameters must be finite");
  if (const auto* amp = std::get_if<PumpAmplitude>(&p.pump)) {
    require(finite(amp->omega_p), "Omega_p must be finite");
    if (amp->omega_p != 0.0) {
      require(p.delta2 != 0.0 && std::abs(amp->omega_p / p.delta2) < 1.0,
              "|Omega_p/delta2| must be < 1 (arctanh domain)");
    }
  } else {
    require(finite(std::get<SqueezingParameter>(p.pump).r), "r must be finite");
  }
}

double squeezing_of(const PhysicalParams& p) {
  if (const auto* amp = std::get_if<PumpAmplitude>(&p.pump)) {
    if (amp->omega_p == 0.0) return 0.0;
    return 0.5 * std::atanh(amp->omega_p / p.delta2);
  }
  return std::get<SqueezingParameter>(p.pump).r;
}

DerivedParams derive_params(const PhysicalParams& p) {
  validate(p);
  DerivedParams d;
  if (const auto* amp = std::get_if<PumpAmplitude>(&p.pump)) {
    d.beta = amp->omega_p == 0.0 ? 0.0 : amp->omega_p / p.delta2;
    d.r = 0.5 * std::atanh(d.beta);
    d.omega_p = amp->omega_p;
    d.delta2_s = p.delta2 * std::sqrt(1.0 - d.beta * d.beta);
  } else {
    d.r = std::get<SqueezingParameter>(p.pump).r;
    d.beta = std::tanh(2.0 * d.r);
    d.omega_p = d.beta * p.delta2;
    // sech 2r form keeps full precision where 1 − β² cancels.
    d.delta2_s = p.delta2 / std::cosh(2.0 * d.r);
  }
  const double ch = std::cosh(d.r);
  const double sh = std::sinh(d.r);
  d.n_bath = sh * sh;
  d.m_bath = ch * sh * std::exp(-kI * p.theta);
  d.J_s = ch * p.J;
  d.Delta2 = d.delta2_s - p.delta;

  const SteadyAmplitudes amps = steady_amplitudes(p, d);
  d.a1s = amps.a1s;
  d.bs = amps.bs;
  d.G = amps.G;
  d.Delta1p = amps.Delta1p;

  const BogoliubovDiagnostics diag = bogoliubov_diagnostics(d);
  d.eta = diag.eta;
  d.lambda = diag.lambda;
  return d;
}

SteadyAmplitudes steady_amplitudes(const PhysicalParams& p, const DerivedParams& d) {
  SteadyAmplitudes out;
  if (p.detuning_mode == DetuningMode::FixedRed) {
    out.Delta1p = 1.0;
    out.a1s = mean_optical_amplitude(p, d.J_s, d.Delta2, out.Delta1p);
    out.bs = mean_mechanical_amplitude(p, out.a1s);
    out.G = p.g * std::abs(out.a1s);
    return out;
  }

  double x = p.Delta1;
  for (int it = 1; it <= kSelfConsistentMaxIterations; ++it) {
    const cd a1s = mean_optical_amplitude(p, d.J_s, d.Delta2, x);
    const cd bs = mean_mechanical_amplitude(p, a1s);
    const double target = p.Delta1 - 2.0 * p.g * bs.real();
    const double next = (1.0 - kSelfConsistentDamping) * x + kSelfConsistentDamping * target;
    if (!std::isfinite(next)) break;
    const bool done =
        std::abs(next - x) <= kSelfConsistentTolerance * std::max(1.0, std::abs(next));
    x = next;
    if (done) {
      out.Delta1p = x;
      out.a1s = mean_optical_amplitude(p, d.J_s, d.Delta2, x);
      out.bs = mean_mechanical_amplitude(p, out.a1s);
      out.G = p.g * std::abs(out.a1s);
      out.iterations = it;
      return out;
    }
  }
  std::ostringstream msg;
  msg << "self-consistent detuning did not converge within " << kSelfConsistentMaxIterations
      << " iterations (last Delta1' = " << x << ")";
  throw NonConvergence(msg.str());
}

DriftMatrix build_drift(const PhysicalParams& p, const DerivedParams& d) {
  const double k1 = p.kappa1 / 2.0;
  const double k2 = p.kappa2 / 2.0;
  const double gm = p.gamma_m / 2.0;
  const double D1 = d.Delta1p;
  const double D2 = d.Delta2;
  const double Js = d.J_s;
  const double G = d.G;
  constexpr double wm = 1.0;

  DriftMatrix out;
  // clang-format off
  out.m <<
     -k1,   D1,  0.0,   Js,  0.0,   -G,
     -D1,  -k1,  -Js,  0.0,    G,  0.0,
     0.0,   Js,  -k2,   D2,  0.0,  0.0,
     -Js,  0.0,  -D2,  -k2,  0.0,  0.0,
     0.0,   -G,  0.0,  0.0,  -gm,   wm,
       G,  0.0,  0.0,  0.0,  -wm,  -gm;
  // clang-format on
  return out;
}

DiffusionMatrix build_diffusion(const PhysicalParams& p, const DerivedParams& d) {
  DiffusionMatrix out;
  out.d(0, 0) = out.d(1, 1) = p.kappa1 / 2.0;

  const double n2 = 2.0 * d.n_bath + 1.0;
  const cd M = d.m_bath;
  const double m_sum = (M + std::conj(M)).real();
  const double cross = (kI * (std::conj(M) - M)).real();
  const double k2 = p.kappa2 / 2.0;
  out.d(2, 2) = k2 * (n2 + m_sum);
  out.d(2, 3) = out.d(3, 2) = k2 * cross;
  out.d(3, 3) = k2 * (n2 - m_sum);

  out.d(4, 4) = out.d(5, 5) = p.gamma_m / 2.0 * (2.0 * p.mbar + 1.0);
  return out;
}

RwaReport rwa_validity(const PhysicalParams& p, const DerivedParams& d, double threshold) {
  RwaReport out;
  out.threshold = threshold;
  const double delta1 = p.delta + d.Delta1p;
  const double denom = delta1 + d.delta2_s;
  const double num = std::abs(std::sinh(d.r) * p.J);
  if (num == 0.0) {
    out.ratio = 0.0;
  } else if (denom <= 0.0) {
    out.ratio = std::numeric_limits<double>::infinity();
  } else {
    out.ratio = num / denom;
  }
  out.warning = out.ratio > threshold;
  return out;
}

BogoliubovDiagnostics bogoliubov_diagnostics(const DerivedParams& d) {
  BogoliubovDiagnostics out;
  out.defined = d.G > d.J_s;
  if (out.defined) {
    out.eta = std::sqrt(d.G * d.G - d.J_s * d.J_s);
    out.lambda = std::atanh(d.J_s / d.G);
  }
  return out;
}

}  // namespace optomech
