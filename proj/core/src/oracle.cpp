#include "optomech/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "optomech/dynamics.hpp"
#include "optomech/errors.hpp"

namespace optomech::oracle {

namespace {

void record(OracleReport& rep, double got, double want) {
  const double abs_err = std::abs(got - want);
  rep.max_abs_error = std::max(rep.max_abs_error, abs_err);
  if (want != 0.0) rep.max_rel_error = std::max(rep.max_rel_error, abs_err / std::abs(want));
  ++rep.cases_run;
}

Mat4 rotation(double phi1, double phi2) {
  Mat4 s = Mat4::Zero();
  s.topLeftCorner<2, 2>() << std::cos(phi1), std::sin(phi1), -std::sin(phi1), std::cos(phi1);
  s.bottomRightCorner<2, 2>() << std::cos(phi2), std::sin(phi2), -std::sin(phi2), std::cos(phi2);
  return s;
}

Mat4 local_squeezers(double s1, double s2) {
  Mat4 s = Mat4::Zero();
  s.diagonal() << std::exp(-s1), std::exp(s1), std::exp(-s2), std::exp(s2);
  return s;
}

Mat4 two_mode_squeezer(double s) {
  const Mat2 z = (Mat2() << 1.0, 0.0, 0.0, -1.0).finished();
  Mat4 out;
  out.topLeftCorner<2, 2>() = std::cosh(s) * Mat2::Identity();
  out.bottomRightCorner<2, 2>() = std::cosh(s) * Mat2::Identity();
  out.topRightCorner<2, 2>() = std::sinh(s) * z;
  out.bottomLeftCorner<2, 2>() = std::sinh(s) * z;
  return out;
}

}  // namespace

TwoModeCovariance two_mode_squeezed_vacuum(double s) {
  TwoModeCovariance tm;
  tm.first = Mode::A2;
  tm.second = Mode::B;
  tm.v = two_mode_squeezer(s) * (Mat4::Identity() / 2.0) * two_mode_squeezer(s).transpose();
  return tm;
}

double pt_min_symplectic_eigenvalue(const Mat4& v) {
  Mat4 flip = Mat4::Identity();
  flip(3, 3) = -1.0;
  const Mat4 pt = flip * v * flip;
  Mat4 omega = Mat4::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  const Mat4 w = omega * pt;
  const Mat4 sq = -(w * w);
  Eigen::EigenSolver<Mat4> es(sq, false);
  const double smallest = es.eigenvalues().real().minCoeff();
  return std::sqrt(std::max(smallest, 0.0));
}

Mat4 random_physical_two_mode(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> squeeze(-kMaxSqueezing, kMaxSqueezing);
  std::uniform_real_distribution<double> excess(0.0, 2.0);

  Mat4 thermal = Mat4::Zero();
  const double nu1 = 0.5 + excess(rng);
  const double nu2 = 0.5 + excess(rng);
  thermal.diagonal() << nu1, nu1, nu2, nu2;

  const Mat4 s = rotation(angle(rng), angle(rng)) * local_squeezers(squeeze(rng), squeeze(rng)) *
                 rotation(angle(rng), angle(rng)) * two_mode_squeezer(squeeze(rng)) *
                 rotation(angle(rng), angle(rng));
  const Mat4 v = s * thermal * s.transpose();
  return 0.5 * (v + v.transpose());
}

OracleReport tmsv_oracle(std::span<const double> s_values) {
  OracleReport rep;
  rep.name = "tmsv";
  rep.tolerance = kMeasureTolerance;
  for (const double s : s_values) {
    const TwoModeCovariance tm = two_mode_squeezed_vacuum(s);
    const double expected_steer = std::log(std::cosh(2.0 * s));
    record(rep, log_negativity(tm).e_n, 2.0 * s);
    record(rep, steering(tm, Direction::FirstToSecond), expected_steer);
    record(rep, steering(tm, Direction::SecondToFirst), expected_steer);
  }
  rep.pass = rep.max_abs_error <= rep.tolerance;
  return rep;
}

OracleReport longtime_vs_direct(const PhysicalParams& params, double max_time) {
  OracleReport rep;
  rep.name = "longtime_vs_direct";
  rep.tolerance = kLongtimeTolerance;

  const DerivedParams d = derive_params(params);
  const DriftMatrix m = build_drift(params, d);
  const DiffusionMatrix diff = build_diffusion(params, d);
  const CovarianceMatrix direct = steady_state(m, diff);

  const double decay = -stability_check(m).max_real_part;
  // Covariance transients decay at ≥ 2·decay; e^{-40} sits below round-off.
  const double t = std::min(20.0 / decay, max_time);
  DtPolicy policy;
  policy.stride = std::numeric_limits<std::size_t>::max();
  policy.check_step_halving = false;
  const EvolutionTrace trace = evolve(m, diff, initial_state(params.mbar), t, policy);
  const Mat6& evolved = trace.covariances.back().v;

  rep.max_rel_error = entrywise_relative_difference(evolved, direct.v);
  rep.max_abs_error = max_abs(evolved - direct.v);
  rep.cases_run = 36;
  rep.pass = rep.max_rel_error <= rep.tolerance;
  return rep;
}

OracleReport pt_symplectic_oracle(std::size_t n_random, std::uint64_t seed) {
  OracleReport rep;
  rep.name = "pt_symplectic";
  rep.tolerance = kMeasureTolerance;
  rep.seed = seed;

  auto check = [&rep](const Mat4& v) {
    TwoModeCovariance tm;
    tm.v = v;
    record(rep, log_negativity(tm).eta_minus, pt_min_symplectic_eigenvalue(v));
  };
  check(Mat4::Identity() / 2.0);
  check(two_mode_squeezed_vacuum(0.5).v);

  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < n_random; ++k) check(random_physical_two_mode(rng));
  rep.pass = rep.max_abs_error <= rep.tolerance;
  return rep;
}

OracleReport squeezed_cavity_oracle(double r, double kappa2) {
  OracleReport rep;
  rep.name = "squeezed_cavity";
  rep.tolerance = kLongtimeTolerance;

  PhysicalParams p;
  p.kappa2 = kappa2;
  p.pump = SqueezingParameter{r};
  p.theta = 0.0;
  DerivedParams d;
  d.r = r;
  d.n_bath = std::sinh(r) * std::sinh(r);
  d.m_bath = std::cosh(r) * std::sinh(r);
  d.J_s = 0.0;
  d.G = 0.0;
  d.Delta2 = 0.0;
  const DriftMatrix m = build_drift(p, d);
  const DiffusionMatrix diff = build_diffusion(p, d);

  const CovarianceMatrix direct = steady_state(m, diff);
  record(rep, direct.v(2, 2), std::exp(2.0 * r) / 2.0);
  record(rep, direct.v(3, 3), std::exp(-2.0 * r) / 2.0);
  record(rep, direct.v(2, 3), 0.0);

  // Optical block only: the uncoupled mechanical relaxation (γ_m) is far slower.
  DtPolicy policy;
  policy.stride = std::numeric_limits<std::size_t>::max();
  policy.check_step_halving = false;
  const EvolutionTrace trace = evolve(m, diff, initial_state(0.0), 40.0 / kappa2, policy);
  const Mat6& late = trace.covariances.back().v;
  record(rep, late(2, 2), std::exp(2.0 * r) / 2.0);
  record(rep, late(3, 3), std::exp(-2.0 * r) / 2.0);

  rep.pass = rep.max_rel_error <= rep.tolerance &&
             rep.max_abs_error <= rep.tolerance * std::exp(2.0 * std::abs(r));
  return rep;
}

}  // namespace optomech::oracle
