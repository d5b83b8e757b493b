#pragma once

// Reference evaluations written independently of the library code paths.

#include <cmath>
#include <complex>
#include <random>

#include "optomech/optomech.hpp"

namespace testing {

using optomech::Mat2;
using optomech::Mat4;
using optomech::Mat6;

inline double cosh_exp(double x) { return 0.5 * (std::exp(x) + std::exp(-x)); }
inline double sinh_exp(double x) { return 0.5 * (std::exp(x) - std::exp(-x)); }
inline double artanh_log(double x) { return 0.5 * std::log((1.0 + x) / (1.0 - x)); }

inline bool close_rel(double got, double want, double rel, double abs_floor = 0.0) {
  return std::abs(got - want) <= std::max(rel * std::abs(want), abs_floor);
}

/// Mean-field amplitude with every factor spelled out in complex arithmetic.
inline std::complex<double> a1s_reference(double E, double Js, double Delta1p, double Delta2,
                                          double k1, double k2) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> c2 = i * Delta2 + std::complex<double>(k2 / 2.0, 0.0);
  const std::complex<double> c1 = i * Delta1p + std::complex<double>(k1 / 2.0, 0.0);
  return E * c2 / (std::complex<double>(Js * Js, 0.0) + c1 * c2);
}

inline Mat6 lyapunov_lhs(const Mat6& m, const Mat6& v, const Mat6& d) {
  return m * v + v * m.transpose() + d;
}

/// Uncoupled system: no drive, no inter-resonator coupling, no squeezing.
inline optomech::PhysicalParams uncoupled(double mbar = 0.0) {
  optomech::PhysicalParams p = optomech::fig2_params();
  p.J = 0.0;
  p.E = 0.0;
  p.pump = optomech::SqueezingParameter{0.0};
  p.mbar = mbar;
  return p;
}

/// Random parameter draw inside the fig4 axis ranges.
inline optomech::PhysicalParams random_fig4_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d2(0.1, 2.0), e(5e4, 8e5), g(2e-5, 2e-4), j(0.2, 2.5),
      r(0.0, 1.5), th(0.0, 6.283185307179586);
  optomech::PhysicalParams p = optomech::fig4_params();
  p.delta2 = d2(rng);
  p.E = e(rng);
  p.g = g(rng);
  p.J = j(rng);
  p.pump = optomech::SqueezingParameter{r(rng)};
  p.theta = th(rng);
  return p;
}

struct Model {
  optomech::DerivedParams d;
  optomech::DriftMatrix m;
  optomech::DiffusionMatrix diff;
};

inline Model build(const optomech::PhysicalParams& p) {
  Model out;
  out.d = optomech::derive_params(p);
  out.m = optomech::build_drift(p, out.d);
  out.diff = optomech::build_diffusion(p, out.d);
  return out;
}

}  // namespace testing
