#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

using namespace optomech;
using namespace testing;

namespace {

Model squeezed_cavity(double r) {
  PhysicalParams p = fig2_params();
  p.pump = SqueezingParameter{r};
  Model md;
  md.d.r = r;
  md.d.n_bath = std::pow(sinh_exp(r), 2);
  md.d.m_bath = cosh_exp(r) * sinh_exp(r);
  md.m = build_drift(p, md.d);
  md.diff = build_diffusion(p, md.d);
  return md;
}

}  // namespace

TEST_SUITE("dynamics") {

TEST_CASE("vacuum is a fixed point of the damped uncoupled system") {
  const Model md = build(uncoupled());
  DtPolicy policy;
  policy.stride = 7;
  const EvolutionTrace tr = evolve(md.m, md.diff, initial_state(0.0), 25.0, policy);
  REQUIRE(tr.times.size() == tr.covariances.size());
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    CHECK(max_abs(Mat6(tr.covariances[k].v - Mat6::Identity() / 2.0)) < 1e-14);
    if (k) CHECK(tr.times[k] > tr.times[k - 1]);
  }
  CHECK(tr.times.back() == doctest::Approx(25.0).epsilon(1e-14));
  CHECK(tr.converged);
}

TEST_CASE("single squeezed cavity relaxes to the squeezed bath") {
  const double r = 0.8;
  const Model md = squeezed_cavity(r);
  DtPolicy policy;
  policy.stride = std::numeric_limits<std::size_t>::max();
  const EvolutionTrace tr = evolve(md.m, md.diff, initial_state(0.0), 40.0 / 0.6, policy);
  const Mat6& v = tr.covariances.back().v;
  CHECK(v(2, 2) == doctest::Approx(std::exp(2.0 * r) / 2.0).epsilon(1e-9));
  CHECK(v(3, 3) == doctest::Approx(std::exp(-2.0 * r) / 2.0).epsilon(1e-9));
  CHECK(std::abs(v(2, 3)) < 1e-12);

  // closed form of the scalar relaxation v(t) = v_inf + (1/2 - v_inf) e^{-kappa t}
  DtPolicy fine;
  fine.dt = 1e-3;
  fine.check_step_halving = false;
  const EvolutionTrace early = evolve(md.m, md.diff, initial_state(0.0), 1.5, fine);
  const double vinf = std::exp(2.0 * r) / 2.0;
  const double want = vinf + (0.5 - vinf) * std::exp(-0.6 * 1.5);
  CHECK(early.covariances.back().v(2, 2) == doctest::Approx(want).epsilon(1e-10));
}

TEST_CASE("entanglement rises from zero and settles on the steady value") {
  const PhysicalParams p = fig5_params();
  const Model md = build(p);
  DtPolicy policy;
  policy.stride = 20;
  const EvolutionTrace tr = evolve(md.m, md.diff, initial_state(p.mbar), 200.0, policy);
  const ModePair pair{Mode::A2, Mode::B};
  CHECK(nonlocality(tr.covariances.front(), pair).e_n == 0.0);
  const double steady_en = nonlocality(steady_state(md.m, md.diff), pair).e_n;
  CHECK(steady_en > 0.1);
  CHECK(nonlocality(tr.covariances.back(), pair).e_n == doctest::Approx(steady_en).epsilon(1e-8));
  CHECK(tr.converged);
  CHECK(tr.halving_change < kHalvingTolerance);
  for (const auto& v : tr.covariances) CHECK(physicality(v.v).ok);
}

TEST_CASE("fig2 trace at the quoted pump converges to the steady state") {
  const PhysicalParams p = fig2_params();
  const Model md = build(p);
  const CovarianceMatrix steady = steady_state(md.m, md.diff);
  DtPolicy policy;
  policy.stride = 50;
  const EvolutionTrace tr = evolve(md.m, md.diff, initial_state(p.mbar), 250.0, policy);
  CHECK(entrywise_relative_difference(tr.covariances.back().v, steady.v) < 1e-6);
  for (const auto& v : tr.covariances) {
    CHECK(physicality(v.v).min_symplectic_eigenvalue >= 0.5 - kPhysicalityTolerance);
  }
}

TEST_CASE("residual envelope decreases along a converging trace") {
  const PhysicalParams p = fig2_params();
  const Model md = build(p);
  DtPolicy policy;
  policy.check_step_halving = false;
  const EvolutionTrace tr = evolve(md.m, md.diff, initial_state(p.mbar), 120.0, policy);
  // maximum residual per oscillation period (2 pi / omega_m), after the first period
  const double period = 2.0 * std::numbers::pi;
  std::vector<double> window_max;
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    const auto w = static_cast<std::size_t>(tr.times[k] / period);
    if (w >= window_max.size()) window_max.resize(w + 1, 0.0);
    window_max[w] = std::max(window_max[w], residual(md.m, md.diff, tr.covariances[k]));
  }
  for (std::size_t w = 2; w + 1 < window_max.size(); ++w) {
    CHECK(window_max[w] <= window_max[w - 1] + 1e-12);
  }
}

TEST_CASE("steady state") {
  SUBCASE("global vacuum") {
    const Model md = build(uncoupled());
    const CovarianceMatrix v = steady_state(md.m, md.diff);
    CHECK(max_abs(Mat6(v.v - Mat6::Identity() / 2.0)) < 1e-12);
  }
  SUBCASE("thermal mechanics") {
    const Model md = build(uncoupled(2.0));
    const CovarianceMatrix v = steady_state(md.m, md.diff);
    CHECK(v.v(4, 4) == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(v.v(5, 5) == doctest::Approx(2.5).epsilon(1e-10));
    CHECK(v.v(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(v.v(2, 2) == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("residual, symmetry and linearity on random fig4 draws") {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 50; ++k) {
      const Model md = build(random_fig4_point(rng));
      const CovarianceMatrix v = steady_state(md.m, md.diff);
      const double dmax = max_abs(md.diff.d);
      CHECK(max_abs(lyapunov_lhs(md.m.m, v.v, md.diff.d)) <= 1e-10 * dmax);
      CHECK(residual(md.m, md.diff, v) <= 1e-10 * dmax);
      CHECK(max_abs(Mat6(v.v - v.v.transpose())) <= 1e-12 * max_abs(v.v));

      DiffusionMatrix scaled;
      scaled.d = 3.5 * md.diff.d;
      const CovarianceMatrix vs = steady_state(md.m, scaled);
      CHECK(max_abs(Mat6(vs.v - 3.5 * v.v)) <= 1e-12 * max_abs(Mat6(3.5 * v.v)));
    }
  }
  SUBCASE("lossless system has no steady state") {
    DriftMatrix m;
    m.m(0, 1) = 1.0;
    m.m(1, 0) = -1.0;
    DiffusionMatrix d;
    d.d = Mat6::Identity();
    CHECK_THROWS_AS(steady_state(m, d), UnstableSystem);
  }
}

TEST_CASE("stability check") {
  const Model md = build(uncoupled());
  StabilityReport st = stability_check(md.m);
  CHECK(st.stable);
  CHECK(st.max_real_part == doctest::Approx(-fig2_params().gamma_m / 2.0).epsilon(1e-9));

  DriftMatrix lossless = md.m;
  lossless.m.diagonal().setZero();
  st = stability_check(lossless);
  CHECK_FALSE(st.stable);
  CHECK(std::abs(st.max_real_part) < 1e-12);

  std::mt19937_64 rng(29);
  for (int k = 0; k < 100; ++k) CHECK(stability_check(build(random_fig4_point(rng)).m).stable);
}

TEST_CASE("residual definition") {
  const Model md = build(uncoupled());
  CovarianceMatrix vac;
  CHECK(residual(md.m, md.diff, vac) < 1e-15);
  CovarianceMatrix zero;
  zero.v.setZero();
  const Model fig = build(fig2_params());
  CHECK(residual(fig.m, fig.diff, zero) == max_abs(fig.diff.d));
}

TEST_CASE("evolve rejects bad step policies and overflow") {
  const Model md = build(fig2_params());
  const CovarianceMatrix v0 = initial_state(0.0);
  CHECK_THROWS_AS(evolve(md.m, md.diff, v0, 0.0, DtPolicy{}), StepSizeError);
  CHECK_THROWS_AS(evolve(md.m, md.diff, v0, -1.0, DtPolicy{}), StepSizeError);
  DtPolicy bad;
  bad.dt = 0.0;
  CHECK_THROWS_AS(evolve(md.m, md.diff, v0, 1.0, bad), StepSizeError);
  bad.dt = -0.1;
  CHECK_THROWS_AS(evolve(md.m, md.diff, v0, 1.0, bad), StepSizeError);
  DtPolicy huge;
  huge.dt = 10.0;
  huge.check_step_halving = false;
  CHECK_THROWS_AS(evolve(md.m, md.diff, v0, 1e5, huge), NonFinite);
}

TEST_CASE("initial state is vacuum times thermal mechanics") {
  const CovarianceMatrix v = initial_state(1.5);
  for (int k = 0; k < 4; ++k) CHECK(v.v(k, k) == 0.5);
  CHECK(v.v(4, 4) == 2.0);
  CHECK(v.v(5, 5) == 2.0);
  CHECK(max_abs(Mat6(v.v - Mat6(v.v.diagonal().asDiagonal()))) == 0.0);
}

}  // TEST_SUITE
