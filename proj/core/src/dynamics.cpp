#include "optomech/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "optomech/errors.hpp"

namespace optomech {

namespace {

Mat6 rhs(const Mat6& m, const Mat6& d, const Mat6& v) {
  return m * v + v * m.transpose() + d;
}

Mat6 symmetrized(const Mat6& v) { return 0.5 * (v + v.transpose()); }

struct RunResult {
  Mat6 final_v;
  std::vector<double> times;
  std::vector<CovarianceMatrix> samples;
};

RunResult integrate(const Mat6& m, const Mat6& d, const Mat6& v0, double dt, std::size_t steps,
                    std::size_t stride, bool record) {
  RunResult out;
  Mat6 v = v0;
  if (record) {
    out.times.push_back(0.0);
    out.samples.push_back({v});
  }
  for (std::size_t n = 1; n <= steps; ++n) {
    const Mat6 k1 = rhs(m, d, v);
    const Mat6 k2 = rhs(m, d, v + 0.5 * dt * k1);
    const Mat6 k3 = rhs(m, d, v + 0.5 * dt * k2);
    const Mat6 k4 = rhs(m, d, v + dt * k3);
    v = symmetrized(v + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    if (!v.allFinite()) {
      std::ostringstream msg;
      msg << "covariance became non-finite at step " << n << " (t = " << n * dt << ")";
      throw NonFinite(msg.str());
    }
    if (record && (n % stride == 0 || n == steps)) {
      out.times.push_back(static_cast<double>(n) * dt);
      out.samples.push_back({v});
    }
  }
  out.final_v = v;
  return out;
}

}  // namespace

CovarianceMatrix initial_state(double mbar) {
  CovarianceMatrix c;
  c.v(4, 4) = c.v(5, 5) = mbar + 0.5;
  return c;
}

double spectral_radius(const DriftMatrix& m) {
  Eigen::EigenSolver<Mat6> es(m.m, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

StabilityReport stability_check(const DriftMatrix& m) {
  Eigen::EigenSolver<Mat6> es(m.m, false);
  StabilityReport out;
  out.max_real_part = es.eigenvalues().real().maxCoeff();
  out.stable = out.max_real_part < kStabilityThreshold;
  return out;
}

double residual(const DriftMatrix& m, const DiffusionMatrix& d, const CovarianceMatrix& v) {
  return max_abs(rhs(m.m, d.d, v.v));
}

double entrywise_relative_difference(const Mat6& a, const Mat6& b, double floor) {
  const double scale = floor * max_abs(b);
  double worst = 0.0;
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      const double denom = std::max(std::abs(b(i, j)), scale);
      const double diff = std::abs(a(i, j) - b(i, j));
      if (diff == 0.0) continue;
      worst = std::max(worst, denom > 0.0 ? diff / denom : diff);
    }
  }
  return worst;
}

EvolutionTrace evolve(const DriftMatrix& m, const DiffusionMatrix& d, const CovarianceMatrix& v0,
                      double t_max, const DtPolicy& policy) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) {
    throw StepSizeError("t_max must be positive and finite");
  }
  if (policy.stride == 0) throw StepSizeError("stride must be >= 1");

  double dt = 0.0;
  if (policy.dt) {
    dt = *policy.dt;
  } else {
    const double rho = spectral_radius(m);
    dt = rho > 0.0 ? policy.courant / rho : t_max;
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw StepSizeError("step size must be positive");

  // Land exactly on t_max.
  const auto steps = static_cast<std::size_t>(std::ceil(t_max / dt - 1e-12));
  dt = t_max / static_cast<double>(std::max<std::size_t>(steps, 1));

  const RunResult main_run =
      integrate(m.m, d.d, v0.v, dt, std::max<std::size_t>(steps, 1), policy.stride, true);

  EvolutionTrace trace;
  trace.dt = dt;
  trace.times = main_run.times;
  trace.covariances = main_run.samples;
  trace.final_residual = max_abs(rhs(m.m, d.d, main_run.final_v));
  trace.converged = true;

  if (policy.check_step_halving) {
    const RunResult half = integrate(m.m, d.d, v0.v, dt / 2.0,
                                     2 * std::max<std::size_t>(steps, 1), 1, false);
    trace.halving_change = entrywise_relative_difference(main_run.final_v, half.final_v);
    trace.converged = trace.halving_change < kHalvingTolerance;
  }
  return trace;
}

CovarianceMatrix steady_state(const DriftMatrix& m, const DiffusionMatrix& d) {
  const StabilityReport st = stability_check(m);
  if (!st.stable) {
    std::ostringstream msg;
    msg << "drift matrix is not stable (max real part " << st.max_real_part << ")";
    throw UnstableSystem(msg.str());
  }

  // Column-major vec: vec(MV + VMᵀ) = (I ⊗ M + M ⊗ I) vec(V).
  using Mat36 = Eigen::Matrix<double, 36, 36>;
  using Vec36 = Eigen::Matrix<double, 36, 1>;
  Mat36 op = Mat36::Zero();
  for (int col = 0; col < 6; ++col) {
    op.block<6, 6>(6 * col, 6 * col) += m.m;
    for (int row = 0; row < 6; ++row) {
      op.block<6, 6>(6 * row, 6 * col).diagonal().array() += m.m(row, col);
    }
  }

  Eigen::FullPivLU<Mat36> lu(op);
  if (lu.rank() < 36) throw SingularSystem("Lyapunov operator is rank-deficient");

  const Vec36 b = -Eigen::Map<const Vec36>(d.d.data());
  Vec36 x = lu.solve(b);
  for (int refine = 0; refine < 2; ++refine) {
    const Vec36 r = b - op * x;
    x += lu.solve(r);
  }
  if (!x.allFinite()) throw SingularSystem("Lyapunov solve produced non-finite entries");

  CovarianceMatrix out;
  out.v = symmetrized(Eigen::Map<const Mat6>(x.data()));
  return out;
}

}  // namespace optomech
