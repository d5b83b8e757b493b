#include "optomech/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "optomech/errors.hpp"

namespace optomech {

Eigen::MatrixXd symplectic_form(int modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& v) {
  const auto n = v.rows();
  if (n != v.cols() || n % 2 != 0) {
    throw IndexError("symplectic_eigenvalues: covariance must be 2n x 2n");
  }
  // ΩV has eigenvalues ±iν; iΩV has ±ν. Moduli are the same either way.
  const Eigen::MatrixXd omega_v = symplectic_form(static_cast<int>(n / 2)) * v;
  Eigen::EigenSolver<Eigen::MatrixXd> es(omega_v, false);
  Eigen::VectorXd moduli = es.eigenvalues().cwiseAbs();
  std::sort(moduli.data(), moduli.data() + moduli.size());
  Eigen::VectorXd out(n / 2);
  for (Eigen::Index k = 0; k < n / 2; ++k) out(k) = 0.5 * (moduli(2 * k) + moduli(2 * k + 1));
  return out;
}

Mode mode_from_string(const std::string& name) {
  if (name == "a1") return Mode::A1;
  if (name == "a2") return Mode::A2;
  if (name == "b") return Mode::B;
  throw IndexError("unknown mode '" + name + "' (expected a1, a2 or b)");
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::A1:
      return "a1";
    case Mode::A2:
      return "a2";
    case Mode::B:
      return "b";
  }
  return "?";
}

ModePair pair_from_string(const std::string& label) {
  const auto dash = label.find('-');
  if (dash == std::string::npos) {
    throw IndexError("mode pair '" + label + "' must look like a2-b");
  }
  ModePair pair{mode_from_string(label.substr(0, dash)), mode_from_string(label.substr(dash + 1))};
  if (pair.first == pair.second) throw IndexError("mode pair '" + label + "' repeats a mode");
  return pair;
}

std::string to_string(const ModePair& pair) {
  return to_string(pair.first) + "-" + to_string(pair.second);
}

char to_char(Region region) {
  switch (region) {
    case Region::A:
      return 'A';
    case Region::B:
      return 'B';
    case Region::C:
      return 'C';
    case Region::D:
      return 'D';
  }
  return '?';
}

TwoModeCovariance reduce_two_mode(const CovarianceMatrix& v, Mode i, Mode j) {
  if (i == j) throw IndexError("reduce_two_mode: modes must differ");
  const int idx[4] = {2 * static_cast<int>(i), 2 * static_cast<int>(i) + 1,
                      2 * static_cast<int>(j), 2 * static_cast<int>(j) + 1};
  TwoModeCovariance tm;
  tm.first = i;
  tm.second = j;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) tm.v(r, c) = v.v(idx[r], idx[c]);
  }
  return tm;
}

namespace {

Mat2 adjugate(const Mat2& a) { return (Mat2() << a(1, 1), -a(0, 1), -a(1, 0), a(0, 0)).finished(); }

// det V12 from its blocks, det A det B + det C² − tr(adj A · C · adj B · Cᵀ),
// summed so that exchanging the two modes gives the same bits.
double two_mode_determinant(const TwoModeCovariance& tm) {
  const Mat2 a = tm.block1();
  const Mat2 b = tm.block2();
  const Mat2 c = tm.correlation();
  const Mat2 x = adjugate(a) * c;
  const Mat2 y = adjugate(b) * c.transpose();
  const double trace = (x(0, 0) * y(0, 0) + x(1, 1) * y(1, 1)) + (x(0, 1) * y(1, 0) + x(1, 0) * y(0, 1));
  const double detc = c.determinant();
  return a.determinant() * b.determinant() + detc * detc - trace;
}

}  // namespace

NegativityResult log_negativity(const TwoModeCovariance& tm) {
  const double det1 = tm.block1().determinant();
  const double det2 = tm.block2().determinant();
  const double detc = tm.correlation().determinant();
  const double det12 = two_mode_determinant(tm);
  const double sigma = det1 + det2 - 2.0 * detc;
  double disc = sigma * sigma - 4.0 * det12;
  if (disc < -kDiscriminantError) {
    std::ostringstream msg;
    msg << "two-mode covariance is not physical (discriminant " << disc << ")";
    throw NonPhysicalState(msg.str());
  }
  disc = std::max(disc, 0.0);
  const double inner = std::max(sigma - std::sqrt(disc), 0.0);
  NegativityResult out;
  out.eta_minus = std::sqrt(inner) / std::sqrt(2.0);
  out.e_n = std::max(0.0, -std::log(2.0 * out.eta_minus));
  return out;
}

double steering(const TwoModeCovariance& tm, Direction direction) {
  const double det12 = two_mode_determinant(tm);
  if (det12 <= kDegenerateDeterminant) {
    throw DegenerateState("steering: det V12 is not positive");
  }
  const double det_steering = direction == Direction::FirstToSecond
                                  ? tm.block1().determinant()
                                  : tm.block2().determinant();
  return std::max(0.0, 0.5 * std::log(det_steering / (4.0 * det12)));
}

QuadratureVariances quadrature_variances(const CovarianceMatrix& v, Mode mode) {
  const int k = 2 * static_cast<int>(mode);
  return {v.v(k, k), v.v(k + 1, k + 1)};
}

PhysicalityReport physicality(const Eigen::MatrixXd& v) {
  PhysicalityReport out;
  out.min_symplectic_eigenvalue = symplectic_eigenvalues(v).minCoeff();
  out.ok = out.min_symplectic_eigenvalue >= 0.5 - kPhysicalityTolerance;
  return out;
}

RegionClass classify_region(double e_n, double g_12, double g_21, double threshold) {
  RegionClass out;
  const bool steer12 = g_12 > threshold;
  const bool steer21 = g_21 > threshold;
  if (!(e_n > threshold)) {
    out.region = Region::A;
  } else if (steer12 && steer21) {
    out.region = Region::D;
  } else if (steer12) {
    out.region = Region::C;
    out.one_way = Direction::FirstToSecond;
  } else if (steer21) {
    out.region = Region::C;
    out.one_way = Direction::SecondToFirst;
  } else {
    out.region = Region::B;
  }
  return out;
}

NonlocalityReport nonlocality(const CovarianceMatrix& v, const ModePair& pair, double threshold) {
  const TwoModeCovariance tm = reduce_two_mode(v, pair.first, pair.second);
  const NegativityResult neg = log_negativity(tm);
  NonlocalityReport out;
  out.first = pair.first;
  out.second = pair.second;
  out.e_n = neg.e_n;
  out.eta_minus = neg.eta_minus;
  out.g_12 = steering(tm, Direction::FirstToSecond);
  out.g_21 = steering(tm, Direction::SecondToFirst);
  out.threshold = threshold;
  out.region = classify_region(out.e_n, out.g_12, out.g_21, threshold);
  return out;
}

}  // namespace optomech
