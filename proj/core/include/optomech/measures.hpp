#pragma once

#include <optional>
#include <string>
#include <utility>

#include "optomech/dynamics.hpp"
#include "optomech/linalg.hpp"

namespace optomech {

enum class Mode { A1 = 0, A2 = 1, B = 2 };

/// "a1", "a2" or "b"; throws IndexError otherwise.
Mode mode_from_string(const std::string& name);
std::string to_string(Mode mode);

struct ModePair {
  Mode first = Mode::A2;
  Mode second = Mode::B;
  friend bool operator==(const ModePair&, const ModePair&) = default;
};

/// Parses "a2-b" style labels; throws IndexError for unknown or repeated modes.
ModePair pair_from_string(const std::string& label);
std::string to_string(const ModePair& pair);

struct TwoModeCovariance {
  Mat4 v = Mat4::Identity() / 2.0;
  Mode first = Mode::A2;
  Mode second = Mode::B;

  Mat2 block1() const { return v.topLeftCorner<2, 2>(); }
  Mat2 block2() const { return v.bottomRightCorner<2, 2>(); }
  Mat2 correlation() const { return v.topRightCorner<2, 2>(); }
};

enum class Direction {
  FirstToSecond,
  SecondToFirst,
};

enum class Region { A, B, C, D };

char to_char(Region region);

struct RegionClass {
  Region region = Region::A;
  /// Set only for region C.
  std::optional<Direction> one_way;
};

struct NegativityResult {
  double e_n = 0.0;
  double eta_minus = 0.5;
};

struct NonlocalityReport {
  Mode first = Mode::A2;
  Mode second = Mode::B;
  double e_n = 0.0;
  double eta_minus = 0.5;
  /// Steering first → second.
  double g_12 = 0.0;
  /// Steering second → first.
  double g_21 = 0.0;
  RegionClass region;
  double threshold = 1e-6;
};

struct QuadratureVariances {
  double var_x = 0.5;
  double var_y = 0.5;
};

struct PhysicalityReport {
  bool ok = true;
  double min_symplectic_eigenvalue = 0.5;
};

inline constexpr double kRegionThreshold = 1e-6;
inline constexpr double kPhysicalityTolerance = 1e-9;
inline constexpr double kDiscriminantError = 1e-9;
inline constexpr double kDegenerateDeterminant = 1e-300;

TwoModeCovariance reduce_two_mode(const CovarianceMatrix& v, Mode i, Mode j);

NegativityResult log_negativity(const TwoModeCovariance& tm);

/// Gaussian steering measure in the requested direction; never negative.
double steering(const TwoModeCovariance& tm, Direction direction);

QuadratureVariances quadrature_variances(const CovarianceMatrix& v, Mode mode);

/// Works for any 2n×2n covariance (two- or three-mode).
PhysicalityReport physicality(const Eigen::MatrixXd& v);

RegionClass classify_region(double e_n, double g_12, double g_21,
                            double threshold = kRegionThreshold);

/// Reduction + negativity + both steerings + region for one mode pair.
NonlocalityReport nonlocality(const CovarianceMatrix& v, const ModePair& pair,
                              double threshold = kRegionThreshold);

}  // namespace optomech
