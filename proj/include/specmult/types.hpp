#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace specmult {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

/// Coordinate indices into {0..N-1}.
using IndexSet = std::vector<int>;

/// Half-open interval [lower, upper).
struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
  bool contains(double x) const { return lower <= x && x < upper; }

  static Interval centered(double center, double half_width) {
    return {center - half_width, center + half_width};
  }
};

}  // namespace specmult
