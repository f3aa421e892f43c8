#pragma once

#include <span>
#include <string>
#include <vector>

#include "specmult/types.hpp"

namespace specmult {

struct EigenDecomposition {
  /// Ascending.
  Vector eigenvalues;
  /// Orthonormal columns, eigenvectors(:, i) pairs with eigenvalues(i).
  Matrix eigenvectors;
  double residual_tol = 1e-10;
};

struct Cluster {
  /// Mean of the clustered eigenvalues.
  double value = 0.0;
  int count = 0;
  /// max - min within the cluster.
  double spread = 0.0;
};

struct MultiplicityReport {
  std::vector<Cluster> clusters;
  double gap_threshold = 0.0;

  /// Clusters whose representative lies in the open interval (lo, hi).
  std::vector<Cluster> within(double lo, double hi) const;
};

/// eta_{B,J}: number of eigenvalues of H_B in J.
struct CountingStat {
  int eta = 0;
  Interval interval;
};

/// Full symmetric eigendecomposition. Rejects nonsymmetric input and checks
/// the residual and orthonormality invariants before returning.
EigenDecomposition eigendecompose(const Matrix& h, double residual_tol = 1e-10);

/// Ascending eigenvalues only; the ensemble kernels use this.
Vector eigenvalues_of(const Matrix& h);

/// Principal submatrix on `indices` (P_B H P_B viewed on range P_B).
Matrix restrict_to(const Matrix& h, std::span<const int> indices);

/// Count of eigenvalues in the half-open interval [a, b). evals sorted.
CountingStat count_in_interval(std::span<const double> evals, Interval j);

/// Single-linkage clustering of sorted eigenvalues: a new cluster opens when
/// the gap to the previous eigenvalue exceeds delta.
MultiplicityReport cluster_multiplicities(std::span<const double> evals,
                                          double delta);

/// 1e-8 * ||H||_2, from the extreme eigenvalues.
double default_cluster_delta(std::span<const double> evals);

/// Dimension of span{H^k e_i : i in indices, k >= 0}, grown block by block
/// until a block adds no new direction above tol * max(1, ||H||).
int krylov_reachable_dim(const Matrix& h, std::span<const int> indices,
                         double tol = 1e-10);

std::span<const double> as_span(const Vector& v);

}  // namespace specmult
