#include "specmult/spectral_core.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "specmult/error.hpp"

namespace specmult {

namespace {

void require_symmetric(const Matrix& h) {
  if (h.rows() != h.cols()) throw SchemaError("matrix is not square");
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = 0; i < j; ++i)
      if (h(i, j) != h(j, i))
        throw SchemaError("matrix is not symmetric at (" + std::to_string(i) +
                          ", " + std::to_string(j) + ")");
}

}  // namespace

std::span<const double> as_span(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

std::vector<Cluster> MultiplicityReport::within(double lo, double hi) const {
  std::vector<Cluster> out;
  for (const auto& c : clusters)
    if (c.value > lo && c.value < hi) out.push_back(c);
  return out;
}

EigenDecomposition eigendecompose(const Matrix& h, double residual_tol) {
  require_symmetric(h);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigensolver did not converge");
  EigenDecomposition out{solver.eigenvalues(), solver.eigenvectors(),
                         residual_tol};
  if (h.rows() == 0) return out;

  const double norm = out.eigenvalues.cwiseAbs().maxCoeff();
  const Matrix residual =
      h * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal();
  const double worst = residual.colwise().norm().maxCoeff();
  if (worst > residual_tol * (1.0 + norm))
    throw NumericalError("eigen residual " + std::to_string(worst) +
                         " exceeds tolerance");
  const Matrix gram = out.eigenvectors.transpose() * out.eigenvectors -
                      Matrix::Identity(h.rows(), h.cols());
  if (gram.cwiseAbs().maxCoeff() > 1e-10)
    throw NumericalError("eigenvectors lost orthonormality");
  return out;
}

Vector eigenvalues_of(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigensolver did not converge");
  return solver.eigenvalues();
}

Matrix restrict_to(const Matrix& h, std::span<const int> indices) {
  const auto n = static_cast<int>(h.rows());
  for (int i : indices)
    if (i < 0 || i >= n)
      throw SchemaError("restrict: index " + std::to_string(i) +
                        " out of range");
  const auto b = static_cast<Eigen::Index>(indices.size());
  Matrix out(b, b);
  for (Eigen::Index c = 0; c < b; ++c)
    for (Eigen::Index r = 0; r < b; ++r) out(r, c) = h(indices[r], indices[c]);
  return out;
}

CountingStat count_in_interval(std::span<const double> evals, Interval j) {
  if (j.lower > j.upper) throw SchemaError("interval with a > b");
  const auto lo = std::lower_bound(evals.begin(), evals.end(), j.lower);
  const auto hi = std::lower_bound(lo, evals.end(), j.upper);
  return {static_cast<int>(hi - lo), j};
}

MultiplicityReport cluster_multiplicities(std::span<const double> evals,
                                          double delta) {
  MultiplicityReport report;
  report.gap_threshold = delta;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= evals.size(); ++i) {
    if (i < evals.size() && evals[i] - evals[i - 1] <= delta) continue;
    if (i == start) continue;
    double sum = 0.0;
    for (std::size_t k = start; k < i; ++k) sum += evals[k];
    const int count = static_cast<int>(i - start);
    report.clusters.push_back(
        {sum / count, count, evals[i - 1] - evals[start]});
    start = i;
  }
  return report;
}

double default_cluster_delta(std::span<const double> evals) {
  if (evals.empty()) return 1e-8;
  const double norm = std::max(std::abs(evals.front()), std::abs(evals.back()));
  return 1e-8 * std::max(norm, 1e-300);
}

int krylov_reachable_dim(const Matrix& h, std::span<const int> indices,
                         double tol) {
  const auto n = h.rows();
  if (indices.empty()) return 0;
  const double scale = std::max(1.0, h.cwiseAbs().rowwise().sum().maxCoeff());
  const double cutoff = tol * scale;

  Matrix basis(n, 0);
  Matrix block = Matrix::Zero(n, static_cast<Eigen::Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 0 || indices[k] >= n)
      throw SchemaError("krylov: index out of range");
    block(indices[k], static_cast<Eigen::Index>(k)) = 1.0;
  }

  while (block.cols() > 0 && basis.cols() < n) {
    for (int pass = 0; pass < 2; ++pass)
      block -= basis * (basis.transpose() * block);
    Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeThinU);
    const Vector& sv = svd.singularValues();
    Eigen::Index added = 0;
    while (added < sv.size() && sv(added) > cutoff) ++added;
    if (added == 0) break;
    added = std::min<Eigen::Index>(added, n - basis.cols());
    Matrix next(n, basis.cols() + added);
    next << basis, svd.matrixU().leftCols(added);
    basis = std::move(next);
    block = h * basis.rightCols(added);
  }
  return static_cast<int>(basis.cols());
}

}  // namespace specmult
