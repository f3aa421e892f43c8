#include "specmult/green_matrix.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "specmult/error.hpp"
#include "specmult/spectral_core.hpp"

namespace specmult {

namespace {

constexpr double kSingularRcond = 1e-14;

void check_indices(const Matrix& h, std::span<const int> b) {
  if (h.rows() != h.cols()) throw SchemaError("matrix is not square");
  if (b.empty()) throw SchemaError("empty block set");
  std::vector<int> seen(h.rows(), 0);
  for (int i : b) {
    if (i < 0 || i >= h.rows())
      throw SchemaError("block index " + std::to_string(i) + " out of range");
    if (seen[i]++) throw SchemaError("repeated block index");
  }
}

IndexSet complement_of(Eigen::Index n, std::span<const int> b) {
  std::vector<char> in(n, 0);
  for (int i : b) in[i] = 1;
  IndexSet out;
  for (Eigen::Index i = 0; i < n; ++i)
    if (!in[i]) out.push_back(static_cast<int>(i));
  return out;
}

CMatrix shifted(const Matrix& h, Complex z) {
  CMatrix a = h.cast<Complex>();
  a.diagonal().array() -= z;
  return a;
}

CMatrix take(const Matrix& h, std::span<const int> rows,
             std::span<const int> cols) {
  CMatrix out(rows.size(), cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (std::size_t r = 0; r < rows.size(); ++r)
      out(r, c) = h(rows[r], cols[c]);
  return out;
}

Eigen::PartialPivLU<CMatrix> factor(const CMatrix& a, const char* what) {
  Eigen::PartialPivLU<CMatrix> lu(a);
  // an exactly singular pivot makes the estimate NaN
  const double rc = std::isnan(lu.rcond()) ? 0.0 : lu.rcond();
  if (!(rc > kSingularRcond))
    throw NumericalError(std::string(what) + " is singular (rcond " +
                         std::to_string(rc) + ")");
  return lu;
}

}  // namespace

std::string to_string(GreenMethod m) {
  switch (m) {
    case GreenMethod::direct: return "direct";
    case GreenMethod::schur: return "schur";
    case GreenMethod::boundary_limit: return "boundary-limit";
  }
  return "unknown";
}

std::vector<double> dyadic_schedule(int first, int last) {
  std::vector<double> eps;
  for (int k = first; k <= last; ++k) eps.push_back(std::ldexp(1.0, -k));
  return eps;
}

GreenMatrix green_direct(const Matrix& h, std::span<const int> b, Complex z) {
  check_indices(h, b);
  const auto lu = factor(shifted(h, z), "H - z");
  CMatrix rhs = CMatrix::Zero(h.rows(), static_cast<Eigen::Index>(b.size()));
  for (std::size_t k = 0; k < b.size(); ++k) rhs(b[k], k) = 1.0;
  const CMatrix x = lu.solve(rhs);
  CMatrix g(b.size(), b.size());
  for (std::size_t c = 0; c < b.size(); ++c)
    for (std::size_t r = 0; r < b.size(); ++r) g(r, c) = x(b[r], c);
  return {z, g, GreenMethod::direct};
}

GreenMatrix green_schur(const Matrix& h, std::span<const int> b, Complex z) {
  check_indices(h, b);
  const IndexSet q = complement_of(h.rows(), b);
  CMatrix bracket = take(h, b, b);
  bracket.diagonal().array() -= z;
  if (!q.empty()) {
    CMatrix inner = take(h, q, q);
    inner.diagonal().array() -= z;
    const CMatrix coupling = take(h, q, b);
    const auto lu = factor(inner, "complement block H_QQ - z");
    bracket -= coupling.transpose() * lu.solve(coupling);
  }
  const auto outer = factor(bracket, "Schur complement");
  return {z, outer.inverse(), GreenMethod::schur};
}

BoundaryValue boundary_value(const Matrix& h, std::span<const int> b, double e,
                             const BoundaryOptions& options) {
  check_indices(h, b);
  BoundaryValue out;
  out.energy = e;
  out.epsilons = options.epsilons.empty() ? dyadic_schedule() : options.epsilons;
  const auto& eps = out.epsilons;
  if (eps.size() < 3) throw SchemaError("epsilon schedule needs >= 3 points");
  for (std::size_t k = 0; k < eps.size(); ++k)
    if (!(eps[k] > 0.0) || (k > 0 && !(eps[k] < eps[k - 1])))
      throw SchemaError("epsilon schedule must be positive, strictly decreasing");

  // Spectral representation: G(E + i eps) = V_B diag(1/(l - E - i eps)) V_B^T.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw NumericalError("symmetric eigensolver did not converge");
  Matrix vb(static_cast<Eigen::Index>(b.size()), h.cols());
  for (std::size_t k = 0; k < b.size(); ++k)
    vb.row(k) = solver.eigenvectors().row(b[k]);
  const Vector& lambda = solver.eigenvalues();
  auto green_at = [&](double epsilon) {
    CVector weights(lambda.size());
    for (Eigen::Index j = 0; j < lambda.size(); ++j)
      weights(j) = 1.0 / (Complex(lambda(j) - e, -epsilon));
    return CMatrix(vb.cast<Complex>() * weights.asDiagonal() *
                   vb.transpose().cast<Complex>());
  };

  std::vector<CMatrix> g;
  std::vector<double> scaled_norm;
  for (double epsilon : eps) {
    g.push_back(green_at(epsilon));
    scaled_norm.push_back(epsilon * g.back().cwiseAbs().maxCoeff());
  }

  const auto window = static_cast<std::size_t>(
      std::clamp<int>(options.divergence_window, 1, static_cast<int>(eps.size())));
  out.divergence_detected =
      std::all_of(scaled_norm.end() - window, scaled_norm.end(),
                  [&](double v) { return v >= options.divergence_floor; });

  if (!out.divergence_detected) {
    auto extrapolate = [&](std::size_t k) {
      const double r = eps[k + 1] / eps[k];
      return CMatrix((g[k + 1] - r * g[k]) / (1.0 - r));
    };
    const std::size_t last = eps.size() - 2;
    const CMatrix a = extrapolate(last - 1);
    const CMatrix c = extrapolate(last);
    if ((c - a).cwiseAbs().maxCoeff() < options.abs_tol) {
      out.converged = true;
      out.g0 = c;
    }
  }
  return out;
}

KernelDims kernel_dim_check(const Matrix& h, std::span<const int> b,
                            double lambda, double e, double tol) {
  const BoundaryValue bv = boundary_value(h, b, e);
  if (!bv.converged)
    throw NumericalError("boundary value at E = " + std::to_string(e) +
                         " is not converged");
  KernelDims out;

  Matrix perturbed = h;
  for (int i : b) perturbed(i, i) += lambda;
  const Vector evals = eigenvalues_of(perturbed);
  for (Eigen::Index i = 0; i < evals.size(); ++i)
    if (std::abs(evals(i) - e) <= tol) ++out.perturbed;

  const auto m = static_cast<Eigen::Index>(b.size());
  const CMatrix a = CMatrix::Identity(m, m) + lambda * bv.g0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& sv = svd.singularValues();
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) <= tol) ++out.green;
  return out;
}

double herglotz_margin(const CMatrix& g) {
  const CMatrix im = (g - g.adjoint()) / Complex(0.0, 2.0);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(im, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double symmetry_defect(const CMatrix& g) {
  return (g - g.transpose()).cwiseAbs().maxCoeff();
}

namespace {
GreenMatrix evaluate(const Matrix& h, std::span<const int> b, Complex z,
                     GreenMethod method) {
  switch (method) {
    case GreenMethod::direct: return green_direct(h, b, z);
    case GreenMethod::schur: return green_schur(h, b, z);
    case GreenMethod::boundary_limit: break;
  }
  throw SchemaError("grid evaluation supports direct and schur only");
}
}  // namespace

std::vector<GreenMatrix> green_grid_serial(const Matrix& h,
                                           std::span<const int> b,
                                           std::span<const Complex> zs,
                                           GreenMethod method) {
  std::vector<GreenMatrix> out;
  out.reserve(zs.size());
  for (Complex z : zs) out.push_back(evaluate(h, b, z, method));
  return out;
}

std::vector<GreenMatrix> green_grid_parallel(const Matrix& h,
                                             std::span<const int> b,
                                             std::span<const Complex> zs,
                                             GreenMethod method, int threads) {
  std::vector<GreenMatrix> out(zs.size());
  std::vector<std::string> errors(zs.size());
  const auto count = static_cast<std::int64_t>(zs.size());
#pragma omp parallel for schedule(dynamic) num_threads(std::max(threads, 1))
  for (std::int64_t k = 0; k < count; ++k) {
    try {
      out[k] = evaluate(h, b, zs[k], method);
    } catch (const std::exception& ex) {
      errors[k] = ex.what();
    }
  }
  for (std::size_t k = 0; k < errors.size(); ++k)
    if (!errors[k].empty())
      throw NumericalError("z index " + std::to_string(k) + ": " + errors[k]);
  return out;
}

}  // namespace specmult
