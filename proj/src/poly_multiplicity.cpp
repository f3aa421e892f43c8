#include "specmult/poly_multiplicity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "specmult/error.hpp"

namespace specmult {

Poly::Poly(std::vector<Complex> ascending, double trim_tol)
    : coeffs_(std::move(ascending)) {
  while (!coeffs_.empty() && std::abs(coeffs_.back()) <= trim_tol)
    coeffs_.pop_back();
}

Poly Poly::from_roots(const std::vector<Complex>& roots, Complex leading) {
  std::vector<Complex> c{leading};
  for (Complex r : roots) {
    std::vector<Complex> next(c.size() + 1, Complex{});
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return Poly(std::move(c));
}

Poly Poly::monomial(int degree, Complex coeff) {
  std::vector<Complex> c(degree + 1, Complex{});
  c[degree] = coeff;
  return Poly(std::move(c));
}

Complex Poly::operator()(Complex x) const {
  Complex acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly Poly::derivative() const {
  if (degree() < 1) return {};
  std::vector<Complex> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i)
    d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Poly(std::move(d));
}

Poly Poly::monic() const {
  if (is_zero()) return {};
  std::vector<Complex> c = coeffs_;
  const Complex lead = c.back();
  for (auto& v : c) v /= lead;
  c.back() = 1.0;
  return Poly(std::move(c));
}

double Poly::max_norm() const {
  double m = 0.0;
  for (Complex v : coeffs_) m = std::max(m, std::abs(v));
  return m;
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Complex> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i)
    c[i] = a[static_cast<int>(i)] + b[static_cast<int>(i)];
  return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + Complex(-1.0) * b; }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Complex> c(a.coeffs_.size() + b.coeffs_.size() - 1, Complex{});
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
      c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Poly(std::move(c));
}

Poly operator*(Complex s, const Poly& a) {
  std::vector<Complex> c = a.coeffs_;
  for (auto& v : c) v *= s;
  return Poly(std::move(c));
}

Poly Poly::pow(int k) const {
  Poly out({Complex(1.0)});
  for (int i = 0; i < k; ++i) out = out * *this;
  return out;
}

std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw SchemaError("polynomial division by zero");
  const int da = a.degree();
  const int db = b.degree();
  if (da < db) return {Poly{}, a};
  std::vector<Complex> rem = a.coeffs();
  std::vector<Complex> quot(da - db + 1, Complex{});
  const Complex lead = b.leading();
  for (int k = da - db; k >= 0; --k) {
    const Complex q = rem[k + db] / lead;
    quot[k] = q;
    for (int j = 0; j <= db; ++j) rem[k + j] -= q * b[j];
    rem[k + db] = 0.0;
  }
  rem.resize(db);
  return {Poly(std::move(quot)), Poly(std::move(rem))};
}

std::string to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::granted: return "granted";
    case CertificateStatus::refused: return "refused";
    case CertificateStatus::inconclusive: return "inconclusive";
  }
  return "unknown";
}

Poly char_poly(const CMatrix& m) {
  if (m.rows() != m.cols()) throw SchemaError("char_poly: matrix not square");
  const auto n = static_cast<int>(m.rows());
  if (n > kCharPolyMaxDim)
    throw SchemaError("char_poly: dimension " + std::to_string(n) +
                      " exceeds the cap of " + std::to_string(kCharPolyMaxDim));
  // c holds det(xI - M), c[n] = 1.
  std::vector<Complex> c(n + 1, Complex{});
  c[n] = 1.0;
  CMatrix mk = CMatrix::Zero(n, n);
  const CMatrix id = CMatrix::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    mk = m * mk + c[n - k + 1] * id;
    c[n - k] = -(m * mk).trace() / static_cast<double>(k);
  }
  if (n % 2 == 1)
    for (auto& v : c) v = -v;
  return Poly(std::move(c));
}

Poly poly_gcd(const Poly& f, const Poly& g, double tol) {
  if (f.is_zero() || g.is_zero()) throw SchemaError("poly_gcd: zero operand");
  Poly a = f.monic();
  Poly b = g.monic();
  if (a.degree() < b.degree()) std::swap(a, b);
  while (b.degree() > 0) {
    const double scale = tol * std::max(1.0, a.max_norm());
    const Poly r = divmod(a, b).second.trimmed(scale);
    if (r.is_zero() || r.max_norm() <= scale) return b;
    a = std::move(b);
    b = r.monic();
  }
  return Poly({Complex(1.0)});
}

Poly squarefree_part(const Poly& f, double tol) {
  if (f.is_zero()) throw SchemaError("squarefree_part: zero polynomial");
  const Poly fm = f.monic();
  if (fm.degree() < 1) return fm;
  const Poly g = poly_gcd(fm, fm.derivative(), tol);
  auto [q, r] = divmod(fm, g);
  if (r.max_norm() > std::sqrt(tol) * std::max(1.0, fm.max_norm()))
    throw NumericalError("squarefree_part: F / gcd(F, F') leaves remainder " +
                         std::to_string(r.max_norm()) + " (ill-conditioned)");
  return q.monic();
}

MultiplicityCertificate remainder_test(const Poly& f, int k, double tol,
                                       double gcd_tol) {
  if (k < 1) throw SchemaError("remainder_test: K must be >= 1");
  if (f.is_zero()) throw SchemaError("remainder_test: zero polynomial");
  MultiplicityCertificate cert;
  cert.k = k;
  cert.gcd_tol = gcd_tol;
  cert.remainder_tol = tol;
  const Poly fm = f.monic();
  Poly ft;
  try {
    ft = squarefree_part(fm, gcd_tol);
  } catch (const NumericalError&) {
    cert.status = CertificateStatus::inconclusive;
    return cert;
  }

  const double norm = fm.max_norm();
  auto relative_remainder = [&](int kk) {
    const Poly power = ft.pow(kk);
    if (power.degree() > fm.degree()) return 1.0;
    return divmod(fm, power).second.max_norm() / norm;
  };

  for (int kk = 1; kk <= std::max(fm.degree(), 1); ++kk) {
    if (relative_remainder(kk) <= tol)
      cert.max_granted_k = kk;
    else
      break;
  }
  cert.remainder_norm = relative_remainder(k);
  cert.status = cert.remainder_norm <= tol ? CertificateStatus::granted
                                           : CertificateStatus::refused;
  return cert;
}

SylvesterMatrix sylvester_matrix(const Poly& f, const Poly& g) {
  const int m = f.degree();
  const int n = g.degree();
  if (m < 0 || n < 0) throw SchemaError("sylvester_matrix: zero polynomial");
  CMatrix s = CMatrix::Zero(m + n, m + n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s(i, i + j) = f[m - j];
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s(n + i, i + j) = g[n - j];
  return {s};
}

Complex resultant(const Poly& f, const Poly& g) {
  const auto s = sylvester_matrix(f, g).entries;
  if (s.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<CMatrix>(s).determinant();
}

Complex discriminant(const Poly& f) {
  const int n = f.degree();
  if (n < 2) throw SchemaError("discriminant needs degree >= 2");
  const double sign = ((n * (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
  return sign * resultant(f, f.derivative()) / f.leading();
}

std::vector<RootCluster> root_multiplicities(const Poly& f, double delta_root) {
  const int n = f.degree();
  if (n < 1) throw SchemaError("root_multiplicities needs degree >= 1");
  const Poly fm = f.monic();
  CMatrix companion = CMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -fm[i];
  Eigen::ComplexEigenSolver<CMatrix> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("companion eigensolver did not converge");
  const CVector roots = solver.eigenvalues();

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(roots(i) - roots(j)) <= delta_root)
        parent[find(i)] = find(j);

  std::vector<RootCluster> out;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(out.size());
      out.push_back({Complex{}, 0});
    }
    auto& c = out[slot[r]];
    c.root += roots(i);
    ++c.multiplicity;
  }
  for (auto& c : out) c.root /= static_cast<double>(c.multiplicity);
  std::sort(out.begin(), out.end(), [](const RootCluster& a, const RootCluster& b) {
    return a.root.real() != b.root.real() ? a.root.real() < b.root.real()
                                          : a.root.imag() < b.root.imag();
  });
  return out;
}

int min_multiplicity(const std::vector<RootCluster>& clusters) {
  int m = 0;
  for (const auto& c : clusters)
    m = m == 0 ? c.multiplicity : std::min(m, c.multiplicity);
  return m;
}

}  // namespace specmult
