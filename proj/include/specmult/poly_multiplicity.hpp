#pragma once

#include <string>
#include <utility>
#include <vector>

#include "specmult/types.hpp"

namespace specmult {

/// Complex polynomial, coefficients in ascending degree. Trailing
/// coefficients with modulus <= trim tolerance are dropped on construction;
/// the zero polynomial has no coefficients and degree -1.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Complex> ascending, double trim_tol = 0.0);

  static Poly from_roots(const std::vector<Complex>& roots,
                         Complex leading = 1.0);
  static Poly monomial(int degree, Complex coeff = 1.0);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex operator[](int i) const {
    return i >= 0 && i <= degree() ? coeffs_[i] : Complex{};
  }
  Complex leading() const { return coeffs_.back(); }

  Complex operator()(Complex x) const;
  Poly derivative() const;
  Poly monic() const;
  double max_norm() const;
  Poly trimmed(double tol) const { return Poly(coeffs_, tol); }

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Complex s, const Poly& a);

  Poly pow(int k) const;

 private:
  std::vector<Complex> coeffs_;
};

/// Quotient and remainder of a / b (b nonzero).
std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);

enum class CertificateMethod { gcd_remainder, root_cluster };
enum class CertificateStatus { granted, refused, inconclusive };

std::string to_string(CertificateStatus s);

struct MultiplicityCertificate {
  /// Multiplicity bound tested.
  int k = 1;
  CertificateStatus status = CertificateStatus::inconclusive;
  /// ||F mod Ftilde^k||_max / ||F||_max.
  double remainder_norm = 0.0;
  /// Largest k in 1..deg F whose certificate is granted (0 if none).
  int max_granted_k = 0;
  CertificateMethod method = CertificateMethod::gcd_remainder;
  double gcd_tol = 0.0;
  double remainder_tol = 0.0;

  bool granted() const { return status == CertificateStatus::granted; }
};

struct SylvesterMatrix {
  CMatrix entries;
};

struct RootCluster {
  Complex root;
  int multiplicity = 0;
};

inline constexpr int kCharPolyMaxDim = 12;
inline constexpr double kDefaultGcdTol = 1e-7;
inline constexpr double kDefaultRemainderTol = 1e-6;
/// |discriminant| at or below this is read as "has a repeated root". Sized
/// for monic polynomials with roots in |x| <= 1.5 and degree <= 8.
inline constexpr double kDefaultDiscriminantTol = 1e-5;

/// det(M - xI) by the Faddeev-LeVerrier recurrence; leading coefficient
/// (-1)^dim. Dimension is capped at kCharPolyMaxDim.
Poly char_poly(const CMatrix& m);

/// Monic approximate gcd by the Euclidean remainder sequence. A remainder is
/// declared zero when its max-norm is <= tol * max(1, ||dividend||_max),
/// every operand being monic.
Poly poly_gcd(const Poly& f, const Poly& g, double tol = kDefaultGcdTol);

/// Monic F / gcd(F, F'). Throws NumericalError if the division leaves a
/// remainder above sqrt(tol) relative to ||F||.
Poly squarefree_part(const Poly& f, double tol = kDefaultGcdTol);

/// Tests F mod Ftilde^k == 0, i.e. every root of F has multiplicity >= k.
MultiplicityCertificate remainder_test(const Poly& f, int k,
                                       double tol = kDefaultRemainderTol,
                                       double gcd_tol = kDefaultGcdTol);

/// Rows 0..n-1 carry shifted copies of f (degree m), rows n..m+n-1 shifted
/// copies of g (degree n); coefficients in descending order.
SylvesterMatrix sylvester_matrix(const Poly& f, const Poly& g);
Complex resultant(const Poly& f, const Poly& g);

/// (-1)^{n(n-1)/2} Res(F, F') / a_n = a_n^{2n-2} prod_{i<j} (r_i - r_j)^2.
Complex discriminant(const Poly& f);

/// Roots from the companion-matrix eigenvalues, grouped by single-linkage at
/// radius delta_root.
std::vector<RootCluster> root_multiplicities(const Poly& f,
                                             double delta_root = 1e-2);

int min_multiplicity(const std::vector<RootCluster>& clusters);

}  // namespace specmult
