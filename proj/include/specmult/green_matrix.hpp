#pragma once

#include <span>
#include <string>
#include <vector>

#include "specmult/types.hpp"

namespace specmult {

enum class GreenMethod { direct, schur, boundary_limit };

std::string to_string(GreenMethod m);

/// G_B(z) = P_B (H - z)^{-1} P_B as a |B| x |B| matrix.
struct GreenMatrix {
  Complex z;
  CMatrix g;
  GreenMethod method = GreenMethod::direct;
};

enum class BoundaryStatus { converged, divergent, inconclusive };

struct BoundaryValue {
  double energy = 0.0;
  /// Estimate of G(E + i0); meaningful only when converged.
  CMatrix g0;
  std::vector<double> epsilons;
  bool converged = false;
  bool divergence_detected = false;

  BoundaryStatus status() const {
    if (converged) return BoundaryStatus::converged;
    if (divergence_detected) return BoundaryStatus::divergent;
    return BoundaryStatus::inconclusive;
  }
};

struct BoundaryOptions {
  /// Strictly decreasing. Empty selects 2^-k, k = 4..24.
  std::vector<double> epsilons;
  double abs_tol = 1e-8;
  /// eps * ||G(E + i eps)||_max at or above this over the last
  /// `divergence_window` points flags a pole.
  double divergence_floor = 0.1;
  int divergence_window = 5;
};

std::vector<double> dyadic_schedule(int first = 4, int last = 24);

/// Column-wise solve of (H - z) x = e_i, i in B, restricted to B.
GreenMatrix green_direct(const Matrix& h, std::span<const int> b, Complex z);

/// [H_BB - z - H_BQ (H_QQ - z)^{-1} H_QB]^{-1}, Q the complement of B.
/// For B a union of projection blocks the coupling H_BQ is the hopping part
/// of H0, since the random part is block diagonal.
GreenMatrix green_schur(const Matrix& h, std::span<const int> b, Complex z);

/// Follows G(E + i eps) down the schedule. Convergence is judged on the
/// Richardson-extrapolated sequence 2 G(eps/2) - G(eps), whose error is
/// O(eps^2) off the spectrum.
BoundaryValue boundary_value(const Matrix& h, std::span<const int> b, double e,
                             const BoundaryOptions& options = {});

struct KernelDims {
  /// dim ker(H + lambda P_B - E)
  int perturbed = 0;
  /// dim ker(I + lambda G(E + i0))
  int green = 0;
};

/// Both sides of the kernel bijection at a converged boundary point.
/// Throws NumericalError when the boundary value is not converged.
KernelDims kernel_dim_check(const Matrix& h, std::span<const int> b,
                            double lambda, double e, double tol = 1e-7);

/// Smallest eigenvalue of the Hermitian part (G - G^*) / (2i).
double herglotz_margin(const CMatrix& g);

/// ||G - G^T||_max.
double symmetry_defect(const CMatrix& g);

/// Direct and Schur evaluations over a grid of z. The serial variant is the
/// reference; the parallel one distributes grid points over OpenMP threads
/// and returns the same values in the same order.
std::vector<GreenMatrix> green_grid_serial(const Matrix& h,
                                           std::span<const int> b,
                                           std::span<const Complex> zs,
                                           GreenMethod method);
std::vector<GreenMatrix> green_grid_parallel(const Matrix& h,
                                             std::span<const int> b,
                                             std::span<const Complex> zs,
                                             GreenMethod method, int threads);

}  // namespace specmult
