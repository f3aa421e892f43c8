#pragma once

// Finite-volume Anderson-type operators H = H0 + sum_n omega_n P_n with
// coordinate-block projections P_n.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "specmult/types.hpp"

namespace specmult {

enum class Boundary { dirichlet, periodic };

struct Chain {
  int length = 2;
};

/// d-dimensional box, row-major site ordering.
struct Box {
  std::vector<int> extents;
};

/// L columns times M layers. Layer m only hops along its own chain with
/// coefficient hoppings[m]. Site (n, m) has index m * L + n.
struct LayeredChain {
  int length = 2;
  std::vector<double> hoppings;

  int layers() const { return static_cast<int>(hoppings.size()); }
  int site(int column, int layer) const { return layer * length + column; }
};

struct LatticeSpec {
  std::variant<Chain, Box, LayeredChain> geometry;
  Boundary boundary = Boundary::dirichlet;
  /// Hopping coefficient for chain and box geometries.
  double hopping = 1.0;
  /// Optional on-site term repeated along the site index, e.g. {1, 0} for
  /// diag(1, 0, 1, 0, ...). Empty means no on-site term.
  std::vector<double> onsite_pattern;

  int site_count() const;
  /// Number of "columns": sites for chain/box, L for the layered chain.
  int column_count() const;
  void validate() const;
};

/// Partition of {0..N-1} into disjoint, nonempty blocks; P_n projects onto
/// the coordinates of block n.
class ProjectionScheme {
 public:
  ProjectionScheme() = default;
  /// Validates that the blocks partition {0..dimension-1}.
  ProjectionScheme(std::vector<IndexSet> blocks, int dimension);

  /// Groups of k consecutive columns; for a layered chain each group spans
  /// all layers.
  static ProjectionScheme rank_k_columns(const LatticeSpec& lattice, int k);

  int size() const { return static_cast<int>(blocks_.size()); }
  int dimension() const { return dimension_; }
  const IndexSet& block(int n) const { return blocks_.at(n); }
  const std::vector<IndexSet>& blocks() const { return blocks_; }
  int rank(int n) const { return static_cast<int>(blocks_.at(n).size()); }

  /// Sorted coordinates of the union of the given blocks.
  IndexSet coordinates(const std::vector<int>& block_ids) const;
  /// Block ids whose union is exactly `coords`; throws SchemaError when
  /// `coords` is not a union of blocks.
  std::vector<int> blocks_covering(const IndexSet& coords) const;
  /// Block id owning each coordinate.
  const std::vector<int>& owner() const { return owner_; }

 private:
  std::vector<IndexSet> blocks_;
  std::vector<int> owner_;
  int dimension_ = 0;
};

struct Gaussian {
  double mean = 0.0;
  double sigma = 1.0;
};
struct Cauchy {
  double location = 0.0;
  double scale = 1.0;
};
/// Compact support; only meaningful for reproducing the counterexample.
struct Uniform {
  double lower = 0.0;
  double upper = 1.0;
};

struct DisorderSpec {
  std::variant<Gaussian, Cauchy, Uniform> distribution = Gaussian{};

  /// True iff the single-site density is positive on all of R.
  bool support_full_real() const {
    return !std::holds_alternative<Uniform>(distribution);
  }
  std::string family() const;
  void validate() const;
};

struct HamiltonianSample {
  Matrix matrix;
  std::vector<double> omega;
  std::uint64_t master_seed = 0;
  std::uint64_t realization_index = 0;
};

/// Orthogonal U with constant first row 1/sqrt(b).
struct AveragingOrthogonal {
  Matrix u;
};

/// Pieces of H = background + mean_coupling * P_B for a union B of blocks.
struct SampleDecomposition {
  Matrix background;
  /// w_1 / sqrt(|B|): the average coupling over B.
  double mean_coupling = 0.0;
  /// Coordinates spanned by P_B.
  IndexSet support;
  /// Rotated couplings w = U omega_B.
  std::vector<double> rotated;

  Matrix projector(int dimension) const;
};

/// A complete model: lattice, projections and disorder law.
struct ModelSpec {
  std::string name;
  LatticeSpec lattice;
  ProjectionScheme scheme;
  DisorderSpec disorder;
};

Matrix build_h0(const LatticeSpec& lattice);

HamiltonianSample assemble(const Matrix& h0, const ProjectionScheme& scheme,
                           const std::vector<double>& omega,
                           std::uint64_t master_seed = 0,
                           std::uint64_t realization_index = 0);

/// Couplings for every block; block n draws from the stream keyed by
/// (master_seed, realization_index, n).
std::vector<double> sample_disorder(const DisorderSpec& spec,
                                    const ProjectionScheme& scheme,
                                    std::uint64_t master_seed,
                                    std::uint64_t realization_index);

double draw(const DisorderSpec& spec, std::uint64_t master_seed,
            std::uint64_t realization_index, std::uint64_t block);

AveragingOrthogonal build_averaging_orthogonal(int b);

SampleDecomposition decompose_sample(const HamiltonianSample& sample,
                                     const ProjectionScheme& scheme,
                                     const std::vector<int>& block_ids);

HamiltonianSample sample_model(const ModelSpec& model, const Matrix& h0,
                               std::uint64_t master_seed,
                               std::uint64_t realization_index);

namespace models {

/// Five layers with hoppings (1,1,2,2,2), one uniform[0,1] coupling per
/// column shared by all layers.
ModelSpec remark_stacked_5(int length = 60);
/// H0 = diag(1,0,1,0,...), blocks {2n, 2n+1}, gaussian couplings.
ModelSpec trivial_minami(int sites = 100, double sigma = 1.0);
/// Rank-one Anderson chain with uniform couplings on [-w/2, w/2].
ModelSpec anderson_1d_rank1(int length = 500, double width = 10.0);
/// M identical unit-hopping layers sharing gaussian column couplings.
ModelSpec stacked_identical(int length, int layers, double sigma = 3.0);

/// Looks up "remark-stacked-5", "trivial-minami", "anderson-1d-rank1",
/// "stacked-3". length <= 0 keeps the default.
ModelSpec builtin(const std::string& name, int length = 0);

}  // namespace models

}  // namespace specmult
