#pragma once

#include <cstdint>
#include <vector>

#include "specmult/operator_models.hpp"
#include "specmult/types.hpp"

namespace specmult {

struct EnsembleSpec {
  ModelSpec model;
  int realizations = 1;
  std::uint64_t master_seed = 0;
  /// Disjoint restriction regions B_k, each a list of scheme block ids.
  std::vector<std::vector<int>> regions;

  void validate() const;
};

/// Regions of `blocks_per_region` consecutive scheme blocks; trailing blocks
/// that do not fill a region are left out.
std::vector<std::vector<int>> consecutive_regions(const ProjectionScheme& scheme,
                                                  int blocks_per_region);
/// A single region holding every block, i.e. the full finite-volume operator.
std::vector<std::vector<int>> whole_volume(const ProjectionScheme& scheme);

struct RealizationSpectra {
  std::uint64_t index = 0;
  /// Ascending eigenvalues of H restricted to each region.
  std::vector<std::vector<double>> regions;
};

struct EnsembleResult {
  std::uint64_t master_seed = 0;
  std::vector<RealizationSpectra> realizations;
  /// sum of rank(P_n) over each region.
  std::vector<int> region_ranks;
  /// number of scheme blocks in each region (|B| in the Minami bound).
  std::vector<int> region_blocks;
};

/// Reference kernel: realizations in index order on the calling thread.
EnsembleResult run_ensemble_serial(const EnsembleSpec& spec);
/// OpenMP kernel. Realization i always uses disorder substream i and writes
/// slot i, so the result equals the serial one bit for bit.
EnsembleResult run_ensemble_parallel(const EnsembleSpec& spec, int threads);
/// Serial when threads <= 1.
EnsembleResult run_ensemble(const EnsembleSpec& spec, int threads);

/// counts[r][k] = eta_{B_k, I} in realization r.
using CountTable = std::vector<std::vector<int>>;
CountTable count_table(const EnsembleResult& result, Interval interval);

struct CountDistribution {
  std::vector<double> pmf;
  std::size_t sample_size = 0;
  double mean = 0.0;
  double variance = 0.0;
  bool summed = false;

  static CountDistribution from_samples(const std::vector<int>& samples,
                                        bool summed);
};

/// Per-block mode pools every (realization, region) count; summed mode uses
/// one sample per realization, the sum over regions.
CountDistribution count_distribution(const EnsembleResult& result,
                                     Interval interval, bool summed);

struct PoissonFit {
  double lambda_hat = 0.0;
  double tv_distance = 0.0;
  double one_point_mass = 0.0;
};

/// Counts above this are lumped into one tail bin for the TV distance.
inline constexpr int kPoissonSupport = 20;

PoissonFit poisson_fit(const CountDistribution& dist);

double poisson_pmf(int k, double lambda);

struct WilsonInterval {
  double lower = 0.0;
  double upper = 0.0;
};

/// Wilson score interval; z = 1.96 gives 95%.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials,
                               double z = 1.96);

struct MinamiEstimate {
  double p_hat = 0.0;
  double ratio = 0.0;
  /// ratio evaluated at the Wilson upper bound of p_hat.
  double ratio_upper = 0.0;
  WilsonInterval ci;
  std::size_t samples = 0;
  std::size_t hits = 0;
  int k = 1;
  double a = 2.0;
  double b = 1.0;
  int block_count = 0;
  double interval_width = 0.0;
};

/// P(eta_{B,J} >= K + 1) over every (realization, region) pair; all regions
/// must hold the same number of blocks |B|.
/// ratio = p_hat / (|B|^a |J|^{1+b}).
MinamiEstimate estimate_minami(const EnsembleResult& result, Interval j,
                               int k = 1, double a = 2.0, double b = 1.0);

struct NegligibilityReport {
  /// max_k P(eta_k >= 1).
  double max_probability = 0.0;
  std::vector<double> per_region;
};

NegligibilityReport negligibility_check(const EnsembleResult& result,
                                        Interval interval);

}  // namespace specmult
