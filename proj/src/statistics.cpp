#include "specmult/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "specmult/error.hpp"
#include "specmult/spectral_core.hpp"

namespace specmult {

void EnsembleSpec::validate() const {
  if (realizations < 1) throw SchemaError("ensemble needs >= 1 realization");
  if (regions.empty()) throw SchemaError("ensemble needs >= 1 region");
  std::vector<char> used(model.scheme.size(), 0);
  for (const auto& region : regions) {
    if (region.empty()) throw SchemaError("empty region");
    for (int n : region) {
      if (n < 0 || n >= model.scheme.size())
        throw SchemaError("region block id " + std::to_string(n) +
                          " out of range");
      if (used[n]++) throw SchemaError("regions are not disjoint");
    }
  }
}

std::vector<std::vector<int>> consecutive_regions(const ProjectionScheme& scheme,
                                                  int blocks_per_region) {
  if (blocks_per_region < 1) throw SchemaError("region size must be >= 1");
  std::vector<std::vector<int>> out;
  for (int start = 0; start + blocks_per_region <= scheme.size();
       start += blocks_per_region) {
    std::vector<int> region(blocks_per_region);
    for (int i = 0; i < blocks_per_region; ++i) region[i] = start + i;
    out.push_back(std::move(region));
  }
  return out;
}

std::vector<std::vector<int>> whole_volume(const ProjectionScheme& scheme) {
  return consecutive_regions(scheme, scheme.size());
}

namespace {

struct PreparedEnsemble {
  std::vector<IndexSet> coords;
  std::vector<Matrix> h0_regions;
  /// owning block of each region coordinate
  std::vector<std::vector<int>> owners;
};

PreparedEnsemble prepare(const EnsembleSpec& spec) {
  spec.validate();
  const Matrix h0 = build_h0(spec.model.lattice);
  if (h0.rows() != spec.model.scheme.dimension())
    throw SchemaError("model lattice and projection scheme disagree on size");
  PreparedEnsemble p;
  for (const auto& region : spec.regions) {
    IndexSet coords = spec.model.scheme.coordinates(region);
    std::vector<int> owners;
    for (int i : coords) owners.push_back(spec.model.scheme.owner()[i]);
    p.h0_regions.push_back(restrict_to(h0, coords));
    p.coords.push_back(std::move(coords));
    p.owners.push_back(std::move(owners));
  }
  return p;
}

EnsembleResult empty_result(const EnsembleSpec& spec, const PreparedEnsemble& p) {
  EnsembleResult r;
  r.master_seed = spec.master_seed;
  r.realizations.resize(spec.realizations);
  for (std::size_t k = 0; k < spec.regions.size(); ++k) {
    r.region_ranks.push_back(static_cast<int>(p.coords[k].size()));
    r.region_blocks.push_back(static_cast<int>(spec.regions[k].size()));
  }
  return r;
}

// One realization: restrict(assemble(H0, scheme, omega), B_k) for every k,
// built directly from the restricted H0 since the couplings are diagonal.
RealizationSpectra realize(const EnsembleSpec& spec, const PreparedEnsemble& p,
                           std::uint64_t index) {
  RealizationSpectra out;
  out.index = index;
  out.regions.resize(spec.regions.size());
  std::vector<double> omega(spec.model.scheme.size(), 0.0);
  for (const auto& region : spec.regions)
    for (int n : region)
      omega[n] = draw(spec.model.disorder, spec.master_seed, index, n);
  for (std::size_t k = 0; k < spec.regions.size(); ++k) {
    Matrix h = p.h0_regions[k];
    for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) += omega[p.owners[k][i]];
    const Vector ev = eigenvalues_of(h);
    out.regions[k].assign(ev.data(), ev.data() + ev.size());
  }
  return out;
}

}  // namespace

EnsembleResult run_ensemble_serial(const EnsembleSpec& spec) {
  const PreparedEnsemble p = prepare(spec);
  EnsembleResult r = empty_result(spec, p);
  for (int i = 0; i < spec.realizations; ++i) {
    try {
      r.realizations[i] = realize(spec, p, static_cast<std::uint64_t>(i));
    } catch (const NumericalError& ex) {
      throw NumericalError("realization " + std::to_string(i) + ": " + ex.what());
    }
  }
  return r;
}

EnsembleResult run_ensemble_parallel(const EnsembleSpec& spec, int threads) {
  const PreparedEnsemble p = prepare(spec);
  EnsembleResult r = empty_result(spec, p);
  std::vector<std::string> errors(spec.realizations);
#pragma omp parallel for schedule(dynamic) num_threads(std::max(threads, 1))
  for (int i = 0; i < spec.realizations; ++i) {
    try {
      r.realizations[i] = realize(spec, p, static_cast<std::uint64_t>(i));
    } catch (const std::exception& ex) {
      errors[i] = ex.what();
    }
  }
  for (int i = 0; i < spec.realizations; ++i)
    if (!errors[i].empty())
      throw NumericalError("realization " + std::to_string(i) + ": " + errors[i]);
  return r;
}

EnsembleResult run_ensemble(const EnsembleSpec& spec, int threads) {
  return threads <= 1 ? run_ensemble_serial(spec)
                      : run_ensemble_parallel(spec, threads);
}

CountTable count_table(const EnsembleResult& result, Interval interval) {
  CountTable table;
  table.reserve(result.realizations.size());
  for (const auto& real : result.realizations) {
    std::vector<int> row;
    row.reserve(real.regions.size());
    for (const auto& ev : real.regions)
      row.push_back(count_in_interval(ev, interval).eta);
    table.push_back(std::move(row));
  }
  return table;
}

CountDistribution CountDistribution::from_samples(const std::vector<int>& samples,
                                                  bool summed) {
  CountDistribution d;
  d.summed = summed;
  d.sample_size = samples.size();
  if (samples.empty()) throw SchemaError("count distribution of an empty sample");
  const int top = *std::max_element(samples.begin(), samples.end());
  std::vector<std::size_t> hist(top + 1, 0);
  for (int s : samples) ++hist.at(s);
  const auto n = static_cast<double>(samples.size());
  d.pmf.resize(hist.size());
  for (std::size_t k = 0; k < hist.size(); ++k) {
    d.pmf[k] = static_cast<double>(hist[k]) / n;
    d.mean += static_cast<double>(k) * static_cast<double>(hist[k]);
  }
  d.mean /= n;
  for (std::size_t k = 0; k < hist.size(); ++k) {
    const double dev = static_cast<double>(k) - d.mean;
    d.variance += dev * dev * static_cast<double>(hist[k]);
  }
  d.variance /= n;
  return d;
}

CountDistribution count_distribution(const EnsembleResult& result,
                                     Interval interval, bool summed) {
  const CountTable table = count_table(result, interval);
  std::vector<int> samples;
  for (const auto& row : table) {
    if (summed) {
      int total = 0;
      for (int c : row) total += c;
      samples.push_back(total);
    } else {
      samples.insert(samples.end(), row.begin(), row.end());
    }
  }
  return CountDistribution::from_samples(samples, summed);
}

double poisson_pmf(int k, double lambda) {
  if (lambda <= 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

PoissonFit poisson_fit(const CountDistribution& dist) {
  PoissonFit fit;
  fit.lambda_hat = dist.mean;
  fit.one_point_mass = dist.pmf.size() > 1 ? dist.pmf[1] : 0.0;
  double tv = 0.0;
  double empirical_head = 0.0;
  double model_head = 0.0;
  for (int k = 0; k <= kPoissonSupport; ++k) {
    const double e = k < static_cast<int>(dist.pmf.size()) ? dist.pmf[k] : 0.0;
    const double m = poisson_pmf(k, fit.lambda_hat);
    tv += std::abs(e - m);
    empirical_head += e;
    model_head += m;
  }
  tv += std::abs((1.0 - empirical_head) - (1.0 - model_head));
  fit.tv_distance = 0.5 * tv;
  return fit;
}

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials,
                               double z) {
  if (successes > trials)
    throw SchemaError("wilson_interval: more successes than trials");
  // no data: the vacuous interval
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, std::min(center - half, p)),
          std::min(1.0, std::max(center + half, p))};
}

MinamiEstimate estimate_minami(const EnsembleResult& result, Interval j, int k,
                               double a, double b) {
  if (!(j.width() > 0.0)) throw SchemaError("Minami estimate needs |J| > 0");
  if (k < 0) throw SchemaError("Minami estimate needs K >= 0");
  if (result.realizations.empty())
    throw SchemaError("Minami estimate needs >= 1 realization");
  const int blocks = result.region_blocks.front();
  for (int c : result.region_blocks)
    if (c != blocks) throw SchemaError("Minami estimate needs equal-size regions");

  MinamiEstimate est;
  est.k = k;
  est.a = a;
  est.b = b;
  est.block_count = blocks;
  est.interval_width = j.width();
  for (const auto& row : count_table(result, j))
    for (int c : row) {
      ++est.samples;
      if (c >= k + 1) ++est.hits;
    }
  est.p_hat = static_cast<double>(est.hits) / static_cast<double>(est.samples);
  est.ci = wilson_interval(est.hits, est.samples);
  const double scale =
      std::pow(static_cast<double>(blocks), a) * std::pow(j.width(), 1.0 + b);
  est.ratio = est.p_hat / scale;
  est.ratio_upper = est.ci.upper / scale;
  return est;
}

NegligibilityReport negligibility_check(const EnsembleResult& result,
                                        Interval interval) {
  NegligibilityReport rep;
  const std::size_t regions = result.region_ranks.size();
  rep.per_region.assign(regions, 0.0);
  if (result.realizations.empty() || !(interval.width() > 0.0)) return rep;
  const CountTable table = count_table(result, interval);
  for (const auto& row : table)
    for (std::size_t k = 0; k < regions; ++k)
      if (row[k] >= 1) rep.per_region[k] += 1.0;
  for (auto& v : rep.per_region) {
    v /= static_cast<double>(table.size());
    rep.max_probability = std::max(rep.max_probability, v);
  }
  return rep;
}

}  // namespace specmult
