#include "specmult/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "specmult/csv.hpp"
#include "specmult/error.hpp"
#include "specmult/green_matrix.hpp"

namespace specmult {

using nlohmann::json;

namespace {

ArtifactHeader header_for(const ExperimentConfig& c, const std::string& kind) {
  return {kind, c.master_seed, c.hash()};
}

json base_summary(const ExperimentConfig& c) {
  return {{"schema_version", kSchemaVersion},
          {"experiment", to_string(c.kind)},
          {"master_seed", c.master_seed},
          {"config_hash", c.hash()},
          {"config", c.to_json()},
          {"model",
           {{"name", c.model.name},
            {"sites", c.model.lattice.site_count()},
            {"blocks", c.model.scheme.size()},
            {"disorder", c.model.disorder.family()},
            {"support_full_real", c.model.disorder.support_full_real()}}}};
}

EnsembleSpec ensemble_for(const ExperimentConfig& c, int region_blocks) {
  EnsembleSpec spec;
  spec.model = c.model;
  spec.realizations = c.realizations;
  spec.master_seed = c.master_seed;
  spec.regions = region_blocks > 0
                     ? consecutive_regions(c.model.scheme, region_blocks)
                     : whole_volume(c.model.scheme);
  return spec;
}

ExperimentOutput run_multiplicity(const ExperimentConfig& c, int threads) {
  const EnsembleResult result = run_ensemble(ensemble_for(c, c.region_blocks), threads);
  const auto reports = multiplicity_reports(result, c.cluster_delta_rel);

  ExperimentOutput out;
  out.files.emplace_back("multiplicity.csv",
                         multiplicity_csv(header_for(c, "multiplicity"), reports));
  out.summary = base_summary(c);
  json intervals = json::array();
  for (const auto& iv : c.intervals) {
    int lo = std::numeric_limits<int>::max();
    int hi = 0;
    std::size_t clusters = 0;
    for (const auto& [index, rep] : reports)
      for (const auto& cl : rep.within(iv.lower, iv.upper)) {
        lo = std::min(lo, cl.count);
        hi = std::max(hi, cl.count);
        ++clusters;
      }
    intervals.push_back({{"lower", iv.lower},
                         {"upper", iv.upper},
                         {"clusters", clusters},
                         {"min_count", clusters ? lo : 0},
                         {"max_count", hi}});
  }
  out.summary["intervals"] = intervals;
  out.summary["realizations"] = c.realizations;
  out.summary["cluster_delta_rel"] = c.cluster_delta_rel;
  if (c.kind == ExperimentKind::counterexample && intervals.size() >= 2) {
    const auto& top = intervals[0];
    const auto& mid = intervals[1];
    out.summary["upper_interval_exactly_three"] =
        top["clusters"].get<std::size_t>() > 0 && top["min_count"] == 3 &&
        top["max_count"] == 3;
    out.summary["middle_interval_at_least_two"] =
        mid["clusters"].get<std::size_t>() > 0 && mid["min_count"].get<int>() >= 2;
  }
  return out;
}

ExperimentOutput run_stats(const ExperimentConfig& c, int threads) {
  const int region_blocks = c.region_blocks > 0 ? c.region_blocks : 10;
  const EnsembleResult result = run_ensemble(ensemble_for(c, region_blocks), threads);
  const Interval window = Interval::centered(c.energy, stats_half_width(c));
  const CountTable table = count_table(result, window);
  const CountDistribution summed = count_distribution(result, window, true);
  const CountDistribution per_block = count_distribution(result, window, false);
  const PoissonFit fit = poisson_fit(summed);
  const NegligibilityReport neg = negligibility_check(result, window);

  int common_divisor = 0;
  for (const auto& row : table)
    for (int v : row) common_divisor = std::gcd(common_divisor, v);

  ExperimentOutput out;
  out.files.emplace_back("counts.csv", counts_csv(header_for(c, "counts"), table));
  out.files.emplace_back("pmf.csv", pmf_csv(header_for(c, "summed-pmf"), summed, fit));
  out.summary = base_summary(c);
  out.summary["window"] = {{"energy", c.energy},
                           {"half_width", stats_half_width(c)},
                           {"lower", window.lower},
                           {"upper", window.upper}};
  out.summary["regions"] = result.region_ranks.size();
  out.summary["summed"] = {{"mean", summed.mean},
                           {"variance", summed.variance},
                           {"samples", summed.sample_size},
                           {"lambda_hat", fit.lambda_hat},
                           {"tv_distance", fit.tv_distance},
                           {"one_point_mass", fit.one_point_mass}};
  out.summary["per_block"] = {{"mean", per_block.mean},
                              {"variance", per_block.variance},
                              {"samples", per_block.sample_size}};
  out.summary["negligibility_max"] = neg.max_probability;
  out.summary["count_gcd"] = common_divisor;
  return out;
}

ExperimentOutput run_minami(const ExperimentConfig& c, int threads) {
  std::vector<MinamiEstimate> rows;
  for (int size : c.block_sizes) {
    const EnsembleResult result = run_ensemble(ensemble_for(c, size), threads);
    for (double width : c.interval_widths)
      rows.push_back(estimate_minami(result, Interval::centered(c.energy, 0.5 * width),
                                     c.minami_k, c.minami_a, c.minami_b));
  }
  ExperimentOutput out;
  out.files.emplace_back("minami.csv", minami_csv(header_for(c, "minami"), rows));
  out.summary = base_summary(c);
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, r.ratio_upper);
  out.summary["max_ratio_upper"] = worst;
  out.summary["rows"] = rows.size();
  return out;
}

ExperimentOutput run_green_check(const ExperimentConfig& c, int threads) {
  const Matrix h0 = build_h0(c.model.lattice);
  const IndexSet b = c.model.scheme.coordinates(c.region);
  const auto zs = c.z_grid.points();
  std::vector<GreenMatrix> all;
  double worst_rel = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double worst_symmetry = 0.0;
  for (int r = 0; r < c.realizations; ++r) {
    const auto sample = sample_model(c.model, h0, c.master_seed, r);
    const auto direct = green_grid_parallel(sample.matrix, b, zs, GreenMethod::direct, threads);
    const auto schur = green_grid_parallel(sample.matrix, b, zs, GreenMethod::schur, threads);
    for (std::size_t k = 0; k < zs.size(); ++k) {
      const double gmax = direct[k].g.cwiseAbs().maxCoeff();
      worst_rel = std::max(worst_rel, (schur[k].g - direct[k].g).cwiseAbs().maxCoeff() /
                                          (1.0 + gmax));
      worst_margin = std::min(worst_margin, herglotz_margin(direct[k].g));
      worst_symmetry = std::max(worst_symmetry, symmetry_defect(direct[k].g));
    }
    if (r == 0) {
      all.insert(all.end(), direct.begin(), direct.end());
      all.insert(all.end(), schur.begin(), schur.end());
    }
  }
  ExperimentOutput out;
  out.files.emplace_back("green_grid.csv", green_grid_csv(header_for(c, "green-grid"), all));
  out.summary = base_summary(c);
  out.summary["max_relative_discrepancy"] = worst_rel;
  out.summary["min_herglotz_margin"] = worst_margin;
  out.summary["max_symmetry_defect"] = worst_symmetry;
  out.summary["schur_agrees"] = worst_rel <= c.schur_tol;
  out.summary["herglotz_holds"] = worst_margin >= -c.herglotz_tol;
  return out;
}

// Energy inside the spectral hull, furthest from the spectrum.
double widest_gap_midpoint(const Vector& evals) {
  double best = evals(0) - 1.0;
  double width = 0.0;
  for (Eigen::Index i = 1; i < evals.size(); ++i)
    if (evals(i) - evals(i - 1) > width) {
      width = evals(i) - evals(i - 1);
      best = 0.5 * (evals(i) + evals(i - 1));
    }
  return best;
}

ExperimentOutput run_kernel_check(const ExperimentConfig& c, int) {
  const Matrix h0 = build_h0(c.model.lattice);
  const IndexSet b = c.model.scheme.coordinates(c.region);
  std::string csv = header_lines(header_for(c, "kernel-check"));
  csv += "realization,energy,lambda,expected,d_perturbed,d_green\n";
  std::size_t agree = 0;
  std::size_t total = 0;
  for (int r = 0; r < c.realizations; ++r) {
    const auto sample = sample_model(c.model, h0, c.master_seed, r);
    const double e = widest_gap_midpoint(eigenvalues_of(sample.matrix));
    const BoundaryValue bv = boundary_value(sample.matrix, b, e);
    if (!bv.converged) continue;
    const Vector g_evals = eigenvalues_of(Matrix(bv.g0.real()));
    // One instance per distinct eigenvalue g of G(E) (lambda = -1/g) plus a
    // generic lambda that avoids all of them.
    std::vector<std::pair<double, int>> cases;
    for (const auto& cl : cluster_multiplicities(as_span(g_evals), 1e-9).clusters)
      if (std::abs(cl.value) > 1e-12) cases.emplace_back(-1.0 / cl.value, cl.count);
    cases.emplace_back(-1.0 / (g_evals.maxCoeff() + 1.0) + 0.123, 0);
    for (const auto& [lambda, expected] : cases) {
      const KernelDims d = kernel_dim_check(sample.matrix, b, lambda, e, c.kernel_tol);
      ++total;
      if (d.perturbed == d.green) ++agree;
      csv += std::to_string(r) + ',' + format_double(e) + ',' + format_double(lambda) +
             ',' + std::to_string(expected) + ',' + std::to_string(d.perturbed) + ',' +
             std::to_string(d.green) + '\n';
    }
  }
  ExperimentOutput out;
  out.files.emplace_back("kernel_check.csv", csv);
  out.summary = base_summary(c);
  out.summary["instances"] = total;
  out.summary["agreements"] = agree;
  out.summary["bijection_holds"] = total > 0 && agree == total;
  return out;
}

}  // namespace

double stats_half_width(const ExperimentConfig& config) {
  if (config.half_width) return *config.half_width;
  return config.window_c / config.model.lattice.site_count();
}

std::vector<std::pair<std::uint64_t, MultiplicityReport>> multiplicity_reports(
    const EnsembleResult& result, double delta_rel) {
  std::vector<std::pair<std::uint64_t, MultiplicityReport>> out;
  for (const auto& real : result.realizations)
    for (const auto& ev : real.regions) {
      const double norm = ev.empty() ? 0.0
                                     : std::max(std::abs(ev.front()), std::abs(ev.back()));
      out.emplace_back(real.index,
                       cluster_multiplicities(ev, delta_rel * std::max(norm, 1e-300)));
    }
  return out;
}

ExperimentOutput run_experiment(const ExperimentConfig& config, int threads) {
  config.validate();
  switch (config.kind) {
    case ExperimentKind::multiplicity:
    case ExperimentKind::counterexample:
      return run_multiplicity(config, threads);
    case ExperimentKind::stats: return run_stats(config, threads);
    case ExperimentKind::minami: return run_minami(config, threads);
    case ExperimentKind::green_check: return run_green_check(config, threads);
    case ExperimentKind::kernel_check: return run_kernel_check(config, threads);
  }
  throw SchemaError("unhandled experiment kind");
}

}  // namespace specmult
