#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "specmult/error.hpp"
#include "specmult/spectral_core.hpp"
#include "specmult/statistics.hpp"

using namespace specmult;

namespace {

EnsembleSpec small_spec(int realizations = 12) {
  EnsembleSpec spec;
  spec.model = models::anderson_1d_rank1(60);
  spec.realizations = realizations;
  spec.master_seed = 77;
  spec.regions = consecutive_regions(spec.model.scheme, 10);
  return spec;
}

}  // namespace

TEST_CASE("region helpers") {
  const auto model = models::anderson_1d_rank1(25);
  const auto regions = consecutive_regions(model.scheme, 10);
  REQUIRE(regions.size() == 2);
  CHECK(regions[1].front() == 10);
  CHECK(regions[1].back() == 19);
  CHECK(whole_volume(model.scheme).front().size() == 25);
  CHECK_THROWS_AS(consecutive_regions(model.scheme, 0), SchemaError);
}

TEST_CASE("ensemble spec validation") {
  auto spec = small_spec();
  spec.realizations = 0;
  CHECK_THROWS_AS(spec.validate(), SchemaError);
  spec = small_spec();
  spec.regions = {{0, 1}, {1, 2}};
  CHECK_THROWS_AS(spec.validate(), SchemaError);
  spec.regions = {{0, 99}};
  CHECK_THROWS_AS(spec.validate(), SchemaError);
}

TEST_CASE("serial and parallel ensembles are bitwise equal") {
  const auto spec = small_spec();
  const auto ser = run_ensemble_serial(spec);
  for (int threads : {1, 2, 3, 8}) {
    const auto par = run_ensemble_parallel(spec, threads);
    REQUIRE(par.realizations.size() == ser.realizations.size());
    for (std::size_t r = 0; r < ser.realizations.size(); ++r) {
      CHECK(par.realizations[r].index == r);
      CHECK(par.realizations[r].regions == ser.realizations[r].regions);
    }
    CHECK(par.region_ranks == ser.region_ranks);
  }
}

TEST_CASE("ensemble spectra match a direct per-region computation") {
  const auto spec = small_spec(3);
  const auto res = run_ensemble_serial(spec);
  const Matrix h0 = build_h0(spec.model.lattice);
  for (std::uint64_t r = 0; r < 3; ++r) {
    const Matrix h = sample_model(spec.model, h0, spec.master_seed, r).matrix;
    for (std::size_t k = 0; k < spec.regions.size(); ++k) {
      const Vector ev =
          eigenvalues_of(restrict_to(h, spec.model.scheme.coordinates(spec.regions[k])));
      REQUIRE(static_cast<int>(ev.size()) == res.region_ranks[k]);
      for (int i = 0; i < ev.size(); ++i)
        CHECK(std::abs(ev(i) - res.realizations[r].regions[k][i]) <= 1e-12);
    }
  }
  CHECK(res.region_blocks == std::vector<int>(6, 10));
}

TEST_CASE("seeds are reproducible and distinct") {
  auto spec = small_spec(2);
  const auto a = run_ensemble_serial(spec);
  const auto b = run_ensemble_serial(spec);
  CHECK(a.realizations[1].regions == b.realizations[1].regions);
  spec.master_seed += 1;
  const auto c = run_ensemble_serial(spec);
  CHECK(a.realizations[1].regions != c.realizations[1].regions);
  CHECK(a.realizations[0].regions != a.realizations[1].regions);
}

TEST_CASE("count table matches a brute-force recount") {
  const auto res = run_ensemble_serial(small_spec());
  const Interval iv{-0.5, 0.7};
  const auto table = count_table(res, iv);
  for (std::size_t r = 0; r < table.size(); ++r)
    for (std::size_t k = 0; k < table[r].size(); ++k) {
      int n = 0;
      for (double e : res.realizations[r].regions[k]) n += (e >= iv.lower && e < iv.upper);
      CHECK(table[r][k] == n);
    }
  const auto per_block = count_distribution(res, iv, false);
  const auto summed = count_distribution(res, iv, true);
  CHECK(per_block.sample_size == table.size() * table[0].size());
  CHECK(summed.sample_size == table.size());
  CHECK(summed.mean == doctest::Approx(per_block.mean * table[0].size()));
  CHECK(std::accumulate(per_block.pmf.begin(), per_block.pmf.end(), 0.0) ==
        doctest::Approx(1.0));
}

TEST_CASE("count distribution moments") {
  const auto d = CountDistribution::from_samples({0, 1, 1, 2, 4}, true);
  CHECK(d.mean == doctest::Approx(1.6));
  // population variance
  CHECK(d.variance == doctest::Approx((2.56 + 0.36 + 0.36 + 0.16 + 5.76) / 5.0));
  REQUIRE(d.pmf.size() == 5);
  CHECK(d.pmf[1] == doctest::Approx(0.4));
  CHECK(d.pmf[3] == 0.0);
  CHECK_THROWS_AS(CountDistribution::from_samples({}, false), SchemaError);
}

TEST_CASE("poisson pmf and fit") {
  double total = 0.0;
  for (int k = 0; k < 60; ++k) total += poisson_pmf(k, 3.5);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(poisson_pmf(0, 0.0) == 1.0);
  CHECK(poisson_pmf(2, 1.0) == doctest::Approx(std::exp(-1.0) / 2.0));

  // independent Poisson sampler: TV shrinks like n^-1/2
  std::mt19937_64 rng(41);
  std::poisson_distribution<int> pois(1.3);
  std::vector<int> samples(20000);
  for (int& s : samples) s = pois(rng);
  const auto fit = poisson_fit(CountDistribution::from_samples(samples, true));
  CHECK(fit.lambda_hat == doctest::Approx(1.3).epsilon(0.03));
  CHECK(fit.tv_distance < 0.02);

  // a point mass at 1 is far from Poisson(1): TV = 1 - e^-1
  const auto spike = poisson_fit(CountDistribution::from_samples({1, 1, 1, 1}, true));
  CHECK(spike.tv_distance == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(spike.one_point_mass == 1.0);
}

TEST_CASE("wilson interval") {
  const auto w = wilson_interval(5, 10);
  CHECK(w.lower == doctest::Approx(0.2366).epsilon(1e-3));
  CHECK(w.upper == doctest::Approx(0.7634).epsilon(1e-3));
  const auto zero = wilson_interval(0, 100);
  CHECK(zero.lower == 0.0);
  CHECK(zero.upper == doctest::Approx(1.96 * 1.96 / (100 + 1.96 * 1.96)));
  CHECK(wilson_interval(0, 0).upper == 1.0);
  CHECK_THROWS_AS(wilson_interval(3, 2), SchemaError);
}

TEST_CASE("trivial Minami model never puts two eigenvalues in a short window") {
  EnsembleSpec spec;
  spec.model = models::trivial_minami(400);
  spec.realizations = 50;
  spec.master_seed = 3;
  spec.regions = consecutive_regions(spec.model.scheme, 1);
  const auto res = run_ensemble_serial(spec);
  for (double width : {0.9, 0.5, 0.1}) {
    const auto est = estimate_minami(res, Interval::centered(0.0, width / 2), 1);
    CHECK(est.hits == 0);
    CHECK(est.p_hat == 0.0);
    CHECK(est.samples == 50u * 200u);
    CHECK(est.block_count == 1);
  }
  // a window longer than the gap 1 can catch both
  const auto wide = estimate_minami(res, Interval::centered(0.5, 1.0), 1);
  CHECK(wide.hits > 0);
}

TEST_CASE("minami estimate normalisation") {
  const auto res = run_ensemble_serial(small_spec(40));
  const Interval j = Interval::centered(0.0, 0.5);
  const auto est = estimate_minami(res, j, 1, 2.0, 1.0);
  CHECK(est.block_count == 10);
  CHECK(est.p_hat == doctest::Approx(static_cast<double>(est.hits) / est.samples));
  CHECK(est.ratio == doctest::Approx(est.p_hat / (100.0 * 1.0)));
  CHECK(est.ratio_upper >= est.ratio);
  CHECK(est.ci.lower <= est.p_hat);
  CHECK(est.ci.upper >= est.p_hat);
}

TEST_CASE("negligibility report") {
  const auto res = run_ensemble_serial(small_spec(40));
  const Interval iv = Interval::centered(0.0, 0.05);
  const auto rep = negligibility_check(res, iv);
  CHECK(rep.per_region.size() == 6);
  const auto table = count_table(res, iv);
  for (std::size_t k = 0; k < 6; ++k) {
    int hit = 0;
    for (const auto& row : table) hit += row[k] >= 1;
    CHECK(rep.per_region[k] == doctest::Approx(hit / 40.0));
    CHECK(rep.max_probability >= rep.per_region[k]);
  }
}

TEST_CASE("count distribution edge windows") {
  const auto spec = small_spec(5);
  const auto res = run_ensemble_serial(spec);
  const auto all = count_distribution(res, Interval::centered(0.0, 1e6), true);
  CHECK(all.pmf.size() == 61);
  CHECK(all.pmf[60] == 1.0);
  const auto none = count_distribution(res, Interval{0.3, 0.3}, false);
  CHECK(none.pmf == std::vector<double>{1.0});
  const auto fit = poisson_fit(none);
  CHECK(fit.lambda_hat == 0.0);
  CHECK(fit.tv_distance == 0.0);
}

TEST_CASE("poisson fit oracles") {
  std::mt19937_64 rng(43);
  std::poisson_distribution<int> half(0.5);
  std::vector<int> plain(10000);
  for (int& s : plain) s = half(rng);
  CHECK(poisson_fit(CountDistribution::from_samples(plain, true)).tv_distance <= 0.02);

  // compound: three coincident atoms per Poisson point
  std::poisson_distribution<int> fifth(0.2);
  std::vector<int> tripled(10000);
  for (int& s : tripled) s = 3 * fifth(rng);
  const auto fit = poisson_fit(CountDistribution::from_samples(tripled, true));
  CHECK(fit.one_point_mass == 0.0);
  CHECK(fit.tv_distance >= 0.1);
}

TEST_CASE("negligibility edge cases") {
  const auto res = run_ensemble_serial(small_spec(20));
  CHECK(negligibility_check(res, Interval{1.0, 1.0}).max_probability == 0.0);
  EnsembleSpec giant = small_spec(20);
  giant.regions = whole_volume(giant.model.scheme);
  // the whole chain of 60 sites at W = 10 essentially always has a level in [-1, 1)
  CHECK(negligibility_check(run_ensemble_serial(giant), Interval{-1.0, 1.0}).max_probability >=
        0.9);
}

TEST_CASE("minami estimate edge cases") {
  const auto res = run_ensemble_serial(small_spec(20));
  CHECK(estimate_minami(res, Interval{50.0, 60.0}).p_hat == 0.0);
  CHECK_THROWS_AS(estimate_minami(res, Interval{0.0, 0.0}), SchemaError);
}

TEST_CASE("counterexample model: counts come in triples, so eta >= 2 iff eta >= 1") {
  EnsembleSpec spec;
  spec.model = models::remark_stacked_5(60);
  spec.realizations = 40;
  spec.master_seed = 8;
  spec.regions = consecutive_regions(spec.model.scheme, 10);
  const auto res = run_ensemble_serial(spec);
  const Interval iv = Interval::centered(4.0, 0.05);
  for (const auto& row : count_table(res, iv))
    for (int v : row) CHECK(v % 3 == 0);
  const auto est = estimate_minami(res, iv, 1);
  const auto neg = negligibility_check(res, iv);
  double any = 0.0;
  for (double p : neg.per_region) any += p;
  CHECK(est.p_hat == doctest::Approx(any / neg.per_region.size()));
  CHECK(est.hits > 0);
}

TEST_CASE("trivial Minami model: pairs need two blocks and the ratio stays bounded") {
  EnsembleSpec spec;
  spec.model = models::trivial_minami(400);
  spec.realizations = 200;
  spec.master_seed = 10;
  spec.regions = consecutive_regions(spec.model.scheme, 10);
  const auto res = run_ensemble_serial(spec);
  double worst = 0.0;
  for (double w : {0.1, 0.05, 0.025}) {
    const auto est = estimate_minami(res, Interval::centered(0.0, w / 2), 1);
    worst = std::max(worst, est.ratio_upper);
  }
  // eta >= 2 needs two of the ten blocks in J. A block has a level in J with
  // probability <= 2 rho |J| (levels w and 1 + w, rho = 1 / sqrt(2 pi)), so
  // P <= 45 (2 rho |J|)^2 and the ratio is at most 180 rho^2 / 100 < 0.29.
  CHECK(worst < 0.29);
}
