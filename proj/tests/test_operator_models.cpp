#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <utility>

#include "specmult/error.hpp"
#include "specmult/operator_models.hpp"

using namespace specmult;

namespace {

Matrix random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i <= j; ++i) a(i, j) = a(j, i) = g(rng);
  return a;
}

}  // namespace

TEST_CASE("build_h0: smallest chain") {
  LatticeSpec l{Chain{2}};
  Matrix expected(2, 2);
  expected << 0, 1, 1, 0;
  CHECK(build_h0(l) == expected);
}

TEST_CASE("build_h0: layered chain couples along layers only") {
  LatticeSpec l{LayeredChain{3, {1.0, 2.0}}};
  const auto& geo = std::get<LayeredChain>(l.geometry);
  const Matrix h = build_h0(l);
  REQUIRE(h.rows() == 6);
  CHECK(h(geo.site(0, 1), geo.site(1, 1)) == 2.0);
  CHECK(h(geo.site(1, 0), geo.site(2, 0)) == 1.0);
  // block diagonal: t_m * tridiag(1) per layer, nothing across layers
  for (int m = 0; m < 2; ++m)
    for (int k = 0; k < 2; ++k)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double v = h(geo.site(a, m), geo.site(b, k));
          if (m != k)
            CHECK(v == 0.0);
          else
            CHECK(v == (std::abs(a - b) == 1 ? (m == 0 ? 1.0 : 2.0) : 0.0));
        }
}

TEST_CASE("build_h0: periodic chain row sums from bond enumeration") {
  for (int length : {3, 4, 7}) {
    LatticeSpec l{Chain{length}, Boundary::periodic};
    const Matrix h = build_h0(l);
    // oracle: each site has the two neighbours i +- 1 mod L
    for (int i = 0; i < length; ++i) {
      std::set<int> nb{(i + 1) % length, (i + length - 1) % length};
      double expected = 0.0;
      for (int j : nb) expected += 1.0;
      CHECK(h.row(i).sum() == expected);
      CHECK(h(i, (i + 1) % length) == 1.0);
    }
  }
}

TEST_CASE("build_h0: box adjacency degree") {
  LatticeSpec dir{Box{{3, 4}}};
  const Matrix h = build_h0(dir);
  CHECK(h.rows() == 12);
  // corner, edge and interior degrees on a 3x4 grid
  CHECK(h.row(0).sum() == 2.0);
  CHECK(h.row(1).sum() == 3.0);
  CHECK(h.row(5).sum() == 4.0);
  LatticeSpec per{Box{{3, 4}}, Boundary::periodic};
  const Matrix hp = build_h0(per);
  for (int i = 0; i < 12; ++i) CHECK(hp.row(i).sum() == 4.0);
  CHECK(hp == hp.transpose());
}

TEST_CASE("build_h0 rejects short chains") {
  CHECK_THROWS_AS(build_h0(LatticeSpec{Chain{1}}), SchemaError);
  CHECK_THROWS_AS(build_h0(LatticeSpec{Box{{2, 1}}}), SchemaError);
  CHECK_THROWS_AS(build_h0(LatticeSpec{LayeredChain{1, {1.0}}}), SchemaError);
}

TEST_CASE("projection scheme invariants") {
  CHECK_NOTHROW(ProjectionScheme({{0, 2}, {1}}, 3));
  CHECK_THROWS_AS(ProjectionScheme({{0, 1}, {1, 2}}, 3), SchemaError);
  CHECK_THROWS_AS(ProjectionScheme({{0}, {2}}, 3), SchemaError);
  CHECK_THROWS_AS(ProjectionScheme({{0, 1, 2}, {}}, 3), SchemaError);
  CHECK_THROWS_AS(ProjectionScheme({{0, 1, 3}}, 3), SchemaError);

  const auto remark = models::remark_stacked_5(12);
  std::vector<int> hits(remark.scheme.dimension(), 0);
  for (const auto& b : remark.scheme.blocks())
    for (int i : b) ++hits[i];
  for (int h : hits) CHECK(h == 1);
  CHECK(remark.scheme.rank(3) == 5);

  CHECK(remark.scheme.blocks_covering(remark.scheme.coordinates({2, 5})) ==
        std::vector<int>{2, 5});
  CHECK_THROWS_AS(remark.scheme.blocks_covering({0, 1}), SchemaError);
}

TEST_CASE("assemble adds couplings on block diagonals") {
  SUBCASE("one block over a zero H0") {
    const ProjectionScheme s({{0, 1}}, 2);
    const auto sample = assemble(Matrix::Zero(2, 2), s, {5.0});
    Matrix expected = Matrix::Zero(2, 2);
    expected.diagonal().setConstant(5.0);
    CHECK(sample.matrix == expected);
  }
  SUBCASE("length mismatch") {
    const ProjectionScheme s({{0}, {1}}, 2);
    CHECK_THROWS_AS(assemble(Matrix::Zero(2, 2), s, {1.0}), SchemaError);
  }
  SUBCASE("counterexample model: every layer of column n gets omega_n") {
    const auto model = models::remark_stacked_5(8);
    const Matrix h0 = build_h0(model.lattice);
    std::vector<double> omega(8);
    for (int n = 0; n < 8; ++n) omega[n] = 0.1 * (n + 1);
    const auto sample = assemble(h0, model.scheme, omega);
    const auto& geo = std::get<LayeredChain>(model.lattice.geometry);
    for (int n = 0; n < 8; ++n)
      for (int m = 0; m < 5; ++m)
        CHECK(sample.matrix(geo.site(n, m), geo.site(n, m)) == omega[n]);
    CHECK((sample.matrix - h0).norm() > 0.0);
    Matrix off = sample.matrix - h0;
    off.diagonal().setZero();
    CHECK(off.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("trivial-Minami model block spectrum is {1 + w, w}") {
    const auto model = models::trivial_minami(8);
    const Matrix h0 = build_h0(model.lattice);
    const std::vector<double> omega{0.3, -1.2, 2.5, 0.0};
    const auto sample = assemble(h0, model.scheme, omega);
    for (int n = 0; n < 4; ++n) {
      CHECK(sample.matrix(2 * n, 2 * n) == doctest::Approx(1.0 + omega[n]));
      CHECK(sample.matrix(2 * n + 1, 2 * n + 1) == omega[n]);
      CHECK(sample.matrix(2 * n, 2 * n + 1) == 0.0);
    }
  }
}

TEST_CASE("assemble is linear in omega") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  const auto model = models::remark_stacked_5(10);
  const Matrix h0 = build_h0(model.lattice);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> w(10), v(10), sum(10);
    for (int n = 0; n < 10; ++n) {
      w[n] = g(rng);
      v[n] = g(rng);
      sum[n] = w[n] + v[n];
    }
    const Matrix diff = assemble(h0, model.scheme, sum).matrix -
                        assemble(h0, model.scheme, v).matrix;
    Matrix expected = Matrix::Zero(h0.rows(), h0.cols());
    for (int n = 0; n < 10; ++n)
      for (int i : model.scheme.block(n)) expected(i, i) = w[n];
    CHECK((diff - expected).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("counterexample model commutes with swaps of layers 3, 4, 5") {
  const auto model = models::remark_stacked_5(9);
  const auto& geo = std::get<LayeredChain>(model.lattice.geometry);
  const Matrix h = sample_model(model, build_h0(model.lattice), 3, 0).matrix;
  const int n = static_cast<int>(h.rows());
  for (auto [a, b] : {std::pair{2, 3}, std::pair{2, 4}, std::pair{3, 4}}) {
    Eigen::PermutationMatrix<Eigen::Dynamic> perm(n);
    for (int c = 0; c < 9; ++c)
      for (int m = 0; m < 5; ++m) {
        const int target = m == a ? b : (m == b ? a : m);
        perm.indices()[geo.site(c, m)] = geo.site(c, target);
      }
    const Matrix conj = perm * h * perm.transpose();
    CHECK(conj == h);
  }
}

TEST_CASE("averaging orthogonal matrix") {
  CHECK(build_averaging_orthogonal(1).u == Matrix::Constant(1, 1, 1.0));
  const Matrix u2 = build_averaging_orthogonal(2).u;
  const double r = 1.0 / std::sqrt(2.0);
  CHECK(u2(0, 0) == doctest::Approx(r));
  CHECK(u2(0, 1) == doctest::Approx(r));
  CHECK(std::abs(u2(1, 0)) == doctest::Approx(r));
  CHECK(u2(1, 1) == doctest::Approx(-u2(1, 0)));
  CHECK_THROWS_AS(build_averaging_orthogonal(0), SchemaError);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int b = 1; b <= 12; ++b) {
    const Matrix u = build_averaging_orthogonal(b).u;
    CHECK((u * u.transpose() - Matrix::Identity(b, b)).cwiseAbs().maxCoeff() <= 1e-12);
    for (int i = 0; i < b; ++i) CHECK(u(0, i) == doctest::Approx(1.0 / std::sqrt(b)));
    Vector w(b);
    for (int i = 0; i < b; ++i) w(i) = g(rng);
    CHECK((u * w)(0) == doctest::Approx(w.sum() / std::sqrt(b)).epsilon(1e-12));
  }
}

TEST_CASE("decompose_sample") {
  SUBCASE("single block zeroes its coupling") {
    const ProjectionScheme s({{0}, {1, 2}}, 3);
    Matrix h0 = Matrix::Zero(3, 3);
    h0(0, 1) = h0(1, 0) = 1.0;
    const auto sample = assemble(h0, s, {2.0, -0.5});
    const auto d = decompose_sample(sample, s, {1});
    CHECK(d.mean_coupling == doctest::Approx(-0.5));
    Matrix expected = assemble(h0, s, {2.0, 0.0}).matrix;
    CHECK((d.background - expected).cwiseAbs().maxCoeff() <= 1e-15);
  }
  SUBCASE("two rank-one blocks with omega = (3, 5)") {
    const ProjectionScheme s({{0}, {1}}, 2);
    const auto sample = assemble(Matrix::Zero(2, 2), s, {3.0, 5.0});
    const auto d = decompose_sample(sample, s, {0, 1});
    CHECK(d.rotated[0] == doctest::Approx(8.0 / std::sqrt(2.0)));
    CHECK(d.mean_coupling == doctest::Approx(4.0));
    CHECK(d.background(0, 0) == doctest::Approx(-1.0));
    CHECK(d.background(1, 1) == doctest::Approx(1.0));
    const Matrix back = d.background + d.mean_coupling * d.projector(2);
    CHECK((back - sample.matrix).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("random 20x20 reconstruction") {
    std::mt19937_64 rng(5);
    Matrix h0 = random_symmetric(20, rng);
    std::vector<IndexSet> blocks;
    for (int n = 0; n < 10; ++n) blocks.push_back({2 * n, 2 * n + 1});
    const ProjectionScheme s(blocks, 20);
    const auto sample =
        assemble(h0, s, sample_disorder(DisorderSpec{Gaussian{}}, s, 9, 0));
    for (const std::vector<int>& ids :
         {std::vector<int>{0}, {1, 4, 7}, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}}) {
      const auto d = decompose_sample(sample, s, ids);
      const Matrix back = d.background + d.mean_coupling * d.projector(20);
      CHECK((back - sample.matrix).cwiseAbs().maxCoeff() <= 1e-12);
      double mean = 0.0;
      for (int n : ids) mean += sample.omega[n];
      CHECK(d.mean_coupling == doctest::Approx(mean / ids.size()));
    }
  }
  SUBCASE("errors") {
    const ProjectionScheme s({{0}, {1}}, 2);
    const auto sample = assemble(Matrix::Zero(2, 2), s, {1.0, 2.0});
    CHECK_THROWS_AS(decompose_sample(sample, s, {}), SchemaError);
    CHECK_THROWS_AS(decompose_sample(sample, s, {2}), SchemaError);
  }
}

TEST_CASE("disorder support flag") {
  CHECK(DisorderSpec{Gaussian{}}.support_full_real());
  CHECK(DisorderSpec{Cauchy{}}.support_full_real());
  CHECK_FALSE(DisorderSpec{Uniform{}}.support_full_real());
  CHECK_FALSE(models::remark_stacked_5().disorder.support_full_real());
  CHECK_THROWS_AS(models::builtin("nope"), SchemaError);
}
