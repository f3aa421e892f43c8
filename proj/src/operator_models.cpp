#include "specmult/operator_models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include "specmult/error.hpp"
#include "specmult/rng.hpp"

namespace specmult {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void add_bond(Matrix& h, int i, int j, double t) {
  if (i == j) return;
  h(i, j) = t;
  h(j, i) = t;
}

// Bonds of a one-dimensional chain of `length` sites embedded at
// site(0..length-1).
template <class SiteFn>
void chain_bonds(Matrix& h, int length, Boundary boundary, double t,
                 SiteFn site) {
  for (int n = 0; n + 1 < length; ++n) add_bond(h, site(n), site(n + 1), t);
  if (boundary == Boundary::periodic && length > 2)
    add_bond(h, site(length - 1), site(0), t);
}

}  // namespace

int LatticeSpec::site_count() const {
  return std::visit(
      Overloaded{[](const Chain& c) { return c.length; },
                 [](const Box& b) {
                   return std::accumulate(b.extents.begin(), b.extents.end(),
                                          1, std::multiplies<>());
                 },
                 [](const LayeredChain& l) { return l.length * l.layers(); }},
      geometry);
}

int LatticeSpec::column_count() const {
  if (const auto* l = std::get_if<LayeredChain>(&geometry)) return l->length;
  return site_count();
}

void LatticeSpec::validate() const {
  std::visit(
      Overloaded{
          [](const Chain& c) {
            if (c.length < 2) throw SchemaError("chain length must be >= 2");
          },
          [](const Box& b) {
            if (b.extents.empty())
              throw SchemaError("box needs at least one extent");
            for (int e : b.extents)
              if (e < 2) throw SchemaError("box side lengths must be >= 2");
          },
          [](const LayeredChain& l) {
            if (l.length < 2)
              throw SchemaError("layered chain length must be >= 2");
            if (l.hoppings.empty())
              throw SchemaError("layered chain needs per-layer hoppings");
            for (double t : l.hoppings)
              if (!std::isfinite(t))
                throw SchemaError("hopping coefficients must be finite");
          }},
      geometry);
  if (!std::isfinite(hopping))
    throw SchemaError("hopping coefficient must be finite");
  for (double v : onsite_pattern)
    if (!std::isfinite(v)) throw SchemaError("onsite pattern must be finite");
}

ProjectionScheme::ProjectionScheme(std::vector<IndexSet> blocks,
                                   int dimension)
    : blocks_(std::move(blocks)), owner_(dimension, -1), dimension_(dimension) {
  if (dimension < 1) throw SchemaError("projection scheme dimension < 1");
  for (int n = 0; n < size(); ++n) {
    if (blocks_[n].empty())
      throw SchemaError("block " + std::to_string(n) + " is empty");
    for (int i : blocks_[n]) {
      if (i < 0 || i >= dimension)
        throw SchemaError("block " + std::to_string(n) +
                          " has out-of-range index " + std::to_string(i));
      if (owner_[i] != -1)
        throw SchemaError("coordinate " + std::to_string(i) +
                          " appears in more than one block");
      owner_[i] = n;
    }
  }
  for (int i = 0; i < dimension; ++i)
    if (owner_[i] == -1)
      throw SchemaError("coordinate " + std::to_string(i) +
                        " is not covered by any block");
}

ProjectionScheme ProjectionScheme::rank_k_columns(const LatticeSpec& lattice,
                                                  int k) {
  lattice.validate();
  const int columns = lattice.column_count();
  if (k < 1 || columns % k != 0)
    throw SchemaError("rank_k_columns: k must divide the column count " +
                      std::to_string(columns));
  const auto* layered = std::get_if<LayeredChain>(&lattice.geometry);
  std::vector<IndexSet> blocks;
  for (int start = 0; start < columns; start += k) {
    IndexSet block;
    if (layered) {
      for (int m = 0; m < layered->layers(); ++m)
        for (int c = start; c < start + k; ++c)
          block.push_back(layered->site(c, m));
      std::sort(block.begin(), block.end());
    } else {
      for (int c = start; c < start + k; ++c) block.push_back(c);
    }
    blocks.push_back(std::move(block));
  }
  return ProjectionScheme(std::move(blocks), lattice.site_count());
}

IndexSet ProjectionScheme::coordinates(const std::vector<int>& block_ids) const {
  IndexSet out;
  std::set<int> seen;
  for (int n : block_ids) {
    if (n < 0 || n >= size())
      throw SchemaError("block id " + std::to_string(n) + " out of range");
    if (!seen.insert(n).second) continue;
    out.insert(out.end(), blocks_[n].begin(), blocks_[n].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> ProjectionScheme::blocks_covering(const IndexSet& coords) const {
  std::set<int> ids;
  std::set<int> wanted;
  for (int i : coords) {
    if (i < 0 || i >= dimension_)
      throw SchemaError("coordinate " + std::to_string(i) + " out of range");
    wanted.insert(i);
    ids.insert(owner_[i]);
  }
  for (int n : ids)
    for (int i : blocks_[n])
      if (!wanted.count(i))
        throw SchemaError("coordinate set is not a union of blocks: block " +
                          std::to_string(n) + " is only partly covered");
  return {ids.begin(), ids.end()};
}

std::string DisorderSpec::family() const {
  return std::visit(Overloaded{[](const Gaussian&) { return "gaussian"; },
                               [](const Cauchy&) { return "cauchy"; },
                               [](const Uniform&) { return "uniform"; }},
                    distribution);
}

void DisorderSpec::validate() const {
  std::visit(Overloaded{[](const Gaussian& g) {
                          if (!(g.sigma > 0.0) || !std::isfinite(g.mean))
                            throw SchemaError("gaussian needs sigma > 0");
                        },
                        [](const Cauchy& c) {
                          if (!(c.scale > 0.0) || !std::isfinite(c.location))
                            throw SchemaError("cauchy needs scale > 0");
                        },
                        [](const Uniform& u) {
                          if (!(u.upper > u.lower))
                            throw SchemaError("uniform needs lower < upper");
                        }},
             distribution);
}

Matrix SampleDecomposition::projector(int dimension) const {
  Matrix p = Matrix::Zero(dimension, dimension);
  for (int i : support) p(i, i) = 1.0;
  return p;
}

Matrix build_h0(const LatticeSpec& lattice) {
  lattice.validate();
  const int n = lattice.site_count();
  Matrix h = Matrix::Zero(n, n);
  std::visit(
      Overloaded{
          [&](const Chain& c) {
            chain_bonds(h, c.length, lattice.boundary, lattice.hopping,
                        [](int i) { return i; });
          },
          [&](const Box& b) {
            const int d = static_cast<int>(b.extents.size());
            std::vector<int> stride(d, 1);
            for (int a = d - 2; a >= 0; --a)
              stride[a] = stride[a + 1] * b.extents[a + 1];
            for (int site = 0; site < n; ++site) {
              for (int a = 0; a < d; ++a) {
                const int coord = (site / stride[a]) % b.extents[a];
                if (coord + 1 < b.extents[a]) {
                  add_bond(h, site, site + stride[a], lattice.hopping);
                } else if (lattice.boundary == Boundary::periodic &&
                           b.extents[a] > 2) {
                  add_bond(h, site, site - coord * stride[a], lattice.hopping);
                }
              }
            }
          },
          [&](const LayeredChain& l) {
            for (int m = 0; m < l.layers(); ++m)
              chain_bonds(h, l.length, lattice.boundary, l.hoppings[m],
                          [&](int c) { return l.site(c, m); });
          }},
      lattice.geometry);
  if (!lattice.onsite_pattern.empty()) {
    const auto period = lattice.onsite_pattern.size();
    for (int i = 0; i < n; ++i) h(i, i) += lattice.onsite_pattern[i % period];
  }
  return h;
}

HamiltonianSample assemble(const Matrix& h0, const ProjectionScheme& scheme,
                           const std::vector<double>& omega,
                           std::uint64_t master_seed,
                           std::uint64_t realization_index) {
  if (static_cast<int>(omega.size()) != scheme.size())
    throw SchemaError("assemble: omega has " + std::to_string(omega.size()) +
                      " entries, scheme has " + std::to_string(scheme.size()) +
                      " blocks");
  if (h0.rows() != scheme.dimension() || h0.cols() != scheme.dimension())
    throw SchemaError("assemble: H0 dimension does not match the scheme");
  HamiltonianSample s{h0, omega, master_seed, realization_index};
  for (int n = 0; n < scheme.size(); ++n)
    for (int i : scheme.block(n)) s.matrix(i, i) += omega[n];
  return s;
}

double draw(const DisorderSpec& spec, std::uint64_t master_seed,
            std::uint64_t realization_index, std::uint64_t block) {
  CounterStream stream(master_seed, realization_index, block);
  return std::visit(
      Overloaded{[&](const Gaussian& g) {
                   return g.mean + g.sigma * stream.next_gaussian();
                 },
                 [&](const Cauchy& c) {
                   const double u = stream.next_open_uniform();
                   return c.location +
                          c.scale * std::tan(std::numbers::pi * (u - 0.5));
                 },
                 [&](const Uniform& u) {
                   return u.lower + (u.upper - u.lower) * stream.next_uniform();
                 }},
      spec.distribution);
}

std::vector<double> sample_disorder(const DisorderSpec& spec,
                                    const ProjectionScheme& scheme,
                                    std::uint64_t master_seed,
                                    std::uint64_t realization_index) {
  std::vector<double> omega(scheme.size());
  for (int n = 0; n < scheme.size(); ++n)
    omega[n] = draw(spec, master_seed, realization_index, n);
  return omega;
}

AveragingOrthogonal build_averaging_orthogonal(int b) {
  if (b < 1) throw SchemaError("averaging orthogonal needs b >= 1");
  // Gram-Schmidt over (1,...,1)/sqrt(b), e_0, e_1, ...; each candidate is
  // orthogonalized twice and kept if a nontrivial remainder survives.
  Matrix u = Matrix::Zero(b, b);
  u.row(0).setConstant(1.0 / std::sqrt(static_cast<double>(b)));
  int filled = 1;
  for (int k = 0; k < b && filled < b; ++k) {
    Vector v = Vector::Unit(b, k);
    for (int pass = 0; pass < 2; ++pass)
      for (int r = 0; r < filled; ++r)
        v -= u.row(r).dot(v) * u.row(r).transpose();
    const double norm = v.norm();
    if (norm < 1e-8) continue;
    u.row(filled++) = v.transpose() / norm;
  }
  return {u};
}

SampleDecomposition decompose_sample(const HamiltonianSample& sample,
                                     const ProjectionScheme& scheme,
                                     const std::vector<int>& block_ids) {
  std::vector<int> ids = block_ids;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.empty()) throw SchemaError("decompose_sample: empty block set");
  for (int n : ids)
    if (n < 0 || n >= scheme.size())
      throw SchemaError("decompose_sample: block id " + std::to_string(n) +
                        " is not a block of the scheme");
  if (static_cast<int>(sample.omega.size()) != scheme.size())
    throw SchemaError("decompose_sample: sample and scheme disagree");

  const int b = static_cast<int>(ids.size());
  const Matrix u = build_averaging_orthogonal(b).u;
  Vector omega_b(b);
  for (int i = 0; i < b; ++i) omega_b(i) = sample.omega[ids[i]];
  const Vector w = u * omega_b;

  SampleDecomposition out;
  out.mean_coupling = w(0) / std::sqrt(static_cast<double>(b));
  out.support = scheme.coordinates(ids);
  out.rotated.assign(w.data(), w.data() + b);

  // background = H - sum_{n in B} omega_n P_n + sum_{j>=2} w_j sum_i u_ji P_ni
  out.background = sample.matrix;
  for (int i = 0; i < b; ++i) {
    double coupling = 0.0;
    for (int j = 1; j < b; ++j) coupling += w(j) * u(j, i);
    for (int site : scheme.block(ids[i]))
      out.background(site, site) += coupling - omega_b(i);
  }
  return out;
}

HamiltonianSample sample_model(const ModelSpec& model, const Matrix& h0,
                               std::uint64_t master_seed,
                               std::uint64_t realization_index) {
  return assemble(h0, model.scheme,
                  sample_disorder(model.disorder, model.scheme, master_seed,
                                  realization_index),
                  master_seed, realization_index);
}

namespace models {

ModelSpec remark_stacked_5(int length) {
  ModelSpec m;
  m.name = "remark-stacked-5";
  m.lattice.geometry = LayeredChain{length, {1.0, 1.0, 2.0, 2.0, 2.0}};
  m.scheme = ProjectionScheme::rank_k_columns(m.lattice, 1);
  m.disorder.distribution = Uniform{0.0, 1.0};
  return m;
}

ModelSpec trivial_minami(int sites, double sigma) {
  if (sites < 2 || sites % 2 != 0)
    throw SchemaError("trivial-minami needs an even number of sites");
  ModelSpec m;
  m.name = "trivial-minami";
  m.lattice.geometry = Chain{sites};
  m.lattice.hopping = 0.0;
  m.lattice.onsite_pattern = {1.0, 0.0};
  m.scheme = ProjectionScheme::rank_k_columns(m.lattice, 2);
  m.disorder.distribution = Gaussian{0.0, sigma};
  return m;
}

ModelSpec anderson_1d_rank1(int length, double width) {
  ModelSpec m;
  m.name = "anderson-1d-rank1";
  m.lattice.geometry = Chain{length};
  m.scheme = ProjectionScheme::rank_k_columns(m.lattice, 1);
  m.disorder.distribution = Uniform{-0.5 * width, 0.5 * width};
  return m;
}

ModelSpec stacked_identical(int length, int layers, double sigma) {
  ModelSpec m;
  m.name = "stacked-" + std::to_string(layers);
  m.lattice.geometry =
      LayeredChain{length, std::vector<double>(layers, 1.0)};
  m.scheme = ProjectionScheme::rank_k_columns(m.lattice, 1);
  m.disorder.distribution = Gaussian{0.0, sigma};
  return m;
}

ModelSpec builtin(const std::string& name, int length) {
  if (name == "remark-stacked-5")
    return remark_stacked_5(length > 0 ? length : 60);
  if (name == "trivial-minami")
    return trivial_minami(length > 0 ? length : 100);
  if (name == "anderson-1d-rank1")
    return anderson_1d_rank1(length > 0 ? length : 500);
  if (name == "stacked-3") return stacked_identical(length > 0 ? length : 200, 3);
  throw SchemaError("unknown built-in model '" + name + "'");
}

}  // namespace models

}  // namespace specmult
