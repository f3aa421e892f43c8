#include "specmult/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "specmult/error.hpp"

namespace specmult {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw SchemaError("unknown key '" + where + it.key() + "'");
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& ex) {
    throw SchemaError("key '" + where + key + "': " + ex.what());
  }
}

template <class T>
void read_opt(const json& j, const std::string& key, const std::string& where,
              T& out) {
  if (j.contains(key)) out = get<T>(j, key, where);
}

Boundary parse_boundary(const std::string& s) {
  if (s == "dirichlet") return Boundary::dirichlet;
  if (s == "periodic") return Boundary::periodic;
  throw SchemaError("key 'model.boundary': expected dirichlet or periodic, got '" +
                    s + "'");
}

DisorderSpec parse_disorder(const json& j) {
  if (!j.is_object()) throw SchemaError("key 'model.disorder' must be an object");
  reject_unknown(j, {"family", "params"}, "model.disorder.");
  const auto family = get<std::string>(j, "family", "model.disorder.");
  const auto params = get<std::vector<double>>(j, "params", "model.disorder.");
  if (params.size() != 2)
    throw SchemaError("key 'model.disorder.params' needs exactly two numbers");
  DisorderSpec d;
  if (family == "gaussian")
    d.distribution = Gaussian{params[0], params[1]};
  else if (family == "cauchy")
    d.distribution = Cauchy{params[0], params[1]};
  else if (family == "uniform")
    d.distribution = Uniform{params[0], params[1]};
  else
    throw SchemaError("key 'model.disorder.family': unknown family '" + family +
                      "'");
  try {
    d.validate();
  } catch (const SchemaError& ex) {
    throw SchemaError(std::string("key 'model.disorder.params': ") + ex.what());
  }
  return d;
}

json disorder_json(const DisorderSpec& d) {
  return std::visit(
      [](const auto& dist) -> json {
        using T = std::decay_t<decltype(dist)>;
        if constexpr (std::is_same_v<T, Gaussian>)
          return {{"family", "gaussian"}, {"params", {dist.mean, dist.sigma}}};
        else if constexpr (std::is_same_v<T, Cauchy>)
          return {{"family", "cauchy"}, {"params", {dist.location, dist.scale}}};
        else
          return {{"family", "uniform"}, {"params", {dist.lower, dist.upper}}};
      },
      d.distribution);
}

ZGrid parse_grid(const json& j) {
  reject_unknown(j, {"re", "im"}, "parameters.z_grid.");
  ZGrid g;
  auto axis = [&](const char* key, double& lo, double& hi, int& n) {
    if (!j.contains(key)) return;
    const auto v = get<std::vector<double>>(j, key, "parameters.z_grid.");
    if (v.size() != 3 || v[2] < 1)
      throw SchemaError(std::string("key 'parameters.z_grid.") + key +
                        "' needs [min, max, points]");
    lo = v[0];
    hi = v[1];
    n = static_cast<int>(v[2]);
  };
  axis("re", g.re_min, g.re_max, g.re_points);
  axis("im", g.im_min, g.im_max, g.im_points);
  return g;
}

}  // namespace

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::multiplicity: return "multiplicity";
    case ExperimentKind::minami: return "minami";
    case ExperimentKind::stats: return "stats";
    case ExperimentKind::green_check: return "green-check";
    case ExperimentKind::kernel_check: return "kernel-check";
    case ExperimentKind::counterexample: return "counterexample";
  }
  return "unknown";
}

ExperimentKind parse_kind(const std::string& name) {
  for (auto k : {ExperimentKind::multiplicity, ExperimentKind::minami,
                 ExperimentKind::stats, ExperimentKind::green_check,
                 ExperimentKind::kernel_check, ExperimentKind::counterexample})
    if (to_string(k) == name) return k;
  throw SchemaError("unknown experiment '" + name + "'");
}

std::vector<Complex> ZGrid::points() const {
  std::vector<Complex> zs;
  auto step = [](double lo, double hi, int n, int i) {
    return n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  };
  for (int i = 0; i < im_points; ++i)
    for (int r = 0; r < re_points; ++r)
      zs.emplace_back(step(re_min, re_max, re_points, r),
                      step(im_min, im_max, im_points, i));
  return zs;
}

ModelSpec parse_model(const json& j) {
  if (j.is_string()) return models::builtin(j.get<std::string>());
  if (!j.is_object()) throw SchemaError("key 'model' must be a string or object");
  if (j.contains("builtin")) {
    reject_unknown(j, {"builtin", "length"}, "model.");
    int length = 0;
    read_opt(j, "length", "model.", length);
    try {
      return models::builtin(get<std::string>(j, "builtin", "model."), length);
    } catch (const SchemaError& ex) {
      throw SchemaError(std::string("key 'model.builtin': ") + ex.what());
    }
  }
  reject_unknown(j, {"name", "geometry", "boundary", "hoppings", "onsite_pattern",
                     "blocks", "disorder"},
                 "model.");
  ModelSpec m;
  read_opt(j, "name", "model.", m.name);
  if (m.name.empty()) m.name = "custom";

  if (!j.contains("geometry")) throw SchemaError("missing key 'model.geometry'");
  const json& g = j.at("geometry");
  if (!g.is_object()) throw SchemaError("key 'model.geometry' must be an object");
  const auto kind = get<std::string>(g, "kind", "model.geometry.");
  std::vector<double> hoppings{1.0};
  read_opt(j, "hoppings", "model.", hoppings);
  if (hoppings.empty()) throw SchemaError("key 'model.hoppings' is empty");
  if (kind == "chain") {
    reject_unknown(g, {"kind", "length"}, "model.geometry.");
    m.lattice.geometry = Chain{get<int>(g, "length", "model.geometry.")};
    m.lattice.hopping = hoppings.front();
  } else if (kind == "box") {
    reject_unknown(g, {"kind", "extents"}, "model.geometry.");
    m.lattice.geometry = Box{get<std::vector<int>>(g, "extents", "model.geometry.")};
    m.lattice.hopping = hoppings.front();
  } else if (kind == "layered_chain") {
    reject_unknown(g, {"kind", "length", "layers"}, "model.geometry.");
    const int layers = get<int>(g, "layers", "model.geometry.");
    if (static_cast<int>(hoppings.size()) != layers)
      throw SchemaError("key 'model.hoppings' needs one coefficient per layer");
    m.lattice.geometry =
        LayeredChain{get<int>(g, "length", "model.geometry."), hoppings};
  } else {
    throw SchemaError("key 'model.geometry.kind': unknown geometry '" + kind + "'");
  }
  if (j.contains("boundary"))
    m.lattice.boundary = parse_boundary(get<std::string>(j, "boundary", "model."));
  read_opt(j, "onsite_pattern", "model.", m.lattice.onsite_pattern);
  try {
    m.lattice.validate();
  } catch (const SchemaError& ex) {
    throw SchemaError(std::string("key 'model.geometry': ") + ex.what());
  }

  const json blocks = j.contains("blocks") ? j.at("blocks") : json{{"rank_k_columns", 1}};
  try {
    if (blocks.is_object()) {
      reject_unknown(blocks, {"rank_k_columns"}, "model.blocks.");
      m.scheme = ProjectionScheme::rank_k_columns(
          m.lattice, get<int>(blocks, "rank_k_columns", "model.blocks."));
    } else {
      m.scheme = ProjectionScheme(blocks.get<std::vector<IndexSet>>(),
                                  m.lattice.site_count());
    }
  } catch (const json::exception& ex) {
    throw SchemaError(std::string("key 'model.blocks': ") + ex.what());
  } catch (const SchemaError& ex) {
    throw SchemaError(std::string("key 'model.blocks': ") + ex.what());
  }

  if (!j.contains("disorder")) throw SchemaError("missing key 'model.disorder'");
  m.disorder = parse_disorder(j.at("disorder"));
  return m;
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::counterexample:
    case ExperimentKind::multiplicity:
      c.model_json = {{"builtin", "remark-stacked-5"}, {"length", 60}};
      c.realizations = 20;
      c.intervals = {{3.05, 4.95}, {-1.95, 2.95}};
      break;
    case ExperimentKind::stats:
      c.model_json = {{"builtin", "stacked-3"}, {"length", 200}};
      c.realizations = 2000;
      c.region_blocks = 10;
      c.energy = 0.0;
      // h = 4.2 / 600 puts the summed count mean near 1 at E = 0
      c.window_c = 4.2;
      break;
    case ExperimentKind::minami:
      c.model_json = {{"builtin", "anderson-1d-rank1"}, {"length", 500}};
      c.realizations = 2000;
      break;
    case ExperimentKind::green_check:
    case ExperimentKind::kernel_check:
      c.model_json = {{"builtin", "anderson-1d-rank1"}, {"length", 50}};
      c.realizations = 10;
      c.region = {0, 1, 2};
      break;
  }
  c.model = parse_model(c.model_json);
  return c;
}

ExperimentConfig parse_config(const json& doc, ExperimentKind kind) {
  if (!doc.is_object()) throw SchemaError("config root must be an object");
  reject_unknown(doc, {"schema_version", "experiment", "seed", "output", "model",
                       "parameters"},
                 "");
  if (doc.contains("schema_version") &&
      get<int>(doc, "schema_version", "") != 1)
    throw SchemaError("key 'schema_version': only version 1 is supported");
  if (doc.contains("experiment") &&
      parse_kind(get<std::string>(doc, "experiment", "")) != kind)
    throw SchemaError("key 'experiment' does not match the subcommand '" +
                      to_string(kind) + "'");

  ExperimentConfig c = default_config(kind);
  read_opt(doc, "seed", "", c.master_seed);
  read_opt(doc, "output", "", c.output_dir);
  if (doc.contains("model")) {
    c.model_json = doc.at("model");
    c.model = parse_model(c.model_json);
  }
  if (doc.contains("parameters")) {
    const json& p = doc.at("parameters");
    if (!p.is_object()) throw SchemaError("key 'parameters' must be an object");
    const std::string w = "parameters.";
    reject_unknown(p, {"realizations", "energy", "half_width", "window_c",
                       "region_blocks", "block_sizes", "interval_widths", "K", "a",
                       "b", "intervals", "cluster_delta_rel", "region", "z_grid",
                       "schur_tol", "herglotz_tol", "kernel_tol"},
                   w);
    read_opt(p, "realizations", w, c.realizations);
    read_opt(p, "energy", w, c.energy);
    if (p.contains("half_width")) c.half_width = get<double>(p, "half_width", w);
    if (p.contains("window_c")) {
      c.window_c = get<double>(p, "window_c", w);
      if (!p.contains("half_width")) c.half_width.reset();
    }
    read_opt(p, "region_blocks", w, c.region_blocks);
    read_opt(p, "block_sizes", w, c.block_sizes);
    read_opt(p, "interval_widths", w, c.interval_widths);
    read_opt(p, "K", w, c.minami_k);
    read_opt(p, "a", w, c.minami_a);
    read_opt(p, "b", w, c.minami_b);
    if (p.contains("intervals")) {
      c.intervals.clear();
      for (const auto& pair :
           get<std::vector<std::vector<double>>>(p, "intervals", w)) {
        if (pair.size() != 2 || !(pair[0] < pair[1]))
          throw SchemaError("key 'parameters.intervals' needs [lo, hi] pairs");
        c.intervals.push_back({pair[0], pair[1]});
      }
    }
    read_opt(p, "cluster_delta_rel", w, c.cluster_delta_rel);
    read_opt(p, "region", w, c.region);
    if (p.contains("z_grid")) c.z_grid = parse_grid(p.at("z_grid"));
    read_opt(p, "schur_tol", w, c.schur_tol);
    read_opt(p, "herglotz_tol", w, c.herglotz_tol);
    read_opt(p, "kernel_tol", w, c.kernel_tol);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentKind kind) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& ex) {
    throw SchemaError("config '" + path + "' is not valid JSON: " + ex.what());
  }
  return parse_config(doc, kind);
}

void ExperimentConfig::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0))
      throw SchemaError(std::string("key 'parameters.") + key + "' must be > 0");
  };
  if (realizations < 1) throw SchemaError("key 'parameters.realizations' must be >= 1");
  if (half_width) positive(*half_width, "half_width");
  positive(window_c, "window_c");
  positive(cluster_delta_rel, "cluster_delta_rel");
  positive(schur_tol, "schur_tol");
  positive(herglotz_tol, "herglotz_tol");
  positive(kernel_tol, "kernel_tol");
  for (double wdt : interval_widths) positive(wdt, "interval_widths");
  for (int b : block_sizes)
    if (b < 1) throw SchemaError("key 'parameters.block_sizes' entries must be >= 1");
  if (region_blocks < 0) throw SchemaError("key 'parameters.region_blocks' must be >= 0");
  if (minami_k < 0) throw SchemaError("key 'parameters.K' must be >= 0");
  if (region.empty()) throw SchemaError("key 'parameters.region' is empty");
  for (int n : region)
    if (n < 0 || n >= model.scheme.size())
      throw SchemaError("key 'parameters.region' has block id " +
                        std::to_string(n) + " outside the scheme");
  if (z_grid.re_points < 1 || z_grid.im_points < 1)
    throw SchemaError("key 'parameters.z_grid' needs >= 1 point per axis");
}

json ExperimentConfig::to_json() const {
  json intervals_json = json::array();
  for (const auto& iv : intervals) intervals_json.push_back({iv.lower, iv.upper});
  json p = {{"realizations", realizations},
            {"energy", energy},
            {"window_c", window_c},
            {"region_blocks", region_blocks},
            {"block_sizes", block_sizes},
            {"interval_widths", interval_widths},
            {"K", minami_k},
            {"a", minami_a},
            {"b", minami_b},
            {"intervals", intervals_json},
            {"cluster_delta_rel", cluster_delta_rel},
            {"region", region},
            {"z_grid",
             {{"re", {z_grid.re_min, z_grid.re_max, z_grid.re_points}},
              {"im", {z_grid.im_min, z_grid.im_max, z_grid.im_points}}}},
            {"schur_tol", schur_tol},
            {"herglotz_tol", herglotz_tol},
            {"kernel_tol", kernel_tol}};
  if (half_width) p["half_width"] = *half_width;
  json model_out = model_json;
  if (model_out.is_object() && !model_out.contains("builtin"))
    model_out["disorder"] = disorder_json(model.disorder);
  return {{"schema_version", 1},
          {"experiment", to_string(kind)},
          {"seed", master_seed},
          {"model", model_out},
          {"parameters", p}};
}

std::string fnv1a64_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string ExperimentConfig::hash() const { return fnv1a64_hex(to_json().dump()); }

}  // namespace specmult
