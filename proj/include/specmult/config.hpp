#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "specmult/operator_models.hpp"
#include "specmult/types.hpp"

namespace specmult {

enum class ExperimentKind {
  multiplicity,
  minami,
  stats,
  green_check,
  kernel_check,
  counterexample
};

std::string to_string(ExperimentKind k);
/// Throws SchemaError for an unknown name.
ExperimentKind parse_kind(const std::string& name);

struct ZGrid {
  double re_min = -3.0;
  double re_max = 3.0;
  int re_points = 20;
  double im_min = 0.1;
  double im_max = 2.0;
  int im_points = 20;

  std::vector<Complex> points() const;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::multiplicity;
  nlohmann::json model_json;
  ModelSpec model;
  std::uint64_t master_seed = 0;
  std::string output_dir = "specmult-out";

  int realizations = 20;
  double energy = 0.0;
  /// Window half-width h; when absent h = window_c / N_sites.
  std::optional<double> half_width;
  double window_c = 5.0;
  /// Scheme blocks per restriction region; 0 means the whole volume.
  int region_blocks = 0;
  std::vector<int> block_sizes{20, 40};
  std::vector<double> interval_widths{0.04, 0.02, 0.01};
  int minami_k = 1;
  double minami_a = 2.0;
  double minami_b = 1.0;
  std::vector<Interval> intervals;
  double cluster_delta_rel = 1e-8;
  /// Block ids of B for green-check and kernel-check.
  std::vector<int> region{0};
  ZGrid z_grid;
  double schur_tol = 1e-9;
  double herglotz_tol = 1e-10;
  double kernel_tol = 1e-7;

  /// Canonical JSON of everything above (keys sorted).
  nlohmann::json to_json() const;
  /// FNV-1a 64 of to_json().dump(), as 16 hex digits.
  std::string hash() const;
  void validate() const;
};

/// Defaults for a subcommand when no config file is given.
ExperimentConfig default_config(ExperimentKind kind);

/// Parses a model section: {"builtin": name, "length": L} or an explicit
/// {"geometry", "boundary", "hoppings", "onsite_pattern", "blocks",
/// "disorder"} object.
ModelSpec parse_model(const nlohmann::json& j);

/// Builds a config for `kind` from a parsed document. Unknown keys and type
/// mismatches throw SchemaError naming the offending key.
ExperimentConfig parse_config(const nlohmann::json& doc, ExperimentKind kind);
ExperimentConfig load_config(const std::string& path, ExperimentKind kind);

std::string fnv1a64_hex(const std::string& text);

}  // namespace specmult
