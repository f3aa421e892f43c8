#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "specmult/config.hpp"
#include "specmult/spectral_core.hpp"
#include "specmult/statistics.hpp"

namespace specmult {

struct ExperimentOutput {
  /// (file name, contents); written under the output directory.
  std::vector<std::pair<std::string, std::string>> files;
  nlohmann::json summary;
};

/// Window half-width used by the stats experiment.
double stats_half_width(const ExperimentConfig& config);

/// Per-realization cluster reports of the spectrum of each region.
std::vector<std::pair<std::uint64_t, MultiplicityReport>> multiplicity_reports(
    const EnsembleResult& result, double delta_rel);

ExperimentOutput run_experiment(const ExperimentConfig& config, int threads);

}  // namespace specmult
