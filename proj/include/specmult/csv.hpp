#pragma once

// Artifact serialization. Every file starts with '#'-prefixed header lines
// carrying the schema version, master seed and config hash, then a column
// header row. Numbers use '.' decimals and the shortest round-trip form;
// lines end in '\n'.

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "specmult/green_matrix.hpp"
#include "specmult/spectral_core.hpp"
#include "specmult/statistics.hpp"

namespace specmult {

inline constexpr int kSchemaVersion = 1;

struct ArtifactHeader {
  std::string kind;
  std::uint64_t master_seed = 0;
  std::string config_hash;
};

std::string format_double(double v);
std::string header_lines(const ArtifactHeader& header);

/// realization,value,count,spread
std::string multiplicity_csv(
    const ArtifactHeader& header,
    const std::vector<std::pair<std::uint64_t, MultiplicityReport>>& reports);

/// realization,block,count
std::string counts_csv(const ArtifactHeader& header, const CountTable& table);

/// count,probability,poisson
std::string pmf_csv(const ArtifactHeader& header, const CountDistribution& dist,
                    const PoissonFit& fit);

/// block_count,interval_width,samples,hits,p_hat,ci_lower,ci_upper,ratio,ratio_upper
std::string minami_csv(const ArtifactHeader& header,
                       const std::vector<MinamiEstimate>& rows);

/// re_z,im_z,row,col,re_g,im_g,method
std::string green_grid_csv(const ArtifactHeader& header,
                           const std::vector<GreenMatrix>& grid);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace specmult
