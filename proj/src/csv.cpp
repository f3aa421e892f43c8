#include "specmult/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "specmult/error.hpp"

namespace specmult {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string header_lines(const ArtifactHeader& header) {
  std::ostringstream os;
  os << "# specmult artifact: " << header.kind << '\n'
     << "# schema_version: " << kSchemaVersion << '\n'
     << "# master_seed: " << header.master_seed << '\n'
     << "# config_hash: " << header.config_hash << '\n';
  return os.str();
}

std::string multiplicity_csv(
    const ArtifactHeader& header,
    const std::vector<std::pair<std::uint64_t, MultiplicityReport>>& reports) {
  std::ostringstream os;
  os << header_lines(header) << "realization,value,count,spread\n";
  for (const auto& [index, report] : reports)
    for (const auto& c : report.clusters)
      os << index << ',' << format_double(c.value) << ',' << c.count << ','
         << format_double(c.spread) << '\n';
  return os.str();
}

std::string counts_csv(const ArtifactHeader& header, const CountTable& table) {
  std::ostringstream os;
  os << header_lines(header) << "realization,block,count\n";
  for (std::size_t r = 0; r < table.size(); ++r)
    for (std::size_t k = 0; k < table[r].size(); ++k)
      os << r << ',' << k << ',' << table[r][k] << '\n';
  return os.str();
}

std::string pmf_csv(const ArtifactHeader& header, const CountDistribution& dist,
                    const PoissonFit& fit) {
  std::ostringstream os;
  os << header_lines(header) << "count,probability,poisson\n";
  const int top = std::max<int>(static_cast<int>(dist.pmf.size()) - 1,
                                static_cast<int>(fit.lambda_hat) + 1);
  for (int k = 0; k <= std::min(top, kPoissonSupport); ++k) {
    const double e = k < static_cast<int>(dist.pmf.size()) ? dist.pmf[k] : 0.0;
    os << k << ',' << format_double(e) << ','
       << format_double(poisson_pmf(k, fit.lambda_hat)) << '\n';
  }
  return os.str();
}

std::string minami_csv(const ArtifactHeader& header,
                       const std::vector<MinamiEstimate>& rows) {
  std::ostringstream os;
  os << header_lines(header)
     << "block_count,interval_width,samples,hits,p_hat,ci_lower,ci_upper,ratio,"
        "ratio_upper\n";
  for (const auto& m : rows)
    os << m.block_count << ',' << format_double(m.interval_width) << ','
       << m.samples << ',' << m.hits << ',' << format_double(m.p_hat) << ','
       << format_double(m.ci.lower) << ',' << format_double(m.ci.upper) << ','
       << format_double(m.ratio) << ',' << format_double(m.ratio_upper) << '\n';
  return os.str();
}

std::string green_grid_csv(const ArtifactHeader& header,
                           const std::vector<GreenMatrix>& grid) {
  std::ostringstream os;
  os << header_lines(header) << "re_z,im_z,row,col,re_g,im_g,method\n";
  for (const auto& gm : grid)
    for (Eigen::Index c = 0; c < gm.g.cols(); ++c)
      for (Eigen::Index r = 0; r < gm.g.rows(); ++r)
        os << format_double(gm.z.real()) << ',' << format_double(gm.z.imag())
           << ',' << r << ',' << c << ',' << format_double(gm.g(r, c).real())
           << ',' << format_double(gm.g(r, c).imag()) << ','
           << to_string(gm.method) << '\n';
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

}  // namespace specmult
