// specmult: command-line driver for the finite-volume experiments.
//
// Exit codes: 0 success, 2 schema/config error, 3 numerical failure (a
// diagnostics.txt is written to the output directory).

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "specmult/config.hpp"
#include "specmult/csv.hpp"
#include "specmult/error.hpp"
#include "specmult/experiments.hpp"

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitNumerical = 3;

std::optional<std::string> env(const char* name) {
  if (const char* v = std::getenv(name); v && *v) return std::string(v);
  return std::nullopt;
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw specmult::SchemaError(std::string(what) + ": not an unsigned integer: '" +
                                text + "'");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume random operator multiplicity and statistics lab"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out_dir;

  for (const char* name : {"multiplicity", "minami", "stats", "green-check",
                           "kernel-check", "counterexample"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON experiment config");
    sub->add_option("--seed", seed, "master seed (overrides SPECMULT_SEED and config)");
    sub->add_option("--threads", threads,
                    "worker threads (overrides SPECMULT_THREADS); 1 = serial");
    sub->add_option("--out", out_dir, "output directory");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string kind_name = app.get_subcommands().front()->get_name();

  std::filesystem::path out_path;
  try {
    const auto kind = specmult::parse_kind(kind_name);
    specmult::ExperimentConfig config = config_path.empty()
                                            ? specmult::default_config(kind)
                                            : specmult::load_config(config_path, kind);
    if (seed)
      config.master_seed = *seed;
    else if (auto s = env("SPECMULT_SEED"))
      config.master_seed = parse_u64(*s, "SPECMULT_SEED");

    int worker_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    if (threads)
      worker_threads = *threads;
    else if (auto t = env("SPECMULT_THREADS"))
      worker_threads = static_cast<int>(parse_u64(*t, "SPECMULT_THREADS"));
    if (worker_threads < 1) throw specmult::SchemaError("--threads must be >= 1");

    if (!out_dir.empty()) config.output_dir = out_dir;
    out_path = config.output_dir;
    config.validate();

    if (!config.model.disorder.support_full_real())
      std::cerr << "warning: " << config.model.disorder.family()
                << " disorder does not have full support on R; the multiplicity "
                   "lower bound need not hold for this model\n";

    const auto result = specmult::run_experiment(config, worker_threads);
    for (const auto& [name, content] : result.files)
      specmult::write_text(out_path / name, content);
    specmult::write_text(out_path / "summary.json", result.summary.dump(2) + "\n");
    std::cout << result.summary.dump(2) << "\n";
    return 0;
  } catch (const specmult::SchemaError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return kExitSchema;
  } catch (const specmult::NumericalError& ex) {
    std::cerr << "numerical failure: " << ex.what() << "\n";
    if (!out_path.empty()) {
      try {
        specmult::write_text(out_path / "diagnostics.txt",
                             std::string("experiment: ") + kind_name +
                                 "\nnumerical failure: " + ex.what() + "\n");
      } catch (const std::exception&) {
      }
    }
    return kExitNumerical;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
