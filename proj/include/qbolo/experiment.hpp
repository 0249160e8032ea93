#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace qbolo {

/// Thrown for malformed experiment configs and unreadable run directories.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kCsvSchema = "qbolo-rounds v1";

/// Per-round columns for one comparator. NaN marks "not applicable".
struct ComparatorTrace {
  std::string id;
  std::vector<double> regret;
  std::vector<double> bound;
  std::vector<double> lower;
  /// t * reference-point duality gap; saddle runs only.
  std::vector<double> gap_t;
};

struct RunTrace {
  std::string scenario;
  std::string learner;
  std::size_t T = 0;
  std::uint64_t seed = 0;
  std::vector<double> loss_played;
  std::vector<double> w_norm;
  std::vector<ComparatorTrace> comparators;
  /// Per-comparator path length and max norm.
  std::vector<double> path_length;
  std::vector<double> max_norm;
  std::size_t certificate_violations = 0;
  std::size_t scale_violations = 0;
  std::size_t warnings = 0;
};

/// Runs one (scenario, learner, T, seed) combination described by `config`
/// (the same JSON accepted by run_experiment; `horizons`/`seeds` ignored).
RunTrace simulate(const nlohmann::json& config, std::size_t T, std::uint64_t seed);

void write_rounds_csv(const RunTrace& trace, const std::filesystem::path& file);
nlohmann::ordered_json summarize(const RunTrace& trace);

/// Reads a JSON config, runs every (T, seed) pair, and writes
/// `<out>/T<T>_seed<seed>/{rounds.csv,summary.json}` plus `<out>/index.json`.
/// Returns the list of run directories.
std::vector<std::filesystem::path> run_experiment(const std::filesystem::path& config_file,
                                                  const std::filesystem::path& out_dir);

struct VerifyReport {
  std::size_t runs = 0;
  std::size_t rows = 0;
  std::size_t checks = 0;
  std::size_t bound_violations = 0;
  std::size_t lower_violations = 0;
  std::size_t gap_violations = 0;
  std::size_t structure_errors = 0;
  std::vector<std::string> messages;

  bool ok() const noexcept {
    return bound_violations == 0 && lower_violations == 0 && gap_violations == 0 && structure_errors == 0;
  }
};

/// Re-checks regret <= bound, regret >= lower and t*gap <= regret on every
/// logged row. `run_dir` may be a single run or an experiment root.
VerifyReport verify_bounds(const std::filesystem::path& run_dir);

/// Shortest round-trip decimal; "nan" for NaN.
std::string format_double(double v);

}  // namespace qbolo
