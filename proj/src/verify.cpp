#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "qbolo/experiment.hpp"

namespace qbolo {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

bool parse_double(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

void verify_run(const std::filesystem::path& dir, VerifyReport& report) {
  ++report.runs;
  const std::string where = dir.filename().string();
  auto fail = [&](const std::string& msg) {
    ++report.structure_errors;
    report.messages.push_back(where + ": " + msg);
  };

  std::ifstream in(dir / "rounds.csv", std::ios::binary);
  if (!in) {
    fail("cannot open rounds.csv");
    return;
  }
  std::string line;
  if (!std::getline(in, line) || line != std::string("# ") + kCsvSchema) {
    fail("missing or unknown schema line");
    return;
  }
  if (!std::getline(in, line)) {
    fail("missing header");
    return;
  }
  const std::vector<std::string> header = split(line);
  if (header.size() < 3 || header[0] != "t" || header[1] != "loss_played" || header[2] != "w_norm") {
    fail("unexpected leading columns");
    return;
  }

  // Column layout per comparator: regret, bound, lower, optional gapT.
  struct Cols {
    std::string id;
    std::size_t regret, bound, lower;
    std::size_t gap = 0;
    bool has_gap = false;
  };
  std::vector<Cols> cols;
  for (std::size_t c = 3; c < header.size();) {
    if (header[c].rfind("regret_", 0) != 0 || c + 2 >= header.size()) {
      fail("malformed comparator columns near '" + header[c] + "'");
      return;
    }
    Cols k{header[c].substr(7), c, c + 1, c + 2};
    if (header[c + 1] != "bound_" + k.id || header[c + 2] != "lower_" + k.id) {
      fail("bound/lower columns do not match '" + k.id + "'");
      return;
    }
    c += 3;
    if (c < header.size() && header[c] == "gapT_" + k.id) {
      k.gap = c++;
      k.has_gap = true;
    }
    cols.push_back(k);
  }

  std::size_t rows = 0;
  while (std::getline(in, line)) {
    const std::vector<std::string> cells = split(line);
    ++rows;
    if (cells.size() != header.size()) {
      fail("row " + std::to_string(rows) + " has " + std::to_string(cells.size()) + " cells");
      return;
    }
    std::vector<double> v(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!parse_double(cells[i], v[i])) {
        fail("row " + std::to_string(rows) + ": unparsable cell '" + cells[i] + "'");
        return;
      }
    }
    if (v[0] != static_cast<double>(rows)) {
      fail("row " + std::to_string(rows) + ": round index out of sequence");
      return;
    }
    for (const Cols& k : cols) {
      const double r = v[k.regret];
      const double b = v[k.bound];
      const double lo = v[k.lower];
      if (!std::isnan(b)) {
        ++report.checks;
        if (r > b + 1e-9 * (1.0 + std::abs(b))) {
          ++report.bound_violations;
          report.messages.push_back(where + " t=" + cells[0] + " " + k.id + ": regret " + cells[k.regret] +
                                    " > bound " + cells[k.bound]);
        }
      }
      if (!std::isnan(lo)) {
        ++report.checks;
        if (r < lo - 1e-9 * (1.0 + std::abs(lo))) {
          ++report.lower_violations;
          report.messages.push_back(where + " t=" + cells[0] + " " + k.id + ": regret " + cells[k.regret] +
                                    " < lower " + cells[k.lower]);
        }
      }
      if (k.has_gap) {
        ++report.checks;
        if (v[k.gap] > r + 1e-9 * (1.0 + std::abs(r))) {
          ++report.gap_violations;
          report.messages.push_back(where + " t=" + cells[0] + " " + k.id + ": t*gap " + cells[k.gap] + " > regret " +
                                    cells[k.regret]);
        }
      }
    }
  }
  report.rows += rows;

  std::ifstream sin(dir / "summary.json", std::ios::binary);
  if (sin) {
    try {
      const nlohmann::json s = nlohmann::json::parse(sin);
      if (s.value("T", std::size_t{0}) != rows) fail("summary T does not match the row count");
    } catch (const nlohmann::json::exception& e) {
      fail(std::string("bad summary.json: ") + e.what());
    }
  }
}

}  // namespace

VerifyReport verify_bounds(const std::filesystem::path& run_dir) {
  if (!std::filesystem::is_directory(run_dir)) throw ConfigError("verify: not a directory: " + run_dir.string());
  VerifyReport report;
  if (std::filesystem::exists(run_dir / "rounds.csv")) {
    verify_run(run_dir, report);
    return report;
  }
  std::vector<std::filesystem::path> dirs;
  for (const auto& entry : std::filesystem::directory_iterator(run_dir)) {
    if (entry.is_directory() && std::filesystem::exists(entry.path() / "rounds.csv")) dirs.push_back(entry.path());
  }
  if (dirs.empty()) throw ConfigError("verify: no rounds.csv under " + run_dir.string());
  std::sort(dirs.begin(), dirs.end());
  for (const auto& d : dirs) verify_run(d, report);
  return report;
}

}  // namespace qbolo
