#pragma once

// Orchestration of the analyses behind the quadsym command line and their
// JSON / CSV output.

#include "quadsym/document.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace quadsym {

struct RunOptions {
  std::string subcommand = "analyze";  // analyze | subelliptic-verify | heat-check | weight-check | wick-check | all
  int n_max = -1;                      // cap on every truncation degree, -1 for none
  double tol = 1e-10;                  // kernel threshold tol_rel
  std::uint64_t seed = 1;
  std::vector<int> trunc{10, 14, 18, 22};
  double shell_lo = 1.0, shell_hi = 1024.0;
  int k0_samples = 200;
  double heat_t = 0.5;
  int heat_N = 24;
  int wick_N = 20;
  std::vector<int> wick_trunc{8, 16, 24};
  bool timings = false;  // runtimes make reports differ between runs, so they are opt-in
};

struct CsvRow {
  std::string key;
  double x = 0.0;
  double value = 0.0;
};

struct RunResult {
  nlohmann::ordered_json report;
  std::map<std::string, std::vector<CsvRow>> series;  // file stem -> rows
  int exit_code = 0;                                   // 0 all pass, 2 a check failed
};

const std::vector<std::string>& subcommands();

/// "1:1024:geometric" -> (1, 1024).
std::pair<double, double> parse_shells(const std::string& text);
/// "10,14,18,22" -> {10, 14, 18, 22}.
std::vector<int> parse_int_list(const std::string& text);

/// Runs the analyses of opts.subcommand. Throws InputError on invalid options.
RunResult run(const SymbolDocument& doc, const RunOptions& opts);

/// Writes <dir>/<stem>.csv with header key,x,value.
void write_series(const std::string& dir, const std::map<std::string, std::vector<CsvRow>>& series);

}  // namespace quadsym
