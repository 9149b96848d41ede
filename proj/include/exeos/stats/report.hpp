#pragma once

#include <string>
#include <vector>

#include "exeos/stats/metrics.hpp"
#include "exeos/stats/stat_tests.hpp"

namespace exeos::stats {

struct ReportCell {
  std::string variant;
  std::string model;  // backend/model label; fixture runs use "scripted"
  MetricsSummary summary;
};

struct Comparison {
  std::string label;  // e.g. "exec Ampl4 vs Python4"
  StatTestResult result;
};

struct ReportDocument {
  std::string csv;       // one row per cell, fixed column order
  std::string markdown;  // per-model tables, delta rows, comparison table
};

// Pure function of its inputs: identical inputs yield byte-identical output.
// Cells are sorted by (model, variant); for every (model, suffix) pair that
// has both an Ampl<n> and a Python<n> cell, the Markdown table gets a signed
// Ampl-minus-Python delta row. Wall-clock timing never appears.
ReportDocument report(const std::vector<ReportCell>& cells,
                      const std::vector<Comparison>& comparisons);

// Comparison plan entry: which metric of which two cells to test.
//   exec  <cell-a> vs <cell-b>   -> z_test_proportions over success counts
//   relerr <cell-a> vs <cell-b>  -> mann_whitney_u over defined RelErr values
struct ComparisonSpec {
  std::string kind;  // "exec" | "relerr"
  std::string a, b;  // cell labels, matched against "variant" or "variant:model"
};

// Parses the plan file format: one entry per line, `#` comments, blank lines
// ignored.
Result<std::vector<ComparisonSpec>, StatsError> parse_comparisons(
    const std::string& text);

}  // namespace exeos::stats
