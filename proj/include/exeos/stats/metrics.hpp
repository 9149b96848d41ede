#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exeos/common.hpp"
#include "exeos/pipeline/runner.hpp"

namespace exeos::stats {

// |s - g| / |g|. Defined as 0 when s == g == 0; undefined (nullopt) when
// g == 0 and s != 0 — callers count those separately instead of letting
// infinities pollute the aggregates.
std::optional<double> relative_error(double s, double g);

// Per-cell rollup of an error-class partition plus relative-error stats over
// the solved records whose error is defined.
struct MetricsSummary {
  std::size_t n_total = 0;
  std::size_t n_exec = 0;  // solved
  std::size_t n_ce = 0;    // compile errors
  std::size_t n_re = 0;    // runtime errors
  double success_rate = 0.0;  // n_exec / n_total; 0 when n_total == 0

  std::size_t n_zero = 0;       // defined relative errors equal to 0
  std::size_t n_undefined = 0;  // g == 0 with s != 0
  std::optional<double> relerr_mean;    // over defined errors; nullopt if none
  std::optional<double> relerr_median;  // even length: midpoint convention
  std::optional<double> relerr_std;     // sample (n-1); needs >= 2 values
};

struct StatsError {
  std::string problem;  // offending problem id, when applicable
  std::string message;

  std::string describe() const { return "stats error: " + message; }
};

// Folds records into one summary. Solved records look up their problem's
// ground truth; a missing entry is an error rather than a silent skip.
Result<MetricsSummary, StatsError> summarize(
    const std::vector<pipeline::RunRecord>& records,
    const std::map<std::string, double>& ground_truths);

}  // namespace exeos::stats
