#include "exeos/stats/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace exeos::stats {

std::optional<double> relative_error(double s, double g) {
  if (g == 0.0) {
    if (s == 0.0) return 0.0;
    return std::nullopt;
  }
  return std::abs(s - g) / std::abs(g);
}

Result<MetricsSummary, StatsError> summarize(
    const std::vector<pipeline::RunRecord>& records,
    const std::map<std::string, double>& ground_truths) {
  MetricsSummary out;
  std::vector<double> errors;

  for (const auto& record : records) {
    ++out.n_total;
    switch (record.final_class) {
      case pipeline::OutcomeClass::Solved: ++out.n_exec; break;
      case pipeline::OutcomeClass::CompileError: ++out.n_ce; break;
      case pipeline::OutcomeClass::RuntimeError: ++out.n_re; break;
    }
    if (record.final_class != pipeline::OutcomeClass::Solved) continue;

    auto truth = ground_truths.find(record.problem_id);
    if (truth == ground_truths.end())
      return StatsError{record.problem_id,
                        "no ground truth for problem '" + record.problem_id +
                            "'"};
    auto rel = relative_error(*record.objective, truth->second);
    if (!rel) {
      ++out.n_undefined;
      continue;
    }
    if (*rel == 0.0) ++out.n_zero;
    errors.push_back(*rel);
  }

  if (out.n_total > 0)
    out.success_rate =
        static_cast<double>(out.n_exec) / static_cast<double>(out.n_total);

  if (!errors.empty()) {
    std::sort(errors.begin(), errors.end());
    double sum = std::accumulate(errors.begin(), errors.end(), 0.0);
    double mean = sum / static_cast<double>(errors.size());
    out.relerr_mean = mean;
    std::size_t n = errors.size();
    out.relerr_median = n % 2 == 1
                            ? errors[n / 2]
                            : (errors[n / 2 - 1] + errors[n / 2]) / 2.0;
    if (n >= 2) {
      double ss = 0.0;
      for (double e : errors) ss += (e - mean) * (e - mean);
      out.relerr_std = std::sqrt(ss / static_cast<double>(n - 1));
    }
  }
  return out;
}

}  // namespace exeos::stats
