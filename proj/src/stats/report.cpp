#include "exeos/stats/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

namespace exeos::stats {

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string percent(double fraction) { return fmt("%.1f%%", fraction * 100.0); }

std::string opt_cell(const std::optional<double>& v) {
  return v ? fmt("%.4g", *v) : "-";
}

std::string signed_count(long long delta) {
  return (delta > 0 ? "+" : "") + std::to_string(delta);
}

std::string signed_opt(const std::optional<double>& a,
                       const std::optional<double>& b) {
  if (!a || !b) return "-";
  double d = *a - *b;
  return (d > 0 ? "+" : "") + fmt("%.4g", d);
}

std::string csv_opt(const std::optional<double>& v) {
  return v ? format_double(*v) : "";
}

// Ampl<n> / Python<n> pairing for the delta rows.
std::optional<int> suffix_of(const std::string& variant,
                             const std::string& prefix) {
  if (variant.size() != prefix.size() + 1 || variant.rfind(prefix, 0) != 0)
    return std::nullopt;
  char c = variant.back();
  if (c < '1' || c > '9') return std::nullopt;
  return c - '0';
}

void append_summary_row(std::string& out, const std::string& head,
                        const MetricsSummary& s) {
  out += "| " + head;
  out += " | " + std::to_string(s.n_exec);
  out += " | " + percent(s.success_rate);
  out += " | " + std::to_string(s.n_ce);
  out += " | " + std::to_string(s.n_re);
  out += " | " + opt_cell(s.relerr_mean);
  out += " | " + opt_cell(s.relerr_median);
  out += " | " + opt_cell(s.relerr_std);
  out += " | " + std::to_string(s.n_zero);
  out += " |\n";
}

void append_delta_row(std::string& out, int suffix, const MetricsSummary& a,
                      const MetricsSummary& p) {
  out += "| Ampl" + std::to_string(suffix) + " vs Python" +
         std::to_string(suffix) + " (Δ)";
  out += " | " + signed_count(static_cast<long long>(a.n_exec) -
                              static_cast<long long>(p.n_exec));
  double ds = (a.success_rate - p.success_rate) * 100.0;
  out += " | " + std::string(ds > 0 ? "+" : "") + fmt("%.1f%%", ds);
  out += " | " + signed_count(static_cast<long long>(a.n_ce) -
                              static_cast<long long>(p.n_ce));
  out += " | " + signed_count(static_cast<long long>(a.n_re) -
                              static_cast<long long>(p.n_re));
  out += " | " + signed_opt(a.relerr_mean, p.relerr_mean);
  out += " | " + signed_opt(a.relerr_median, p.relerr_median);
  out += " | " + signed_opt(a.relerr_std, p.relerr_std);
  out += " | " + signed_count(static_cast<long long>(a.n_zero) -
                              static_cast<long long>(p.n_zero));
  out += " |\n";
}

}  // namespace

ReportDocument report(const std::vector<ReportCell>& cells,
                      const std::vector<Comparison>& comparisons) {
  std::vector<ReportCell> sorted = cells;
  std::sort(sorted.begin(), sorted.end(),
            [](const ReportCell& a, const ReportCell& b) {
              return std::tie(a.model, a.variant) < std::tie(b.model, b.variant);
            });

  ReportDocument doc;

  // Machine-readable side: one row per cell, fixed column order, full
  // precision.
  doc.csv =
      "variant,model,n_total,n_exec,success_rate,n_ce,n_re,"
      "relerr_mean,relerr_median,relerr_std,n_zero,n_undefined\n";
  for (const auto& cell : sorted) {
    const auto& s = cell.summary;
    doc.csv += cell.variant + "," + cell.model + "," +
               std::to_string(s.n_total) + "," + std::to_string(s.n_exec) +
               "," + format_double(s.success_rate) + "," +
               std::to_string(s.n_ce) + "," + std::to_string(s.n_re) + "," +
               csv_opt(s.relerr_mean) + "," + csv_opt(s.relerr_median) + "," +
               csv_opt(s.relerr_std) + "," + std::to_string(s.n_zero) + "," +
               std::to_string(s.n_undefined) + "\n";
  }

  // Human-readable side: one table per model, with Ampl-minus-Python delta
  // rows whenever a suffix exists on both sides.
  std::string& md = doc.markdown;
  md = "# Evaluation report\n";
  std::string current_model;
  std::map<int, const MetricsSummary*> ampl_by_suffix, python_by_suffix;

  auto flush_deltas = [&]() {
    for (const auto& [suffix, ampl] : ampl_by_suffix) {
      auto python = python_by_suffix.find(suffix);
      if (python != python_by_suffix.end())
        append_delta_row(md, suffix, *ampl, *python->second);
    }
    ampl_by_suffix.clear();
    python_by_suffix.clear();
  };

  for (const auto& cell : sorted) {
    if (cell.model != current_model) {
      flush_deltas();
      current_model = cell.model;
      md += "\n## Model: " + current_model + "\n\n";
      md += "| Variant | #Exec | Success | #CE | #RE | Mean | Med | Std | "
            "#Zero |\n";
      md += "|---|---:|---:|---:|---:|---:|---:|---:|---:|\n";
    }
    append_summary_row(md, cell.variant, cell.summary);
    if (auto n = suffix_of(cell.variant, "Ampl"))
      ampl_by_suffix[*n] = &cell.summary;
    if (auto n = suffix_of(cell.variant, "Python"))
      python_by_suffix[*n] = &cell.summary;
  }
  flush_deltas();

  if (!comparisons.empty()) {
    md += "\n## Comparisons\n\n";
    md += "| Comparison | Test | Statistic | p | p (2dp) | Â12 | Magnitude | "
          "Direction |\n";
    md += "|---|---|---:|---:|---:|---:|---|---|\n";
    for (const auto& comparison : comparisons) {
      const auto& r = comparison.result;
      md += "| " + comparison.label;
      md += " | " + std::string(to_string(r.test)) +
            (r.degenerate ? " (degenerate)" : "");
      md += " | " + format_double(r.statistic);
      md += " | " + format_double(r.p_value);
      md += " | " + fmt("%.2f", r.p_value);
      md += " | " + (r.a12 ? fmt("%.4g", *r.a12) : std::string("-"));
      md += " | " +
            (r.a12_magnitude ? std::string(to_string(*r.a12_magnitude))
                             : std::string("-"));
      md += " | " + std::string(to_string(r.direction));
      md += " |\n";
    }
  }

  return doc;
}

Result<std::vector<ComparisonSpec>, StatsError> parse_comparisons(
    const std::string& text) {
  std::vector<ComparisonSpec> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream tokens(line);
    std::string kind, a, vs, b, extra;
    if (!(tokens >> kind)) continue;  // blank line
    auto fail = [&](const std::string& msg) {
      return StatsError{"", "comparison plan line " + std::to_string(line_no) +
                                ": " + msg};
    };
    if (kind != "exec" && kind != "relerr")
      return fail("metric must be `exec` or `relerr`, got `" + kind + "`");
    if (!(tokens >> a >> vs >> b) || vs != "vs")
      return fail("expected `" + kind + " <cell> vs <cell>`");
    if (tokens >> extra) return fail("trailing tokens after `" + b + "`");
    out.push_back({kind, a, b});
  }
  return out;
}

}  // namespace exeos::stats
