#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace exeos::stats {

enum class TestKind { ZProportion, MannWhitneyU };
enum class Direction { FavorsA, FavorsB, NoDifference };
enum class A12Magnitude { Negligible, Small, Medium, Large };

std::string_view to_string(TestKind t);
std::string_view to_string(Direction d);
std::string_view to_string(A12Magnitude m);

struct StatTestResult {
  TestKind test = TestKind::ZProportion;
  double statistic = 0.0;  // Z, or U of the first sample
  double p_value = 0.5;    // one-sided
  std::optional<double> a12;
  std::optional<A12Magnitude> a12_magnitude;
  Direction direction = Direction::NoDifference;
  bool degenerate = false;  // pooled proportion 0 or 1
};

// Pooled two-proportion Z test, one-sided: p is the upper normal tail, so A
// "wins" when Z > 0 and p < 0.05. A pooled proportion of 0 or 1 has no
// variance; that case is flagged and reported as Z = 0, p = 0.5.
StatTestResult z_test_proportions(std::size_t exec_a, std::size_t n_a,
                                  std::size_t exec_b, std::size_t n_b);

// Mann-Whitney U with midrank ties, one-sided in the smaller-is-better
// orientation: statistic is U of xs (#{x>y} + half-ties) and p is
// P(U <= observed). Exact enumeration when max(|xs|,|ys|) <= 8, otherwise a
// normal approximation with tie-corrected variance and 0.5 continuity
// correction. Includes the Vargha-Delaney effect size.
StatTestResult mann_whitney_u(const std::vector<double>& xs,
                              const std::vector<double>& ys);

// Magnitude ladder for an effect-size value: thresholds 0.44 / 0.36 / 0.29
// applied symmetrically around 0.5, boundary values taking the larger
// magnitude.
A12Magnitude a12_magnitude(double value);

// A-hat-12 = (#{x>y} + 0.5 #{x=y}) / (|xs| |ys|). Complement identity
// a12(x,y) + a12(y,x) == 1 holds exactly.
std::pair<double, A12Magnitude> a12(const std::vector<double>& xs,
                                    const std::vector<double>& ys);

}  // namespace exeos::stats
