#include "exeos/stats/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace exeos::stats {

std::string_view to_string(TestKind t) {
  return t == TestKind::ZProportion ? "z-proportion" : "mann-whitney-u";
}

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::FavorsA: return "favors-a";
    case Direction::FavorsB: return "favors-b";
    case Direction::NoDifference: return "none";
  }
  return "none";
}

std::string_view to_string(A12Magnitude m) {
  switch (m) {
    case A12Magnitude::Negligible: return "negligible";
    case A12Magnitude::Small: return "small";
    case A12Magnitude::Medium: return "medium";
    case A12Magnitude::Large: return "large";
  }
  return "negligible";
}

namespace {

double normal_upper_tail(double z) {
  return std::erfc(z / std::sqrt(2.0)) / 2.0;
}

double normal_cdf(double z) {
  return std::erfc(-z / std::sqrt(2.0)) / 2.0;
}

// U of the first sample: #{x>y} + 0.5 #{x==y}. Always a multiple of 0.5.
double u_of(const std::vector<double>& xs, const std::vector<double>& ys) {
  double u = 0.0;
  for (double x : xs)
    for (double y : ys) {
      if (x > y)
        u += 1.0;
      else if (x == y)
        u += 0.5;
    }
  return u;
}

// Exhaustive enumeration of the C(n+m, n) equally likely assignments of the
// pooled values to the first group; exact even under ties.
double exact_p(const std::vector<double>& xs, const std::vector<double>& ys) {
  std::vector<double> pooled = xs;
  pooled.insert(pooled.end(), ys.begin(), ys.end());
  std::sort(pooled.begin(), pooled.end());
  const std::size_t n = xs.size();
  const std::size_t total_size = pooled.size();
  const double observed = u_of(xs, ys);

  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  std::uint64_t total = 0, at_most = 0;
  std::vector<double> gx(n), gy(total_size - n);
  for (;;) {
    gx.clear();
    gy.clear();
    std::size_t next = 0;
    for (std::size_t i = 0; i < total_size; ++i) {
      if (next < n && pick[next] == i) {
        gx.push_back(pooled[i]);
        ++next;
      } else {
        gy.push_back(pooled[i]);
      }
    }
    ++total;
    if (u_of(gx, gy) <= observed + 1e-12) ++at_most;

    // Advance to the next combination of indices.
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == total_size - n + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return static_cast<double>(at_most) / static_cast<double>(total);
}

}  // namespace

A12Magnitude a12_magnitude(double value) {
  // Thresholds 0.44 / 0.36 / 0.29 mirrored around 0.5; boundaries take the
  // larger magnitude. The epsilon absorbs representation error in the
  // distance (e.g. 0.5 - 0.29 lands just under 0.21).
  double d = std::abs(value - 0.5);
  constexpr double eps = 1e-12;
  if (d >= 0.21 - eps) return A12Magnitude::Large;
  if (d >= 0.14 - eps) return A12Magnitude::Medium;
  if (d >= 0.06 - eps) return A12Magnitude::Small;
  return A12Magnitude::Negligible;
}

std::pair<double, A12Magnitude> a12(const std::vector<double>& xs,
                                    const std::vector<double>& ys) {
  std::uint64_t greater = 0, ties = 0;
  for (double x : xs)
    for (double y : ys) {
      if (x > y)
        ++greater;
      else if (x == y)
        ++ties;
    }
  const std::uint64_t pairs = xs.size() * ys.size();
  const std::uint64_t half_units = 2 * greater + ties;  // numerator in halves

  // Divide the smaller side and derive the larger as its complement, so
  // a12(x,y) + a12(y,x) == 1 holds exactly in floating point.
  double value;
  if (half_units == pairs)
    value = 0.5;
  else if (half_units < pairs)
    value = static_cast<double>(half_units) / (2.0 * pairs);
  else
    value = 1.0 - static_cast<double>(2 * pairs - half_units) / (2.0 * pairs);
  return {value, a12_magnitude(value)};
}

StatTestResult z_test_proportions(std::size_t exec_a, std::size_t n_a,
                                  std::size_t exec_b, std::size_t n_b) {
  StatTestResult out;
  out.test = TestKind::ZProportion;

  const double pa = static_cast<double>(exec_a) / n_a;
  const double pb = static_cast<double>(exec_b) / n_b;
  const double pooled =
      static_cast<double>(exec_a + exec_b) / static_cast<double>(n_a + n_b);
  if (pooled == 0.0 || pooled == 1.0) {
    out.degenerate = true;  // no variance to test against
    return out;
  }
  const double se =
      std::sqrt(pooled * (1.0 - pooled) * (1.0 / n_a + 1.0 / n_b));
  out.statistic = (pa - pb) / se;
  out.p_value = normal_upper_tail(out.statistic);
  out.direction = out.statistic > 0   ? Direction::FavorsA
                  : out.statistic < 0 ? Direction::FavorsB
                                      : Direction::NoDifference;
  return out;
}

StatTestResult mann_whitney_u(const std::vector<double>& xs,
                              const std::vector<double>& ys) {
  StatTestResult out;
  out.test = TestKind::MannWhitneyU;
  const std::size_t n = xs.size(), m = ys.size();
  out.statistic = u_of(xs, ys);

  if (std::max(n, m) <= 8) {
    out.p_value = exact_p(xs, ys);
  } else {
    std::vector<double> pooled = xs;
    pooled.insert(pooled.end(), ys.begin(), ys.end());
    std::sort(pooled.begin(), pooled.end());
    const double total_size = static_cast<double>(n + m);
    double tie_sum = 0.0;
    for (std::size_t i = 0; i < pooled.size();) {
      std::size_t j = i;
      while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
      const double t = static_cast<double>(j - i);
      tie_sum += t * t * t - t;
      i = j;
    }
    const double mu = static_cast<double>(n) * m / 2.0;
    const double variance =
        static_cast<double>(n) * m / 12.0 *
        ((total_size + 1.0) - tie_sum / (total_size * (total_size - 1.0)));
    if (variance <= 0.0) {
      out.p_value = 0.5;  // every pooled value identical
    } else {
      out.p_value =
          normal_cdf((out.statistic - mu + 0.5) / std::sqrt(variance));
    }
  }

  auto [value, mag] = a12(xs, ys);
  out.a12 = value;
  out.a12_magnitude = mag;
  out.direction = value < 0.5   ? Direction::FavorsA
                  : value > 0.5 ? Direction::FavorsB
                                : Direction::NoDifference;
  return out;
}

}  // namespace exeos::stats
