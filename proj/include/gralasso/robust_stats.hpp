#pragma once
// Univariate robust building blocks: median, Qn scale, ranks, normal scores
// and the standard normal quantile function.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <span>
#include <vector>

#include "gralasso/common.hpp"

namespace gralasso {

/// Consistency factor of Qn at the normal model. No finite-sample correction is applied.
inline constexpr double kQnConsistency = 2.2219;

struct RobustSummary {
  double location = 0.0;
  double scale = 0.0;
};

enum class TiePolicy {
  average,  // mid-ranks
  first,    // ordinal ranks, ties broken by position
};

namespace detail {

inline void require_finite(std::span<const double> x, const char* module) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) {
      fail(module, "non-finite value at position " + std::to_string(i));
    }
  }
}

// Number of pairs i < j of sorted data with x[j] - x[i] <= t.
inline std::uint64_t count_pairs_within(const std::vector<double>& sorted, double t) {
  const std::size_t n = sorted.size();
  std::uint64_t count = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < i) j = i;
    while (j + 1 < n && sorted[j + 1] - sorted[i] <= t) ++j;
    count += j - i;
  }
  return count;
}

inline double lower_normal_quantile_guess(double p) {
  // Rational approximation of P. J. Acklam, relative error about 1.15e-9.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace detail

inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Phi^{-1}(p). Rational initial guess refined by one Halley step on erfc; the lower
/// tail is evaluated directly and the upper tail by symmetry.
inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) fail("robust_stats", "probability out of range");
  if (p == 0.5) return 0.0;
  const bool upper = p > 0.5;
  const double q = upper ? 1.0 - p : p;
  double x = detail::lower_normal_quantile_guess(q);
  const double e = std_normal_cdf(x) - q;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return upper ? -x : x;
}

inline double median(std::span<const double> x) {
  if (x.empty()) fail("robust_stats", "empty input");
  detail::require_finite(x, "robust_stats");
  std::vector<double> v(x.begin(), x.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

/// k-th smallest (1-based) of {|x_i - x_j| : i < j}, computed exactly without
/// materialising all n(n-1)/2 differences: bisection on the value narrows the
/// candidate window, then the few remaining candidates are enumerated.
inline double kth_pairwise_distance(std::span<const double> x, std::uint64_t k) {
  const std::size_t n = x.size();
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  if (n < 2 || k < 1 || k > total) fail("robust_stats", "pairwise order statistic out of range");

  std::vector<double> s(x.begin(), x.end());
  std::sort(s.begin(), s.end());

  if (detail::count_pairs_within(s, 0.0) >= k) return 0.0;

  // count(<= lo) < k <= count(<= hi)
  double lo = 0.0;
  double hi = s.back() - s.front();
  std::uint64_t count_lo = detail::count_pairs_within(s, lo);
  std::uint64_t count_hi = total;
  const std::uint64_t window = std::max<std::uint64_t>(n, 1024);
  while (count_hi - count_lo > window) {
    const double mid = lo + 0.5 * (hi - lo);
    if (!(mid > lo && mid < hi)) break;
    const std::uint64_t c = detail::count_pairs_within(s, mid);
    if (c >= k) {
      hi = mid;
      count_hi = c;
    } else {
      lo = mid;
      count_lo = c;
    }
  }
  if (count_hi - count_lo > window) return hi;  // no representable value strictly inside (lo, hi)

  std::vector<double> candidates;
  candidates.reserve(static_cast<std::size_t>(count_hi - count_lo));
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < i + 1) j = i + 1;
    while (j < n && s[j] - s[i] <= lo) ++j;
    for (std::size_t m = j; m < n; ++m) {
      const double diff = s[m] - s[i];
      if (diff > hi) break;
      candidates.push_back(diff);
    }
  }
  const auto rank = static_cast<std::ptrdiff_t>(k - count_lo - 1);
  std::nth_element(candidates.begin(), candidates.begin() + rank, candidates.end());
  return candidates[static_cast<std::size_t>(rank)];
}

/// Qn = d * {|x_i - x_j|; i < j}_(k), k = C(h, 2), h = floor(n/2) + 1.
inline double qn_scale(std::span<const double> x) {
  if (x.size() < 2) fail("robust_stats", "need at least two observations");
  detail::require_finite(x, "robust_stats");
  const std::uint64_t h = x.size() / 2 + 1;
  const std::uint64_t k = h * (h - 1) / 2;
  return kQnConsistency * kth_pairwise_distance(x, k);
}

inline RobustSummary robust_summary(std::span<const double> x) {
  return {median(x), qn_scale(x)};
}

/// Ranks in 1..n. Mid-rank averaging for ties by default.
inline std::vector<double> ranks(std::span<const double> x, TiePolicy ties = TiePolicy::average) {
  const std::size_t n = x.size();
  if (n == 0) fail("robust_stats", "empty input");
  detail::require_finite(x, "robust_stats");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
    for (std::size_t m = i; m <= j; ++m) {
      r[order[m]] = ties == TiePolicy::average ? 0.5 * static_cast<double>(i + j + 2)
                                               : static_cast<double>(m + 1);
    }
    i = j + 1;
  }
  return r;
}

/// Phi^{-1}(rank / (n + 1)) elementwise.
inline std::vector<double> normal_scores(std::span<const double> x) {
  if (x.size() < 2) fail("robust_stats", "need at least two observations");
  std::vector<double> r = ranks(x);
  const double denom = static_cast<double>(x.size()) + 1.0;
  for (double& v : r) v = std_normal_quantile(v / denom);
  return r;
}

}  // namespace gralasso
