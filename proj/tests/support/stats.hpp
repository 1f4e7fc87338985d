#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace stats {

inline double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

inline double central_moment(std::span<const double> xs, int k) {
  double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += std::pow(x - m, k);
  return s / static_cast<double>(xs.size());
}

/// 3-sigma multinomial bound on a single cell frequency.
inline bool cell_within_3sigma(double freq, double p, std::uint64_t trials) {
  double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return std::abs(freq - p) <= 3.0 * sigma + 1e-12;
}

/// Standard error of (sample variance - sample mean), from empirical moments.
inline double se_var_minus_mean(std::span<const double> xs) {
  const double t = static_cast<double>(xs.size());
  double s2 = sample_variance(xs);
  double m3 = central_moment(xs, 3);
  double m4 = central_moment(xs, 4);
  double var_v = (m4 - s2 * s2 * (t - 3.0) / (t - 1.0)) / t;
  double var_m = s2 / t;
  double cov = m3 / t;
  double v = var_v + var_m - 2.0 * cov;
  return std::sqrt(v > 0.0 ? v : 0.0);
}

/// Two-sample Kolmogorov–Smirnov statistic for integer-valued samples.
inline double ks_statistic(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    std::uint32_t v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    double fa = static_cast<double>(i) / static_cast<double>(a.size());
    double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

}  // namespace stats
