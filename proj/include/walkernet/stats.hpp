#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "walkernet/core.hpp"

namespace walkernet {

inline double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw StatsError("mean of empty sample set");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Empirical CDF over a sample set.
struct Cdf {
  std::vector<double> samples;  // ascending

  static Cdf from_samples(std::vector<double> xs) {
    if (xs.empty()) throw StatsError("empirical CDF of empty sample set");
    std::sort(xs.begin(), xs.end());
    return Cdf{std::move(xs)};
  }

  std::size_t size() const { return samples.size(); }

  // F(x) = fraction of samples <= x
  double fraction_at_or_below(double x) const {
    auto it = std::upper_bound(samples.begin(), samples.end(), x);
    return static_cast<double>(it - samples.begin()) / static_cast<double>(samples.size());
  }

  // Smallest sample value with F(x) >= q, for q in (0, 1].
  double quantile(double q) const {
    if (q <= 0.0) return samples.front();
    std::size_t rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(samples.size())));
    if (rank == 0) rank = 1;
    if (rank > samples.size()) rank = samples.size();
    return samples[rank - 1];
  }
};

// Least-squares slope of y against t.
inline double linear_slope(const std::vector<double>& t, const std::vector<double>& y) {
  if (t.size() != y.size() || t.size() < 2) throw StatsError("linear_slope: need >= 2 points");
  double tm = mean(t), ym = mean(y);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    num += (t[i] - tm) * (y[i] - ym);
    den += (t[i] - tm) * (t[i] - tm);
  }
  if (den == 0.0) throw StatsError("linear_slope: degenerate abscissa");
  return num / den;
}

}  // namespace walkernet
