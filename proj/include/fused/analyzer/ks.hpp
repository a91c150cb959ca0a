#pragma once

#include <algorithm>
#include <cstdlib>
#include <vector>

#include "fused/core/errors.hpp"

namespace fused {

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|. Computed on
/// integer step counts so small hand-enumerable cases come out exact.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw ConfigError("ks_two_sample requires two nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const long long na = static_cast<long long>(a.size()), nb = static_cast<long long>(b.size());
  long long i = 0, j = 0, best = 0;
  while (i < na && j < nb) {
    const double x = std::min(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
    while (i < na && a[static_cast<std::size_t>(i)] == x) ++i;
    while (j < nb && b[static_cast<std::size_t>(j)] == x) ++j;
    best = std::max(best, std::llabs(i * nb - j * na));
  }
  return static_cast<double>(best) / static_cast<double>(na * nb);
}

struct EcdfPoint {
  double x = 0.0;
  double f = 0.0;
};

/// Step points of the empirical CDF, one per distinct value.
inline std::vector<EcdfPoint> ecdf(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<EcdfPoint> out;
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i + 1 < v.size() && v[i + 1] == v[i]) continue;
    out.push_back({v[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

}  // namespace fused
