#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace berman {

// Pairwise summation: deterministic tree, independent of thread count, and
// accurate enough for N up to 1e7.
inline double pairwise_sum(std::span<const double> v) {
  const std::size_t n = v.size();
  if (n <= 32) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

struct MeanStd {
  double mean = 0.0;
  double sd = 0.0;
};

// Two-pass mean / sample standard deviation with pairwise reductions.
inline MeanStd mean_std_pairwise(std::span<const double> v, std::span<double> scratch) {
  MeanStd r;
  const auto n = v.size();
  if (n == 0) return r;
  r.mean = pairwise_sum(v) / static_cast<double>(n);
  if (n < 2) return r;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = v[i] - r.mean;
    scratch[i] = d * d;
  }
  r.sd = std::sqrt(pairwise_sum(scratch.subspan(0, n)) / static_cast<double>(n - 1));
  return r;
}

}  // namespace berman
