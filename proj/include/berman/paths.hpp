#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "berman/grid.hpp"
#include "berman/variance.hpp"

namespace berman {

// N drifted log-scale trajectories W(t) = V(t) - sigma^2_V(t)/2 on the grid,
// row-major. Every row has W(0) = 0 exactly; rows are independent given
// distinct trajectory indices, and bit-identical for a fixed
// (masterSeed, index) regardless of worker count.
struct PathBatch {
  GridSpec grid;
  VarianceModel model;
  std::int64_t count = 0;
  std::uint64_t masterSeed = 0;
  std::vector<double> values;  // count x grid.n

  std::span<double> row(std::int64_t i) {
    return {values.data() + i * grid.n, static_cast<std::size_t>(grid.n)};
  }
  std::span<const double> row(std::int64_t i) const {
    return {values.data() + i * grid.n, static_cast<std::size_t>(grid.n)};
  }
};

// Autocovariance of unit-variance fractional Gaussian noise at lag k.
double fgn_autocovariance(double hurst, std::int64_t k);

// Circulant-embedding FFT sampler for fBm-driven paths (exact in
// distribution). H = 1 degenerates to the single-Gaussian line V = sqrt(2) t xi
// and is special-cased. Throws if the embedding has a negative eigenvalue
// beyond roundoff tolerance.
PathBatch sample_fbm_paths(const VarianceModel& model, const GridSpec& grid,
                           std::int64_t count, std::uint64_t masterSeed);

// Exact joint recursion for (OU state, integrated OU), scaled so that
// sigma^2_V(t) = 4(|t| + exp(-|t|) - 1).
PathBatch sample_integrated_ou_paths(const GridSpec& grid, std::int64_t count,
                                     std::uint64_t masterSeed);

// Dense-factorization oracle: builds Cov(V(s), V(t)) from sigma^2_V on the
// grid (t = 0 pinned to zero), factorizes, samples. Validation-grade; grids
// up to 4096 points.
PathBatch sample_cholesky_paths(const VarianceModel& model, const GridSpec& grid,
                                std::int64_t count, std::uint64_t masterSeed);

// Dispatch on model kind (PowerTable goes through the dense oracle).
PathBatch sample_paths(const VarianceModel& model, const GridSpec& grid,
                       std::int64_t count, std::uint64_t masterSeed);

// Binary dump for replay: fixed header (model, grid, seed) + row-major f64.
void dump_path_batch(const PathBatch& batch, const std::string& path);
PathBatch load_path_batch(const std::string& path);

}  // namespace berman
