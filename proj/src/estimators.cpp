#include "berman/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "berman/rng.hpp"
#include "berman/stats.hpp"

namespace berman {

std::vector<double> draw_exponentials(std::int64_t count, std::uint64_t masterSeed) {
  std::vector<double> draws(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    auto eng = trajectory_engine(masterSeed, i, kStreamExp);
    draws[i] = unit_exponential(eng);
  }
  return draws;
}

namespace {

Estimate reduce(std::vector<double>& stats, std::vector<double>& scratch,
                const char* name, double x, double delta) {
  const auto ms = mean_std_pairwise(stats, scratch);
  Estimate e;
  e.value = ms.mean;
  e.halfWidth95 = 1.96 * ms.sd / std::sqrt(static_cast<double>(stats.size()));
  e.sampleCount = static_cast<std::int64_t>(stats.size());
  e.estimator = name;
  e.x = x;
  e.delta = delta;
  return e;
}

}  // namespace

std::vector<Estimate> estimate_berman_direct(const PathBatch& batch,
                                             std::span<const double> expDraws,
                                             std::span<const double> xGrid,
                                             double delta) {
  if (batch.count < 2) throw std::invalid_argument("estimate_berman_direct: need N >= 2");
  const SojournBatch soj = compute_sojourns(batch, expDraws, delta);

  std::vector<Estimate> out;
  out.reserve(xGrid.size());
  std::vector<double> stats(batch.count), scratch(batch.count);
  for (double x : xGrid) {
    for (std::int64_t i = 0; i < batch.count; ++i) {
      const double e = soj.eps[i];
      stats[i] = (e > x) ? 1.0 / e : 0.0;
    }
    out.push_back(reduce(stats, scratch, "direct", x, delta));
  }
  return out;
}

std::vector<Estimate> estimate_berman_spectral(const PathBatch& batch,
                                               std::span<const double> xGrid,
                                               double delta) {
  if (batch.count < 2) throw std::invalid_argument("estimate_berman_spectral: need N >= 2");
  GridSpec mesh(batch.grid.halfWidth, batch.grid.fineStep, delta);
  const double mass = mesh.meshMass();
  const std::int64_t meshCount = mesh.meshCount();

  // order statistic ranks, one per x, shared by every trajectory
  std::vector<std::int64_t> ranks(xGrid.size());
  for (std::size_t j = 0; j < xGrid.size(); ++j) {
    if (xGrid[j] < 0.0) throw std::invalid_argument("estimate_berman_spectral: x must be >= 0");
    ranks[j] = static_cast<std::int64_t>(std::floor(xGrid[j] / mass)) + 1;
    if (ranks[j] > meshCount)
      throw std::invalid_argument("estimate_berman_spectral: x reaches the window measure");
  }

  // per-trajectory statistics exp(u*(x) - ln S) for the whole x grid
  std::vector<double> stats(static_cast<std::size_t>(batch.count) * xGrid.size());
  const std::int64_t stride = mesh.meshStride();
  const std::int64_t half = mesh.meshHalfCount();
  const std::int64_t c0 = mesh.center();

#pragma omp parallel
  {
    std::vector<double> vals(meshCount);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < batch.count; ++i) {
      const auto w = batch.row(i);
      const double logMass = log_pathwise_mass(w, mesh);
      for (std::int64_t k = -half; k <= half; ++k) vals[k + half] = w[c0 + k * stride];
      std::sort(vals.begin(), vals.end(), std::greater<>());
      for (std::size_t j = 0; j < xGrid.size(); ++j) {
        const double uStar = vals[ranks[j] - 1];
        stats[i * xGrid.size() + j] = std::exp(uStar - logMass);
      }
    }
  }

  std::vector<Estimate> out;
  out.reserve(xGrid.size());
  std::vector<double> col(batch.count), scratch(batch.count);
  for (std::size_t j = 0; j < xGrid.size(); ++j) {
    for (std::int64_t i = 0; i < batch.count; ++i) col[i] = stats[i * xGrid.size() + j];
    out.push_back(reduce(col, scratch, "spectral", xGrid[j], delta));
  }
  return out;
}

PickandsPair estimate_pickands(const PathBatch& batch, std::span<const double> expDraws,
                               double delta) {
  const double zero[] = {0.0};
  PickandsPair pair;
  pair.direct = estimate_berman_direct(batch, expDraws, zero, delta)[0];
  pair.spectral = estimate_berman_spectral(batch, zero, delta)[0];
  return pair;
}

}  // namespace berman
