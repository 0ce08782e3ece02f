#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "berman/paths.hpp"
#include "berman/sojourn.hpp"

namespace berman {

struct Estimate {
  double value = 0.0;
  double halfWidth95 = 0.0;  // 1.96 * sample sd / sqrt(N)
  std::int64_t sampleCount = 0;
  std::string estimator;  // "direct" | "spectral"
  double x = 0.0;
  double delta = 0.0;
  std::uint64_t configHash = 0;
};

// One unit exponential per trajectory, stream-derived from the master seed so
// draws are independent of worker scheduling.
std::vector<double> draw_exponentials(std::int64_t count, std::uint64_t masterSeed);

// Sojourn-representation estimator: mean over trajectories of
// 1{eps > x} / eps, with the per-trajectory eps shared across the x grid.
std::vector<Estimate> estimate_berman_direct(const PathBatch& batch,
                                             std::span<const double> expDraws,
                                             std::span<const double> xGrid,
                                             double delta);

// Spectral-measure estimator: mean of exp(u*(x)) / S_delta; no exponential
// draws enter.
std::vector<Estimate> estimate_berman_spectral(const PathBatch& batch,
                                               std::span<const double> xGrid,
                                               double delta);

// x = 0 of both estimators (the Pickands constant), reported as a pair.
struct PickandsPair {
  Estimate direct;
  Estimate spectral;
};
PickandsPair estimate_pickands(const PathBatch& batch,
                               std::span<const double> expDraws, double delta);

}  // namespace berman
