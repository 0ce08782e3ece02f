#include "berman/reference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace berman::reference {

double sum_naive(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

double sojourn_time(std::span<const double> w, double expDraw, const GridSpec& grid) {
  const std::int64_t stride = grid.meshStride();
  const std::int64_t half = grid.meshHalfCount();
  std::int64_t hits = 0;
  for (std::int64_t k = -half; k <= half; ++k) {
    if (w[grid.center() + k * stride] > -expDraw) ++hits;
  }
  return grid.meshMass() * static_cast<double>(hits);
}

double pathwise_mass(std::span<const double> w, const GridSpec& grid) {
  const std::int64_t stride = grid.meshStride();
  const std::int64_t half = grid.meshHalfCount();
  double acc = 0.0;
  for (std::int64_t k = -half; k <= half; ++k) {
    double weight = 1.0;
    if (grid.mesh == 0.0 && (k == -half || k == half)) weight = 0.5;
    acc += weight * std::exp(w[grid.center() + k * stride]);
  }
  return grid.meshMass() * acc;
}

Estimate estimate_direct(const PathBatch& batch, std::span<const double> expDraws,
                         double x, double delta) {
  if (batch.count < 2) throw std::invalid_argument("reference direct: need N >= 2");
  GridSpec mesh(batch.grid.halfWidth, batch.grid.fineStep, delta);
  std::vector<double> stats(batch.count);
  for (std::int64_t i = 0; i < batch.count; ++i) {
    const double eps = reference::sojourn_time(batch.row(i), expDraws[i], mesh);
    stats[i] = (eps > x) ? 1.0 / eps : 0.0;
  }
  const double mean = sum_naive(stats) / static_cast<double>(batch.count);
  double ss = 0.0;
  for (double v : stats) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(batch.count - 1));
  Estimate e;
  e.value = mean;
  e.halfWidth95 = 1.96 * sd / std::sqrt(static_cast<double>(batch.count));
  e.sampleCount = batch.count;
  e.estimator = "direct";
  e.x = x;
  e.delta = delta;
  return e;
}

Estimate estimate_spectral(const PathBatch& batch, double x, double delta) {
  if (batch.count < 2) throw std::invalid_argument("reference spectral: need N >= 2");
  GridSpec mesh(batch.grid.halfWidth, batch.grid.fineStep, delta);
  const double mass = mesh.meshMass();
  const std::int64_t rank = static_cast<std::int64_t>(std::floor(x / mass)) + 1;
  if (rank > mesh.meshCount())
    throw std::invalid_argument("reference spectral: x reaches the window measure");

  std::vector<double> stats(batch.count);
  std::vector<double> vals;
  for (std::int64_t i = 0; i < batch.count; ++i) {
    const auto w = batch.row(i);
    vals.clear();
    for (std::int64_t k = -mesh.meshHalfCount(); k <= mesh.meshHalfCount(); ++k)
      vals.push_back(w[mesh.center() + k * mesh.meshStride()]);
    std::sort(vals.begin(), vals.end(), std::greater<>());
    stats[i] = std::exp(vals[rank - 1]) / reference::pathwise_mass(w, mesh);
  }
  const double mean = sum_naive(stats) / static_cast<double>(batch.count);
  double ss = 0.0;
  for (double v : stats) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(batch.count - 1));
  Estimate e;
  e.value = mean;
  e.halfWidth95 = 1.96 * sd / std::sqrt(static_cast<double>(batch.count));
  e.sampleCount = batch.count;
  e.estimator = "spectral";
  e.x = x;
  e.delta = delta;
  return e;
}

}  // namespace berman::reference
