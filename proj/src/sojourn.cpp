#include "berman/sojourn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "berman/stats.hpp"

namespace berman {

namespace {

// Endpoint weight for the continuous-limit trapezoid convention;
// delta > 0 keeps plain counting weights.
inline double endpoint_weight(const GridSpec& grid, std::int64_t k, std::int64_t halfCount) {
  if (grid.mesh == 0.0 && (k == -halfCount || k == halfCount)) return 0.5;
  return 1.0;
}

}  // namespace

double sojourn_time(std::span<const double> w, double expDraw, const GridSpec& grid) {
  const std::int64_t stride = grid.meshStride();
  const std::int64_t half = grid.meshHalfCount();
  const std::int64_t c0 = grid.center();
  const double level = -expDraw;
  std::int64_t hits = 0;
  for (std::int64_t k = -half; k <= half; ++k)
    hits += (w[c0 + k * stride] > level) ? 1 : 0;
  return grid.meshMass() * static_cast<double>(hits);
}

double log_pathwise_mass(std::span<const double> w, const GridSpec& grid) {
  const std::int64_t stride = grid.meshStride();
  const std::int64_t half = grid.meshHalfCount();
  const std::int64_t c0 = grid.center();

  double maxW = -std::numeric_limits<double>::infinity();
  for (std::int64_t k = -half; k <= half; ++k)
    maxW = std::max(maxW, w[c0 + k * stride]);

  // shift by max W; direct accumulation is exact enough and never overflows
  double acc = 0.0;
  for (std::int64_t k = -half; k <= half; ++k)
    acc += endpoint_weight(grid, k, half) * std::exp(w[c0 + k * stride] - maxW);
  return maxW + std::log(acc) + std::log(grid.meshMass());
}

double pathwise_mass(std::span<const double> w, const GridSpec& grid) {
  const std::int64_t stride = grid.meshStride();
  const std::int64_t half = grid.meshHalfCount();
  const std::int64_t c0 = grid.center();

  double maxW = -std::numeric_limits<double>::infinity();
  for (std::int64_t k = -half; k <= half; ++k)
    maxW = std::max(maxW, w[c0 + k * stride]);
  if (maxW > 700.0) return std::exp(log_pathwise_mass(w, grid));

  double acc = 0.0;
  for (std::int64_t k = -half; k <= half; ++k)
    acc += endpoint_weight(grid, k, half) * std::exp(w[c0 + k * stride]);
  return grid.meshMass() * acc;
}

double level_for_sojourn(std::span<const double> w, double x, const GridSpec& grid) {
  if (x < 0.0) throw std::invalid_argument("level_for_sojourn: x must be >= 0");
  const double mass = grid.meshMass();
  const std::int64_t meshCount = grid.meshCount();
  const std::int64_t k = static_cast<std::int64_t>(std::floor(x / mass)) + 1;
  if (k > meshCount)
    throw std::invalid_argument("level_for_sojourn: x reaches the window measure");

  const std::int64_t stride = grid.meshStride();
  const std::int64_t half = grid.meshHalfCount();
  const std::int64_t c0 = grid.center();
  std::vector<double> vals;
  vals.reserve(meshCount);
  for (std::int64_t j = -half; j <= half; ++j) vals.push_back(w[c0 + j * stride]);
  std::nth_element(vals.begin(), vals.begin() + (k - 1), vals.end(), std::greater<>());
  return vals[k - 1];
}

bool boundary_check(std::span<const double> w, double expDraw, const GridSpec& grid) {
  const double level = -expDraw;
  return w.front() > level || w.back() > level;
}

double SojournBatch::flagged_fraction() const {
  if (boundary.empty()) return 0.0;
  std::int64_t f = 0;
  for (auto b : boundary) f += b;
  return static_cast<double>(f) / static_cast<double>(boundary.size());
}

double SojournBatch::mean_eps() const {
  return pairwise_sum(eps) / static_cast<double>(eps.size());
}

double SojournBatch::moment(double p) const {
  std::vector<double> pow(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) pow[i] = std::pow(eps[i], p);
  return pairwise_sum(pow) / static_cast<double>(eps.size());
}

double SojournBatch::prob_greater(double x) const {
  std::int64_t hits = 0;
  for (double e : eps) hits += (e > x) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(eps.size());
}

double SojournBatch::prob_geq(double x) const {
  std::int64_t hits = 0;
  for (double e : eps) hits += (e >= x) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(eps.size());
}

SojournBatch compute_sojourns(const PathBatch& batch, std::span<const double> expDraws,
                              double delta) {
  if (static_cast<std::int64_t>(expDraws.size()) != batch.count)
    throw std::invalid_argument("compute_sojourns: draw count mismatch");
  GridSpec mesh(batch.grid.halfWidth, batch.grid.fineStep, delta);

  SojournBatch out;
  out.delta = delta;
  out.meshMass = mesh.meshMass();
  out.windowMeasure = mesh.windowMeasure();
  out.eps.resize(batch.count);
  out.logMass.resize(batch.count);
  out.expDraws.assign(expDraws.begin(), expDraws.end());
  out.boundary.resize(batch.count);

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < batch.count; ++i) {
    const auto w = batch.row(i);
    out.eps[i] = sojourn_time(w, expDraws[i], mesh);
    out.logMass[i] = log_pathwise_mass(w, mesh);
    out.boundary[i] = boundary_check(w, expDraws[i], mesh) ? 1 : 0;
  }
  return out;
}

}  // namespace berman
