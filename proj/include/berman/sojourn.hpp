#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "berman/grid.hpp"
#include "berman/paths.hpp"

namespace berman {

// Sojourn functionals of a single path row on the observation mesh of `grid`
// (the fine grid when grid.mesh == 0, the delta sub-mesh otherwise). All pure
// functions, safe to call in parallel across rows.

// lambda_delta-measure of {t : W(t) > -expDraw}, strict inequality.
double sojourn_time(std::span<const double> w, double expDraw, const GridSpec& grid);

// S_delta = integral of exp(W) over the mesh. Continuous case uses trapezoid
// endpoint weights; accumulation shifts to log space when max W > 700.
double pathwise_mass(std::span<const double> w, const GridSpec& grid);
double log_pathwise_mass(std::span<const double> w, const GridSpec& grid);

// Level u* such that the sojourn above u < u* strictly exceeds x and above
// u > u* does not: the k-th largest mesh value with k = floor(x/mass) + 1.
// Throws if x reaches the window measure.
double level_for_sojourn(std::span<const double> w, double x, const GridSpec& grid);

// True when the sojourn set may extend past the truncation window.
bool boundary_check(std::span<const double> w, double expDraw, const GridSpec& grid);

// Per-trajectory functionals for a whole batch at a given mesh delta
// (delta = 0 or a multiple of the fine step; independent of batch.grid.mesh).
struct SojournBatch {
  double delta = 0.0;
  double meshMass = 0.0;
  double windowMeasure = 0.0;
  std::vector<double> eps;           // sojourn time per trajectory
  std::vector<double> logMass;       // ln S_delta per trajectory
  std::vector<double> expDraws;      // the E used per trajectory
  std::vector<std::uint8_t> boundary;

  double flagged_fraction() const;
  double mean_eps() const;
  double moment(double p) const;        // E[eps^p]
  double prob_greater(double x) const;  // P(eps > x)
  double prob_geq(double x) const;      // P(eps >= x)
};

SojournBatch compute_sojourns(const PathBatch& batch,
                              std::span<const double> expDraws, double delta);

}  // namespace berman
