#pragma once

// Serial reference implementations of the parallel kernels: straight loops,
// naive accumulation, no OpenMP. Kept for cross-checks in the test suite and
// for the serial-vs-parallel benchmark.

#include <cstdint>
#include <span>

#include "berman/estimators.hpp"
#include "berman/paths.hpp"

namespace berman::reference {

double sum_naive(std::span<const double> v);

double sojourn_time(std::span<const double> w, double expDraw, const GridSpec& grid);

double pathwise_mass(std::span<const double> w, const GridSpec& grid);

// Whole direct-estimator pipeline, single-threaded, left-to-right sums.
Estimate estimate_direct(const PathBatch& batch, std::span<const double> expDraws,
                         double x, double delta);

// Whole spectral pipeline, single-threaded.
Estimate estimate_spectral(const PathBatch& batch, double x, double delta);

}  // namespace berman::reference
