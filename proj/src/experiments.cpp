#include "berman/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "berman/analytic.hpp"
#include "berman/estimators.hpp"
#include "berman/io.hpp"
#include "berman/paths.hpp"

namespace berman {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Published reference tables. Exact cells carry their printed decimal count;
// Monte Carlo cells carry the reported 95% half-widths.
//
// Expected sojourn, fBm, keys (H, delta). The H = 0.1 cells at delta > 0 are
// known to be under-converged in the published table (the defining series
// needs ~1e10 terms there); the recomputed values sit near the delta = 0
// value 60480, and the reproduction study reports the mismatch.
constexpr RefCell kFbmExpectedSojourn[] = {
    {0.1, 0, 60480, 0, 0},        {0.2, 0, 72.216267, 0, 6},  {0.3, 0, 12.309822, 0, 6},
    {0.4, 0, 5.866446, 0, 6},     {0.5, 0, 4, 0, 0},          {0.6, 0, 3.198992, 0, 6},
    {0.7, 0, 2.777685, 0, 6},     {0.8, 0, 2.527405, 0, 6},   {0.9, 0, 2.366354, 0, 6},
    {1.0, 0, 2.256758, 0, 6},
    {0.1, 1, 48824.040913, 0, 6}, {0.2, 1, 72.594979, 0, 6},  {0.3, 1, 12.632020, 0, 6},
    {0.4, 1, 6.140195, 0, 6},     {0.5, 1, 4.232120, 0, 6},   {0.6, 1, 3.395236, 0, 6},
    {0.7, 1, 2.942920, 0, 6},     {0.8, 1, 2.665777, 0, 6},   {0.9, 1, 2.481422, 0, 6},
    {1.0, 1, 2.351603, 0, 6},
    {0.1, 5, 57667.986631, 0, 6}, {0.2, 5, 74.736598, 0, 6},  {0.3, 5, 14.803952, 0, 6},
    {0.4, 5, 8.344951, 0, 6},     {0.5, 5, 6.474827, 0, 6},   {0.6, 5, 5.685059, 0, 6},
    {0.7, 5, 5.295399, 0, 6},     {0.8, 5, 5.104008, 0, 6},   {0.9, 5, 5.026130, 0, 6},
    {1.0, 5, 5.004070, 0, 6},
    {0.1, 10, 59291.12614, 0, 5}, {0.2, 10, 77.87128, 0, 5},  {0.3, 10, 18.22637, 0, 5},
    {0.4, 10, 12.07630, 0, 5},    {0.5, 10, 10.54057, 0, 5},  {0.6, 10, 10.09794, 0, 5},
    {0.7, 10, 10.00788, 0, 5},    {0.8, 10, 10.00016, 0, 5},  {0.9, 10, 10, 0, 0},
    {1.0, 10, 10, 0, 0},
};

// Berman-function estimates, fBm, keys (H, x).
constexpr RefCell kFbmEstimates[] = {
    {0.5, 0, 1.038244, 0.08105526, 6},     {0.5, 0.5, 0.4228112, 0.005689292, 7},
    {0.5, 1, 0.2833468, 0.00342165, 7},    {0.5, 2, 0.1493499, 0.002068819, 7},
    {0.5, 5, 0.0366231, 0.0008681481, 7},
    {0.9, 0, 0.6482967, 0.01264331, 7},    {0.9, 0.5, 0.5182281, 0.004643272, 7},
    {0.9, 1, 0.3978701, 0.003232641, 7},   {0.9, 2, 0.1975992, 0.002493246, 7},
    {0.9, 5, 0.004497369, 0.0003907966, 9},
    {0.999, 0, 0.5644909, 0.00675525, 7},  {0.999, 1, 0.4387592, 0.002982276, 7},
};

// Pickands-constant estimates for integrated OU across meshes, keys (delta, -).
constexpr RefCell kOuDeltaEstimates[] = {
    {0, 0, 0.5267956, 0.01817717, 7},   {0.1, 0, 0.5131973, 0.007850686, 7},
    {0.2, 0, 0.5126575, 0.007194036, 7},{0.5, 0, 0.4934096, 0.005746635, 7},
    {1, 0, 0.4484668, 0.00402201, 7},   {2, 0, 0.3843544, 0.001995524, 7},
    {5, 0, 0.1908583, 0.0004065713, 7}, {10, 0, 0.09984, 0.00003913749, 5},
};

// Berman-function estimates for integrated OU at delta = 0, keys (x, -).
constexpr RefCell kOuEstimates[] = {
    {0, 0, 0.5267956, 0.01817717, 7},   {0.5, 0, 0.452556, 0.004676632, 6},
    {1, 0, 0.3482289, 0.003180162, 7},  {1.5, 0, 0.2621687, 0.002588018, 7},
    {2, 0, 0.1900299, 0.002216284, 7},  {2.5, 0, 0.1376086, 0.001910763, 7},
    {3, 0, 0.09881259, 0.00163841, 8},  {4, 0, 0.05088893, 0.00116684, 8},
    {5, 0, 0.02715927, 0.0008278098, 8},{6, 0, 0.01433577, 0.0005788133, 8},
    {7, 0, 0.007437053, 0.0003983809, 9},{8, 0, 0.003796336, 0.0002730899, 9},
};

// Expected sojourn, integrated OU, keys (delta, -). The delta = 0 cell is the
// published quadrature value; the recomputed integral gives 3.2446431 (the
// published delta > 0 column converges to it at the expected O(delta^2) rate),
// so the reproduction study flags that single cell.
constexpr RefCell kOuExpectedSojourn[] = {
    {0, 0, 3.234658, 0, 6},  {0.1, 0, 3.245584, 0, 6}, {0.2, 0, 3.248405, 0, 6},
    {0.5, 0, 3.268183, 0, 6},{1, 0, 3.339158, 0, 6},   {2, 0, 3.626068, 0, 6},
    {5, 0, 5.482154, 0, 6},  {10, 0, 10.05426, 0, 5},
};

double exact_cell_tolerance(const RefCell& cell) {
  return std::max(1e-4, 0.5 * std::pow(10.0, -cell.printedDecimals));
}

double combined_3hw(double hwA, double hwB) {
  return 3.0 * std::sqrt(hwA * hwA + hwB * hwB);
}

}  // namespace

int StudyReport::failures() const {
  int f = 0;
  for (const auto& r : rows)
    if (!r.passed) ++f;
  return f;
}

std::span<const RefCell> reference_table(int table) {
  switch (table) {
    case 1: return kFbmExpectedSojourn;
    case 2: return kFbmEstimates;
    case 3: return kOuDeltaEstimates;
    case 4: return kOuEstimates;
    case 5: return kOuExpectedSojourn;
    default: throw std::invalid_argument("reference_table: tables 1..5");
  }
}

StudyReport run_table_reproduction(int table, const StudyScale& scale) {
  const auto t0 = Clock::now();
  StudyReport rep;
  rep.kind = "table";
  rep.seed = scale.seed;
  rep.config = "table=" + std::to_string(table) + " N=" + std::to_string(scale.count);

  switch (table) {
    case 1: {
      for (const auto& cell : reference_table(1)) {
        const auto model = VarianceModel::fbm(cell.key1);
        const double v = analytic::expected_sojourn(model, cell.key2);
        StudyRow row;
        row.label = "expected-sojourn-fbm";
        row.param = cell.key1;
        row.delta = cell.key2;
        row.reference = cell.value;
        row.value = v;
        row.tolerance = exact_cell_tolerance(cell);
        row.passed = std::fabs(v - cell.value) <= row.tolerance;
        row.provenance = "paper-table";
        rep.rows.push_back(row);
      }
      break;
    }
    case 5: {
      const auto model = VarianceModel::integrated_ou();
      for (const auto& cell : reference_table(5)) {
        const double v = analytic::expected_sojourn(model, cell.key1);
        StudyRow row;
        row.label = "expected-sojourn-iou";
        row.delta = cell.key1;
        row.reference = cell.value;
        row.value = v;
        row.tolerance = exact_cell_tolerance(cell);
        row.passed = std::fabs(v - cell.value) <= row.tolerance;
        row.provenance = "paper-table";
        rep.rows.push_back(row);
      }
      break;
    }
    case 2: {
      const GridSpec grid(scale.halfWidth, scale.fineStep, 0.0);
      const auto draws = draw_exponentials(scale.count, scale.seed);
      for (double hurst : {0.5, 0.9}) {
        const auto batch =
            sample_fbm_paths(VarianceModel::fbm(hurst), grid, scale.count, scale.seed);
        std::vector<double> xs;
        for (const auto& cell : reference_table(2))
          if (cell.key1 == hurst) xs.push_back(cell.key2);
        const auto ests = estimate_berman_direct(batch, draws, xs, 0.0);
        std::size_t j = 0;
        for (const auto& cell : reference_table(2)) {
          if (cell.key1 != hurst) continue;
          const auto& e = ests[j++];
          StudyRow row;
          row.label = "berman-fbm";
          row.param = hurst;
          row.x = cell.key2;
          row.reference = cell.value;
          row.value = e.value;
          row.lower = e.value - e.halfWidth95;
          row.upper = e.value + e.halfWidth95;
          row.tolerance = combined_3hw(e.halfWidth95, cell.halfWidth);
          row.passed = std::fabs(e.value - cell.value) <= row.tolerance;
          row.provenance = "paper-table";
          rep.rows.push_back(row);
        }
      }
      break;
    }
    case 4: {
      const GridSpec grid(scale.ouHalfWidth, scale.ouFineStep, 0.0);
      const auto batch = sample_integrated_ou_paths(grid, scale.count, scale.seed);
      const auto draws = draw_exponentials(scale.count, scale.seed);
      std::vector<double> xs;
      for (const auto& cell : reference_table(4)) xs.push_back(cell.key1);
      const auto ests = estimate_berman_direct(batch, draws, xs, 0.0);
      for (std::size_t j = 0; j < xs.size(); ++j) {
        const auto& cell = reference_table(4)[j];
        const auto& e = ests[j];
        StudyRow row;
        row.label = "berman-iou";
        row.x = cell.key1;
        row.reference = cell.value;
        row.value = e.value;
        row.lower = e.value - e.halfWidth95;
        row.upper = e.value + e.halfWidth95;
        row.tolerance = combined_3hw(e.halfWidth95, cell.halfWidth);
        row.passed = std::fabs(e.value - cell.value) <= row.tolerance;
        row.provenance = "paper-table";
        rep.rows.push_back(row);
      }
      break;
    }
    case 3: {
      // shared batch across the mesh sweep (common random numbers); the fine
      // step must divide every delta in the table
      const GridSpec grid(scale.ouHalfWidth, 0.025, 0.0);
      const auto batch = sample_integrated_ou_paths(grid, scale.count, scale.seed);
      const auto draws = draw_exponentials(scale.count, scale.seed);
      const double zero[] = {0.0};
      for (const auto& cell : reference_table(3)) {
        const auto e = estimate_berman_direct(batch, draws, zero, cell.key1)[0];
        StudyRow row;
        row.label = "pickands-iou";
        row.delta = cell.key1;
        row.reference = cell.value;
        row.value = e.value;
        row.lower = e.value - e.halfWidth95;
        row.upper = e.value + e.halfWidth95;
        row.tolerance = combined_3hw(e.halfWidth95, cell.halfWidth);
        row.passed = std::fabs(e.value - cell.value) <= row.tolerance;
        row.provenance = "paper-table";
        rep.rows.push_back(row);
      }
      break;
    }
    default:
      throw std::invalid_argument("run_table_reproduction: tables 1..5");
  }
  rep.wallSeconds = seconds_since(t0);
  return rep;
}

StudyReport run_rate_study(std::span<const double> xGrid, std::span<const double> Tgrid,
                           double lambda) {
  for (std::size_t i = 1; i < Tgrid.size(); ++i)
    if (!(Tgrid[i] > Tgrid[i - 1]))
      throw std::invalid_argument("run_rate_study: T grid must be increasing");

  const auto t0 = Clock::now();
  StudyReport rep;
  rep.kind = "rate";
  rep.config = "lambda=" + format_double(lambda) + " mode=analytic";
  const bool expectGrowth = lambda > 1.0;

  for (double x : xGrid) {
    double prev = 0.0;
    for (std::size_t k = 0; k < Tgrid.size(); ++k) {
      const double T = Tgrid[k];
      if (!(T > x)) throw std::invalid_argument("run_rate_study: need T > x");
      const double residual =
          std::fabs(analytic::berman_closed_h1(x) - analytic::berman_finite_window_h1(T, x) / T);
      const double scaled = residual * std::pow(T, lambda);

      StudyRow row;
      row.label = "rate-h1";
      row.param = T;
      row.x = x;
      row.value = scaled;
      row.expectFail = expectGrowth;
      row.provenance = "closed-form";
      if (lambda == 1.0) {
        // sharp exponent: residual * T is constant in T; at x = 0 it equals 1
        row.reference = (x == 0.0) ? 1.0 : scaled;
        row.tolerance = 1e-12 * std::max(1.0, std::fabs(row.reference));
        bool ok = (k == 0) ? true : std::fabs(scaled - prev) <= row.tolerance;
        if (x == 0.0) ok = ok && std::fabs(scaled - 1.0) <= row.tolerance;
        row.passed = ok;
      } else if (!expectGrowth) {
        row.reference = 0.0;
        row.passed = (k == 0) ? true : scaled < prev;
      } else {
        // beyond the sharp range the scaled residual must grow
        row.reference = 0.0;
        row.passed = (k == 0) ? true : scaled > prev;
      }
      prev = scaled;
      rep.rows.push_back(row);
    }
  }
  rep.wallSeconds = seconds_since(t0);
  return rep;
}

StudyReport run_rate_study_mc(std::span<const double> xGrid, std::span<const double> Tgrid,
                              std::int64_t count, double fineStep, std::uint64_t seed) {
  const auto t0 = Clock::now();
  StudyReport rep;
  rep.kind = "rate";
  rep.config = "mode=mc N=" + std::to_string(count);
  rep.seed = seed;

  const auto model = VarianceModel::fbm(1.0);
  const auto draws = draw_exponentials(count, seed);
  std::vector<double> xs(xGrid.begin(), xGrid.end());

  std::vector<double> prevGap(xGrid.size()), prevHw(xGrid.size());
  for (std::size_t k = 0; k < Tgrid.size(); ++k) {
    // same seed for every window: trajectories share their driving Gaussians
    const GridSpec grid(Tgrid[k] / 2.0, fineStep, 0.0);
    const auto batch = sample_fbm_paths(model, grid, count, seed);
    const auto ests = estimate_berman_direct(batch, draws, xs, 0.0);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double limit = analytic::berman_closed_h1(xs[j]);
      const double gap = std::fabs(ests[j].value - limit);
      StudyRow row;
      row.label = "rate-h1-mc";
      row.param = Tgrid[k];
      row.x = xs[j];
      row.reference = limit;
      row.value = ests[j].value;
      row.lower = ests[j].value - ests[j].halfWidth95;
      row.upper = ests[j].value + ests[j].halfWidth95;
      row.tolerance = combined_3hw(ests[j].halfWidth95, prevHw[j]);
      row.passed = (k == 0) ? true : gap <= prevGap[j] + row.tolerance;
      row.provenance = "closed-form";
      rep.rows.push_back(row);
      prevGap[j] = gap;
      prevHw[j] = ests[j].halfWidth95;
    }
  }
  rep.wallSeconds = seconds_since(t0);
  return rep;
}

StudyReport run_delta_study(const VarianceModel& model, const GridSpec& grid,
                            std::span<const double> deltaGrid,
                            std::span<const double> xGrid, std::int64_t count,
                            std::uint64_t seed) {
  const auto t0 = Clock::now();
  StudyReport rep;
  rep.kind = "delta";
  rep.seed = seed;
  rep.config = std::string("model=") + model.name() + " N=" + std::to_string(count);

  bool hasZero = false;
  for (double d : deltaGrid) hasZero = hasZero || d == 0.0;
  if (!hasZero) throw std::invalid_argument("run_delta_study: delta grid must contain 0");

  std::vector<double> deltas(deltaGrid.begin(), deltaGrid.end());
  std::sort(deltas.begin(), deltas.end(), std::greater<>());  // coarse to fine

  const auto batch = sample_paths(model, grid, count, seed);
  const auto draws = draw_exponentials(count, seed);
  std::vector<double> xs(xGrid.begin(), xGrid.end());

  std::vector<std::vector<Estimate>> perDelta;
  for (double d : deltas) perDelta.push_back(estimate_berman_direct(batch, draws, xs, d));
  const auto& baseline = perDelta.back();  // delta = 0

  for (std::size_t j = 0; j < xs.size(); ++j) {
    double prevGap = 0.0, prevHw = 0.0;
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      const auto& e = perDelta[k][j];
      const double gap = std::fabs(e.value - baseline[j].value);
      StudyRow row;
      row.label = "delta-approach";
      row.delta = deltas[k];
      row.x = xs[j];
      row.reference = baseline[j].value;
      row.value = e.value;
      row.lower = e.value - e.halfWidth95;
      row.upper = e.value + e.halfWidth95;
      row.tolerance = combined_3hw(e.halfWidth95, prevHw);
      row.passed = (k == 0) ? true : gap <= prevGap + row.tolerance;
      row.provenance = "property";
      rep.rows.push_back(row);
      prevGap = gap;
      prevHw = e.halfWidth95;
    }
  }
  rep.wallSeconds = seconds_since(t0);
  return rep;
}

StudyReport run_band_and_monotonicity(const VarianceModel& model, const GridSpec& grid,
                                      std::span<const double> xGrid, std::int64_t count,
                                      std::uint64_t seed) {
  const auto t0 = Clock::now();
  StudyReport rep;
  rep.kind = "band";
  rep.seed = seed;
  rep.config = std::string("model=") + model.name() + " N=" + std::to_string(count);

  const auto batch = sample_paths(model, grid, count, seed);
  const auto draws = draw_exponentials(count, seed);
  std::vector<double> xs(xGrid.begin(), xGrid.end());
  std::sort(xs.begin(), xs.end());
  const auto soj = compute_sojourns(batch, draws, 0.0);

  for (const char* which : {"direct", "spectral"}) {
    const auto ests = std::string(which) == "direct"
                          ? estimate_berman_direct(batch, draws, xs, 0.0)
                          : estimate_berman_spectral(batch, xs, 0.0);
    for (std::size_t j = 0; j < xs.size(); ++j) {
      StudyRow row;
      row.label = std::string("curve-") + which;
      row.x = xs[j];
      row.value = ests[j].value;
      row.lower = ests[j].value - ests[j].halfWidth95;
      row.upper = ests[j].value + ests[j].halfWidth95;
      row.provenance = "property";
      bool ok = j == 0 || ests[j].value <= ests[j - 1].value;  // exact per run
      if (std::string(which) == "direct" && soj.prob_greater(xs[j]) > 0.0)
        ok = ok && ests[j].value > 0.0;
      row.passed = ok;
      rep.rows.push_back(row);
    }
    // log-asymptote band at the largest x whose relative CI is below 20%
    for (std::size_t j = xs.size(); j-- > 0;) {
      const auto& e = ests[j];
      if (e.value <= 0.0 || e.halfWidth95 > 0.2 * e.value) continue;
      const auto ar = analytic::log_asymptote_ratio(e.value, model, e.x);
      StudyRow row;
      row.label = std::string("band-") + which;
      row.x = e.x;
      row.value = ar.ratio;
      row.lower = ar.bandLo - 0.15;  // finite-x slack around the limit band
      row.upper = ar.bandHi + 0.05;
      row.reference = ar.ratio;
      row.passed = ar.ratio >= row.lower && ar.ratio <= row.upper;
      row.provenance = "property";
      rep.rows.push_back(row);
      break;
    }
  }
  rep.wallSeconds = seconds_since(t0);
  return rep;
}

}  // namespace berman
