#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "berman/analytic.hpp"
#include "berman/estimators.hpp"
#include "berman/paths.hpp"
#include "berman/reference.hpp"
#include "berman/sojourn.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace berman;

namespace {

PathBatch constant_batch(const GridSpec& grid, double value, std::int64_t count) {
  PathBatch b;
  b.grid = grid;
  b.model = VarianceModel::fbm(0.5);
  b.count = count;
  b.values.assign(static_cast<std::size_t>(count) * grid.n, value);
  return b;
}

double rss3(double a, double b) { return 3.0 * std::sqrt(a * a + b * b); }

}  // namespace

TEST_CASE("H=1 exact model reproduces the closed-form curve") {
  const GridSpec grid(8.0, 0.03125, 0.0);
  const std::int64_t N = 4000;
  const auto batch = sample_fbm_paths(VarianceModel::fbm(1.0), grid, N, 17);
  const auto draws = draw_exponentials(N, 17);
  const std::vector<double> xs = {0.0, 1.0};

  const auto direct = estimate_berman_direct(batch, draws, xs, 0.0);
  const auto spectral = estimate_berman_spectral(batch, xs, 0.0);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double target = analytic::berman_closed_h1(xs[j]);
    CHECK(std::fabs(direct[j].value - target) < 3.0 * direct[j].halfWidth95 + 0.01);
    CHECK(std::fabs(spectral[j].value - target) < 3.0 * spectral[j].halfWidth95 + 0.01);
  }
  CHECK(direct[0].value == doctest::Approx(1.0 / std::sqrt(M_PI)).epsilon(0.05));
}

TEST_CASE("x beyond the window measure yields exactly zero") {
  const GridSpec grid(2.0, 0.25, 0.0);
  const std::int64_t N = 100;
  const auto batch = sample_fbm_paths(VarianceModel::fbm(0.5), grid, N, 3);
  const auto draws = draw_exponentials(N, 3);
  const std::vector<double> xs = {grid.windowMeasure() + 0.1};
  const auto est = estimate_berman_direct(batch, draws, xs, 0.0);
  CHECK(est[0].value == 0.0);
  CHECK(est[0].halfWidth95 == 0.0);
}

TEST_CASE("degenerate flat paths: spectral statistic is the reciprocal mass") {
  const GridSpec grid(1.0, 0.5, 0.0);
  const auto batch = constant_batch(grid, 0.0, 4);

  // continuous convention: trapezoid mass 2.0 on [-1, 1]
  const auto s0 = estimate_berman_spectral(batch, std::vector<double>{0.0, 1.0}, 0.0);
  CHECK(s0[0].value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s0[1].value == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s0[0].halfWidth95 == 0.0);

  // counting convention: window measure 3 at delta = 1
  const GridSpec grid1(1.0, 0.5, 0.0);
  const auto s1 = estimate_berman_spectral(batch, std::vector<double>{0.0, 2.9}, 1.0);
  CHECK(s1[0].value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(s1[1].value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("direct and spectral estimators agree on the same constant") {
  const GridSpec grid(8.0, 0.03125, 0.0);
  const std::int64_t N = 4000;
  const auto batch = sample_fbm_paths(VarianceModel::fbm(0.7), grid, N, 23);
  const auto draws = draw_exponentials(N, 23);
  const std::vector<double> xs = {0.0, 1.0};
  const auto d = estimate_berman_direct(batch, draws, xs, 0.0);
  const auto s = estimate_berman_spectral(batch, xs, 0.0);
  for (std::size_t j = 0; j < xs.size(); ++j)
    CHECK(std::fabs(d[j].value - s[j].value) < rss3(d[j].halfWidth95, s[j].halfWidth95));
}

TEST_CASE("per-run curve is nonincreasing in x, exactly") {
  const GridSpec grid(4.0, 0.0625, 0.0);
  const std::int64_t N = 1000;
  const auto batch = sample_fbm_paths(VarianceModel::fbm(0.5), grid, N, 29);
  const auto draws = draw_exponentials(N, 29);
  const std::vector<double> xs = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 7.0};
  const auto d = estimate_berman_direct(batch, draws, xs, 0.0);
  const auto s = estimate_berman_spectral(batch, xs, 0.0);
  for (std::size_t j = 1; j < xs.size(); ++j) {
    CHECK(d[j].value <= d[j - 1].value);
    CHECK(s[j].value <= s[j - 1].value);
  }
}

TEST_CASE("sandwich bounds hold per run with CLT slack") {
  const GridSpec grid(8.0, 0.0625, 0.0);
  const std::int64_t N = 4000;
  const auto batch = sample_fbm_paths(VarianceModel::fbm(0.5), grid, N, 41);
  const auto draws = draw_exponentials(N, 41);
  const auto soj = compute_sojourns(batch, draws, 0.0);
  const std::vector<double> xs = {0.5, 1.0, 2.0, 4.0};
  const auto est = estimate_berman_direct(batch, draws, xs, 0.0);
  const double nn = static_cast<double>(N);
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double x = xs[j];
    const double pg = soj.prob_greater(x);
    const double pq = soj.prob_geq(x);
    const auto bounds = analytic::bounds_sandwich(pg, pq, soj.mean_eps(), x, "estimated");
    const double hwP = 1.96 * std::sqrt(pg * (1.0 - pg) / nn);
    const double slackLo = 3.0 * (est[j].halfWidth95 + 2.0 * pg * hwP / soj.mean_eps());
    const double slackHi = 3.0 * (est[j].halfWidth95 + hwP / x);
    CHECK(bounds.lower - slackLo <= est[j].value);
    CHECK(est[j].value <= bounds.upper + slackHi);
  }
}

TEST_CASE("pickands pair: both estimators at x = 0 agree within CIs") {
  const GridSpec grid(8.0, 0.0625, 0.0);
  const std::int64_t N = 4000;
  const auto batch = sample_integrated_ou_paths(grid, N, 55);
  const auto draws = draw_exponentials(N, 55);
  const auto pair = estimate_pickands(batch, draws, 0.0);
  CHECK(pair.direct.x == 0.0);
  CHECK(pair.spectral.x == 0.0);
  CHECK(std::fabs(pair.direct.value - pair.spectral.value) <
        rss3(pair.direct.halfWidth95, pair.spectral.halfWidth95));
}

TEST_CASE("direct statistic never exceeds the reciprocal mesh mass") {
  const GridSpec grid(2.0, 0.125, 0.0);
  const std::int64_t N = 500;
  const auto batch = sample_fbm_paths(VarianceModel::fbm(0.5), grid, N, 61);
  const auto draws = draw_exponentials(N, 61);
  for (double delta : {0.0, 0.5}) {
    const auto est = estimate_berman_direct(batch, draws, std::vector<double>{0.0}, delta);
    const double mass = delta == 0.0 ? grid.fineStep : delta;
    CHECK(est[0].value <= 1.0 / mass);
    CHECK(est[0].value >= 0.0);
  }
}

TEST_CASE("estimates are bit-identical across repeat runs and thread counts") {
  const GridSpec grid(4.0, 0.0625, 0.0);
  const std::int64_t N = 800;
  const std::vector<double> xs = {0.0, 1.0, 2.0};

  auto run = [&]() {
    const auto batch = sample_fbm_paths(VarianceModel::fbm(0.8), grid, N, 303);
    const auto draws = draw_exponentials(N, 303);
    const auto d = estimate_berman_direct(batch, draws, xs, 0.0);
    const auto s = estimate_berman_spectral(batch, xs, 0.0);
    std::vector<double> out;
    for (const auto& e : d) {
      out.push_back(e.value);
      out.push_back(e.halfWidth95);
    }
    for (const auto& e : s) {
      out.push_back(e.value);
      out.push_back(e.halfWidth95);
    }
    return out;
  };

  const auto a = run();
  const auto b = run();
  CHECK(a == b);
#ifdef _OPENMP
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto c1 = run();
  omp_set_num_threads(4);
  const auto c4 = run();
  omp_set_num_threads(saved);
  CHECK(c1 == a);
  CHECK(c4 == a);
#endif
}

TEST_CASE("too few samples is an error") {
  const GridSpec grid(1.0, 0.5, 0.0);
  const auto batch = constant_batch(grid, 0.0, 1);
  const std::vector<double> draws = {1.0};
  CHECK_THROWS(estimate_berman_direct(batch, draws, std::vector<double>{0.0}, 0.0));
  CHECK_THROWS(estimate_berman_spectral(batch, std::vector<double>{0.0}, 0.0));
}

TEST_CASE("x at or past the window measure is rejected by the spectral estimator") {
  const GridSpec grid(1.0, 0.5, 0.0);
  const auto batch = constant_batch(grid, 0.0, 4);
  CHECK_THROWS(estimate_berman_spectral(batch, std::vector<double>{2.5}, 0.0));
}

TEST_CASE("serial reference pipeline matches the parallel kernels") {
  const GridSpec grid(4.0, 0.0625, 0.0);
  const std::int64_t N = 600;
  const auto batch = sample_integrated_ou_paths(grid, N, 71);
  const auto draws = draw_exponentials(N, 71);
  for (double x : {0.0, 1.0}) {
    for (double delta : {0.0, 0.25}) {
      const auto d = estimate_berman_direct(batch, draws, std::vector<double>{x}, delta)[0];
      const auto dr = reference::estimate_direct(batch, draws, x, delta);
      CHECK(d.value == doctest::Approx(dr.value).epsilon(1e-12));
      CHECK(d.halfWidth95 == doctest::Approx(dr.halfWidth95).epsilon(1e-9));

      const auto s = estimate_berman_spectral(batch, std::vector<double>{x}, delta)[0];
      const auto sr = reference::estimate_spectral(batch, x, delta);
      CHECK(s.value == doctest::Approx(sr.value).epsilon(1e-12));
    }
  }
}

TEST_CASE("exponential draws are reproducible and positive") {
  const auto a = draw_exponentials(1000, 11);
  const auto b = draw_exponentials(1000, 11);
  CHECK(a == b);
  for (double e : a) CHECK(e > 0.0);
  double mean = 0.0;
  for (double e : a) mean += e;
  mean /= 1000.0;
  CHECK(mean == doctest::Approx(1.0).epsilon(0.12));
}
