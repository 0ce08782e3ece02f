#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "berman/variance.hpp"

using namespace berman;

TEST_CASE("sigma2 direct evaluations") {
  const auto fbm = VarianceModel::fbm(0.5);
  CHECK(sigma2(fbm, 2.0) == doctest::Approx(4.0).epsilon(1e-14));

  const auto iou = VarianceModel::integrated_ou();
  CHECK(sigma2(iou, 0.0) == 0.0);
  CHECK(sigma2(iou, 10.0) ==
        doctest::Approx(4.0 * (10.0 + std::exp(-10.0) - 1.0)).epsilon(1e-14));
  CHECK(sigma2(iou, 10.0) == doctest::Approx(36.000181599719).epsilon(1e-12));
}

TEST_CASE("sigma2 is even, zero only at 0, strictly increasing") {
  const std::vector<VarianceModel> models = {
      VarianceModel::fbm(0.3), VarianceModel::fbm(1.0), VarianceModel::integrated_ou()};
  const std::vector<double> probe = {1e-4, 0.01, 0.1, 0.5, 1, 2, 5, 17, 100};
  for (const auto& m : models) {
    double prev = 0.0;
    for (double t : probe) {
      CHECK(sigma2(m, t) == sigma2(m, -t));
      CHECK(sigma2(m, t) > prev);
      prev = sigma2(m, t);
    }
    CHECK(sigma2(m, 0.0) == 0.0);
  }
}

TEST_CASE("fbm variance is self-similar") {
  const auto m = VarianceModel::fbm(0.7);
  for (double c : {0.25, 2.0, 13.0}) {
    for (double t : {0.5, 1.0, 3.0}) {
      CHECK(sigma2(m, c * t) ==
            doctest::Approx(std::pow(c, 1.4) * sigma2(m, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("fbm rejects hurst outside (0,1]") {
  CHECK_THROWS(VarianceModel::fbm(0.0));
  CHECK_THROWS(VarianceModel::fbm(1.5));
  CHECK_THROWS(VarianceModel::fbm(-0.2));
}

TEST_CASE("growth conditions: fbm H=0.5 with alpha0=alphaInf=1 passes with ratio 2") {
  auto m = VarianceModel::fbm(0.5);
  m.alpha0 = 1.0;
  m.alphaInf = 1.0;
  const std::vector<double> probes = {1e-3, 1e-2, 0.1, 1, 10, 100, 1000};
  const auto rep = check_growth_conditions(m, probes);
  CHECK(rep.pass());
  for (double r : rep.nearRatios) CHECK(r == doctest::Approx(2.0).epsilon(1e-12));
  for (double r : rep.farRatios) CHECK(r == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("growth conditions: integrated OU with alpha0=2, alphaInf=1 passes") {
  const auto m = VarianceModel::integrated_ou();
  const std::vector<double> probes = {1e-3, 1e-2, 0.1, 1, 10, 100, 1000};
  const auto rep = check_growth_conditions(m, probes);
  CHECK(rep.pass());
  // sigma^2 ~ 2 t^2 at zero, ~ 4 t at infinity
  CHECK(rep.nearRatios.front() == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(rep.farRatios.back() == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("growth conditions: fbm H=0.5 with claimed alphaInf=2 fails") {
  auto m = VarianceModel::fbm(0.5);
  m.alphaInf = 2.0;
  const std::vector<double> probes = {1e-3, 1e-2, 0.1, 1, 10, 100, 1000};
  const auto rep = check_growth_conditions(m, probes);
  CHECK_FALSE(rep.farOk);
  CHECK_FALSE(rep.pass());
}

TEST_CASE("growth conditions reject an empty probe grid") {
  const auto m = VarianceModel::fbm(0.5);
  CHECK_THROWS(check_growth_conditions(m, {}));
}

TEST_CASE("power table interpolates an admissible variance") {
  // nodes sampled from fbm H=0.7, denser near 0 where curvature blows up
  const auto ref = VarianceModel::fbm(0.7);
  std::vector<double> ts, s2s;
  for (double t = 0.05; t <= 8.0; t += 0.05) {
    ts.push_back(t);
    s2s.push_back(sigma2(ref, t));
  }
  const auto m = VarianceModel::power_table(ts, s2s, 1.4, 1.4);

  CHECK(sigma2(m, 0.0) == 0.0);
  for (double t : ts) CHECK(sigma2(m, t) == doctest::Approx(sigma2(ref, t)).epsilon(1e-12));
  for (double t = 0.3; t < 8.0; t += 0.37)
    CHECK(sigma2(m, t) == doctest::Approx(sigma2(ref, t)).epsilon(2e-3));
  // strictly increasing across node boundaries (monotone interpolation)
  double prev = 0.0;
  for (double t = 0.05; t <= 12.0; t += 0.05) {
    CHECK(sigma2(m, t) > prev);
    prev = sigma2(m, t);
  }
  // power-law continuation past the last node stays close to t^1.4 growth
  CHECK(sigma2(m, 16.0) == doctest::Approx(sigma2(ref, 16.0)).epsilon(1e-2));
}

TEST_CASE("power table: exactly linear data reproduces Brownian scaling") {
  std::vector<double> ts = {1, 2, 3, 4}, s2s = {2, 4, 6, 8};
  const auto m = VarianceModel::power_table(ts, s2s, 1.0, 1.0);
  CHECK(sigma2(m, 2.5) == doctest::Approx(5.0).epsilon(1e-13));
  CHECK(sigma2(m, 0.5) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("power table validates its nodes") {
  CHECK_THROWS(VarianceModel::power_table({1.0}, {2.0}, 1, 1));
  CHECK_THROWS(VarianceModel::power_table({1, 2}, {2, 2}, 1, 1));    // not increasing
  CHECK_THROWS(VarianceModel::power_table({2, 1}, {1, 2}, 1, 1));    // t not increasing
  CHECK_THROWS(VarianceModel::power_table({1, 2}, {1, 2}, 0.0, 1));  // bad exponent
}
