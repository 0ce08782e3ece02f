#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "berman/grid.hpp"

using namespace berman;

TEST_CASE("grid has an odd point count with t=0 exactly on it") {
  const GridSpec g(16.0, 0.0078125, 0.0);
  CHECK(g.n == 4097);
  CHECK(g.n % 2 == 1);
  CHECK(g.time_at(g.center()) == 0.0);
  CHECK(g.time_at(0) == -16.0);
  CHECK(g.time_at(g.n - 1) == 16.0);
}

TEST_CASE("non-representable grids are rejected") {
  CHECK_THROWS(GridSpec(1.0, 0.3, 0.0));      // T/e not integer
  CHECK_THROWS(GridSpec(2.0, 0.5, 0.75));     // delta/e not integer
  CHECK_THROWS(GridSpec(-1.0, 0.5, 0.0));
  CHECK_THROWS(GridSpec(1.0, 0.0, 0.0));
  CHECK_THROWS(GridSpec(1.0, 0.5, -1.0));
}

TEST_CASE("mesh bookkeeping for the continuous limit") {
  const GridSpec g(1.0, 0.5, 0.0);
  CHECK(g.meshStride() == 1);
  CHECK(g.meshMass() == 0.5);
  CHECK(g.meshCount() == 5);
  CHECK(g.windowMeasure() == doctest::Approx(2.5));  // 2T + e
}

TEST_CASE("mesh bookkeeping for a coarse mesh that does not divide T") {
  const GridSpec g(15.0, 0.025, 10.0);
  CHECK(g.meshStride() == 400);
  CHECK(g.meshMass() == 10.0);
  CHECK(g.meshCount() == 3);  // {-10, 0, 10}
  CHECK(g.windowMeasure() == doctest::Approx(30.0));
}

TEST_CASE("one-point mesh when delta reaches the window size") {
  const GridSpec g(1.0, 0.5, 2.0);
  CHECK(g.meshCount() == 1);
  CHECK(g.windowMeasure() == doctest::Approx(2.0));
}
