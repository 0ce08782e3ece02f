#include "berman/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace berman {

namespace {

std::int64_t integer_ratio(double num, double den, const char* what) {
  const double q = num / den;
  const double r = std::round(q);
  if (!(r >= 1.0) || std::fabs(q - r) > 1e-9 * r)
    throw std::invalid_argument(std::string(what) + " must be an integer multiple");
  return static_cast<std::int64_t>(r);
}

}  // namespace

GridSpec::GridSpec(double T, double e, double delta) {
  if (!(T > 0.0) || !(e > 0.0)) throw std::invalid_argument("grid: T and e must be positive");
  if (delta < 0.0) throw std::invalid_argument("grid: delta must be >= 0");
  halfWidth = T;
  fineStep = e;
  mesh = delta;
  stepsPerSide = integer_ratio(T, e, "T/e");
  n = 2 * stepsPerSide + 1;
  if (delta > 0.0) (void)integer_ratio(delta, e, "delta/e");
}

std::int64_t GridSpec::meshStride() const {
  if (mesh == 0.0) return 1;
  return static_cast<std::int64_t>(std::round(mesh / fineStep));
}

double GridSpec::meshMass() const { return mesh == 0.0 ? fineStep : mesh; }

std::int64_t GridSpec::meshHalfCount() const { return stepsPerSide / meshStride(); }

}  // namespace berman
