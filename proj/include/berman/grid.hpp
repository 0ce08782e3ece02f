#pragma once

#include <cstdint>

namespace berman {

// Regular simulation grid on [-T, T] with fine step e and observation mesh
// delta (0 means the fine grid itself stands in for the continuous limit).
// Constraints: T/e integer, delta/e integer when delta > 0, so t = 0 is
// always a grid point and every mesh point is a grid point.
struct GridSpec {
  double halfWidth = 1.0;  // T
  double fineStep = 1.0;   // e
  double mesh = 0.0;       // delta
  int dim = 1;

  std::int64_t stepsPerSide = 1;  // T/e
  std::int64_t n = 3;             // 2*stepsPerSide + 1, odd

  GridSpec() = default;
  GridSpec(double T, double e, double delta);

  std::int64_t center() const { return stepsPerSide; }
  // Index-based so that time_at(center()) is exactly 0.
  double time_at(std::int64_t i) const {
    return static_cast<double>(i - stepsPerSide) * fineStep;
  }

  std::int64_t meshStride() const;   // grid steps between mesh points
  double meshMass() const;           // lambda_delta mass per mesh point
  std::int64_t meshHalfCount() const;  // mesh points strictly right of 0
  std::int64_t meshCount() const { return 2 * meshHalfCount() + 1; }
  double windowMeasure() const { return meshMass() * static_cast<double>(meshCount()); }
};

}  // namespace berman
