#pragma once

#include <span>
#include <vector>

namespace berman {

enum class ModelKind { Fbm, IntegratedOu, PowerTable };

// Variance function sigma^2_V of a centered Gaussian process with stationary
// increments. sigma^2_V(0) = 0, even in t, strictly increasing on [0, inf).
// alpha0 / alphaInf are the claimed local/global growth exponents in (0, 2].
struct VarianceModel {
  ModelKind kind = ModelKind::Fbm;
  double hurst = 0.5;  // fBm only
  double alpha0 = 1.0;
  double alphaInf = 1.0;

  // PowerTable: monotone (t, sigma^2) nodes, interpolated with a monotone
  // cubic; extrapolated beyond the last node with the log-log slope of the
  // final segment. Node t=0 with value 0 is implicit.
  std::vector<double> nodeT;
  std::vector<double> nodeS2;
  std::vector<double> nodeSlope;  // Fritsch-Carlson tangents, filled at build

  static VarianceModel fbm(double hurst);
  static VarianceModel integrated_ou();
  static VarianceModel power_table(std::vector<double> t, std::vector<double> s2,
                                   double alpha0, double alphaInf);

  const char* name() const;
};

// sigma^2_V(|t|). Total function: no failure modes for a valid model.
double sigma2(const VarianceModel& model, double t);

double sigma(const VarianceModel& model, double t);  // sqrt(sigma2)

// Empirical check of the growth conditions: ratios sigma^2(t)/t^alpha0 near
// zero must stay bounded, ratios sigma^2(t)/t^alphaInf at the far probes must
// stay away from zero. Slopes are measured in log-log coordinates.
struct GrowthReport {
  std::vector<double> nearProbes, nearRatios;
  std::vector<double> farProbes, farRatios;
  double nearSlope = 0.0;  // d ln(ratio) / d ln(t), near 0
  double farSlope = 0.0;   // same, at the far end
  bool nearOk = false;
  bool farOk = false;
  bool pass() const { return nearOk && farOk; }
};

GrowthReport check_growth_conditions(const VarianceModel& model,
                                     std::span<const double> probeGrid);

}  // namespace berman
