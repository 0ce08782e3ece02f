#include "berman/variance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace berman {

namespace {

// Fritsch-Carlson tangents: monotone cubic Hermite through monotone data.
std::vector<double> pchip_tangents(const std::vector<double>& t,
                                   const std::vector<double>& y) {
  const std::size_t n = t.size();
  std::vector<double> d(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * (t[i + 1] - t[i]) + (t[i] - t[i - 1]);
      const double w2 = (t[i + 1] - t[i]) + 2.0 * (t[i] - t[i - 1]);
      m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  return m;
}

double pchip_eval(const std::vector<double>& t, const std::vector<double>& y,
                  const std::vector<double>& m, double x) {
  auto it = std::upper_bound(t.begin(), t.end(), x);
  std::size_t i = (it == t.begin()) ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
  if (i + 1 >= t.size()) i = t.size() - 2;
  const double h = t[i + 1] - t[i];
  const double s = (x - t[i]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * y[i] + h10 * h * m[i] + h01 * y[i + 1] + h11 * h * m[i + 1];
}

double loglog_slope(std::span<const double> t, std::span<const double> r) {
  // least-squares slope of ln r against ln t
  const std::size_t n = t.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(t[i]);
    const double y = std::log(std::max(r[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  return denom == 0.0 ? 0.0 : (n * sxy - sx * sy) / denom;
}

}  // namespace

VarianceModel VarianceModel::fbm(double hurst) {
  if (!(hurst > 0.0) || hurst > 1.0)
    throw std::invalid_argument("fbm: hurst must lie in (0, 1]");
  VarianceModel m;
  m.kind = ModelKind::Fbm;
  m.hurst = hurst;
  m.alpha0 = std::min(2.0, 2.0 * hurst);
  m.alphaInf = m.alpha0;
  return m;
}

VarianceModel VarianceModel::integrated_ou() {
  VarianceModel m;
  m.kind = ModelKind::IntegratedOu;
  m.alpha0 = 2.0;
  m.alphaInf = 1.0;
  return m;
}

VarianceModel VarianceModel::power_table(std::vector<double> t, std::vector<double> s2,
                                         double alpha0, double alphaInf) {
  if (t.size() != s2.size() || t.size() < 2)
    throw std::invalid_argument("power_table: need at least two (t, sigma^2) nodes");
  if (!(alpha0 > 0.0) || alpha0 > 2.0 || !(alphaInf > 0.0) || alphaInf > 2.0)
    throw std::invalid_argument("power_table: growth exponents must lie in (0, 2]");
  VarianceModel m;
  m.kind = ModelKind::PowerTable;
  m.alpha0 = alpha0;
  m.alphaInf = alphaInf;
  if (t.front() != 0.0) {
    t.insert(t.begin(), 0.0);
    s2.insert(s2.begin(), 0.0);
  }
  if (s2.front() != 0.0)
    throw std::invalid_argument("power_table: sigma^2(0) must be 0");
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    if (!(t[i] < t[i + 1]) || !(s2[i] < s2[i + 1]))
      throw std::invalid_argument("power_table: nodes must be strictly increasing");
  }
  m.nodeT = std::move(t);
  m.nodeS2 = std::move(s2);
  m.nodeSlope = pchip_tangents(m.nodeT, m.nodeS2);
  return m;
}

const char* VarianceModel::name() const {
  switch (kind) {
    case ModelKind::Fbm: return "fbm";
    case ModelKind::IntegratedOu: return "integrated-ou";
    case ModelKind::PowerTable: return "power-table";
  }
  return "?";
}

double sigma2(const VarianceModel& model, double t) {
  const double a = std::fabs(t);
  if (a == 0.0) return 0.0;
  switch (model.kind) {
    case ModelKind::Fbm:
      return 2.0 * std::pow(a, 2.0 * model.hurst);
    case ModelKind::IntegratedOu:
      // 4(a + e^-a - 1); expm1 keeps the t^2 regime accurate near 0
      return 4.0 * (a + std::expm1(-a));
    case ModelKind::PowerTable: {
      const double tMax = model.nodeT.back();
      if (a <= tMax)
        return pchip_eval(model.nodeT, model.nodeS2, model.nodeSlope, a);
      // power-law continuation with the log-log slope of the last segment
      const std::size_t k = model.nodeT.size() - 1;
      const double p = std::log(model.nodeS2[k] / model.nodeS2[k - 1]) /
                       std::log(model.nodeT[k] / model.nodeT[k - 1]);
      return model.nodeS2[k] * std::pow(a / tMax, p);
    }
  }
  return 0.0;
}

double sigma(const VarianceModel& model, double t) { return std::sqrt(sigma2(model, t)); }

GrowthReport check_growth_conditions(const VarianceModel& model,
                                     std::span<const double> probeGrid) {
  if (probeGrid.empty())
    throw std::invalid_argument("check_growth_conditions: empty probe grid");
  std::vector<double> probes(probeGrid.begin(), probeGrid.end());
  for (double& p : probes) p = std::fabs(p);
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  if (!probes.empty() && probes.front() == 0.0) probes.erase(probes.begin());
  if (probes.size() < 2)
    throw std::invalid_argument("check_growth_conditions: need nonzero probes near 0 and far out");

  GrowthReport rep;
  const std::size_t k = std::min<std::size_t>(3, probes.size());
  for (std::size_t i = 0; i < k; ++i) {
    const double t = probes[i];
    rep.nearProbes.push_back(t);
    rep.nearRatios.push_back(sigma2(model, t) / std::pow(t, model.alpha0));
  }
  for (std::size_t i = probes.size() - k; i < probes.size(); ++i) {
    const double t = probes[i];
    rep.farProbes.push_back(t);
    rep.farRatios.push_back(sigma2(model, t) / std::pow(t, model.alphaInf));
  }
  rep.nearSlope = loglog_slope(rep.nearProbes, rep.nearRatios);
  rep.farSlope = loglog_slope(rep.farProbes, rep.farRatios);
  // ratio growing as t -> 0 means the limsup is infinite; shrinking as
  // t -> inf means the liminf is 0. Slope threshold leaves slack for slowly
  // varying corrections.
  rep.nearOk = rep.nearSlope > -0.1;
  rep.farOk = rep.farSlope > -0.1 && rep.farRatios.back() > 0.0;
  return rep;
}

}  // namespace berman
