#include "berman/analytic.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace berman::analytic {

namespace {

constexpr long double kInvSqrt2PiL = 0.3989422804014326779399460599343818684759L;
constexpr long double kInvSqrt2L = 0.7071067811865475244008443621048490392848L;

// 15-point Kronrod / 7-point Gauss pair (positive half, node 0 last).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
};

double gk15(const std::function<double(double)>& f, double a, double b, double& err) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double fs = f(c - dx) + f(c + dx);
    kron += kWgk[i] * fs;
    if (i % 2 == 1) gauss += kWg[i / 2] * fs;
  }
  kron *= h;
  gauss *= h;
  err = std::fabs(kron - gauss);
  return kron;
}

// Adaptive bisection; per-panel acceptance at absTol + relTol * |panel|.
double adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   double absTol = 1e-12, double relTol = 1e-14) {
  std::vector<Panel> stack{{a, b}};
  double total = 0.0;
  int panels = 0;
  while (!stack.empty()) {
    const Panel p = stack.back();
    stack.pop_back();
    double err = 0.0;
    const double val = gk15(f, p.a, p.b, err);
    if (!std::isfinite(val)) throw std::runtime_error("quadrature: non-finite integrand");
    const double width = p.b - p.a;
    if (err <= absTol + relTol * std::fabs(val) || width < 1e-15 * std::fabs(b - a) ||
        ++panels > 200000) {
      total += val;
    } else {
      const double mid = 0.5 * (p.a + p.b);
      stack.push_back({p.a, mid});
      stack.push_back({mid, p.b});
    }
  }
  return total;
}

// smallest t with Psi(sigma_V(t)/2) below ~1e-21, deep enough that the
// truncated tail stays under 1e-9 even for the slow H = 0.1 decay; throws
// when sigma_V is too slowly growing for the integral to be summable in
// double range
double survival_cutoff(const VarianceModel& model) {
  const double target = 19.0;  // sigma_V(t) >= 19  <=>  Psi(sigma/2) <= ~1e-21
  double hi = 1.0;
  while (sigma(model, hi) < target) {
    hi *= 4.0;
    if (hi > 1e300)
      throw std::runtime_error("expected_sojourn: sigma_V grows too slowly, integral diverges");
  }
  double lo = hi / 4.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sigma(model, mid) < target ? lo : hi) = mid;
  }
  return hi;
}

// integral of Psi(sigma_V(t)/2) dt over [a, b], evaluated in the
// u = log1p(t) domain so that both the origin and heavy power-law tails are
// resolved with few panels
double integrate_survival(const VarianceModel& model, double a, double b) {
  if (b <= a) return 0.0;
  auto g = [&](double u) {
    const double t = std::expm1(u);
    return survival(0.5 * sigma(model, t)) * std::exp(u);
  };
  return adaptive_gk(g, std::log1p(a), std::log1p(b));
}

}  // namespace

long double phi_ld(long double x) { return kInvSqrt2PiL * std::exp(-0.5L * x * x); }

long double survival_ld(long double x) { return 0.5L * erfcl(x * kInvSqrt2L); }

double phi(double x) { return static_cast<double>(phi_ld(x)); }

double survival(double x) { return static_cast<double>(survival_ld(x)); }

double expected_sojourn(const VarianceModel& model, double delta) {
  if (delta < 0.0) throw std::invalid_argument("expected_sojourn: delta must be >= 0");
  const double tStar = survival_cutoff(model);
  if (delta == 0.0) return 4.0 * integrate_survival(model, 0.0, tStar);

  // symmetric sum over delta Z; t = 0 contributes delta * 2 Psi(0) = delta
  const std::int64_t kMaxExplicit = 2'000'000;
  double sum = 0.0;
  std::int64_t k = 1;
  for (; k <= kMaxExplicit; ++k) {
    const double t = static_cast<double>(k) * delta;
    if (t > tStar) break;
    sum += survival(0.5 * sigma(model, t));
  }
  if (k > kMaxExplicit) {
    // midpoint-rule tail: sum_{j>k-1} f(j delta) ~ (1/delta) int_a f
    // - (delta/24) f'(a) at a = (k - 1/2) delta
    const double a = (static_cast<double>(k) - 0.5) * delta;
    sum += integrate_survival(model, a, tStar) / delta;
    const double h = 1e-6 * a;
    const double fp =
        (survival(0.5 * sigma(model, a + h)) - survival(0.5 * sigma(model, a - h))) / (2.0 * h);
    sum -= (delta / 24.0) * fp;
  }
  return delta + 4.0 * delta * sum;
}

double fbm_expected_sojourn_closed(double hurst, bool paperVerbatim) {
  if (!(hurst > 0.0) || hurst > 1.0)
    throw std::invalid_argument("fbm_expected_sojourn_closed: hurst must lie in (0, 1]");
  const double g = std::tgamma(0.5 / hurst + 0.5);
  const double lead = std::pow(2.0, 1.0 / hurst + 1.0);
  if (paperVerbatim) return lead / (std::sqrt(M_PI) * g);
  return lead * g / std::sqrt(M_PI);
}

double berman_closed_h1(double x) {
  if (x < 0.0) throw std::invalid_argument("berman_closed_h1: x must be >= 0");
  return std::sqrt(2.0) * phi(x / std::sqrt(2.0));
}

double berman_finite_window_h1(double T, double x) {
  if (x < 0.0) throw std::invalid_argument("berman_finite_window_h1: x must be >= 0");
  if (!(T > x)) throw std::invalid_argument("berman_finite_window_h1: need T > x");
  return 2.0 * survival(x / std::sqrt(2.0)) + std::sqrt(2.0) * (T - x) * phi(x / std::sqrt(2.0));
}

BoundSet bounds_sandwich(double probGreater, double probGeq, double meanEps, double x,
                         std::string provenance) {
  if (!(meanEps > 0.0)) throw std::invalid_argument("bounds_sandwich: E[eps] must be positive");
  if (probGreater < 0.0 || probGreater > 1.0 || probGeq < 0.0 || probGeq > 1.0)
    throw std::invalid_argument("bounds_sandwich: probabilities must lie in [0, 1]");
  if (x < 0.0) throw std::invalid_argument("bounds_sandwich: x must be >= 0");
  BoundSet b;
  b.x = x;
  b.provenance = std::move(provenance);
  if (x == 0.0) {
    b.lower = 1.0 / meanEps;
    b.upper = std::numeric_limits<double>::infinity();
  } else {
    b.lower = probGreater * probGreater / meanEps;
    b.upper = probGeq / x;
  }
  return b;
}

double markov_upper_bound(double momentP, double p, double x) {
  if (!(p > 0.0)) throw std::invalid_argument("markov_upper_bound: p must be positive");
  if (!(x > 0.0)) throw std::invalid_argument("markov_upper_bound: x must be positive");
  if (momentP < 0.0) throw std::invalid_argument("markov_upper_bound: moment must be >= 0");
  return std::pow(x, -p - 1.0) * momentP;
}

double mgf_upper_bound(double s, std::span<const double> xs,
                       std::span<const double> bermanValues, double meanEps) {
  if (!(s > 0.0)) throw std::invalid_argument("mgf_upper_bound: s must be positive");
  if (xs.size() != bermanValues.size() || xs.size() < 2)
    throw std::invalid_argument("mgf_upper_bound: need a tabulated curve");
  if (!(meanEps >= 0.0)) throw std::invalid_argument("mgf_upper_bound: E[eps] must be >= 0");

  auto integrand = [&](std::size_t i) {
    return std::exp(s * xs[i]) * std::sqrt(std::max(0.0, bermanValues[i]));
  };
  if (integrand(xs.size() - 1) >= 1e-12)
    throw std::invalid_argument("mgf_upper_bound: curve too short, integrand has not decayed");

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i + 1] > xs[i]))
      throw std::invalid_argument("mgf_upper_bound: x grid must be increasing");
    integral += 0.5 * (integrand(i) + integrand(i + 1)) * (xs[i + 1] - xs[i]);
  }
  return 1.0 + s * std::sqrt(meanEps) * integral;
}

AsymptoteRatio log_asymptote_ratio(double bermanValue, const VarianceModel& model, double x) {
  AsymptoteRatio r;
  r.bandLo = -1.0;
  r.bandHi = -(3.0 - 2.0 * std::sqrt(2.0)) / 2.0;
  if (bermanValue < 0.0)
    throw std::invalid_argument("log_asymptote_ratio: B(x) must be >= 0");
  if (bermanValue == 0.0) {
    r.ratio = -std::numeric_limits<double>::infinity();
    return r;
  }
  r.ratio = std::log(bermanValue) / sigma2(model, 0.5 * x);
  return r;
}

}  // namespace berman::analytic
