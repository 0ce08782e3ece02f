#include "berman/paths.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "berman/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace berman {

double fgn_autocovariance(double hurst, std::int64_t k) {
  if (!(hurst > 0.0) || hurst > 1.0)
    throw std::invalid_argument("fgn_autocovariance: hurst must lie in (0, 1]");
  if (k < 0) throw std::invalid_argument("fgn_autocovariance: lag must be >= 0");
  if (k == 0) return 1.0;
  const double p = 2.0 * hurst;
  const double km = static_cast<double>(k);
  return 0.5 * (std::pow(km + 1.0, p) - 2.0 * std::pow(km, p) + std::pow(km - 1.0, p));
}

namespace {

void subtract_drift(std::span<double> w, const VarianceModel& model, const GridSpec& grid) {
  for (std::int64_t i = 0; i < grid.n; ++i)
    w[i] -= 0.5 * sigma2(model, grid.time_at(i));
}

// Eigenvalues of the circulant embedding of the fGn covariance over m lags.
// Provably nonnegative for fGn; roundoff-scale negatives are clipped, larger
// ones abort.
std::vector<double> embedding_eigenvalues(double hurst, std::int64_t m) {
  const std::int64_t M = 2 * m;
  std::vector<std::complex<double>> c(M), lam(M);
  for (std::int64_t j = 0; j <= m; ++j) c[j] = fgn_autocovariance(hurst, j);
  for (std::int64_t j = m + 1; j < M; ++j) c[j] = c[M - j];

  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(M),
                                    reinterpret_cast<fftw_complex*>(c.data()),
                                    reinterpret_cast<fftw_complex*>(lam.data()),
                                    FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  std::vector<double> ev(M);
  double maxEv = 0.0;
  for (std::int64_t k = 0; k < M; ++k) {
    ev[k] = lam[k].real();
    maxEv = std::max(maxEv, ev[k]);
  }
  const double tol = 1e-12 * maxEv;
  for (double& v : ev) {
    if (v < 0.0) {
      if (v < -tol)
        throw std::runtime_error("circulant embedding: negative eigenvalue beyond tolerance");
      v = 0.0;
    }
  }
  return ev;
}

}  // namespace

PathBatch sample_fbm_paths(const VarianceModel& model, const GridSpec& grid,
                           std::int64_t count, std::uint64_t masterSeed) {
  if (model.kind != ModelKind::Fbm)
    throw std::invalid_argument("sample_fbm_paths: model kind must be fbm");
  PathBatch batch;
  batch.grid = grid;
  batch.model = model;
  batch.count = count;
  batch.masterSeed = masterSeed;
  batch.values.resize(static_cast<std::size_t>(count) * grid.n);

  const std::int64_t c0 = grid.center();

  if (model.hurst == 1.0) {
    // B_1(t) = t * xi: one Gaussian per trajectory, exact.
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      auto eng = trajectory_engine(masterSeed, i, kStreamPath);
      std::normal_distribution<double> gauss(0.0, 1.0);
      const double xi = gauss(eng);
      auto w = batch.row(i);
      for (std::int64_t j = 0; j < grid.n; ++j)
        w[j] = std::sqrt(2.0) * grid.time_at(j) * xi;
      subtract_drift(w, model, grid);
    }
    return batch;
  }

  const std::int64_t m = 2 * grid.stepsPerSide;  // increments on [0, 2T]
  const std::int64_t M = 2 * m;
  const std::vector<double> ev = embedding_eigenvalues(model.hurst, m);

  std::vector<double> sq(M);
  const double invSqrtM = 1.0 / std::sqrt(static_cast<double>(M));
  for (std::int64_t k = 0; k < M; ++k) sq[k] = std::sqrt(ev[k]);

  // increment scale: Var(V(t+e) - V(t)) = 2 e^(2H)
  const double scale = std::sqrt(2.0) * std::pow(grid.fineStep, model.hurst) * invSqrtM;

  std::vector<std::complex<double>> planIn(M), planOut(M);
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(M),
                                    reinterpret_cast<fftw_complex*>(planIn.data()),
                                    reinterpret_cast<fftw_complex*>(planOut.data()),
                                    FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);

#pragma omp parallel
  {
    std::vector<std::complex<double>> in(M), out(M);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      auto eng = trajectory_engine(masterSeed, i, kStreamPath);
      std::normal_distribution<double> gauss(0.0, 1.0);

      in[0] = sq[0] * gauss(eng);
      in[m] = sq[m] * gauss(eng);
      for (std::int64_t k = 1; k < m; ++k) {
        const double u = gauss(eng);
        const double v = gauss(eng);
        const std::complex<double> z(u, v);
        in[k] = sq[k] * z * std::sqrt(0.5);
        in[M - k] = std::conj(in[k]);
      }
      fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));

      // cumulative sums of scaled fGn, then recenter at the window midpoint
      auto w = batch.row(i);
      double acc = 0.0;
      w[0] = 0.0;
      for (std::int64_t j = 0; j < m; ++j) {
        acc += out[j].real() * scale;
        w[j + 1] = acc;
      }
      const double mid = w[c0];
      for (std::int64_t j = 0; j < grid.n; ++j) w[j] -= mid;
      w[c0] = 0.0;
      subtract_drift(w, model, grid);
    }
  }
  fftw_destroy_plan(plan);
  return batch;
}

PathBatch sample_integrated_ou_paths(const GridSpec& grid, std::int64_t count,
                                     std::uint64_t masterSeed) {
  PathBatch batch;
  batch.grid = grid;
  batch.model = VarianceModel::integrated_ou();
  batch.count = count;
  batch.masterSeed = masterSeed;
  batch.values.resize(static_cast<std::size_t>(count) * grid.n);

  // Exact one-step transition of (X(t+h), int_t^{t+h} X) for the stationary
  // OU with covariance e^{-|s-t|} (dX = -X dt + sqrt(2) dB):
  //   X' = a X + N(0, 1 - a^2)
  //   J  = (1-a) X + noise,  Cov(X', J) = (1-a)^2,
  //   Var(J) = 2h + 4 expm1(-h) - expm1(-2h)
  const double h = grid.fineStep;
  const double a = std::exp(-h);
  const double varX = -std::expm1(-2.0 * h);
  const double oneMinusA = -std::expm1(-h);
  const double covXJ = oneMinusA * oneMinusA;
  const double varJ = 2.0 * h + 4.0 * std::expm1(-h) - std::expm1(-2.0 * h);
  const double l11 = std::sqrt(varX);
  const double l21 = covXJ / l11;
  const double l22 = std::sqrt(std::max(0.0, varJ - l21 * l21));

  const std::int64_t c0 = grid.center();
  const std::int64_t m = 2 * grid.stepsPerSide;
  const double sqrt2 = std::sqrt(2.0);
  const auto& model = batch.model;

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    auto eng = trajectory_engine(masterSeed, i, kStreamPath);
    std::normal_distribution<double> gauss(0.0, 1.0);

    auto w = batch.row(i);
    double x = gauss(eng);  // stationary start
    double integ = 0.0;
    w[0] = 0.0;
    for (std::int64_t j = 0; j < m; ++j) {
      const double z1 = gauss(eng);
      const double z2 = gauss(eng);
      const double jump = oneMinusA * x + l21 * z1 + l22 * z2;
      x = a * x + l11 * z1;
      integ += jump;
      w[j + 1] = sqrt2 * integ;
    }
    const double mid = w[c0];
    for (std::int64_t j = 0; j < grid.n; ++j) w[j] -= mid;
    w[c0] = 0.0;
    subtract_drift(w, model, grid);
  }
  return batch;
}

PathBatch sample_cholesky_paths(const VarianceModel& model, const GridSpec& grid,
                                std::int64_t count, std::uint64_t masterSeed) {
  if (grid.n > 4096)
    throw std::invalid_argument("sample_cholesky_paths: grid too large for a dense factorization");

  PathBatch batch;
  batch.grid = grid;
  batch.model = model;
  batch.count = count;
  batch.masterSeed = masterSeed;
  batch.values.resize(static_cast<std::size_t>(count) * grid.n);

  // Cov(V(s), V(t)) = (sigma2(s) + sigma2(t) - sigma2(t - s)) / 2 on the grid
  // minus the pinned t = 0 coordinate.
  const std::int64_t c0 = grid.center();
  const std::int64_t nf = grid.n - 1;  // free coordinates
  auto timeOf = [&](std::int64_t a) { return grid.time_at(a < c0 ? a : a + 1); };

  Eigen::MatrixXd cov(nf, nf);
  for (std::int64_t r = 0; r < nf; ++r) {
    const double tr = timeOf(r);
    const double s2r = sigma2(model, tr);
    for (std::int64_t c = r; c < nf; ++c) {
      const double tc = timeOf(c);
      const double v = 0.5 * (s2r + sigma2(model, tc) - sigma2(model, tc - tr));
      cov(r, c) = v;
      cov(c, r) = v;
    }
  }

  Eigen::MatrixXd factor;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    factor = llt.matrixL();
  } else {
    // semidefinite (e.g. the H = 1 line) or inadmissible: decide by spectrum
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("sample_cholesky_paths: eigendecomposition failed");
    Eigen::VectorXd ev = es.eigenvalues();
    const double tol = 1e-10 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (std::int64_t k = 0; k < nf; ++k) {
      if (ev(k) < -tol)
        throw std::runtime_error(
            "sample_cholesky_paths: covariance not PSD; variance model inadmissible");
      ev(k) = std::max(0.0, ev(k));
    }
    factor = es.eigenvectors() * ev.cwiseSqrt().asDiagonal();
  }

#pragma omp parallel
  {
    Eigen::VectorXd xi(nf), v(nf);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      auto eng = trajectory_engine(masterSeed, i, kStreamPath);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (std::int64_t k = 0; k < nf; ++k) xi(k) = gauss(eng);
      v.noalias() = factor * xi;

      auto w = batch.row(i);
      for (std::int64_t r = 0; r < nf; ++r) w[r < c0 ? r : r + 1] = v(r);
      w[c0] = 0.0;
      subtract_drift(w, model, grid);
    }
  }
  return batch;
}

PathBatch sample_paths(const VarianceModel& model, const GridSpec& grid,
                       std::int64_t count, std::uint64_t masterSeed) {
  switch (model.kind) {
    case ModelKind::Fbm: return sample_fbm_paths(model, grid, count, masterSeed);
    case ModelKind::IntegratedOu: return sample_integrated_ou_paths(grid, count, masterSeed);
    case ModelKind::PowerTable: return sample_cholesky_paths(model, grid, count, masterSeed);
  }
  throw std::invalid_argument("sample_paths: unknown model kind");
}

namespace {

constexpr char kDumpMagic[8] = {'P', 'B', 'A', 'T', 'C', 'H', '0', '1'};

template <typename T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void get(std::ifstream& is, T& v) {
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
}

}  // namespace

void dump_path_batch(const PathBatch& batch, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("dump_path_batch: cannot open " + path);
  os.write(kDumpMagic, sizeof(kDumpMagic));
  put(os, static_cast<std::int32_t>(batch.model.kind));
  put(os, batch.model.hurst);
  put(os, batch.model.alpha0);
  put(os, batch.model.alphaInf);
  put(os, static_cast<std::int64_t>(batch.model.nodeT.size()));
  for (std::size_t i = 0; i < batch.model.nodeT.size(); ++i) {
    put(os, batch.model.nodeT[i]);
    put(os, batch.model.nodeS2[i]);
  }
  put(os, batch.grid.halfWidth);
  put(os, batch.grid.fineStep);
  put(os, batch.grid.mesh);
  put(os, batch.count);
  put(os, batch.grid.n);
  put(os, batch.masterSeed);
  os.write(reinterpret_cast<const char*>(batch.values.data()),
           static_cast<std::streamsize>(batch.values.size() * sizeof(double)));
  if (!os) throw std::runtime_error("dump_path_batch: write failed");
}

PathBatch load_path_batch(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_path_batch: cannot open " + path);
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kDumpMagic, sizeof(magic)) != 0)
    throw std::runtime_error("load_path_batch: bad header");
  std::int32_t kind;
  double hurst, a0, aInf;
  std::int64_t nodes;
  get(is, kind);
  get(is, hurst);
  get(is, a0);
  get(is, aInf);
  get(is, nodes);
  std::vector<double> nt(nodes), ns(nodes);
  for (std::int64_t i = 0; i < nodes; ++i) {
    get(is, nt[i]);
    get(is, ns[i]);
  }
  VarianceModel model;
  switch (static_cast<ModelKind>(kind)) {
    case ModelKind::Fbm: model = VarianceModel::fbm(hurst); break;
    case ModelKind::IntegratedOu: model = VarianceModel::integrated_ou(); break;
    case ModelKind::PowerTable: {
      nt.erase(nt.begin());  // implicit origin node is re-added by the builder
      ns.erase(ns.begin());
      model = VarianceModel::power_table(std::move(nt), std::move(ns), a0, aInf);
      break;
    }
    default: throw std::runtime_error("load_path_batch: unknown model kind");
  }
  double T, e, delta;
  std::int64_t count, n;
  std::uint64_t seed;
  get(is, T);
  get(is, e);
  get(is, delta);
  get(is, count);
  get(is, n);
  get(is, seed);

  PathBatch batch;
  batch.grid = GridSpec(T, e, delta);
  if (batch.grid.n != n) throw std::runtime_error("load_path_batch: grid size mismatch");
  batch.model = std::move(model);
  batch.count = count;
  batch.masterSeed = seed;
  batch.values.resize(static_cast<std::size_t>(count) * n);
  is.read(reinterpret_cast<char*>(batch.values.data()),
          static_cast<std::streamsize>(batch.values.size() * sizeof(double)));
  if (!is) throw std::runtime_error("load_path_batch: truncated body");
  return batch;
}

}  // namespace berman
