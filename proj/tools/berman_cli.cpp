// Command-line front end: config parsing, seeding, dispatch, persistence.
// Subcommands: estimate | exact | study | selftest.
// Exit codes: 0 success, 2 config error, 3 budget refusal.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "berman/analytic.hpp"
#include "berman/estimators.hpp"
#include "berman/experiments.hpp"
#include "berman/io.hpp"
#include "berman/paths.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr const char* kVersion = "1.0.0";

struct CommonOpts {
  std::string outDir = ".";
  std::uint64_t seed = 42;
  int threads = 0;
  double budgetSeconds = 0.0;  // 0: resolve from env or default
};

double resolve_budget(const CommonOpts& c) {
  if (c.budgetSeconds > 0.0) return c.budgetSeconds;
  if (const char* env = std::getenv("BERMAN_BUDGET_SECONDS")) {
    try {
      return std::stod(env);
    } catch (...) {
      throw CLI::ValidationError("BERMAN_BUDGET_SECONDS is not a number");
    }
  }
  return 600.0;
}

void apply_threads(int threads) {
#ifdef _OPENMP
  if (threads > 0) omp_set_num_threads(threads);
#else
  (void)threads;
#endif
}

// crude single-core cost model behind the budget gate
double estimated_seconds(double nPaths, double nPoints, double meshSweeps = 1.0) {
  const double pts = nPaths * nPoints;
  return pts / 3e6 + meshSweeps * pts * std::log2(std::max(4.0, nPoints)) / 6e7;
}

int budget_gate(double estimate, double budget) {
  if (estimate <= budget) return 0;
  std::cerr << "refused: estimated cost " << estimate << " s exceeds budget " << budget
            << " s (raise --budget-seconds or BERMAN_BUDGET_SECONDS)\n";
  return 3;
}

std::string canonical_config(const std::map<std::string, std::string>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  return out;
}

void write_manifest(const std::string& path, const std::map<std::string, std::string>& kv,
                    double wallSeconds, double flaggedFraction = -1.0) {
  json j;
  j["version"] = kVersion;
  j["config"] = kv;
  j["configHash"] = berman::hash_hex(berman::fnv1a64(canonical_config(kv)));
  j["wallSeconds"] = wallSeconds;
  if (flaggedFraction >= 0.0) j["flaggedBoundaryFraction"] = flaggedFraction;
#ifdef _OPENMP
  j["maxThreads"] = omp_get_max_threads();
#else
  j["maxThreads"] = 1;
#endif
  berman::write_text_file(path, j.dump(2) + "\n");
}

berman::VarianceModel load_table_model(const std::string& file, double a0, double aInf) {
  std::ifstream is(file);
  if (!is) throw CLI::ValidationError("cannot open table file: " + file);
  std::vector<double> ts, s2s;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double t, s2;
    if (ls >> t >> s2) {
      ts.push_back(t);
      s2s.push_back(s2);
    }
  }
  return berman::VarianceModel::power_table(std::move(ts), std::move(s2s), a0, aInf);
}

struct ModelOpts {
  std::string model = "fbm";
  double hurst = -1.0;
  std::string tableFile;
  double alpha0 = 1.0;
  double alphaInf = 1.0;
};

berman::VarianceModel make_model(const ModelOpts& m) {
  if (m.model == "fbm") {
    if (m.hurst < 0.0) throw CLI::ValidationError("--hurst is required for the fbm model");
    return berman::VarianceModel::fbm(m.hurst);
  }
  if (m.model == "iou") return berman::VarianceModel::integrated_ou();
  if (m.model == "table") {
    if (m.tableFile.empty())
      throw CLI::ValidationError("--table-file is required for the table model");
    return load_table_model(m.tableFile, m.alpha0, m.alphaInf);
  }
  throw CLI::ValidationError("unknown model: " + m.model);
}

int run_estimate(const CommonOpts& common, const ModelOpts& modelOpts, double T, double step,
                 double delta, const std::vector<double>& xGrid, std::int64_t n,
                 const std::string& estimator, const std::string& dumpPaths) {
  const auto t0 = Clock::now();
  apply_threads(common.threads);
  if (estimator != "direct" && estimator != "spectral" && estimator != "both")
    throw CLI::ValidationError("--estimator must be direct, spectral or both");
  const auto model = make_model(modelOpts);
  const berman::GridSpec grid(T, step, delta);

  if (int g = budget_gate(
          estimated_seconds(static_cast<double>(n), static_cast<double>(grid.n)),
          resolve_budget(common)))
    return g;

  const auto batch = berman::sample_paths(model, grid, n, common.seed);
  if (!dumpPaths.empty()) berman::dump_path_batch(batch, dumpPaths);
  const auto draws = berman::draw_exponentials(n, common.seed);
  const auto soj = berman::compute_sojourns(batch, draws, delta);

  std::vector<berman::Estimate> all;
  if (estimator == "direct" || estimator == "both") {
    auto v = berman::estimate_berman_direct(batch, draws, xGrid, delta);
    all.insert(all.end(), v.begin(), v.end());
  }
  if (estimator == "spectral" || estimator == "both") {
    auto v = berman::estimate_berman_spectral(batch, xGrid, delta);
    all.insert(all.end(), v.begin(), v.end());
  }

  std::map<std::string, std::string> kv{
      {"command", "estimate"},
      {"model", model.name()},
      {"hurst", berman::format_double(modelOpts.hurst)},
      {"T", berman::format_double(T)},
      {"step", berman::format_double(step)},
      {"delta", berman::format_double(delta)},
      {"n", std::to_string(n)},
      {"seed", std::to_string(common.seed)},
      {"estimator", estimator},
  };
  for (std::size_t i = 0; i < xGrid.size(); ++i)
    kv["x" + std::to_string(i)] = berman::format_double(xGrid[i]);
  const std::uint64_t hash = berman::fnv1a64(canonical_config(kv));
  for (auto& e : all) e.configHash = hash;

  std::filesystem::create_directories(common.outDir);
  berman::write_text_file(common.outDir + "/estimates.csv",
                          berman::estimates_csv(all, soj.flagged_fraction()));
  write_manifest(common.outDir + "/manifest.json", kv,
                 std::chrono::duration<double>(Clock::now() - t0).count(),
                 soj.flagged_fraction());
  std::cout << "wrote " << common.outDir << "/estimates.csv (" << all.size() << " rows), hash "
            << berman::hash_hex(hash) << "\n";
  return 0;
}

int run_exact(const CommonOpts& common, int table, const ModelOpts& modelOpts,
              const std::vector<double>& deltas, const std::vector<double>& closedX,
              bool haveModel) {
  const auto t0 = Clock::now();
  berman::StudyReport rep;
  if (table > 0) {
    if (table != 1 && table != 5)
      throw CLI::ValidationError("exact --table expects 1 or 5 (the exact-formula tables)");
    rep = berman::run_table_reproduction(table, berman::StudyScale{});
  } else {
    if (!haveModel && closedX.empty())
      throw CLI::ValidationError("exact: give --table, or a model with --deltas, or --closed-x");
    rep.kind = "exact";
    if (haveModel) {
      if (deltas.empty()) throw CLI::ValidationError("exact: --deltas must not be empty");
      const auto model = make_model(modelOpts);
      for (double d : deltas) {
        berman::StudyRow row;
        row.label = std::string("expected-sojourn-") + model.name();
        row.param = modelOpts.hurst;
        row.delta = d;
        row.value = berman::analytic::expected_sojourn(model, d);
        row.reference = row.value;
        row.passed = true;
        row.provenance = "closed-form";
        rep.rows.push_back(row);
        if (model.kind == berman::ModelKind::Fbm && d == 0.0) {
          berman::StudyRow cf = row;
          cf.label = "expected-sojourn-fbm-closed";
          cf.value = berman::analytic::fbm_expected_sojourn_closed(modelOpts.hurst);
          cf.reference = cf.value;
          rep.rows.push_back(cf);
        }
      }
    }
    for (double x : closedX) {
      berman::StudyRow row;
      row.label = "berman-h1-closed";
      row.x = x;
      row.value = berman::analytic::berman_closed_h1(x);
      row.reference = row.value;
      row.passed = true;
      row.provenance = "closed-form";
      rep.rows.push_back(row);
    }
  }
  rep.wallSeconds = std::chrono::duration<double>(Clock::now() - t0).count();

  std::filesystem::create_directories(common.outDir);
  berman::write_text_file(common.outDir + "/exact.csv", berman::study_csv(rep));
  std::map<std::string, std::string> kv{{"command", "exact"}, {"table", std::to_string(table)}};
  write_manifest(common.outDir + "/exact.json", kv, rep.wallSeconds);
  std::cout << "wrote " << common.outDir << "/exact.csv (" << rep.rows.size() << " rows, "
            << rep.failures() << " mismatches)\n";
  return 0;
}

int run_study(const CommonOpts& common, const std::string& kind, const ModelOpts& modelOpts,
              double lambda, std::vector<double> xGrid, std::vector<double> tGrid,
              std::vector<double> deltas, int table, std::int64_t n, double T, double step,
              bool mc) {
  apply_threads(common.threads);
  const double budget = resolve_budget(common);
  berman::StudyReport rep;

  if (kind == "rate") {
    if (xGrid.empty()) xGrid = {0.0, 1.0};
    if (tGrid.empty()) tGrid = {10.0, 20.0, 40.0, 80.0};
    if (mc) {
      const double maxT = *std::max_element(tGrid.begin(), tGrid.end());
      if (int g = budget_gate(estimated_seconds(static_cast<double>(n), maxT / step,
                                                static_cast<double>(tGrid.size())),
                              budget))
        return g;
      rep = berman::run_rate_study_mc(xGrid, tGrid, n, step, common.seed);
    } else {
      rep = berman::run_rate_study(xGrid, tGrid, lambda);
    }
  } else if (kind == "delta") {
    if (deltas.empty()) deltas = {10, 5, 2, 1, 0.5, 0.2, 0.1, 0};
    if (xGrid.empty()) xGrid = {0.0};
    const auto model = make_model(modelOpts);
    const berman::GridSpec grid(T, step, 0.0);
    if (int g = budget_gate(estimated_seconds(static_cast<double>(n), static_cast<double>(grid.n),
                                              static_cast<double>(deltas.size())),
                            budget))
      return g;
    rep = berman::run_delta_study(model, grid, deltas, xGrid, n, common.seed);
  } else if (kind == "table") {
    berman::StudyScale scale;
    scale.count = n;
    scale.seed = common.seed;
    if (table >= 2 && table != 5) {
      if (int g = budget_gate(
              estimated_seconds(static_cast<double>(n), 2.0 * 16.0 / 0.0078125, 2.0), budget))
        return g;
    }
    rep = berman::run_table_reproduction(table, scale);
  } else if (kind == "band") {
    if (xGrid.empty()) xGrid = {0, 1, 2, 3, 4, 5, 6, 8};
    const auto model = make_model(modelOpts);
    const berman::GridSpec grid(T, step, 0.0);
    if (int g = budget_gate(
            estimated_seconds(static_cast<double>(n), static_cast<double>(grid.n), 2.0), budget))
      return g;
    rep = berman::run_band_and_monotonicity(model, grid, xGrid, n, common.seed);
  } else {
    throw CLI::ValidationError("unknown study kind: " + kind);
  }

  std::map<std::string, std::string> kv{
      {"command", "study"},       {"kind", kind},
      {"model", modelOpts.model}, {"lambda", berman::format_double(lambda)},
      {"table", std::to_string(table)}, {"n", std::to_string(n)},
      {"seed", std::to_string(common.seed)}, {"T", berman::format_double(T)},
      {"step", berman::format_double(step)},
  };
  std::filesystem::create_directories(common.outDir);
  berman::write_text_file(common.outDir + "/study.csv", berman::study_csv(rep));
  json j;
  j["kind"] = rep.kind;
  j["config"] = kv;
  j["configHash"] = berman::hash_hex(berman::fnv1a64(canonical_config(kv)));
  j["seed"] = rep.seed;
  j["wallSeconds"] = rep.wallSeconds;
  j["rows"] = rep.rows.size();
  j["failures"] = rep.failures();
  berman::write_text_file(common.outDir + "/study.json", j.dump(2) + "\n");
  std::cout << "study " << kind << ": " << rep.rows.size() << " rows, " << rep.failures()
            << " failed checks -> " << common.outDir << "/study.csv\n";
  return 0;
}

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

int run_selftest(const CommonOpts& common) {
  apply_threads(common.threads);
  int bad = 0;
  auto check = [&](const char* what, bool ok) {
    std::cout << (ok ? "PASS " : "FAIL ") << what << "\n";
    if (!ok) ++bad;
  };
  namespace an = berman::analytic;

  check("survival(0) == 1/2", an::survival(0.0) == 0.5);
  check("fbm closed form H=0.5 -> 4", near(an::fbm_expected_sojourn_closed(0.5), 4.0, 1e-12));
  check("quadrature matches closed form at H=0.5",
        near(an::expected_sojourn(berman::VarianceModel::fbm(0.5), 0.0), 4.0, 1e-8));
  check("expected sojourn fBm H=1 delta=10 -> 10",
        near(an::expected_sojourn(berman::VarianceModel::fbm(1.0), 10.0), 10.0, 1e-7));

  const berman::GridSpec grid(8.0, 0.03125, 0.0);
  const auto model = berman::VarianceModel::fbm(1.0);
  const auto batch = berman::sample_fbm_paths(model, grid, 2000, common.seed);
  const auto draws = berman::draw_exponentials(2000, common.seed);
  const auto pick = berman::estimate_pickands(batch, draws, 0.0);
  const double target = 1.0 / std::sqrt(M_PI);
  check("H=1 direct estimator hits 1/sqrt(pi) within 5 half-widths",
        near(pick.direct.value, target, 5.0 * pick.direct.halfWidth95 + 5e-3));
  check("H=1 spectral estimator hits 1/sqrt(pi) within 5 half-widths",
        near(pick.spectral.value, target, 5.0 * pick.spectral.halfWidth95 + 5e-3));

  const auto batch2 = berman::sample_fbm_paths(model, grid, 2000, common.seed);
  check("sampling is reproducible", batch.values == batch2.values);

  std::cout << (bad ? "selftest: FAILED\n" : "selftest: all good\n");
  return bad ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo and exact evaluation of sojourn-based extreme-value constants "
               "for log-Gaussian spectral processes"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file with [subcommand] sections");

  CommonOpts common;
  ModelOpts modelOpts;
  double T = 16.0, step = 0.0078125, delta = 0.0, lambda = 0.5;
  std::vector<double> xGrid, tGrid, deltas, closedX;
  std::int64_t n = 4000;
  int table = 0;
  std::string estimator = "both", dumpPaths, kind;
  bool mc = false;

  auto addCommon = [&](CLI::App* cmd) {
    cmd->add_option("--out", common.outDir, "output directory");
    cmd->add_option("--seed", common.seed, "master seed");
    cmd->add_option("--threads", common.threads, "worker threads (0: hardware default)");
    cmd->add_option("--budget-seconds", common.budgetSeconds,
                    "compute budget; exceeding runs are refused with exit 3");
  };
  auto addModel = [&](CLI::App* cmd) {
    cmd->add_option("--model", modelOpts.model, "fbm | iou | table");
    cmd->add_option("--hurst", modelOpts.hurst, "Hurst parameter, fbm only");
    cmd->add_option("--table-file", modelOpts.tableFile, "t,sigma2 nodes for the table model");
    cmd->add_option("--alpha0", modelOpts.alpha0, "local growth exponent (table model)");
    cmd->add_option("--alphainf", modelOpts.alphaInf, "global growth exponent (table model)");
  };

  auto* est = app.add_subcommand("estimate", "Monte Carlo estimates over an x grid");
  addCommon(est);
  addModel(est);
  est->add_option("--T", T, "window half-width");
  est->add_option("--step", step, "fine grid step e");
  est->add_option("--delta", delta, "observation mesh (0: continuous limit)");
  est->add_option("--x", xGrid, "evaluation points")->delimiter(',');
  est->add_option("--n", n, "trajectory count");
  est->add_option("--estimator", estimator, "direct | spectral | both");
  est->add_option("--dump-paths", dumpPaths, "binary trajectory dump for replay");

  auto* exa = app.add_subcommand("exact", "exact formulas: expected sojourns, closed forms");
  addCommon(exa);
  addModel(exa);
  exa->add_option("--table", table, "regenerate a published exact table (1 or 5)");
  exa->add_option("--deltas", deltas, "mesh values for expected sojourn")->delimiter(',');
  exa->add_option("--closed-x", closedX, "x values for the H=1 closed curve")->delimiter(',');

  auto* stu = app.add_subcommand("study", "orchestrated studies: rate | delta | table | band");
  addCommon(stu);
  addModel(stu);
  stu->add_option("--kind", kind, "rate | delta | table | band")->required();
  stu->add_option("--lambda", lambda, "rate exponent");
  stu->add_option("--x", xGrid, "x grid")->delimiter(',');
  stu->add_option("--tgrid", tGrid, "window grid for the rate study")->delimiter(',');
  stu->add_option("--deltas", deltas, "mesh grid for the delta study")->delimiter(',');
  stu->add_option("--table", table, "published table number (table study)");
  stu->add_option("--n", n, "trajectory count");
  stu->add_option("--T", T, "window half-width")->default_val(15.0);
  stu->add_option("--step", step, "fine grid step")->default_val(0.025);
  stu->add_flag("--mc", mc, "Monte Carlo mode for the rate study");

  auto* self = app.add_subcommand("selftest", "quick internal consistency checks");
  addCommon(self);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (est->parsed()) {
      if (xGrid.empty()) xGrid = {0.0};
      return run_estimate(common, modelOpts, T, step, delta, xGrid, n, estimator, dumpPaths);
    }
    if (exa->parsed())
      return run_exact(common, table, modelOpts, deltas, closedX,
                       exa->count("--model") > 0 || exa->count("--hurst") > 0);
    if (stu->parsed())
      return run_study(common, kind, modelOpts, lambda, xGrid, tGrid, deltas, table, n, T, step,
                       mc);
    if (self->parsed()) return run_selftest(common);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
