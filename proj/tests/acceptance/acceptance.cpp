// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
//   slicekit_acceptance [--workdir DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "slicekit/errors.hpp"
#include "slicekit/experiment.hpp"
#include "slicekit/gp.hpp"
#include "slicekit/landscapes.hpp"
#include "slicekit/ot1d.hpp"
#include "slicekit/selectors.hpp"

namespace fs = std::filesystem;
using namespace slicekit;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;  // <= 0: no runtime bound
  std::function<Outcome()> run;
};

fs::path g_workdir = "acceptance_runs";
std::vector<fs::path> g_experiment_dirs;  // every run_experiment output, for the determinism check
double g_flow_seconds = 0.0;              // criterion 5 runtime, reused by criterion 6
std::map<std::string, std::map<double, double>> g_flow_means;  // method -> step -> mean W2 over seeds

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

ExperimentOutput run_logged(RunConfig cfg, const std::string& name) {
  cfg.output_dir = g_workdir / name;
  cfg.workers = workers_from_env(1);
  fs::remove_all(cfg.output_dir);
  ExperimentOutput out = run_experiment(cfg);
  g_experiment_dirs.push_back(cfg.output_dir);
  for (const auto& f : out.failures) std::fprintf(stderr, "  sub-run failure: %s\n", f.c_str());
  return out;
}

// experiment id -> method -> axis -> mean metric over seeds.
std::map<std::string, std::map<std::string, std::map<double, double>>> means(const std::vector<ResultRow>& rows) {
  std::map<std::string, std::map<std::string, std::map<double, std::pair<double, int>>>> acc;
  for (const auto& r : rows) {
    auto& cell = acc[r.experiment][r.method][r.axis];
    cell.first += r.metric;
    cell.second += 1;
  }
  std::map<std::string, std::map<std::string, std::map<double, double>>> out;
  for (const auto& [e, by_method] : acc)
    for (const auto& [m, by_axis] : by_method)
      for (const auto& [a, cell] : by_axis) out[e][m][a] = cell.first / cell.second;
  return out;
}

PointCloud gaussian_cloud(Rng& rng, int n, int d, double shift) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd m(n, d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < d; ++k) m(i, k) = normal(rng) + shift;
  return PointCloud(m);
}

double min_projection_gap(const PointCloud& z, const DirectionSet& slices) {
  double gap = INFINITY;
  for (std::size_t l = 0; l < slices.size(); ++l) {
    Eigen::VectorXd p = project(z, slices[l]);
    std::sort(p.begin(), p.end());
    for (Eigen::Index i = 1; i < p.size(); ++i) gap = std::min(gap, p[i] - p[i - 1]);
  }
  return gap;
}

// ---------------------------------------------------------------------------

Outcome ot_oracle() {
  Rng rng(1);
  std::uniform_int_distribution<int> size(1, 6), value(-50, 50);
  int mismatches = 0;
  for (int t = 0; t < 200; ++t) {
    const int n = size(rng);
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
      xs[i] = value(rng);
      ys[i] = value(rng);
    }
    const double p = t % 2 == 0 ? 1.0 : 2.0;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
      double c = 0.0;
      for (int i = 0; i < n; ++i) c += std::pow(std::abs(xs[i] - ys[perm[i]]), p);
      best = std::min(best, c / n);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (wasserstein_1d(xs, ys, p) != best) ++mismatches;
  }
  return {mismatches == 0, std::to_string(200 - mismatches) + "/200 exact matches"};
}

Outcome gradient_fd() {
  Rng rng(2);
  double worst = 0.0;
  for (int pair = 0; pair < 50; ++pair) {
    PointCloud z = gaussian_cloud(rng, 32, 3, 0.0);
    const PointCloud y = gaussian_cloud(rng, 32, 3, 1.0);
    DirectionSet slices = sample_uniform(rng, 3, 16);
    // Tie-free: no two projections of z closer than 1e-4 on any slice.
    while (min_projection_gap(z, slices) < 1e-4) {
      z = gaussian_cloud(rng, 32, 3, 0.0);
      slices = sample_uniform(rng, 3, 16);
    }
    const Eigen::MatrixXd g = sw_gradient(z, y, slices, GradientMode::kSw2Squared);
    Eigen::MatrixXd fd(32, 3);
    const double h = 1e-6;
    for (int i = 0; i < 32; ++i) {
      for (int k = 0; k < 3; ++k) {
        Eigen::MatrixXd plus = z.points(), minus = z.points();
        plus(i, k) += h;
        minus(i, k) -= h;
        fd(i, k) = (sw_estimate(PointCloud(plus), y, slices, 2.0).value -
                    sw_estimate(PointCloud(minus), y, slices, 2.0).value) / (2 * h);
      }
    }
    worst = std::max(worst, (g - fd).norm() / fd.norm());
  }
  return {worst <= 1e-4, "max relative error " + fmt("%.2e", worst) + " (bound 1e-4)"};
}

Outcome mc_rate() {
  RunConfig cfg = RunConfig::defaults(ExperimentKind::kApproxError);
  cfg.methods = {"sw"};
  cfg.L_grid = {10, 100, 1000, 10000};
  cfg.seeds = {0, 1, 2, 3, 4};
  const ExperimentOutput out = run_logged(cfg, "mc_rate");
  if (!out.ok()) return {false, "experiment failed"};
  const auto m = means(out.rows)["approx-error"]["sw"];
  std::vector<double> xs, ys;
  for (const auto& [L, e] : m) {
    xs.push_back(L);
    ys.push_back(e);
  }
  const double slope = loglog_slope(xs, ys);
  return {slope >= -0.65 && slope <= -0.35, "log-log slope " + fmt("%.3f", slope) + " (range [-0.65, -0.35])"};
}

Outcome qsw_beats_mc() {
  RunConfig cfg = RunConfig::defaults(ExperimentKind::kApproxError);
  cfg.methods = {"sw", "eqsw", "sqsw", "cqsw"};
  cfg.L_grid = {100, 1000};
  cfg.seeds = {0, 1, 2, 3, 4};
  const ExperimentOutput out = run_logged(cfg, "qsw_vs_mc");
  if (!out.ok()) return {false, "experiment failed"};
  auto m = means(out.rows)["approx-error"];
  bool pass = true;
  std::string detail;
  for (double L : {100.0, 1000.0}) {
    detail += "L=" + fmt("%.0f", L) + ": mc " + fmt("%.2e", m["sw"][L]);
    for (const char* q : {"eqsw", "sqsw", "cqsw"}) {
      detail += std::string(" ") + q + " " + fmt("%.2e", m[q][L]);
      pass = pass && m[q][L] <= m["sw"][L];
    }
    detail += L == 100.0 ? "; " : "";
  }
  return {pass, detail};
}

RunConfig flow_config(std::vector<std::string> methods) {
  RunConfig cfg = RunConfig::defaults(ExperimentKind::kInterpolate);
  cfg.methods = std::move(methods);
  cfg.seeds = {0, 1, 2};
  cfg.flow.checkpoints = {100, 500};
  return cfg;
}

void collect_flow_means(const ExperimentOutput& out) {
  auto all = means(out.rows);
  for (const auto& [method, by_step] : all["interpolate"]) g_flow_means[method] = by_step;
}

Outcome flow_convergence() {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentOutput out = run_logged(flow_config({"sw", "cqsw", "arbosw"}), "flow_main");
  g_flow_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!out.ok()) return {false, "experiment failed"};
  collect_flow_means(out);
  bool pass = true;
  std::string detail;
  for (const char* m : {"sw", "cqsw", "arbosw"}) {
    const double w100 = g_flow_means[m][100], w500 = g_flow_means[m][500];
    pass = pass && w500 <= 1e-2 * w100;
    detail += std::string(m) + " " + fmt("%.3g", w100) + "->" + fmt("%.3g", w500) + " (x" + fmt("%.0f", w100 / w500) + ") ";
  }
  return {pass, detail + "need x100"};
}

Outcome hybrid_competitive() {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentOutput out = run_logged(flow_config({"rgqsw", "reqsw", "rsqsw", "rcqsw", "bosw"}), "flow_rqsw");
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  g_flow_seconds += seconds;
  if (!out.ok()) return {false, "experiment failed"};
  collect_flow_means(out);
  if (!g_flow_means.count("arbosw")) return {false, "criterion 5 run missing"};
  std::string best_name;
  double best = INFINITY;
  for (const char* m : {"rgqsw", "reqsw", "rsqsw", "rcqsw"}) {
    if (g_flow_means[m][500] < best) {
      best = g_flow_means[m][500];
      best_name = m;
    }
  }
  const double arbosw = g_flow_means["arbosw"][500], bosw = g_flow_means["bosw"][500];
  const bool pass = arbosw <= 2.0 * best && bosw > arbosw;
  return {pass, "step 500: arbosw " + fmt("%.3g", arbosw) + ", best rqsw " + best_name + " " + fmt("%.3g", best) +
                    " (ratio " + fmt("%.2f", arbosw / best) + ", bound 2), bosw " + fmt("%.3g", bosw)};
}

Outcome abosw_bound() {
  const auto [x, y] = make_synthetic_clouds({});
  const DirectionSet seed = qsw_base_set(QswKind::kCoulombOptimized, 100);
  SelectorConfig cfg;
  cfg.L = 100;
  cfg.batch = 5;
  cfg.rounds = 2;
  std::size_t worst = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    SliceOracle oracle = SliceOracle::for_clouds(x, y);
    Rng rng(s);
    worst = std::max(worst, positional_difference(abosw(oracle, seed, cfg, rng), seed));
  }
  return {worst <= 10, "max changed directions " + std::to_string(worst) + " (bound 10)"};
}

Outcome budget_accounting() {
  const auto [x, y] = make_synthetic_clouds({.n = 128});
  int builds = 0, bad = 0;
  for (std::size_t L : {10u, 37u, 100u}) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      SelectorConfig cfg;
      cfg.L = L;
      SliceOracle bo = SliceOracle::for_clouds(x, y);
      Rng r1(s);
      bosw(bo, cfg, r1);
      SliceOracle abo = SliceOracle::for_clouds(x, y);
      Rng r2(s);
      abosw(abo, qsw_base_set(QswKind::kCoulombOptimized, L), cfg, r2);
      bad += bo.evaluations() != L;
      bad += abo.evaluations() != L + cfg.batch * cfg.rounds;
      builds += 2;
    }
  }
  return {bad == 0, std::to_string(builds - bad) + "/" + std::to_string(builds) + " builds with exact counters"};
}

Outcome landscape_bo() {
  RunConfig cfg = RunConfig::defaults(ExperimentKind::kLandscapes);
  cfg.methods = {"bosw", "eqsw", "gqsw", "sqsw", "dqsw", "cqsw"};
  cfg.L_grid = {20};
  cfg.seeds = {0, 1, 2, 3, 4};
  const ExperimentOutput out = run_logged(cfg, "landscapes");
  if (!out.ok()) return {false, "experiment failed"};
  auto m = means(out.rows)["landscapes/quadratic"];
  const double bo = m["bosw"][20];
  bool pass = true;
  std::string detail = "bosw " + fmt("%.4f", bo);
  for (const char* q : {"eqsw", "gqsw", "sqsw", "dqsw", "cqsw"}) {
    pass = pass && bo >= m[q][20];
    detail += std::string(", ") + q + " " + fmt("%.4f", m[q][20]);
  }
  return {pass, detail};
}

Outcome kernel_suite() {
  const Direction e1 = Direction::basis(3, 0);
  bool pass = angular_rbf(e1, e1, 0.4) == 1.0;
  const double antipodal = angular_rbf(e1, -e1, std::acos(-1.0));
  pass = pass && std::abs(antipodal - std::exp(-0.5)) <= 1e-12;

  Rng rng(10);
  const DirectionSet train = sample_uniform(rng, 3, 20);
  std::vector<double> vals;
  for (std::size_t i = 0; i < train.size(); ++i) vals.push_back(std::sin(2 * train.row(i)(0)) + train.row(i)(1));
  const GpState gp = fit(train, vals, GpOptions{0.5, 1e-8, 1e-8});
  const PosteriorBatch post = posterior(gp, train);
  double interp = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) interp = std::max(interp, std::abs(post.mean[static_cast<Eigen::Index>(i)] - vals[i]));
  pass = pass && interp <= 1e-4;

  // Median-heuristic fits on uniform sets with near-duplicate partners,
  // using the jitter ladder the selectors use.
  const GpOptions ladder{std::nullopt, GpOptions{}.initial_jitter, SelectorConfig{}.gp_max_jitter};
  int psd = 0;
  double max_jitter = 0.0;
  for (int t = 0; t < 100; ++t) {
    DirectionSet dirs = sample_uniform(rng, 3, 20 + t % 20);
    const std::size_t base = dirs.size();
    for (std::size_t i = 0; i < base; i += 3) {
      const Eigen::Vector3d a = dirs.row(i).transpose();
      const Eigen::Vector3d perp = a.unitOrthogonal();
      dirs.push_back(Direction::normalized(0.98 * a + std::sqrt(1 - 0.98 * 0.98) * perp));
    }
    std::vector<double> v(dirs.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = dirs.row(i)(2);
    try {
      const GpState g = fit(dirs, v, ladder);
      Eigen::MatrixXd k = angular_rbf_matrix(dirs.matrix(), dirs.matrix(), g.lengthscale());
      k.diagonal().array() += g.jitter();
      const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k).eigenvalues().minCoeff();
      const double recon = (g.chol() * g.chol().transpose() - k).cwiseAbs().maxCoeff();
      if (min_eig > 0.0 && recon < 1e-9) ++psd;
      max_jitter = std::max(max_jitter, g.jitter());
    } catch (const IllConditioned&) {
    }
  }
  pass = pass && psd == 100;
  return {pass, "k(t,t)=1, antipodal err " + fmt("%.1e", std::abs(antipodal - std::exp(-0.5))) +
                    ", interpolation err " + fmt("%.1e", interp) + ", PSD " + std::to_string(psd) +
                    "/100 (largest jitter " + fmt("%.0e", max_jitter) + ")"};
}

Outcome determinism() {
  int identical = 0;
  std::string mismatched;
  for (const fs::path& dir : g_experiment_dirs) {
    RunConfig cfg = load_run_config(dir / "config.lock");
    cfg.output_dir = dir.string() + "_rerun";
    cfg.workers = workers_from_env(1);
    fs::remove_all(cfg.output_dir);
    run_experiment(cfg);
    const std::string a = slurp(dir / "results.csv"), b = slurp(cfg.output_dir / "results.csv");
    if (!a.empty() && a == b) ++identical;
    else mismatched += " " + dir.filename().string();
  }
  const int total = static_cast<int>(g_experiment_dirs.size());
  return {total > 0 && identical == total,
          std::to_string(identical) + "/" + std::to_string(total) + " reruns byte-identical" +
              (mismatched.empty() ? "" : "; differ:" + mismatched)};
}

Outcome style_smoke() {
  RunConfig cfg = RunConfig::defaults(ExperimentKind::kStyleTransfer);
  cfg.flow.L = 10;
  cfg.flow.steps = 200;
  cfg.flow.checkpoints = {200};
  const ExperimentOutput out = run_logged(cfg, "style_transfer");
  if (!out.ok()) return {false, "experiment failed"};
  bool pass = true;
  std::string detail = "histogram TV";
  for (const auto& r : out.rows) {
    if (r.experiment != "style-transfer/histogram-tv") continue;
    pass = pass && r.metric < 0.05;
    detail += " " + r.method + " " + fmt("%.4f", r.metric);
  }
  // Rounding contract on the returned image (PPM encoding would clamp anyway).
  const auto [src, tgt] = make_synthetic_images(cfg.synthetic_images);
  Rng rng(0);
  const StyleTransferResult direct = style_transfer(src, tgt, parse_method("sw"), cfg.selector, cfg.flow, rng);
  const Eigen::ArrayXXd px = direct.image.pixels.array();
  const bool bytes = (px == px.round()).all() && px.minCoeff() >= 0.0 && px.maxCoeff() <= 255.0;
  pass = pass && bytes;
  return {pass, detail + " (bound 0.05), outputs " + (bytes ? "in" : "NOT in") + " {0..255}"};
}

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--workdir" && i + 1 < argc) {
      g_workdir = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--workdir DIR]\n", argv[0]);
      return 2;
    }
  }
  fs::create_directories(g_workdir);

  const std::vector<Criterion> criteria = {
      {1, "1-D OT oracle equivalence", 5, ot_oracle},
      {2, "SW gradient vs finite differences", 30, gradient_fd},
      {3, "MC error rate", 120, mc_rate},
      {4, "QSW beats MC", 180, qsw_beats_mc},
      {5, "Flow convergence", 300, flow_convergence},
      {6, "Hybrid competitiveness", 600, hybrid_competitive},
      {7, "ABOSW perturbation bound", 60, abosw_bound},
      {8, "Evaluation-budget accounting", 60, budget_accounting},
      {9, "Landscape benchmark", 60, landscape_bo},
      {10, "Kernel/GP suite", 30, kernel_suite},
      {12, "Style transfer smoke", 120, style_smoke},
      {11, "Determinism", 0, determinism},
  };

  std::map<int, std::string> lines;
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.id == 5) seconds = g_flow_seconds;
    if (c.id == 6) seconds = g_flow_seconds;  // criteria 5 and 6 together
    const bool in_time = c.budget_seconds <= 0 || seconds < c.budget_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::string line = std::string(pass ? "PASS" : "FAIL") + "  " + std::to_string(c.id) + ". " + c.name + ": " +
                       o.detail + " [" + fmt("%.1f", seconds) + " s";
    line += c.budget_seconds > 0 ? ", budget " + fmt("%.0f", c.budget_seconds) + " s]" : "]";
    if (!in_time) line += " over time budget";
    lines[c.id] = line;
    std::fprintf(stderr, "%s\n", line.c_str());
  }
  std::printf("\n");
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
