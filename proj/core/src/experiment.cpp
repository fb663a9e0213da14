#include "slicekit/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "slicekit/errors.hpp"
#include "slicekit/plot.hpp"

namespace slicekit {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string_view to_string(GradientMode mode) { return mode == GradientMode::kSw2 ? "sw2" : "sw2-squared"; }
std::string_view to_string(FlowMetric metric) { return metric == FlowMetric::kExactW2 ? "exact-w2" : "sw-highL"; }

template <typename Enum, std::size_t N>
Enum parse_enum(std::string_view name, const Enum (&values)[N], const char* what) {
  for (Enum v : values) {
    if (to_string(v) == name) return v;
  }
  throw InvalidArgument(std::string("unknown ") + what + " '" + std::string(name) + "'");
}

constexpr QswKind kQswKinds[] = {QswKind::kEqualAreaSobol, QswKind::kGaussianSobol, QswKind::kSpiral,
                                 QswKind::kDistanceOptimized, QswKind::kCoulombOptimized};
constexpr RandomizeMode kRandomizeModes[] = {RandomizeMode::kNone, RandomizeMode::kScramble, RandomizeMode::kRotate};
constexpr AcquisitionKind::Type kAcquisitionTypes[] = {AcquisitionKind::Type::kUcb, AcquisitionKind::Type::kEi,
                                                       AcquisitionKind::Type::kLogEi,
                                                       AcquisitionKind::Type::kThompson};
constexpr ExperimentKind kExperimentKinds[] = {ExperimentKind::kLandscapes, ExperimentKind::kApproxError,
                                               ExperimentKind::kInterpolate, ExperimentKind::kStyleTransfer};

constexpr GradientMode kGradientModes[] = {GradientMode::kSw2, GradientMode::kSw2Squared};
constexpr FlowMetric kFlowMetrics[] = {FlowMetric::kExactW2, FlowMetric::kSwHighL};

void reject_unknown(const json& j, std::initializer_list<std::string_view> keys, const char* where) {
  if (!j.is_object()) throw InvalidArgument(std::string(where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
      throw InvalidArgument(std::string("unknown key '") + item.key() + "' in " + where);
    }
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

json selector_to_json(const SelectorConfig& s) {
  return json{{"L", s.L},
              {"batch", s.batch},
              {"rounds", s.rounds},
              {"pool_size", s.pool_size},
              {"cos_cutoff", s.cos_cutoff},
              {"init_size", s.init_size},
              {"rbosw_refresh", s.rbosw_refresh},
              {"arbosw_refresh", s.arbosw_refresh},
              {"seed_kind", std::string(to_string(s.seed_kind))},
              {"arbosw_seed_randomize", std::string(to_string(s.arbosw_seed_randomize))},
              {"acquisition", {{"type", std::string(to_string(s.acquisition.type))}, {"beta", s.acquisition.beta}}},
              {"gamma", s.gamma ? json(*s.gamma) : json(nullptr)},
              {"gp_max_jitter", s.gp_max_jitter},
              {"dim", s.dim}};
}

void selector_from_json(const json& j, SelectorConfig& s) {
  reject_unknown(j,
                 {"L", "batch", "rounds", "pool_size", "cos_cutoff", "init_size", "rbosw_refresh", "arbosw_refresh",
                  "seed_kind", "arbosw_seed_randomize", "acquisition", "gamma", "gp_max_jitter", "dim"},
                 "selector");
  read(j, "L", s.L);
  read(j, "batch", s.batch);
  read(j, "rounds", s.rounds);
  read(j, "pool_size", s.pool_size);
  read(j, "cos_cutoff", s.cos_cutoff);
  read(j, "init_size", s.init_size);
  read(j, "rbosw_refresh", s.rbosw_refresh);
  read(j, "arbosw_refresh", s.arbosw_refresh);
  read(j, "gp_max_jitter", s.gp_max_jitter);
  read(j, "dim", s.dim);
  if (j.contains("seed_kind")) s.seed_kind = parse_enum(j["seed_kind"].get<std::string>(), kQswKinds, "QSW kind");
  if (j.contains("arbosw_seed_randomize")) {
    s.arbosw_seed_randomize =
        parse_enum(j["arbosw_seed_randomize"].get<std::string>(), kRandomizeModes, "randomize mode");
  }
  if (j.contains("acquisition")) {
    const json& a = j["acquisition"];
    reject_unknown(a, {"type", "beta"}, "selector.acquisition");
    if (a.contains("type")) s.acquisition.type = parse_enum(a["type"].get<std::string>(), kAcquisitionTypes, "acquisition");
    read(a, "beta", s.acquisition.beta);
  }
  if (j.contains("gamma")) {
    if (j["gamma"].is_null()) s.gamma.reset();
    else s.gamma = j["gamma"].get<double>();
  }
}

json flow_to_json(const FlowConfig& f) {
  return json{{"steps", f.steps},
              {"step_size", f.step_size},
              {"L", f.L},
              {"mode", std::string(to_string(f.mode))},
              {"checkpoints", f.checkpoints},
              {"metric", std::string(to_string(f.metric))},
              {"metric_slices", f.metric_slices},
              {"metric_seed", f.metric_seed},
              {"round_final_to_bytes", f.round_final_to_bytes}};
}

void flow_from_json(const json& j, FlowConfig& f) {
  reject_unknown(j,
                 {"steps", "step_size", "L", "mode", "checkpoints", "metric", "metric_slices", "metric_seed",
                  "round_final_to_bytes"},
                 "flow");
  read(j, "steps", f.steps);
  read(j, "step_size", f.step_size);
  read(j, "L", f.L);
  read(j, "checkpoints", f.checkpoints);
  read(j, "metric_slices", f.metric_slices);
  read(j, "metric_seed", f.metric_seed);
  read(j, "round_final_to_bytes", f.round_final_to_bytes);
  if (j.contains("mode")) f.mode = parse_enum(j["mode"].get<std::string>(), kGradientModes, "gradient mode");
  if (j.contains("metric")) f.metric = parse_enum(j["metric"].get<std::string>(), kFlowMetrics, "flow metric");
}

// Independent stream per (seed, salt): both words are split into 32-bit halves for seed_seq.
Rng stream(std::uint64_t seed, std::uint64_t salt) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
  return Rng(seq);
}

struct Inputs {
  std::optional<std::pair<PointCloud, PointCloud>> clouds;
  std::optional<std::pair<RgbImage, RgbImage>> images;
  double reference = 0.0;
};

Inputs load_inputs(const RunConfig& cfg, const fs::path& cache_dir) {
  Inputs in;
  const bool from_files = !cfg.source.empty();
  switch (cfg.experiment) {
    case ExperimentKind::kLandscapes:
      break;
    case ExperimentKind::kApproxError:
    case ExperimentKind::kInterpolate:
      if (from_files) in.clouds.emplace(load_point_cloud(cfg.source), load_point_cloud(cfg.target));
      else in.clouds.emplace(make_synthetic_clouds(cfg.synthetic_clouds));
      if (cfg.experiment == ExperimentKind::kApproxError) {
        in.reference = reference_sw2_squared(in.clouds->first, in.clouds->second, cfg.reference_slices,
                                             cfg.reference_seed, cache_dir);
      }
      break;
    case ExperimentKind::kStyleTransfer:
      if (from_files) in.images.emplace(load_image(cfg.source), load_image(cfg.target));
      else in.images.emplace(make_synthetic_images(cfg.synthetic_images));
      break;
  }
  return in;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<ResultRow> run_job(const RunConfig& cfg, const Inputs& in, const std::string& method_name,
                               std::uint64_t seed) {
  const Method method = parse_method(method_name);
  const std::string experiment(to_string(cfg.experiment));
  std::vector<ResultRow> rows;

  switch (cfg.experiment) {
    case ExperimentKind::kLandscapes:
      for (const auto& landscape : cfg.landscapes) {
        const std::string id = experiment + "/" + std::string(to_string(landscape.kind));
        for (std::size_t L : cfg.L_grid) {
          Rng rng = stream(seed, L);
          const auto start = std::chrono::steady_clock::now();
          const BudgetResult r = budgeted_search(method, landscape, L, cfg.selector, rng);
          rows.push_back({id, method_name, seed, static_cast<double>(L), r.best, seconds_since(start)});
        }
      }
      break;

    case ExperimentKind::kApproxError: {
      const auto& [x, y] = *in.clouds;
      for (std::size_t L : cfg.L_grid) {
        Rng rng = stream(seed, L);
        SelectorConfig scfg = cfg.selector;
        scfg.L = L;
        scfg.dim = x.dim();
        const auto start = std::chrono::steady_clock::now();
        SliceOracle oracle = SliceOracle::for_clouds(x, y, 2.0);
        const DirectionSetPtr set = select_for_step(method, 0, nullptr, oracle, scfg, rng);
        const double estimate = sw_estimate(x, y, *set, 2.0).value;
        rows.push_back({experiment, method_name, seed, static_cast<double>(L), std::abs(estimate - in.reference),
                        seconds_since(start)});
      }
      break;
    }

    case ExperimentKind::kInterpolate: {
      Rng rng = stream(seed, 0);
      const FlowTrace trace = euler_flow(in.clouds->first, in.clouds->second, method, cfg.selector, cfg.flow, rng);
      for (const auto& r : trace.records) {
        rows.push_back({experiment, method_name, seed, static_cast<double>(r.step), r.metric, r.seconds});
      }
      break;
    }

    case ExperimentKind::kStyleTransfer: {
      Rng rng = stream(seed, 0);
      const auto& [src, tgt] = *in.images;
      const StyleTransferResult result = style_transfer(src, tgt, method, cfg.selector, cfg.flow, rng);
      for (const auto& r : result.trace.records) {
        rows.push_back({experiment, method_name, seed, static_cast<double>(r.step), r.metric, r.seconds});
      }
      const double tv = histogram_tv_distance(result.image.pixels, tgt.pixels);
      const double total = result.trace.records.empty() ? 0.0 : result.trace.records.back().seconds;
      rows.push_back({experiment + "/histogram-tv", method_name, seed, static_cast<double>(cfg.flow.steps), tv, total});
      save_image(cfg.output_dir / "images" / (method_name + "_seed" + std::to_string(seed) + ".ppm"), result.image);
      break;
    }
  }
  return rows;
}

void write_plots(const RunConfig& cfg, const std::vector<ResultRow>& rows) {
  // experiment id -> method -> axis -> (sum, count); methods keep config order.
  std::map<std::string, std::map<std::string, std::map<double, std::pair<double, int>>>> groups;
  for (const auto& r : rows) {
    auto& cell = groups[r.experiment][r.method][r.axis];
    cell.first += r.metric;
    cell.second += 1;
  }
  for (const auto& [id, by_method] : groups) {
    PlotSpec spec;
    spec.title = id;
    spec.y_label = "mean metric over seeds";
    switch (cfg.experiment) {
      case ExperimentKind::kApproxError:
        spec.x_label = "L";
        spec.y_label = "mean absolute error of SW_2^2";
        spec.log_x = spec.log_y = true;
        break;
      case ExperimentKind::kLandscapes:
        spec.x_label = "evaluation budget L";
        spec.y_label = "mean best fitness";
        break;
      case ExperimentKind::kInterpolate:
      case ExperimentKind::kStyleTransfer:
        spec.x_label = "step";
        spec.log_y = true;
        break;
    }
    std::vector<PlotSeries> series;
    for (const auto& name : cfg.methods) {
      auto it = by_method.find(name);
      if (it == by_method.end()) continue;
      PlotSeries s{name, {}, {}};
      for (const auto& [axis, cell] : it->second) {
        s.x.push_back(axis);
        s.y.push_back(cell.first / cell.second);
      }
      series.push_back(std::move(s));
    }
    std::string file = id;
    std::replace(file.begin(), file.end(), '/', '_');
    std::ofstream out(cfg.output_dir / (file + ".svg"), std::ios::binary);
    out << render_line_plot(spec, series);
    if (!out) throw InvalidState("cannot write plot for " + id);
  }
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kLandscapes: return "landscapes";
    case ExperimentKind::kApproxError: return "approx-error";
    case ExperimentKind::kInterpolate: return "interpolate";
    case ExperimentKind::kStyleTransfer: return "style-transfer";
  }
  return "?";
}

ExperimentKind parse_experiment_kind(std::string_view name) { return parse_enum(name, kExperimentKinds, "experiment"); }

std::pair<PointCloud, PointCloud> make_synthetic_clouds(const SyntheticClouds& spec) {
  if (spec.n == 0 || spec.dim < 1) throw InvalidArgument("synthetic clouds: n and dim must be positive");
  if (!(spec.correlation >= 0.0 && spec.correlation <= 1.0)) throw InvalidArgument("synthetic clouds: correlation must be in [0, 1]");
  Rng rng(spec.seed);
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(spec.n);
  Eigen::MatrixXd x(n, spec.dim), y(n, spec.dim);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < spec.dim; ++k) x(i, k) = normal(rng);
  }
  Eigen::RowVectorXd shift = Eigen::RowVectorXd::Zero(spec.dim);
  shift[0] = spec.offset;
  if (spec.dim > 1) shift[1] = -spec.offset / 2.0;
  if (spec.dim > 2) shift[2] = spec.offset / 2.0;
  const double rho = spec.correlation;
  const double rest = std::sqrt(1.0 - rho * rho);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (int k = 0; k < spec.dim; ++k) y(i, k) = shift[k] + spec.spread * (rho * x(i, k) + rest * normal(rng));
  }
  return {PointCloud(std::move(x)), PointCloud(std::move(y))};
}

std::pair<RgbImage, RgbImage> make_synthetic_images(const SyntheticImages& spec) {
  if (spec.size < 1) throw InvalidArgument("synthetic images: size must be positive");
  Rng rng(spec.seed);
  std::uniform_int_distribution<int> jitter(-6, 6);
  std::bernoulli_distribution first_colour(0.4);
  const Eigen::Index n = static_cast<Eigen::Index>(spec.size) * spec.size;
  const auto side = static_cast<std::size_t>(spec.size);
  RgbImage src{side, side, Eigen::MatrixXd(n, 3)};
  RgbImage tgt{side, side, Eigen::MatrixXd(n, 3)};
  const double span = std::max(1, 2 * (spec.size - 1));
  for (int r = 0; r < spec.size; ++r) {
    for (int c = 0; c < spec.size; ++c) {
      const Eigen::Index i = static_cast<Eigen::Index>(r) * spec.size + c;
      const double g = std::clamp(std::round(30.0 + 190.0 * (r + c) / span) + jitter(rng), 0.0, 255.0);
      src.pixels.row(i).setConstant(g);
      if (first_colour(rng)) tgt.pixels.row(i) << 214.0, 68.0, 41.0;
      else tgt.pixels.row(i) << 36.0, 112.0, 190.0;
    }
  }
  return {std::move(src), std::move(tgt)};
}

RunConfig RunConfig::defaults(ExperimentKind kind) {
  RunConfig cfg;
  cfg.experiment = kind;
  switch (kind) {
    case ExperimentKind::kLandscapes:
      cfg.methods = {"sw", "gqsw", "eqsw", "sqsw", "dqsw", "cqsw", "bosw", "abosw"};
      cfg.L_grid = {5, 10, 15, 20};
      break;
    case ExperimentKind::kApproxError:
      cfg.methods = {"sw", "gqsw", "eqsw", "sqsw", "dqsw", "cqsw", "rgqsw", "reqsw", "rsqsw", "rcqsw"};
      cfg.L_grid = {10, 100, 1000};
      break;
    case ExperimentKind::kInterpolate:
      cfg.methods = {"sw", "cqsw", "rcqsw", "bosw", "arbosw"};
      cfg.seeds = {0, 1, 2};
      // Independent Gaussian clouds stall every finite slice set well above
      // zero; an affine copy has an exact transport map the flow can reach.
      cfg.synthetic_clouds.correlation = 1.0;
      break;
    case ExperimentKind::kStyleTransfer:
      cfg.methods = {"sw", "rcqsw", "arbosw"};
      cfg.seeds = {0};
      cfg.flow = FlowConfig::style_transfer();
      // At L = 10 the refinement may replace the whole seed with slices bunched
      // around one direction; frequent restarts let the flow leave that subspace.
      cfg.selector.arbosw_refresh = 10;
      break;
  }
  return cfg;
}

RunConfig RunConfig::from_json(const json& j) {
  reject_unknown(j,
                 {"version", "experiment", "methods", "seeds", "L_grid", "selector", "flow", "source", "target",
                  "synthetic_clouds", "synthetic_images", "reference", "landscapes", "output_dir", "cache_dir",
                  "workers"},
                 "run config");
  if (!j.contains("experiment")) throw InvalidArgument("run config: missing 'experiment'");
  RunConfig cfg = defaults(parse_experiment_kind(j["experiment"].get<std::string>()));
  read(j, "methods", cfg.methods);
  read(j, "seeds", cfg.seeds);
  read(j, "L_grid", cfg.L_grid);
  if (j.contains("selector")) selector_from_json(j["selector"], cfg.selector);
  if (j.contains("flow")) flow_from_json(j["flow"], cfg.flow);
  if (j.contains("source")) cfg.source = j["source"].get<std::string>();
  if (j.contains("target")) cfg.target = j["target"].get<std::string>();
  if (j.contains("synthetic_clouds")) {
    const json& s = j["synthetic_clouds"];
    reject_unknown(s, {"n", "dim", "offset", "spread", "correlation", "seed"}, "synthetic_clouds");
    read(s, "n", cfg.synthetic_clouds.n);
    read(s, "dim", cfg.synthetic_clouds.dim);
    read(s, "offset", cfg.synthetic_clouds.offset);
    read(s, "spread", cfg.synthetic_clouds.spread);
    read(s, "correlation", cfg.synthetic_clouds.correlation);
    read(s, "seed", cfg.synthetic_clouds.seed);
  }
  if (j.contains("synthetic_images")) {
    const json& s = j["synthetic_images"];
    reject_unknown(s, {"size", "seed"}, "synthetic_images");
    read(s, "size", cfg.synthetic_images.size);
    read(s, "seed", cfg.synthetic_images.seed);
  }
  if (j.contains("reference")) {
    const json& r = j["reference"];
    reject_unknown(r, {"slices", "seed"}, "reference");
    read(r, "slices", cfg.reference_slices);
    read(r, "seed", cfg.reference_seed);
  }
  if (j.contains("landscapes")) cfg.landscapes = landscapes_from_json(j["landscapes"]);
  if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("cache_dir")) cfg.cache_dir = j["cache_dir"].get<std::string>();
  read(j, "workers", cfg.workers);
  return cfg;
}

json RunConfig::to_json() const {
  return json{{"version", "slicekit-run-v1"},
              {"experiment", std::string(slicekit::to_string(experiment))},
              {"methods", methods},
              {"seeds", seeds},
              {"L_grid", L_grid},
              {"selector", selector_to_json(selector)},
              {"flow", flow_to_json(flow)},
              {"source", source.string()},
              {"target", target.string()},
              {"synthetic_clouds",
               {{"n", synthetic_clouds.n},
                {"dim", synthetic_clouds.dim},
                {"offset", synthetic_clouds.offset},
                {"spread", synthetic_clouds.spread},
                {"correlation", synthetic_clouds.correlation},
                {"seed", synthetic_clouds.seed}}},
              {"synthetic_images", {{"size", synthetic_images.size}, {"seed", synthetic_images.seed}}},
              {"reference", {{"slices", reference_slices}, {"seed", reference_seed}}},
              {"landscapes", landscapes_to_json(landscapes)},
              {"output_dir", output_dir.string()},
              {"cache_dir", cache_dir.string()}};
}

void RunConfig::validate() const {
  if (seeds.empty()) throw InvalidArgument("run config: seed list is empty");
  if (methods.empty()) throw InvalidArgument("run config: method list is empty");
  for (const auto& m : methods) parse_method(m);
  if (std::set<std::string>(methods.begin(), methods.end()).size() != methods.size()) {
    throw InvalidArgument("run config: duplicate method");
  }
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw InvalidArgument("run config: duplicate seed");
  }
  if (experiment == ExperimentKind::kLandscapes || experiment == ExperimentKind::kApproxError) {
    if (L_grid.empty()) throw InvalidArgument("run config: L_grid is empty");
    for (std::size_t L : L_grid) {
      if (L == 0) throw InvalidArgument("run config: L_grid entries must be >= 1");
    }
  }
  if (experiment == ExperimentKind::kInterpolate || experiment == ExperimentKind::kStyleTransfer) flow.validate();
  if (experiment == ExperimentKind::kApproxError && reference_slices == 0) {
    throw InvalidArgument("run config: reference slices must be >= 1");
  }
  if (workers == 0) throw InvalidArgument("run config: workers must be >= 1");
  if (source.empty() != target.empty()) throw InvalidArgument("run config: give both source and target, or neither");
  if (output_dir.empty()) throw InvalidArgument("run config: output_dir is empty");
  for (const auto& p : {source, target}) {
    if (!p.empty() && !fs::is_regular_file(p)) throw FormatError("input file '" + p.string() + "' does not exist");
  }
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FormatError("config '" + path.string() + "': " + e.what());
  }
  return RunConfig::from_json(j);
}

std::size_t workers_from_env(std::size_t fallback) {
  const char* raw = std::getenv("SLICEKIT_WORKERS");
  if (raw == nullptr) return fallback;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0' || v == 0) return fallback;
  return static_cast<std::size_t>(v);
}

double reference_sw2_squared(const PointCloud& x, const PointCloud& y, std::size_t slices, std::uint64_t seed,
                             const fs::path& cache_dir) {
  std::uint64_t key = content_hash(x.points());
  key = content_hash(y.points(), key);
  key = content_hash(std::to_string(slices) + ":" + std::to_string(seed), key);
  char name[64];
  std::snprintf(name, sizeof name, "sw-reference-%016llx.txt", static_cast<unsigned long long>(key));
  const fs::path file = cache_dir.empty() ? fs::path() : cache_dir / name;

  if (!file.empty()) {
    std::ifstream in(file);
    std::string text;
    if (in >> text) {
      double cached = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), cached);
      if (ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(cached)) return cached;
    }
  }

  // Chunked so peak memory stays bounded; the sum runs in slice order either way.
  Rng rng(seed);
  constexpr std::size_t kChunk = 4096;
  double total = 0.0;
  for (std::size_t done = 0; done < slices; done += kChunk) {
    const std::size_t m = std::min(kChunk, slices - done);
    for (double c : slice_costs(x, y, sample_uniform(rng, x.dim(), m), 2.0)) total += c;
  }
  const double value = total / static_cast<double>(slices);

  if (!file.empty()) {
    fs::create_directories(cache_dir);
    const fs::path tmp = file.string() + ".tmp";
    {
      std::ofstream out(tmp);
      out << format_number(value) << '\n';
    }
    fs::rename(tmp, file);
  }
  return value;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("loglog_slope: need at least two paired values");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw InvalidArgument("loglog_slope: x values are all equal");
  return sxy / sxx;
}

ExperimentOutput run_experiment(const RunConfig& cfg) {
  cfg.validate();
  fs::create_directories(cfg.output_dir);
  if (cfg.experiment == ExperimentKind::kStyleTransfer) fs::create_directories(cfg.output_dir / "images");
  {
    std::ofstream lock(cfg.output_dir / "config.lock", std::ios::binary);
    lock << cfg.to_json().dump(2) << '\n';
  }

  const fs::path cache_dir = cfg.cache_dir.empty() ? cfg.output_dir / "cache" : cfg.cache_dir;
  const Inputs inputs = load_inputs(cfg, cache_dir);

  struct Job {
    std::string method;
    std::uint64_t seed;
    std::vector<ResultRow> rows;
    std::string error;
  };
  std::vector<Job> jobs;
  for (const auto& m : cfg.methods) {
    for (std::uint64_t s : cfg.seeds) jobs.push_back({m, s, {}, {}});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        jobs[i].rows = run_job(cfg, inputs, jobs[i].method, jobs[i].seed);
      } catch (const std::exception& e) {
        jobs[i].error = e.what();
      }
    }
  };
  const std::size_t n_threads = std::min(cfg.workers, jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  ExperimentOutput out;
  for (auto& job : jobs) {
    if (!job.error.empty()) {
      out.failures.push_back(job.method + " seed " + std::to_string(job.seed) + ": " + job.error);
    }
    std::move(job.rows.begin(), job.rows.end(), std::back_inserter(out.rows));
  }
  write_results_csv(cfg.output_dir / "results.csv", out.rows);
  write_timings_csv(cfg.output_dir / "timings.csv", out.rows);
  write_plots(cfg, out.rows);
  return out;
}

}  // namespace slicekit
