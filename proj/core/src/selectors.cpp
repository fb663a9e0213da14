#include "slicekit/selectors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "slicekit/errors.hpp"

namespace slicekit {

void SelectorConfig::validate() const {
  if (L == 0) throw InvalidArgument("selector: L must be >= 1");
  if (batch < 1 || batch > L) throw InvalidArgument("selector: batch must satisfy 1 <= b <= L");
  if (init_size < 1 || init_size > L) throw InvalidArgument("selector: init_size must satisfy 1 <= init_size <= L");
  if (pool_size < batch) throw InvalidArgument("selector: pool size must be >= batch");
  if (!(cos_cutoff > 0.0 && cos_cutoff < 1.0)) throw InvalidArgument("selector: cos_cutoff must be in (0, 1)");
  if (rbosw_refresh < 1 || arbosw_refresh < 1) throw InvalidArgument("selector: refresh period must be >= 1");
  if (acquisition.type == AcquisitionKind::Type::kUcb && acquisition.beta < 0.0) {
    throw InvalidArgument("selector: UCB beta must be >= 0");
  }
  if (gamma && !(*gamma > 0.0 && *gamma < 1.0)) throw InvalidArgument("selector: gamma must be in (0, 1)");
  if (dim < 2) throw InvalidArgument("selector: dimension must be >= 2");
  if (!(gp_max_jitter >= GpOptions{}.initial_jitter)) throw InvalidArgument("selector: gp_max_jitter below the first rung");
}

namespace {

GpOptions gp_options(const SelectorConfig& cfg) {
  GpOptions options;
  options.max_jitter = cfg.gp_max_jitter;
  return options;
}

// Uniform directions make up any shortfall left by dedup, so budgets stay exact.
void top_up(DirectionSet& proposals, std::size_t want, const SelectorConfig& cfg, Rng& rng) {
  while (proposals.size() < want) proposals.push_back(sample_uniform_direction(rng, cfg.dim));
}

}  // namespace

SliceOracle::SliceOracle(Fn fn) : fn_(std::move(fn)) {
  if (!fn_) throw InvalidArgument("SliceOracle needs a callable");
}

SliceOracle SliceOracle::for_clouds(PointCloud mu, PointCloud nu, double p) {
  return SliceOracle([mu = std::move(mu), nu = std::move(nu), p](const Direction& theta) {
    return slice_cost(mu, nu, theta, p);
  });
}

double SliceOracle::operator()(const Direction& theta) {
  ++evaluations_;
  const double value = fn_(theta);
  if (!std::isfinite(value)) throw InvalidArgument("slice oracle returned a non-finite value");
  return value;
}

std::vector<double> SliceOracle::evaluate(const DirectionSet& dirs) {
  std::vector<double> out;
  out.reserve(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) out.push_back((*this)(dirs[i]));
  return out;
}

DirectionSet propose_batch(const GpState& state, const DirectionSet& current, const SelectorConfig& cfg, Rng& rng,
                           std::optional<std::size_t> count) {
  const std::size_t want = count.value_or(cfg.batch);
  const int d = state.train_dirs().dim();
  DirectionSet picked(d);
  if (want == 0) return picked;
  if (current.dim() != d) throw InvalidArgument("propose_batch: dimension mismatch");

  const DirectionSet pool = sample_uniform(rng, d, cfg.pool_size);
  const Eigen::VectorXd scores = acquisition_scores(state, pool, cfg.acquisition, state.best_value(), rng);

  const auto n = static_cast<Eigen::Index>(pool.size());
  std::vector<bool> admissible(pool.size(), true);
  if (!current.empty()) {
    const Eigen::VectorXd max_cos = (pool.matrix() * current.matrix().transpose()).cwiseAbs().rowwise().maxCoeff();
    for (Eigen::Index i = 0; i < n; ++i) admissible[static_cast<std::size_t>(i)] = max_cos[i] <= cfg.cos_cutoff;
  }
  auto exclude_near = [&](std::size_t chosen) {
    const Eigen::VectorXd cos = pool.matrix() * pool.row(chosen).transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(cos[i]) > cfg.cos_cutoff) admissible[static_cast<std::size_t>(i)] = false;
    }
  };

  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[static_cast<Eigen::Index>(a)] > scores[static_cast<Eigen::Index>(b)];
  });

  if (!cfg.gamma) {
    for (std::size_t idx : order) {
      if (picked.size() == want) break;
      if (!admissible[idx]) continue;
      picked.push_back(pool[idx]);
      exclude_near(idx);
    }
    return picked;
  }

  const double epsilon = std::pow(static_cast<double>(std::max<std::size_t>(state.size(), 1)), -*cfg.gamma);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  while (picked.size() < want) {
    std::vector<std::size_t> open;
    for (std::size_t idx : order) {
      if (admissible[idx]) open.push_back(idx);
    }
    if (open.empty()) break;
    std::size_t idx = open.front();
    if (coin(rng) >= epsilon) {
      std::uniform_int_distribution<std::size_t> pick(0, open.size() - 1);
      idx = open[pick(rng)];
    }
    picked.push_back(pool[idx]);
    exclude_near(idx);
  }
  return picked;
}

BoRun bosw_run(SliceOracle& oracle, const SelectorConfig& cfg, Rng& rng) {
  cfg.validate();
  BoRun run{sample_uniform(rng, cfg.dim, cfg.init_size), {}};
  run.values = oracle.evaluate(run.directions);

  while (run.directions.size() < cfg.L) {
    const GpState state = fit(run.directions, run.values, gp_options(cfg));
    const std::size_t need = std::min(cfg.batch, cfg.L - run.directions.size());
    DirectionSet proposals = propose_batch(state, run.directions, cfg, rng, need);
    top_up(proposals, need, cfg, rng);
    const std::vector<double> vals = oracle.evaluate(proposals);
    run.directions.append(proposals);
    run.values.insert(run.values.end(), vals.begin(), vals.end());
  }
  return run;
}

DirectionSet bosw(SliceOracle& oracle, const SelectorConfig& cfg, Rng& rng) {
  return bosw_run(oracle, cfg, rng).directions;
}

BoRun abosw_run(SliceOracle& oracle, const DirectionSet& seed, const SelectorConfig& cfg, Rng& rng) {
  cfg.validate();
  if (seed.size() != cfg.L) throw InvalidArgument("abosw: seed size must equal L");
  if (seed.dim() != cfg.dim) throw InvalidArgument("abosw: seed dimension does not match config");

  BoRun current{seed, oracle.evaluate(seed)};
  DirectionSet data_dirs = seed;
  std::vector<double> data_vals = current.values;

  for (std::size_t round = 0; round < cfg.rounds; ++round) {
    const GpState state = fit(data_dirs, data_vals, gp_options(cfg));
    DirectionSet proposals = propose_batch(state, current.directions, cfg, rng);
    top_up(proposals, cfg.batch, cfg, rng);
    const std::vector<double> vals = oracle.evaluate(proposals);
    data_dirs.append(proposals);
    data_vals.insert(data_vals.end(), vals.begin(), vals.end());

    std::vector<std::size_t> best(proposals.size());
    std::iota(best.begin(), best.end(), std::size_t{0});
    std::stable_sort(best.begin(), best.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    std::vector<std::size_t> worst(current.values.size());
    std::iota(worst.begin(), worst.end(), std::size_t{0});
    std::stable_sort(worst.begin(), worst.end(),
                     [&](std::size_t a, std::size_t b) { return current.values[a] < current.values[b]; });

    for (std::size_t k = 0; k < best.size() && k < worst.size(); ++k) {
      const std::size_t slot = worst[k];
      if (vals[best[k]] > current.values[slot]) {
        current.directions.replace(slot, proposals[best[k]]);
        current.values[slot] = vals[best[k]];
      }
    }
  }
  return current;
}

DirectionSet abosw(SliceOracle& oracle, const DirectionSet& seed, const SelectorConfig& cfg, Rng& rng) {
  return abosw_run(oracle, seed, cfg, rng).directions;
}

namespace {

struct NamedMethod {
  const char* name;
  Method method;
};

const std::vector<NamedMethod>& method_table() {
  using F = Method::Family;
  using K = QswKind;
  using R = RandomizeMode;
  static const std::vector<NamedMethod> table = {
      {"sw", {F::kMonteCarlo, K::kEqualAreaSobol, R::kNone}},
      {"gqsw", {F::kQsw, K::kGaussianSobol, R::kNone}},
      {"eqsw", {F::kQsw, K::kEqualAreaSobol, R::kNone}},
      {"sqsw", {F::kQsw, K::kSpiral, R::kNone}},
      {"dqsw", {F::kQsw, K::kDistanceOptimized, R::kNone}},
      {"cqsw", {F::kQsw, K::kCoulombOptimized, R::kNone}},
      {"rgqsw", {F::kQsw, K::kGaussianSobol, R::kScramble}},
      {"rrgqsw", {F::kQsw, K::kGaussianSobol, R::kRotate}},
      {"reqsw", {F::kQsw, K::kEqualAreaSobol, R::kScramble}},
      {"rreqsw", {F::kQsw, K::kEqualAreaSobol, R::kRotate}},
      {"rsqsw", {F::kQsw, K::kSpiral, R::kRotate}},
      {"rdqsw", {F::kQsw, K::kDistanceOptimized, R::kRotate}},
      {"rcqsw", {F::kQsw, K::kCoulombOptimized, R::kRotate}},
      {"bosw", {F::kBosw, K::kEqualAreaSobol, R::kNone}},
      {"rbosw", {F::kRbosw, K::kEqualAreaSobol, R::kNone}},
      {"abosw", {F::kAbosw, K::kEqualAreaSobol, R::kNone}},
      {"arbosw", {F::kArbosw, K::kEqualAreaSobol, R::kNone}},
  };
  return table;
}

bool same_method(const Method& a, const Method& b) {
  if (a.family != b.family) return false;
  if (a.family != Method::Family::kQsw) return true;
  return a.qsw == b.qsw && a.randomize == b.randomize;
}

}  // namespace

std::string Method::name() const {
  for (const auto& entry : method_table()) {
    if (same_method(entry.method, *this)) return entry.name;
  }
  return std::string(to_string(qsw)) + "/" + std::string(to_string(randomize));
}

Method parse_method(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "mc") lower = "sw";
  for (const auto& entry : method_table()) {
    if (lower == entry.name) return entry.method;
  }
  throw InvalidArgument("unknown method '" + std::string(name) + "' (see --list-methods)");
}

std::vector<std::string> method_names() {
  std::vector<std::string> names;
  for (const auto& entry : method_table()) names.emplace_back(entry.name);
  return names;
}

DirectionSetPtr select_for_step(const Method& method, std::size_t t, const DirectionSetPtr& prev,
                                SliceOracle& oracle, const SelectorConfig& cfg, Rng& rng) {
  auto reuse = [&]() -> DirectionSetPtr {
    if (!prev) throw InvalidState("select_for_step: step " + std::to_string(t) + " reuses a set that was never built");
    return prev;
  };
  using F = Method::Family;
  switch (method.family) {
    case F::kMonteCarlo:
      return std::make_shared<const DirectionSet>(sample_uniform(rng, cfg.dim, cfg.L));
    case F::kQsw:
      if (method.randomize == RandomizeMode::kNone && prev && t > 0) return prev;
      return std::make_shared<const DirectionSet>(make_qsw(method.qsw, cfg.L, method.randomize, rng, cfg.dim));
    case F::kBosw:
      if (t > 0) return reuse();
      return std::make_shared<const DirectionSet>(bosw(oracle, cfg, rng));
    case F::kRbosw:
      if (t % cfg.rbosw_refresh != 0) return reuse();
      return std::make_shared<const DirectionSet>(bosw(oracle, cfg, rng));
    case F::kAbosw: {
      if (t > 0) return reuse();
      const DirectionSet seed = make_qsw(cfg.seed_kind, cfg.L, RandomizeMode::kNone, rng, cfg.dim);
      return std::make_shared<const DirectionSet>(abosw(oracle, seed, cfg, rng));
    }
    case F::kArbosw: {
      if (t % cfg.arbosw_refresh != 0) return reuse();
      const DirectionSet seed = make_qsw(cfg.seed_kind, cfg.L, cfg.arbosw_seed_randomize, rng, cfg.dim);
      return std::make_shared<const DirectionSet>(abosw(oracle, seed, cfg, rng));
    }
  }
  throw InvalidArgument("unknown method family");
}

}  // namespace slicekit
