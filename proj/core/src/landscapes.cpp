#include "slicekit/landscapes.hpp"

#include <algorithm>
#include <cmath>

#include "slicekit/errors.hpp"

namespace slicekit {

namespace {

Eigen::Vector3d unit3(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw InvalidArgument(std::string(what) + " must be a 3-vector");
  Eigen::Vector3d v(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
  if (std::abs(v.norm() - 1.0) > kUnitNormTolerance) throw InvalidArgument(std::string(what) + " must be unit norm");
  return v;
}

nlohmann::json vec_json(const Eigen::Vector3d& v) { return nlohmann::json::array({v[0], v[1], v[2]}); }

}  // namespace

std::string_view to_string(LandscapeKind kind) {
  switch (kind) {
    case LandscapeKind::kPeaks: return "peaks";
    case LandscapeKind::kRidge: return "ridge";
    case LandscapeKind::kQuadratic: return "quadratic";
  }
  return "?";
}

LandscapeKind parse_landscape_kind(std::string_view name) {
  if (name == "peaks") return LandscapeKind::kPeaks;
  if (name == "ridge") return LandscapeKind::kRidge;
  if (name == "quadratic") return LandscapeKind::kQuadratic;
  throw InvalidArgument("unknown landscape '" + std::string(name) + "'");
}

double Landscape::evaluate(const Direction& theta) const {
  if (theta.dim() != 3) throw InvalidArgument("landscapes are defined on S^2 (d = 3)");
  const Eigen::Vector3d t(theta[0], theta[1], theta[2]);
  switch (kind) {
    case LandscapeKind::kPeaks: {
      double value = 0.0;
      for (const auto& bump : bumps) value += bump.weight * std::exp(bump.kappa * (t.dot(bump.center) - 1.0));
      return value;
    }
    case LandscapeKind::kRidge:
      return scale * std::exp(sharpness * (t.dot(axis) - 1.0));
    case LandscapeKind::kQuadratic: {
      const double c = t.dot(axis);
      return scale * c * c;
    }
  }
  return 0.0;
}

double Landscape::nominal_maximum() const {
  if (kind != LandscapeKind::kPeaks) return scale;
  double best = 0.0;
  for (const auto& bump : bumps) {
    best = std::max(best, evaluate(Direction(Eigen::VectorXd(bump.center))));
  }
  return best;
}

nlohmann::json landscapes_to_json(const std::vector<Landscape>& landscapes) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& l : landscapes) {
    nlohmann::json j{{"kind", std::string(to_string(l.kind))}};
    if (l.kind == LandscapeKind::kPeaks) {
      j["bumps"] = nlohmann::json::array();
      for (const auto& b : l.bumps) {
        j["bumps"].push_back({{"center", vec_json(b.center)}, {"weight", b.weight}, {"kappa", b.kappa}});
      }
    } else {
      j["axis"] = vec_json(l.axis);
      j["scale"] = l.scale;
      if (l.kind == LandscapeKind::kRidge) j["sharpness"] = l.sharpness;
    }
    list.push_back(std::move(j));
  }
  return {{"version", std::string(kLandscapeConfigVersion)}, {"landscapes", std::move(list)}};
}

std::vector<Landscape> landscapes_from_json(const nlohmann::json& j) {
  if (j.value("version", std::string{}) != kLandscapeConfigVersion) {
    throw InvalidArgument("landscape config must carry version '" + std::string(kLandscapeConfigVersion) + "'");
  }
  std::vector<Landscape> out;
  for (const auto& item : j.at("landscapes")) {
    Landscape l;
    l.kind = parse_landscape_kind(item.at("kind").get<std::string>());
    if (l.kind == LandscapeKind::kPeaks) {
      for (const auto& b : item.at("bumps")) {
        l.bumps.push_back(VmfBump{unit3(b.at("center"), "bump centre"), b.at("weight").get<double>(),
                                  b.at("kappa").get<double>()});
      }
      if (l.bumps.empty()) throw InvalidArgument("peaks landscape needs at least one bump");
    } else {
      l.axis = unit3(item.at("axis"), "landscape axis");
      l.scale = item.at("scale").get<double>();
      if (l.kind == LandscapeKind::kRidge) l.sharpness = item.at("sharpness").get<double>();
    }
    out.push_back(std::move(l));
  }
  return out;
}

std::vector<Landscape> default_landscapes() {
  // Keep in sync with config/landscapes.v1.json (a unit test compares them).
  static const nlohmann::json frozen = R"({
    "version": "slicekit-landscapes-v1",
    "landscapes": [
      {"kind": "peaks", "bumps": [
        {"center": [0.2672612419124244, 0.5345224838248488, 0.8017837257372732], "weight": 2.0, "kappa": 25.0},
        {"center": [-0.7071067811865475, 0.7071067811865475, 0.0], "weight": 1.2, "kappa": 12.0},
        {"center": [0.5773502691896258, -0.5773502691896258, -0.5773502691896258], "weight": 1.0, "kappa": 10.0},
        {"center": [0.0, -0.6, 0.8], "weight": 0.8, "kappa": 15.0}]},
      {"kind": "ridge", "axis": [0.5773502691896258, 0.5773502691896258, 0.5773502691896258],
       "scale": 3.0, "sharpness": 3.0},
      {"kind": "quadratic", "axis": [0.4082482904638631, -0.8164965809277261, 0.4082482904638631], "scale": 3.0}
    ]})"_json;
  return landscapes_from_json(frozen);
}

const Landscape& find_landscape(const std::vector<Landscape>& all, LandscapeKind kind) {
  for (const auto& l : all) {
    if (l.kind == kind) return l;
  }
  throw InvalidArgument("landscape '" + std::string(to_string(kind)) + "' is not configured");
}

BudgetResult budgeted_search(const Method& method, const Landscape& landscape, std::size_t L,
                             const SelectorConfig& cfg, Rng& rng) {
  if (L == 0) throw InvalidArgument("budgeted_search: L must be >= 1");
  SliceOracle oracle([&landscape](const Direction& theta) { return landscape.evaluate(theta); });
  SelectorConfig bo = cfg;
  bo.L = L;
  bo.dim = 3;

  std::vector<double> values;
  using F = Method::Family;
  switch (method.family) {
    case F::kMonteCarlo:
      values = oracle.evaluate(sample_uniform(rng, 3, L));
      break;
    case F::kQsw:
      values = oracle.evaluate(make_qsw(method.qsw, L, method.randomize, rng));
      break;
    case F::kBosw:
    case F::kRbosw:
      bo.init_size = std::min(cfg.init_size, (L + 1) / 2);
      bo.batch = std::min(cfg.batch, L);
      values = bosw_run(oracle, bo, rng).values;
      break;
    case F::kAbosw:
    case F::kArbosw: {
      // Refinement takes at most half the budget; small L shrinks the batch first.
      bo.batch = std::min(cfg.batch, std::max<std::size_t>(1, (L / 2) / std::max<std::size_t>(cfg.rounds, 1)));
      if (bo.batch * bo.rounds >= L) bo.rounds = 0;
      bo.L = L - bo.batch * bo.rounds;
      bo.init_size = std::min(bo.init_size, bo.L);
      bo.batch = std::min(bo.batch, bo.L);
      const RandomizeMode mode = method.family == F::kAbosw ? RandomizeMode::kNone : cfg.arbosw_seed_randomize;
      const DirectionSet seed = make_qsw(cfg.seed_kind, bo.L, mode, rng);
      // abosw_run reports only the retained set; record every evaluation instead.
      SliceOracle recording([&](const Direction& theta) {
        const double v = oracle(theta);
        values.push_back(v);
        return v;
      });
      abosw_run(recording, seed, bo, rng);
      break;
    }
  }
  if (oracle.evaluations() != L) throw std::logic_error("budgeted_search did not spend exactly its budget");
  return BudgetResult{*std::max_element(values.begin(), values.end()), oracle.evaluations(), std::move(values)};
}

}  // namespace slicekit
