#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "slicekit/selectors.hpp"

namespace slicekit {

enum class LandscapeKind { kPeaks, kRidge, kQuadratic };

std::string_view to_string(LandscapeKind kind);
LandscapeKind parse_landscape_kind(std::string_view name);

// weight * exp(kappa * (<theta, center> - 1)); equals `weight` at the centre.
struct VmfBump {
  Eigen::Vector3d center;
  double weight = 1.0;
  double kappa = 1.0;
};

// Synthetic fitness on S^2 (higher is better):
//   peaks:     sum of von Mises-Fisher bumps
//   ridge:     scale * exp(sharpness * (<theta, axis> - 1))
//   quadratic: scale * <theta, target>^2
struct Landscape {
  LandscapeKind kind = LandscapeKind::kQuadratic;
  std::vector<VmfBump> bumps;
  Eigen::Vector3d axis = Eigen::Vector3d::Zero();    // ridge / quadratic target
  double scale = 1.0;
  double sharpness = 1.0;

  double evaluate(const Direction& theta) const;
  // Largest attainable value (exact for ridge and quadratic; best bump value for peaks).
  double nominal_maximum() const;
};

inline constexpr std::string_view kLandscapeConfigVersion = "slicekit-landscapes-v1";

// The frozen constants shipped in config/landscapes.v1.json.
std::vector<Landscape> default_landscapes();
const Landscape& find_landscape(const std::vector<Landscape>& all, LandscapeKind kind);

nlohmann::json landscapes_to_json(const std::vector<Landscape>& landscapes);
// Validates unit-norm centres/axes and the version tag.
std::vector<Landscape> landscapes_from_json(const nlohmann::json& j);

struct BudgetResult {
  double best = 0.0;
  std::size_t evaluations = 0;
  std::vector<double> values;  // every evaluated fitness in evaluation order
};

// Best fitness found by `method` with exactly L evaluations. BO methods run
// through the counting oracle (BOSW/RBOSW: bosw with init_size capped at
// ceil(L/2); ABOSW/ARBOSW: a QSW seed of L - b*rounds directions refined by
// b*rounds proposals, with b = min(batch, max(1, floor(L/2) / rounds)) and
// no refinement when that still leaves no seed); MC/QSW evaluate L generated
// directions.
BudgetResult budgeted_search(const Method& method, const Landscape& landscape, std::size_t L,
                             const SelectorConfig& cfg, Rng& rng);

}  // namespace slicekit
