#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slicekit/gp.hpp"
#include "slicekit/ot1d.hpp"
#include "slicekit/qsw.hpp"
#include "slicekit/sphere.hpp"

namespace slicekit {

struct SelectorConfig {
  std::size_t L = 100;             // slice budget
  std::size_t batch = 5;           // proposals per BO round (b)
  std::size_t rounds = 2;          // ABOSW refinement rounds (r)
  std::size_t pool_size = 4096;    // uniform candidate pool (n_c)
  double cos_cutoff = 0.98;        // reject |cos| above this against the current set
  std::size_t init_size = 10;      // uniform warm start for BOSW
  std::size_t rbosw_refresh = 25;  // RBOSW refresh period R
  std::size_t arbosw_refresh = 100;// ARBOSW restart period R
  QswKind seed_kind = QswKind::kCoulombOptimized;
  RandomizeMode arbosw_seed_randomize = RandomizeMode::kRotate;
  AcquisitionKind acquisition = AcquisitionKind::ucb(0.7);
  std::optional<double> gamma;     // annealed acquisition exponent
  // Top of the GP jitter ladder. The geodesic Gaussian kernel is indefinite on
  // S^2 once the lengthscale nears pi/2, so BO fits need more than 1e-2.
  double gp_max_jitter = 1e2;
  int dim = 3;

  // Throws InvalidArgument when an invariant is violated.
  void validate() const;
};

// Black-box slice objective f(theta) with an exact evaluation counter.
class SliceOracle {
 public:
  using Fn = std::function<double(const Direction&)>;

  explicit SliceOracle(Fn fn);

  // f(theta; mu, nu) = W_p^p of the projections; the clouds are copied.
  static SliceOracle for_clouds(PointCloud mu, PointCloud nu, double p = 2.0);

  // Throws InvalidArgument if fn returns a non-finite value.
  double operator()(const Direction& theta);
  std::vector<double> evaluate(const DirectionSet& dirs);

  std::size_t evaluations() const { return evaluations_; }

 private:
  Fn fn_;
  std::size_t evaluations_ = 0;
};

// Up to `count` new directions (cfg.batch when omitted): top acquisition
// scores over a fresh uniform pool, skipping candidates whose |cos| with
// `current` or an already picked proposal exceeds cfg.cos_cutoff. With
// cfg.gamma set, each pick is the best admissible candidate with probability
// n_t^(-gamma) and a uniform admissible candidate otherwise.
DirectionSet propose_batch(const GpState& state, const DirectionSet& current, const SelectorConfig& cfg, Rng& rng,
                           std::optional<std::size_t> count = std::nullopt);

struct BoRun {
  DirectionSet directions;
  std::vector<double> values;  // oracle value of each direction, same order
};

// One-shot BO: init_size uniform directions, then GP/propose/evaluate rounds
// until exactly cfg.L directions have been evaluated. When dedup leaves fewer
// admissible candidates than requested, uniform directions fill the gap (here
// and in abosw) so budgets are met exactly.
BoRun bosw_run(SliceOracle& oracle, const SelectorConfig& cfg, Rng& rng);
DirectionSet bosw(SliceOracle& oracle, const SelectorConfig& cfg, Rng& rng);

// QSW-seeded refinement: evaluates the seed, then cfg.rounds rounds of
// propose/evaluate where the k-th best proposal replaces the k-th worst
// incumbent only if its value is strictly higher.
BoRun abosw_run(SliceOracle& oracle, const DirectionSet& seed, const SelectorConfig& cfg, Rng& rng);
DirectionSet abosw(SliceOracle& oracle, const DirectionSet& seed, const SelectorConfig& cfg, Rng& rng);

// Every direction-selection method the toolkit exposes.
struct Method {
  enum class Family { kMonteCarlo, kQsw, kBosw, kRbosw, kAbosw, kArbosw };
  Family family = Family::kMonteCarlo;
  QswKind qsw = QswKind::kEqualAreaSobol;
  RandomizeMode randomize = RandomizeMode::kNone;

  bool is_bo() const { return family != Family::kMonteCarlo && family != Family::kQsw; }
  std::string name() const;
};

// Accepts the short names listed by method_names(), case-insensitive.
Method parse_method(std::string_view name);
std::vector<std::string> method_names();

using DirectionSetPtr = std::shared_ptr<const DirectionSet>;

// Direction set for outer step t. `oracle` evaluates slices of the current
// cloud pair. Reuse paths return `prev` itself; they throw InvalidState when
// prev is null.
//   MC: fresh uniform set every step.    QSW: fixed base set.
//   RQSW: fresh randomization each step. BOSW/ABOSW: built at t = 0 only.
//   RBOSW: fresh bosw when t % rbosw_refresh == 0.
//   ARBOSW: abosw on a newly drawn QSW seed when t % arbosw_refresh == 0.
DirectionSetPtr select_for_step(const Method& method, std::size_t t, const DirectionSetPtr& prev,
                                SliceOracle& oracle, const SelectorConfig& cfg, Rng& rng);

}  // namespace slicekit
