#pragma once

#include <cstdint>
#include <vector>

#include "banditlink/errors.hpp"
#include "banditlink/rng.hpp"

namespace banditlink {

enum class RewardLaw { gaussian, bernoulli, deterministic };

// K-armed instance with a unique best arm (exact ties for the top mean are
// rejected). gaussian observations have unit variance; bernoulli means must
// lie in [0, 1]; deterministic pays the mean exactly (diagnostics law).
class BanditInstance {
 public:
  explicit BanditInstance(std::vector<double> mu, RewardLaw law = RewardLaw::gaussian);

  int k() const noexcept { return static_cast<int>(mu_.size()); }
  double mu(int arm) const { return mu_[static_cast<std::size_t>(arm)]; }
  const std::vector<double>& means() const noexcept { return mu_; }
  RewardLaw law() const noexcept { return law_; }
  int best_arm() const noexcept { return best_; }
  double gap(int arm) const { return mu_[static_cast<std::size_t>(best_)] - mu_[static_cast<std::size_t>(arm)]; }

 private:
  std::vector<double> mu_;
  RewardLaw law_;
  int best_;
};

// Two position-addressable reward streams per arm: a counted pool (draws the
// learner's statistics consume) and an uncounted pool (draws burned during
// installs and waits). The j-th counted draw of arm a is a pure function of
// (seed, a, j) — never of when or by whom it is consumed — so runs sharing a
// seed see identical counted rewards, which is what the round-count
// identities are checked against.
class RewardPools {
 public:
  RewardPools(const BanditInstance& instance, std::uint64_t seed);

  double counted(int arm, std::int64_t index) const { return draw(0, arm, index); }
  double uncounted(int arm, std::int64_t index) const { return draw(1, arm, index); }

 private:
  double draw(std::uint64_t pool_tag, int arm, std::int64_t index) const;

  std::vector<double> mu_;
  RewardLaw law_;
  std::uint64_t seed_;
};

// Anytime confidence radius sqrt(2 ln(8 k t^2 / delta) / t) (natural log).
double beta(std::int64_t t, int k, double delta);

// Smallest t with 4 beta(t) < gap (strict), by doubling plus bisection.
// beta is strictly decreasing in t for the admissible (k, delta) range.
std::int64_t elimination_time(double gap, int k, double delta);

// Stepwise phased successive elimination: phases r = 1, 2, ... with per-arm
// budget m_r = 2^(r-1), so arms alive at the end of phase r hold exactly
// t_r = 2^r - 1 counted samples. Within a phase, surviving arms are pulled
// in ascending index, each m_r times consecutively. At a phase end the best
// lower confidence bound b_r (lowest index on ties) evicts every arm whose
// upper bound falls below it; the run finishes when one arm survives.
//
// The engine is the single SE implementation: the clean runner feeds it
// counted pool draws directly, channel wrappers feed it decoded-execution
// rewards. It never sees channel outputs.
class PhasedSeEngine {
 public:
  PhasedSeEngine(int k, double delta, std::int64_t round_cap = kDefaultRoundCap);

  static constexpr std::int64_t kDefaultRoundCap = std::int64_t{1} << 30;

  bool finished() const noexcept { return finished_; }
  int chosen() const;

  int phase() const noexcept { return r_; }                     // 1-based
  std::int64_t phase_budget() const noexcept { return m_; }     // m_r
  const std::vector<int>& active_set() const noexcept { return active_; }
  bool at_phase_start() const noexcept { return cursor_ == 0 && done_in_arm_ == 0; }

  int next_arm() const;            // the arm the next counted reward must come from
  void feed(double reward);        // deliver it; advances phase bookkeeping
  std::int64_t counted_total() const noexcept { return counted_; }
  std::int64_t pull_count(int arm) const { return count_[static_cast<std::size_t>(arm)]; }
  double empirical_mean(int arm) const;

 private:
  void end_phase();

  int k_;
  double delta_;
  std::int64_t round_cap_;
  std::vector<int> active_;
  std::vector<double> sum_;
  std::vector<std::int64_t> count_;
  int r_ = 1;
  std::int64_t m_ = 1;
  std::size_t cursor_ = 0;        // index into active_ of the arm being pulled
  std::int64_t done_in_arm_ = 0;  // pulls already fed for that arm this phase
  std::int64_t counted_ = 0;
  bool finished_ = false;
  int chosen_ = -1;
};

struct CleanRunResult {
  int chosen = -1;
  std::int64_t tau = 0;                    // counted pulls
  int phases = 0;
  std::vector<int> requests;               // arm per counted pull, in order
  std::vector<double> rewards;             // aligned with requests
  std::vector<std::int64_t> pull_count;    // per arm at stop
};

// Reference run on a noiseless actuation path: every requested arm is pulled
// directly, consuming counted pool draws in order.
CleanRunResult clean_phased_se(const BanditInstance& instance, double delta,
                               const RewardPools& pools,
                               std::int64_t round_cap = PhasedSeEngine::kDefaultRoundCap);

}  // namespace banditlink
