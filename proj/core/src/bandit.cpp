#include "banditlink/bandit.hpp"

#include <algorithm>
#include <cmath>

namespace banditlink {

BanditInstance::BanditInstance(std::vector<double> mu, RewardLaw law)
    : mu_(std::move(mu)), law_(law) {
  if (mu_.empty()) throw ConfigError("instance needs at least one arm");
  best_ = 0;
  for (int a = 1; a < k(); ++a)
    if (mu_[static_cast<std::size_t>(a)] > mu_[static_cast<std::size_t>(best_)]) best_ = a;
  for (int a = 0; a < k(); ++a) {
    if (a != best_ && mu_[static_cast<std::size_t>(a)] == mu_[static_cast<std::size_t>(best_)])
      throw ConfigError("tied best arms; the best arm must be unique");
    if (law_ == RewardLaw::bernoulli &&
        (mu_[static_cast<std::size_t>(a)] < 0.0 || mu_[static_cast<std::size_t>(a)] > 1.0))
      throw ConfigError("bernoulli means must lie in [0, 1]");
  }
}

RewardPools::RewardPools(const BanditInstance& instance, std::uint64_t seed)
    : mu_(instance.means()), law_(instance.law()), seed_(seed) {}

double RewardPools::draw(std::uint64_t pool_tag, int arm, std::int64_t index) const {
  if (arm < 0 || arm >= static_cast<int>(mu_.size())) throw ConfigError("pool arm out of range");
  if (index < 0) throw ConfigError("pool index must be >= 0");
  const double mean = mu_[static_cast<std::size_t>(arm)];
  if (law_ == RewardLaw::deterministic) return mean;
  std::uint64_t key = seed_combine(seed_, pool_tag);
  key = seed_combine(key, static_cast<std::uint64_t>(arm));
  key = seed_combine(key, static_cast<std::uint64_t>(index));
  if (law_ == RewardLaw::gaussian) return mean + gaussian_from_key(key);
  // bernoulli
  return unit_from_bits(mix64(key ^ 0x6a09e667f3bcc909ULL)) < mean ? 1.0 : 0.0;
}

double beta(std::int64_t t, int k, double delta) {
  if (t < 1) throw ConfigError("beta needs t >= 1");
  if (k < 1) throw ConfigError("beta needs k >= 1");
  if (!(delta > 0.0) || !(delta < 1.0)) throw ConfigError("beta needs delta in (0, 1)");
  const double td = static_cast<double>(t);
  return std::sqrt(2.0 * std::log(8.0 * k * td * td / delta) / td);
}

std::int64_t elimination_time(double gap, int k, double delta) {
  if (!(gap > 0.0)) throw ConfigError("elimination_time needs gap > 0");
  std::int64_t hi = 1;
  while (!(4.0 * beta(hi, k, delta) < gap)) {
    hi *= 2;
    if (hi > (std::int64_t{1} << 62)) throw RunawayRun("elimination time overflow");
  }
  if (hi == 1) return 1;
  std::int64_t lo = hi / 2;  // condition false at lo, true at hi
  while (lo + 1 < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (4.0 * beta(mid, k, delta) < gap) hi = mid; else lo = mid;
  }
  return hi;
}

PhasedSeEngine::PhasedSeEngine(int k, double delta, std::int64_t round_cap)
    : k_(k), delta_(delta), round_cap_(round_cap) {
  if (k_ < 1) throw ConfigError("engine needs k >= 1");
  if (!(delta_ > 0.0) || !(delta_ < 1.0)) throw ConfigError("engine needs delta in (0, 1)");
  active_.resize(static_cast<std::size_t>(k_));
  for (int a = 0; a < k_; ++a) active_[static_cast<std::size_t>(a)] = a;
  sum_.assign(static_cast<std::size_t>(k_), 0.0);
  count_.assign(static_cast<std::size_t>(k_), 0);
  if (k_ == 1) {
    finished_ = true;
    chosen_ = 0;
  }
}

int PhasedSeEngine::chosen() const {
  if (!finished_) throw ConfigError("engine still running");
  return chosen_;
}

int PhasedSeEngine::next_arm() const {
  if (finished_) throw ConfigError("engine finished; no further requests");
  return active_[cursor_];
}

double PhasedSeEngine::empirical_mean(int arm) const {
  const auto a = static_cast<std::size_t>(arm);
  if (count_[a] == 0) throw ConfigError("arm has no samples");
  return sum_[a] / static_cast<double>(count_[a]);
}

void PhasedSeEngine::feed(double reward) {
  const int arm = next_arm();  // throws when finished
  sum_[static_cast<std::size_t>(arm)] += reward;
  ++count_[static_cast<std::size_t>(arm)];
  if (++counted_ > round_cap_)
    throw RunawayRun("counted pulls exceeded the round cap of " + std::to_string(round_cap_));
  if (++done_in_arm_ == m_) {
    done_in_arm_ = 0;
    if (++cursor_ == active_.size()) end_phase();
  }
}

void PhasedSeEngine::end_phase() {
  // Survivors hold exactly t_r = 2^r - 1 samples at the end of phase r.
  const std::int64_t t_r = (std::int64_t{1} << r_) - 1;
  const double rad = beta(t_r, k_, delta_);
  int best = -1;
  double best_lcb = 0.0;
  for (int a : active_) {
    const double lcb = sum_[static_cast<std::size_t>(a)] / static_cast<double>(t_r) - rad;
    if (best < 0 || lcb > best_lcb) {  // strict: ties keep the lowest index
      best = a;
      best_lcb = lcb;
    }
  }
  std::vector<int> next;
  next.reserve(active_.size());
  for (int a : active_) {
    const double ucb = sum_[static_cast<std::size_t>(a)] / static_cast<double>(t_r) + rad;
    if (ucb >= best_lcb) next.push_back(a);
  }
  active_ = std::move(next);
  cursor_ = 0;
  done_in_arm_ = 0;
  if (active_.size() == 1) {
    finished_ = true;
    chosen_ = active_[0];
  } else {
    ++r_;
    m_ = std::int64_t{1} << (r_ - 1);
  }
}

CleanRunResult clean_phased_se(const BanditInstance& instance, double delta,
                               const RewardPools& pools, std::int64_t round_cap) {
  PhasedSeEngine engine(instance.k(), delta, round_cap);
  CleanRunResult out;
  std::vector<std::int64_t> next_index(static_cast<std::size_t>(instance.k()), 0);
  while (!engine.finished()) {
    const int arm = engine.next_arm();
    const double reward = pools.counted(arm, next_index[static_cast<std::size_t>(arm)]++);
    out.requests.push_back(arm);
    out.rewards.push_back(reward);
    engine.feed(reward);
  }
  out.chosen = engine.chosen();
  out.tau = engine.counted_total();
  out.phases = instance.k() == 1 ? 0 : engine.phase();
  out.pull_count.resize(static_cast<std::size_t>(instance.k()));
  for (int a = 0; a < instance.k(); ++a) out.pull_count[static_cast<std::size_t>(a)] = engine.pull_count(a);
  return out;
}

}  // namespace banditlink
