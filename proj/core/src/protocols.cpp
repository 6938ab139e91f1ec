#include "banditlink/protocols.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "banditlink/errors.hpp"

namespace banditlink {

namespace {

// Stream tags: one run seed fans out into independent streams. Stable across
// versions; changing either invalidates every recorded trace.
constexpr std::uint64_t kRewardPoolTag = 0x72657761726473ULL;  // "rewards"
constexpr std::uint64_t kChannelTag = 0x6368616e6e656cULL;     // "channel"

void check_alphabet(int instance_k, int other_k, const char* what) {
  if (instance_k != other_k) {
    throw ConfigError(std::string(what) + " alphabet does not match the arm count");
  }
}

std::string row_detail(const char* msg, std::int64_t row) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s (row %lld)", msg, static_cast<long long>(row));
  return std::string(buf);
}

void fail(AuditReport& rep, const char* msg, std::int64_t row) {
  if (!rep.pass) return;  // keep the first offence
  rep.pass = false;
  rep.bad_row = row;
  rep.detail = row >= 0 ? row_detail(msg, row) : std::string(msg);
}

}  // namespace

const char* step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::execute: return "execute";
    case StepKind::install: return "install";
    case StepKind::wait: return "wait";
  }
  return "?";
}

void RunTrace::push(const TraceRow& row) {
  rows_.push_back(row);
  if (row.counted) ++counted_;
}

LearnerRow RunTrace::learner_view(std::int64_t index) const {
  if (index < 0 || index >= tau()) throw std::out_of_range("trace row index");
  const TraceRow& r = rows_[static_cast<std::size_t>(index)];
  return LearnerRow{r.t, r.phase, r.kind, r.transmitted, r.counted, r.reward};
}

std::string RunTrace::csv() const {
  std::string out = "t,phase,kind,transmitted,output,executed,counted,reward\n";
  char buf[192];
  for (const TraceRow& r : rows_) {
    std::snprintf(buf, sizeof(buf), "%lld,%d,%s,%d,%d,%d,%d,%.17g\n",
                  static_cast<long long>(r.t), r.phase, step_kind_name(r.kind), r.transmitted,
                  r.output, r.executed, r.counted ? 1 : 0, r.reward);
    out += buf;
  }
  return out;
}

RewardPools pools_for_seed(const BanditInstance& instance, std::uint64_t seed) {
  return RewardPools(instance, seed_combine(seed, kRewardPoolTag));
}

RandomStream channel_stream_for_seed(std::uint64_t seed) {
  return RandomStream(seed_combine(seed, kChannelTag));
}

CleanRunResult coupled_clean_run(const BanditInstance& instance, double delta, std::uint64_t seed,
                                 std::int64_t round_cap) {
  RewardPools pools = pools_for_seed(instance, seed);
  return clean_phased_se(instance, delta, pools, round_cap);
}

// ---------------------------------------------------------------------------
// Case 1

Case1Result run_case1(const BanditInstance& instance, const TransitionMatrix& channel,
                      double delta, std::uint64_t seed, const Case1Options& options) {
  const int k = instance.k();
  check_alphabet(k, channel.k(), "channel");
  (void)beta(1, k, delta);  // validates delta up front

  const double sigma = smallest_singular_value(channel);
  if (sigma <= options.sigma_threshold) {
    throw NonIdentifiable("channel is singular at the working threshold: command means do not pin down arm means");
  }
  const std::vector<double> winv = invert(channel, options.sigma_threshold);
  const double inflation = std::sqrt(static_cast<double>(k)) / sigma;

  RewardPools pools = pools_for_seed(instance, seed);
  RandomStream chan = channel_stream_for_seed(seed);

  Case1Result out;
  std::vector<char> candidate(static_cast<std::size_t>(k), 1);
  int alive = k;
  std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
  std::vector<double> nu_hat(static_cast<std::size_t>(k), 0.0);
  std::vector<std::int64_t> counted_idx(static_cast<std::size_t>(k), 0);
  std::int64_t t = 0;
  int r = 0;

  while (alive > 1) {
    ++r;
    const std::int64_t m = std::int64_t{1} << (r - 1);
    for (std::int64_t pass = 0; pass < m; ++pass) {
      for (int x = 0; x < k; ++x) {
        if (t >= options.round_cap) throw RunawayRun("case-1 run exceeded the round cap");
        const int y = sample_output(channel, x, chan);
        const double reward = pools.counted(y, counted_idx[static_cast<std::size_t>(y)]++);
        sum[static_cast<std::size_t>(x)] += reward;
        ++t;
        if (options.record_trace) out.trace.push({t, r, StepKind::execute, x, y, y, true, reward});
      }
    }
    const std::int64_t t_r = (std::int64_t{1} << r) - 1;
    for (int x = 0; x < k; ++x) nu_hat[static_cast<std::size_t>(x)] = sum[static_cast<std::size_t>(x)] / static_cast<double>(t_r);
    out.mu_hat = mat_vec(k, winv, nu_hat);

    const double rad = inflation * beta(t_r, k, delta);
    int best = -1;
    for (int a = 0; a < k; ++a) {
      if (!candidate[static_cast<std::size_t>(a)]) continue;
      if (best < 0 || out.mu_hat[static_cast<std::size_t>(a)] > out.mu_hat[static_cast<std::size_t>(best)]) best = a;
    }
    const double best_lcb = out.mu_hat[static_cast<std::size_t>(best)] - rad;
    for (int a = 0; a < k; ++a) {
      if (!candidate[static_cast<std::size_t>(a)]) continue;
      if (out.mu_hat[static_cast<std::size_t>(a)] + rad < best_lcb) {
        candidate[static_cast<std::size_t>(a)] = 0;
        --alive;
      }
    }
  }

  for (int a = 0; a < k; ++a) {
    if (candidate[static_cast<std::size_t>(a)]) {
      out.chosen = a;
      break;
    }
  }
  out.tau = t;
  out.phases = r;
  return out;
}

std::vector<double> case1_fixed_budget_estimate(const BanditInstance& instance,
                                                const TransitionMatrix& channel,
                                                std::int64_t budget, std::uint64_t seed,
                                                double sigma_threshold) {
  const int k = instance.k();
  check_alphabet(k, channel.k(), "channel");
  if (budget < k) throw ConfigError("budget must cover at least one round-robin pass");

  // same identifiability gate as the full runner
  if (smallest_singular_value(channel) <= sigma_threshold) {
    throw NonIdentifiable("channel is singular at the working threshold: command means do not pin down arm means");
  }
  const std::vector<double> winv = invert(channel, sigma_threshold);
  RewardPools pools = pools_for_seed(instance, seed);
  RandomStream chan = channel_stream_for_seed(seed);

  std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
  std::vector<std::int64_t> cnt(static_cast<std::size_t>(k), 0);
  std::vector<std::int64_t> counted_idx(static_cast<std::size_t>(k), 0);
  for (std::int64_t t = 0; t < budget; ++t) {
    const int x = static_cast<int>(t % k);
    const int y = sample_output(channel, x, chan);
    sum[static_cast<std::size_t>(x)] += pools.counted(y, counted_idx[static_cast<std::size_t>(y)]++);
    ++cnt[static_cast<std::size_t>(x)];
  }
  std::vector<double> nu_hat(static_cast<std::size_t>(k));
  for (int x = 0; x < k; ++x) {
    nu_hat[static_cast<std::size_t>(x)] = sum[static_cast<std::size_t>(x)] / static_cast<double>(cnt[static_cast<std::size_t>(x)]);
  }
  return mat_vec(k, winv, nu_hat);
}

AliasedPair aliased_instance_pair(const std::vector<double>& mu, double shift) {
  if (mu.size() < 2 || mu.size() % 2 != 0) {
    throw ConfigError("aliased pair needs an even number of arms");
  }
  AliasedPair out;
  out.mu = mu;
  out.mu_prime = mu;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out.mu_prime[i] += (i % 2 == 0) ? shift : -shift;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Case 2, scheme 1

Scheme1Result run_case2_scheme1(const BanditInstance& instance, const TransitionMatrix& channel,
                                const ZeroErrorCode& code, double delta, std::uint64_t seed,
                                std::int64_t round_cap, bool record_trace) {
  const int k = instance.k();
  check_alphabet(k, channel.k(), "channel");
  check_alphabet(k, code.alphabet(), "code");
  if (code.message_count() < k) {
    throw CodeTooSmall("code carries fewer messages than there are arms");
  }

  // Rebuild the decode table against this channel's support. Proves the code
  // is zero-error here and makes decode total on every reachable tuple.
  SupportSet support(channel);
  std::vector<std::vector<int>> cws;
  cws.reserve(static_cast<std::size_t>(code.message_count()));
  for (int m = 0; m < code.message_count(); ++m) cws.push_back(code.codeword(m));
  const ZeroErrorCode working(support, std::move(cws));
  const int n_u = working.blocklength();

  PhasedSeEngine engine(k, delta, round_cap);
  RewardPools pools = pools_for_seed(instance, seed);
  RandomStream chan = channel_stream_for_seed(seed);

  Scheme1Result out;
  out.block_length = n_u;
  std::vector<std::int64_t> counted_idx(static_cast<std::size_t>(k), 0);
  std::vector<std::int64_t> uncounted_idx(static_cast<std::size_t>(k), 0);
  std::vector<int> ybuf(static_cast<std::size_t>(n_u));
  int committed = 0;
  std::int64_t t = 0;

  while (!engine.finished()) {
    const int a = engine.next_arm();
    const int r = engine.phase();
    const std::vector<int>& cw = working.codeword(a);
    for (int i = 0; i < n_u; ++i) {
      if (t >= round_cap) throw RunawayRun("physical rounds exceeded the round cap");
      const int x = cw[static_cast<std::size_t>(i)];
      const int y = sample_output(channel, x, chan);
      ybuf[static_cast<std::size_t>(i)] = y;
      ++t;
      if (i + 1 < n_u) {
        const double reward = pools.uncounted(committed, uncounted_idx[static_cast<std::size_t>(committed)]++);
        if (record_trace) out.trace.push({t, r, StepKind::install, x, y, committed, false, reward});
      } else {
        const int decoded = working.decode(ybuf.data());
        assert(decoded == a);  // zero-error by table construction
        committed = decoded;
        const double reward = pools.counted(decoded, counted_idx[static_cast<std::size_t>(decoded)]++);
        engine.feed(reward);
        if (record_trace) out.trace.push({t, r, StepKind::execute, x, y, decoded, true, reward});
      }
    }
  }

  out.chosen = engine.chosen();
  out.tau = t;
  out.tau_clean = engine.counted_total();
  return out;
}

// ---------------------------------------------------------------------------
// Case 2, scheme 2

Scheme2Result run_case2_scheme2(const BanditInstance& instance, const TransitionMatrix& channel,
                                const Schedule& schedule, double delta, std::uint64_t seed,
                                std::int64_t round_cap, bool record_trace) {
  const int k = instance.k();
  check_alphabet(k, channel.k(), "channel");
  check_alphabet(k, schedule.alphabet(), "schedule");
  if (!schedule.covers_all_symbols()) {
    throw UncoveredArm("schedule never activates some arm, so a request for it could not be served");
  }
  for (const std::vector<int>& slot : schedule.slot_sets()) {
    if (slot.empty()) throw ConfigError("schedule slot has no active symbols");
  }

  SupportSet support(channel);
  const bool two_slot = schedule.is_two_slot_partition();
  std::vector<std::uint8_t> cls(static_cast<std::size_t>(k), 0);
  if (two_slot) {
    const std::vector<int>& s0 = schedule.slot_sets()[0];
    for (int a = 0; a < k; ++a) {
      cls[static_cast<std::size_t>(a)] = std::binary_search(s0.begin(), s0.end(), a) ? 0 : 1;
    }
  }

  PhasedSeEngine engine(k, delta, round_cap);
  RewardPools pools = pools_for_seed(instance, seed);
  RandomStream chan = channel_stream_for_seed(seed);

  Scheme2Result out;
  std::vector<std::int64_t> counted_idx(static_cast<std::size_t>(k), 0);
  std::vector<std::int64_t> uncounted_idx(static_cast<std::size_t>(k), 0);
  std::int64_t t = 0;

  while (!engine.finished()) {
    const int a = engine.next_arm();
    const int r = engine.phase();
    if (t >= round_cap) throw RunawayRun("physical rounds exceeded the round cap");
    ++t;
    const std::vector<int>& active = schedule.active(t);
    if (std::binary_search(active.begin(), active.end(), a)) {
      const int y = sample_output(channel, a, chan);
      const int decoded = generic_indset_decode(support, active, y);
      assert(decoded == a);  // active set is independent, decode is exact
      const double reward = pools.counted(decoded, counted_idx[static_cast<std::size_t>(decoded)]++);
      engine.feed(reward);
      if (two_slot) out.parity_log.push_back(cls[static_cast<std::size_t>(a)]);
      if (record_trace) out.trace.push({t, r, StepKind::execute, a, y, decoded, true, reward});
    } else {
      const int x = active.front();  // smallest active symbol keeps the slot harmless
      const int y = sample_output(channel, x, chan);
      const int decoded = generic_indset_decode(support, active, y);
      const double reward = pools.uncounted(decoded, uncounted_idx[static_cast<std::size_t>(decoded)]++);
      if (record_trace) out.trace.push({t, r, StepKind::wait, x, y, decoded, false, reward});
    }
  }

  out.chosen = engine.chosen();
  out.tau = t;
  out.tau_clean = engine.counted_total();
  return out;
}

// ---------------------------------------------------------------------------
// Case 3

namespace {

PacketCodec make_plan_codec(int k, DigitCode digit) {
  if (k < 1 || k > 62) throw ConfigError("plan packet family supports 1..62 arms");
  const std::int64_t messages = (std::int64_t{1} << k) - 1;
  return PacketCodec(std::move(digit), messages);
}

}  // namespace

PlanPacketFamily::PlanPacketFamily(int k, DigitCode digit, std::optional<int> declared_digits)
    : k_(k), messages_((std::int64_t{1} << (k >= 1 && k <= 62 ? k : 1)) - 1),
      codec_(make_plan_codec(k, std::move(digit))) {
  if (declared_digits.has_value()) {
    if (*declared_digits < codec_.digits()) {
      throw PacketTooSmall("declared digit budget cannot address every nonempty arm subset");
    }
    if (*declared_digits > codec_.digits()) {
      throw ConfigError("declared digit budget exceeds the family's need; the codec does not pad");
    }
  }
}

std::int64_t PlanPacketFamily::message_of(const std::vector<int>& subset) const {
  if (subset.empty()) throw ConfigError("plan subset is empty");
  std::uint64_t mask = 0;
  for (int a : subset) {
    if (a < 0 || a >= k_) throw ConfigError("plan subset member out of range");
    const std::uint64_t bit = std::uint64_t{1} << a;
    if (mask & bit) throw ConfigError("plan subset repeats a member");
    mask |= bit;
  }
  return static_cast<std::int64_t>(mask) - 1;
}

std::vector<int> PlanPacketFamily::subset_of(std::int64_t message) const {
  if (message < 0 || message >= messages_) throw ConfigError("plan message out of range");
  const std::uint64_t mask = static_cast<std::uint64_t>(message) + 1;
  std::vector<int> subset;
  for (int a = 0; a < k_; ++a) {
    if ((mask >> a) & 1) subset.push_back(a);
  }
  return subset;
}

PseResult run_case3_pse(const BanditInstance& instance, const TransitionMatrix& channel,
                        const PlanPacketFamily& family, double delta, std::uint64_t seed,
                        std::int64_t round_cap, bool record_trace) {
  const int k = instance.k();
  check_alphabet(k, channel.k(), "channel");
  check_alphabet(k, family.k(), "plan packet family");

  PhasedSeEngine engine(k, delta, round_cap);
  RewardPools pools = pools_for_seed(instance, seed);
  RandomStream chan = channel_stream_for_seed(seed);

  PseResult out;
  std::vector<std::int64_t> counted_idx(static_cast<std::size_t>(k), 0);
  std::vector<std::int64_t> uncounted_idx(static_cast<std::size_t>(k), 0);
  int hold = 0;
  std::int64_t t = 0;
  std::vector<int> ybuf;
  ybuf.reserve(static_cast<std::size_t>(family.packet_length()));

  while (!engine.finished()) {
    assert(engine.at_phase_start());
    const int r = engine.phase();
    const std::vector<int> plan_set = engine.active_set();  // copied: feed mutates it
    const std::int64_t m = engine.phase_budget();
    const std::int64_t start_slot = t + 1;

    const std::int64_t msg = family.message_of(plan_set);
    const std::vector<int> xs = family.codec().encode(msg, start_slot);
    ybuf.clear();
    for (int x : xs) {
      if (t >= round_cap) throw RunawayRun("physical rounds exceeded the round cap");
      const int y = sample_output(channel, x, chan);
      ybuf.push_back(y);
      ++t;
      const double reward = pools.uncounted(hold, uncounted_idx[static_cast<std::size_t>(hold)]++);
      if (record_trace) out.trace.push({t, r, StepKind::install, x, y, hold, false, reward});
    }

    const std::int64_t decoded_msg = family.codec().decode(ybuf, start_slot);
    assert(decoded_msg == msg);  // zero-error packet
    const std::vector<int> plan = family.subset_of(decoded_msg);

    for (int a : plan) {
      for (std::int64_t j = 0; j < m; ++j) {
        if (t >= round_cap) throw RunawayRun("physical rounds exceeded the round cap");
        assert(engine.next_arm() == a);
        ++t;
        const double reward = pools.counted(a, counted_idx[static_cast<std::size_t>(a)]++);
        engine.feed(reward);
        if (record_trace) out.trace.push({t, r, StepKind::execute, -1, -1, a, true, reward});
      }
    }

    hold = plan.back();  // last arm pulled keeps running through the next install
    out.phases.push_back({r, static_cast<std::int64_t>(xs.size()),
                          static_cast<std::int64_t>(plan.size()), m});
    out.packet_uses_total += static_cast<std::int64_t>(xs.size());
  }

  out.chosen = engine.chosen();
  out.tau = t;
  out.tau_clean = engine.counted_total();
  return out;
}

// ---------------------------------------------------------------------------
// Audits

AuditReport audit_block_wrapper(const RunTrace& trace, int block_length) {
  AuditReport rep;
  rep.counted_rows = trace.counted_rows();
  rep.overhead_rows = trace.tau() - rep.counted_rows;
  if (block_length < 1) {
    fail(rep, "block length must be at least 1", -1);
    return rep;
  }
  const std::vector<TraceRow>& rows = trace.rows();
  if (trace.tau() % block_length != 0) {
    fail(rep, "round count is not a multiple of the block length", trace.tau() - 1);
    return rep;
  }
  int prev_decoded = -1;
  int block_committed = -1;
  for (std::int64_t i = 0; i < trace.tau(); ++i) {
    const TraceRow& row = rows[static_cast<std::size_t>(i)];
    if (row.t != i + 1) {
      fail(rep, "rounds are not contiguous", i);
      return rep;
    }
    const bool last_in_block = (i % block_length) == block_length - 1;
    if (last_in_block) {
      if (row.kind != StepKind::execute || !row.counted) {
        fail(rep, "block does not end with a counted execute row", i);
        return rep;
      }
      prev_decoded = row.executed;
      block_committed = -1;
    } else {
      if (row.kind != StepKind::install || row.counted) {
        fail(rep, "interior block row is not an uncounted install", i);
        return rep;
      }
      if (block_committed < 0) {
        block_committed = row.executed;
        if (prev_decoded >= 0 && block_committed != prev_decoded) {
          fail(rep, "committed arm does not carry over from the previous decode", i);
          return rep;
        }
      } else if (row.executed != block_committed) {
        fail(rep, "committed arm changed inside a block", i);
        return rep;
      }
    }
  }
  if (trace.tau() != static_cast<std::int64_t>(block_length) * rep.counted_rows) {
    fail(rep, "round count is not block length times counted pulls", trace.tau() - 1);
  }
  return rep;
}

std::int64_t parity_predicted_tau(const std::vector<std::uint8_t>& parity_log) {
  if (parity_log.empty()) return 0;
  std::int64_t tau = static_cast<std::int64_t>(parity_log.size());
  if (parity_log.front() == 1) ++tau;  // class 0 owns slot 1
  for (std::size_t i = 1; i < parity_log.size(); ++i) {
    if (parity_log[i] == parity_log[i - 1]) ++tau;  // repeat parity costs a wait slot
  }
  return tau;
}

AuditReport audit_parity_wrapper(const RunTrace& trace, const Schedule& schedule) {
  AuditReport rep;
  rep.counted_rows = trace.counted_rows();
  rep.overhead_rows = trace.tau() - rep.counted_rows;
  if (!schedule.is_two_slot_partition()) {
    fail(rep, "schedule is not a two-slot partition", -1);
    return rep;
  }
  const std::vector<int>& s0 = schedule.slot_sets()[0];
  const std::vector<int>& s1 = schedule.slot_sets()[1];
  const std::vector<TraceRow>& rows = trace.rows();
  std::vector<std::uint8_t> log;
  log.reserve(static_cast<std::size_t>(rep.counted_rows));
  for (std::int64_t i = 0; i < trace.tau(); ++i) {
    const TraceRow& row = rows[static_cast<std::size_t>(i)];
    if (row.t != i + 1) {
      fail(rep, "rounds are not contiguous", i);
      return rep;
    }
    const std::vector<int>& active = schedule.active(row.t);
    if (row.counted) {
      if (row.kind != StepKind::execute) {
        fail(rep, "counted row is not an execute row", i);
        return rep;
      }
      std::uint8_t c;
      if (std::binary_search(s0.begin(), s0.end(), row.executed)) {
        c = 0;
      } else if (std::binary_search(s1.begin(), s1.end(), row.executed)) {
        c = 1;
      } else {
        fail(rep, "executed arm belongs to neither slot class", i);
        return rep;
      }
      if (!std::binary_search(active.begin(), active.end(), row.executed)) {
        fail(rep, "counted pull landed on a slot that does not admit the arm", i);
        return rep;
      }
      log.push_back(c);
    } else {
      if (row.kind != StepKind::wait) {
        fail(rep, "uncounted row is not a wait row", i);
        return rep;
      }
      if (row.transmitted >= 0 &&
          !std::binary_search(active.begin(), active.end(), row.transmitted)) {
        fail(rep, "wait slot transmitted an inactive symbol", i);
        return rep;
      }
    }
  }
  if (parity_predicted_tau(log) != trace.tau()) {
    fail(rep, "parity recurrence does not reproduce the round count", trace.tau() - 1);
  }
  return rep;
}

AuditReport audit_packetized(const RunTrace& trace, const std::vector<PhaseRecord>& phases) {
  AuditReport rep;
  rep.counted_rows = trace.counted_rows();
  rep.overhead_rows = trace.tau() - rep.counted_rows;
  const std::vector<TraceRow>& rows = trace.rows();
  std::int64_t i = 0;
  std::int64_t expected_counted = 0;
  std::int64_t expected_installs = 0;
  for (const PhaseRecord& rec : phases) {
    for (std::int64_t j = 0; j < rec.packet_uses; ++j, ++i) {
      if (i >= trace.tau()) {
        fail(rep, "trace ends inside a declared packet", i - 1);
        return rep;
      }
      const TraceRow& row = rows[static_cast<std::size_t>(i)];
      if (row.t != i + 1 || row.kind != StepKind::install || row.counted || row.phase != rec.phase) {
        fail(rep, "packet row does not match the declared phase", i);
        return rep;
      }
    }
    expected_installs += rec.packet_uses;
    const std::int64_t pulls = rec.active_arms * rec.budget;
    for (std::int64_t j = 0; j < pulls; ++j, ++i) {
      if (i >= trace.tau()) {
        fail(rep, "trace ends inside a declared phase body", i - 1);
        return rep;
      }
      const TraceRow& row = rows[static_cast<std::size_t>(i)];
      if (row.t != i + 1 || row.kind != StepKind::execute || !row.counted ||
          row.phase != rec.phase || row.transmitted != -1 || row.output != -1) {
        fail(rep, "phase body row is not an idle-channel counted pull", i);
        return rep;
      }
    }
    expected_counted += pulls;
  }
  if (i != trace.tau()) {
    fail(rep, "trace has rows beyond the declared phases", i);
    return rep;
  }
  if (rep.counted_rows != expected_counted || rep.overhead_rows != expected_installs ||
      trace.tau() != expected_counted + expected_installs) {
    fail(rep, "round count does not split into counted pulls plus packet uses", trace.tau() - 1);
  }
  return rep;
}

AuditReport audit_counted_match(const RunTrace& trace, const std::vector<int>& requests,
                                const std::vector<double>& rewards) {
  AuditReport rep;
  rep.counted_rows = trace.counted_rows();
  rep.overhead_rows = trace.tau() - rep.counted_rows;
  if (requests.size() != rewards.size()) {
    fail(rep, "reference request and reward sequences differ in length", -1);
    return rep;
  }
  const std::vector<TraceRow>& rows = trace.rows();
  std::size_t idx = 0;
  for (std::int64_t i = 0; i < trace.tau(); ++i) {
    const TraceRow& row = rows[static_cast<std::size_t>(i)];
    if (!row.counted) continue;
    if (idx >= requests.size()) {
      fail(rep, "more counted rows than the reference run", i);
      return rep;
    }
    if (row.executed != requests[idx] || row.reward != rewards[idx]) {
      fail(rep, "counted row diverges from the reference run", i);
      return rep;
    }
    ++idx;
  }
  if (idx != requests.size()) {
    fail(rep, "fewer counted rows than the reference run", trace.tau() - 1);
  }
  return rep;
}

AuditReport audit_trace(const RunTrace& trace, IdentityClaim claim, const AuditParams& params) {
  switch (claim) {
    case IdentityClaim::block_wrapper:
      return audit_block_wrapper(trace, params.block_length);
    case IdentityClaim::parity_wrapper:
      if (params.schedule == nullptr) {
        AuditReport rep;
        fail(rep, "parity audit needs a schedule", -1);
        return rep;
      }
      return audit_parity_wrapper(trace, *params.schedule);
    case IdentityClaim::packetized_additive:
      if (params.phases == nullptr) {
        AuditReport rep;
        fail(rep, "packet audit needs the phase records", -1);
        return rep;
      }
      return audit_packetized(trace, *params.phases);
    case IdentityClaim::counted_match:
      if (params.requests == nullptr || params.rewards == nullptr) {
        AuditReport rep;
        fail(rep, "counted-match audit needs the reference sequences", -1);
        return rep;
      }
      return audit_counted_match(trace, *params.requests, *params.rewards);
  }
  AuditReport rep;
  fail(rep, "unknown identity claim", -1);
  return rep;
}

}  // namespace banditlink
