#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "banditlink/bandit.hpp"
#include "banditlink/channel.hpp"
#include "banditlink/codes.hpp"

namespace banditlink {

enum class StepKind : std::uint8_t {
  execute,  // a counted pull the learner's statistics consume
  install,  // codeword/packet transmission slot; agent holds prior behavior
  wait,     // calendar slot whose active set misses the pending request
};

const char* step_kind_name(StepKind k);

struct TraceRow {
  std::int64_t t = 0;   // physical round, 1-based
  int phase = 0;        // SE phase at emission (0 when not applicable)
  StepKind kind = StepKind::execute;
  int transmitted = -1;  // command symbol; -1 when the channel is idle
  int output = -1;       // channel output; -1 when the channel is idle
  int executed = -1;     // arm the agent pulled
  bool counted = false;
  double reward = 0.0;
};

// Learner-visible projection of a row: channel output and executed arm are
// withheld. Protocol logic is written against this view; the full rows exist
// for audits only.
struct LearnerRow {
  std::int64_t t;
  int phase;
  StepKind kind;
  int transmitted;
  bool counted;
  double reward;
};

class RunTrace {
 public:
  void push(const TraceRow& row);
  std::int64_t tau() const noexcept { return static_cast<std::int64_t>(rows_.size()); }
  const std::vector<TraceRow>& rows() const noexcept { return rows_; }
  LearnerRow learner_view(std::int64_t index) const;
  std::int64_t counted_rows() const noexcept { return counted_; }

  // Fixed columns: t,phase,kind,transmitted,output,executed,counted,reward
  std::string csv() const;

 private:
  std::vector<TraceRow> rows_;
  std::int64_t counted_ = 0;
};

// Derivation of a run's independent random streams from one run seed. Every
// protocol uses these, so runs sharing a seed share reward pools and are
// couplable against the clean reference run.
RewardPools pools_for_seed(const BanditInstance& instance, std::uint64_t seed);
RandomStream channel_stream_for_seed(std::uint64_t seed);
CleanRunResult coupled_clean_run(const BanditInstance& instance, double delta, std::uint64_t seed,
                                 std::int64_t round_cap = PhasedSeEngine::kDefaultRoundCap);

// ---------------------------------------------------------------------------
// Case 1: no shared code, commands land perturbed, learner unmixes.
// Round-robin over all k commands (elimination never narrows sampling: the
// unmix needs every row of nu). At each phase end the command-mean vector is
// unmixed through the channel inverse and candidates are eliminated with the
// inflated radius (sqrt(k) / sigma_min) * beta(t_r).

struct Case1Options {
  double sigma_threshold = 1e-9;
  std::int64_t round_cap = PhasedSeEngine::kDefaultRoundCap;
  bool record_trace = true;
};

struct Case1Result {
  int chosen = -1;
  std::int64_t tau = 0;  // physical rounds == counted samples
  int phases = 0;
  std::vector<double> mu_hat;  // unmixed estimate at stop
  RunTrace trace;
};

Case1Result run_case1(const BanditInstance& instance, const TransitionMatrix& channel,
                      double delta, std::uint64_t seed, const Case1Options& options = {});

// Estimation-only variant: spend exactly `budget` rounds round-robin and
// return the unmixed mean estimate.
std::vector<double> case1_fixed_budget_estimate(const BanditInstance& instance,
                                                const TransitionMatrix& channel,
                                                std::int64_t budget, std::uint64_t seed,
                                                double sigma_threshold = 1e-9);

// mu and an aliased twin mu + shift * (-1)^i. Under the eps = 1/2 typewriter
// on even k both mix to the same command means; pick `shift` so the argmax
// moves and no budget distinguishes the instances.
struct AliasedPair {
  std::vector<double> mu;
  std::vector<double> mu_prime;
};
AliasedPair aliased_instance_pair(const std::vector<double>& mu, double shift);

// ---------------------------------------------------------------------------
// Case 2, scheme 1: every request is spelled out as an n_u-symbol zero-error
// codeword; the agent executes its committed arm during the first n_u - 1
// slots (committed arm starts at 0) and executes the decoded request on the
// last slot, which is the one counted pull. tau = n_u * tau_clean exactly.

struct Scheme1Result {
  int chosen = -1;
  std::int64_t tau = 0;
  std::int64_t tau_clean = 0;
  int block_length = 0;
  RunTrace trace;
};

Scheme1Result run_case2_scheme1(const BanditInstance& instance, const TransitionMatrix& channel,
                                const ZeroErrorCode& code, double delta, std::uint64_t seed,
                                std::int64_t round_cap = PhasedSeEngine::kDefaultRoundCap,
                                bool record_trace = true);

// Case 2, scheme 2: a periodic calendar of independent active sets. The
// pending request is served at the first slot whose active set contains it;
// in other slots the learner transmits the smallest active symbol and the
// agent executes it, reward uncounted. On two-slot partitions the round
// count obeys the parity recurrence checked by audit_parity_wrapper.

struct Scheme2Result {
  int chosen = -1;
  std::int64_t tau = 0;
  std::int64_t tau_clean = 0;
  // Per counted pull: index of the schedule slot class containing the
  // request (two-slot partitions only; empty otherwise).
  std::vector<std::uint8_t> parity_log;
  RunTrace trace;
};

Scheme2Result run_case2_scheme2(const BanditInstance& instance, const TransitionMatrix& channel,
                                const Schedule& schedule, double delta, std::uint64_t seed,
                                std::int64_t round_cap = PhasedSeEngine::kDefaultRoundCap,
                                bool record_trace = true);

// ---------------------------------------------------------------------------
// Case 3: packetized phase plans. Before each phase the learner installs
// plan(S_r, m_r) as one zero-error packet (n_r channel uses) while the agent
// keeps pulling its hold arm (uncounted); the agent then executes the plan —
// S_r ascending, m_r pulls each, all counted — with the channel idle. The
// hold arm becomes the last arm pulled in the phase.

// The per-phase plan alphabet: every nonempty arm subset (budget m_r is
// implied by the phase index). Message id = subset bitmask - 1, arm 0 in the
// lowest bit, so the family always has 2^k - 1 messages.
class PlanPacketFamily {
 public:
  // declared_digits, when given, is validated against the digit count the
  // family actually needs; too few digits is PacketTooSmall.
  PlanPacketFamily(int k, DigitCode digit, std::optional<int> declared_digits = {});

  int k() const noexcept { return k_; }
  std::int64_t family_size() const noexcept { return messages_; }
  int packet_length() const noexcept { return codec_.length(); }
  const PacketCodec& codec() const noexcept { return codec_; }

  std::int64_t message_of(const std::vector<int>& subset) const;
  std::vector<int> subset_of(std::int64_t message) const;

 private:
  int k_;
  std::int64_t messages_;
  PacketCodec codec_;
};

struct PhaseRecord {
  int phase = 0;
  std::int64_t packet_uses = 0;  // n_r
  std::int64_t active_arms = 0;  // |S_r|
  std::int64_t budget = 0;       // m_r
};

struct PseResult {
  int chosen = -1;
  std::int64_t tau = 0;
  std::int64_t tau_clean = 0;           // counted pulls == coupled clean tau
  std::int64_t packet_uses_total = 0;   // sum of n_r
  std::vector<PhaseRecord> phases;
  RunTrace trace;
};

PseResult run_case3_pse(const BanditInstance& instance, const TransitionMatrix& channel,
                        const PlanPacketFamily& family, double delta, std::uint64_t seed,
                        std::int64_t round_cap = PhasedSeEngine::kDefaultRoundCap,
                        bool record_trace = true);

// ---------------------------------------------------------------------------
// Trace audits: mechanical re-checks of the round-count identities from raw
// rows. Each returns pass/fail with the first offending row.

struct AuditReport {
  bool pass = true;
  std::string detail;
  std::int64_t bad_row = -1;       // index into rows(), -1 when pass
  std::int64_t counted_rows = 0;
  std::int64_t overhead_rows = 0;  // install + wait rows
};

// tau == block_length * counted; blocks are [install x (n_u - 1), execute].
AuditReport audit_block_wrapper(const RunTrace& trace, int block_length);

// Round count equals the parity recurrence applied to the counted rows'
// slot classes; counted rows sit on slots whose active set admits them.
AuditReport audit_parity_wrapper(const RunTrace& trace, const Schedule& schedule);

// tau == counted + installs, with per-phase install runs of exactly
// packet_uses and counted runs of active_arms * budget.
AuditReport audit_packetized(const RunTrace& trace, const std::vector<PhaseRecord>& phases);

// Counted rows reproduce the reference (arm, reward) sequence exactly.
AuditReport audit_counted_match(const RunTrace& trace, const std::vector<int>& requests,
                                const std::vector<double>& rewards);

// tau predicted by the parity recurrence: serving slot parity alternates for
// free; a repeat parity costs one wait slot, and a leading class-1 request
// costs one (class 0 is active at t = 1).
std::int64_t parity_predicted_tau(const std::vector<std::uint8_t>& parity_log);

enum class IdentityClaim { block_wrapper, parity_wrapper, packetized_additive, counted_match };

struct AuditParams {
  int block_length = 0;
  const Schedule* schedule = nullptr;
  const std::vector<PhaseRecord>* phases = nullptr;
  const std::vector<int>* requests = nullptr;
  const std::vector<double>* rewards = nullptr;
};

AuditReport audit_trace(const RunTrace& trace, IdentityClaim claim, const AuditParams& params);

}  // namespace banditlink
