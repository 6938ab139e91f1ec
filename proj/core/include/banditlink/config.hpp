#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "banditlink/bandit.hpp"
#include "banditlink/channel.hpp"
#include "banditlink/codes.hpp"

namespace banditlink {

// Declarative description of an actuation channel.
struct ChannelSpec {
  std::string type;          // "typewriter" | "explicit"
  int k = 0;                 // typewriter alphabet size
  double eps = 0.0;          // typewriter slip probability
  std::vector<double> rows;  // explicit: row-major k*k entries

  TransitionMatrix build() const;
};

struct InstanceSpec {
  std::vector<double> mu;
  RewardLaw law = RewardLaw::gaussian;
  double delta = 0.1;

  BanditInstance build() const;
};

// One experiment: a protocol over (instance, channel), replicated.
struct ExperimentSpec {
  std::string protocol = "clean";  // clean | case1 | case2-scheme1 | case2-scheme2 | case3
  ChannelSpec channel;             // may be omitted for "clean"
  InstanceSpec instance;
  std::string code = "auto";       // case2-scheme1: auto | slope-c5 | product-c6
  std::string schedule = "auto";   // case2-scheme2: auto | parity
  std::string digit = "auto";      // case3: auto | block-slope-c5 | block-product-c6 | scheduled-parity
  std::int64_t reps = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  std::int64_t round_cap = PhasedSeEngine::kDefaultRoundCap;
  double sigma_threshold = 1e-9;
  bool audit = true;               // run trace audits per rep where they apply
  std::string dump_trace_dir;      // when set, rep 0 writes its trace CSV here
};

// Strict JSON: unknown keys are errors, as are missing required fields.
ExperimentSpec parse_experiment_json(const std::string& text);
ExperimentSpec load_experiment_file(const std::string& path);
std::string experiment_to_json(const ExperimentSpec& spec);

// Just the channel object, e.g. {"type": "typewriter", "k": 5, "eps": 0.3}.
ChannelSpec parse_channel_json(const std::string& text);

RewardLaw parse_reward_law(const std::string& name);
const char* reward_law_name(RewardLaw law);

// The constructions behind the "auto" selectors, usable straight from a
// channel. auto_code picks the shortest blocklength whose strong power holds
// `messages` pairwise non-confusable codewords; auto_schedule first-fit
// colors the confusability graph into independent slots; auto_digit prefers
// a scheduled digit (one use per digit) when every slot offers at least two
// symbols, else falls back to a block digit built on the request code.
ZeroErrorCode auto_code(const TransitionMatrix& channel, int messages, int n_max = 8);
Schedule auto_schedule(const TransitionMatrix& channel);
DigitCode auto_digit(const TransitionMatrix& channel, int n_max = 8);

// Resolve the experiment's named selectors against its channel.
ZeroErrorCode make_code(const ExperimentSpec& spec);
Schedule make_schedule(const ExperimentSpec& spec);
DigitCode make_digit_code(const ExperimentSpec& spec);

}  // namespace banditlink
