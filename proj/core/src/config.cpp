#include "banditlink/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "banditlink/errors.hpp"
#include "banditlink/graphs.hpp"

namespace banditlink {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const char* where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(std::string(where) + ": unknown key \"" + it.key() + "\"");
  }
}

ChannelSpec parse_channel(const json& j) {
  if (!j.is_object()) throw ConfigError("channel: expected an object");
  reject_unknown_keys(j, {"type", "k", "eps", "rows"}, "channel");
  ChannelSpec spec;
  spec.type = j.value("type", std::string());
  if (spec.type == "typewriter") {
    if (!j.contains("k") || !j.contains("eps")) {
      throw ConfigError("channel: typewriter needs \"k\" and \"eps\"");
    }
    spec.k = j.at("k").get<int>();
    spec.eps = j.at("eps").get<double>();
  } else if (spec.type == "explicit") {
    if (!j.contains("rows") || !j.at("rows").is_array() || j.at("rows").empty()) {
      throw ConfigError("channel: explicit needs a non-empty \"rows\" array of rows");
    }
    const json& rows = j.at("rows");
    spec.k = static_cast<int>(rows.size());
    for (const json& row : rows) {
      if (!row.is_array() || static_cast<int>(row.size()) != spec.k) {
        throw ConfigError("channel: rows must form a square matrix");
      }
      for (const json& v : row) spec.rows.push_back(v.get<double>());
    }
  } else {
    throw ConfigError("channel: type must be \"typewriter\" or \"explicit\"");
  }
  return spec;
}

InstanceSpec parse_instance(const json& j) {
  if (!j.is_object()) throw ConfigError("instance: expected an object");
  reject_unknown_keys(j, {"mu", "law", "delta"}, "instance");
  InstanceSpec spec;
  if (!j.contains("mu") || !j.at("mu").is_array() || j.at("mu").empty()) {
    throw ConfigError("instance: needs a non-empty \"mu\" array");
  }
  for (const json& v : j.at("mu")) spec.mu.push_back(v.get<double>());
  if (j.contains("law")) spec.law = parse_reward_law(j.at("law").get<std::string>());
  if (j.contains("delta")) spec.delta = j.at("delta").get<double>();
  if (!(spec.delta > 0.0 && spec.delta < 1.0)) {
    throw ConfigError("instance: delta must be strictly inside (0, 1)");
  }
  return spec;
}

}  // namespace

TransitionMatrix ChannelSpec::build() const {
  if (type == "typewriter") return make_typewriter(k, eps);
  if (type == "explicit") return TransitionMatrix(k, rows);
  throw ConfigError("channel: type must be \"typewriter\" or \"explicit\"");
}

BanditInstance InstanceSpec::build() const { return BanditInstance(mu, law); }

RewardLaw parse_reward_law(const std::string& name) {
  if (name == "gaussian") return RewardLaw::gaussian;
  if (name == "bernoulli") return RewardLaw::bernoulli;
  if (name == "deterministic") return RewardLaw::deterministic;
  throw ConfigError("law must be \"gaussian\", \"bernoulli\", or \"deterministic\"");
}

const char* reward_law_name(RewardLaw law) {
  switch (law) {
    case RewardLaw::gaussian: return "gaussian";
    case RewardLaw::bernoulli: return "bernoulli";
    case RewardLaw::deterministic: return "deterministic";
  }
  return "?";
}

ChannelSpec parse_channel_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("channel: invalid JSON: ") + e.what());
  }
  return parse_channel(j);
}

ExperimentSpec parse_experiment_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("experiment: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("experiment: expected a JSON object");
  reject_unknown_keys(j,
                      {"protocol", "channel", "instance", "code", "schedule", "digit", "reps",
                       "seed", "threads", "round_cap", "sigma_threshold", "audit",
                       "dump_trace_dir"},
                      "experiment");

  ExperimentSpec spec;
  spec.protocol = j.value("protocol", std::string("clean"));
  if (spec.protocol != "clean" && spec.protocol != "case1" && spec.protocol != "case2-scheme1" &&
      spec.protocol != "case2-scheme2" && spec.protocol != "case3") {
    throw ConfigError("experiment: unknown protocol \"" + spec.protocol + "\"");
  }
  if (j.contains("channel")) {
    spec.channel = parse_channel(j.at("channel"));
  } else if (spec.protocol != "clean") {
    throw ConfigError("experiment: protocol \"" + spec.protocol + "\" needs a channel");
  }
  if (!j.contains("instance")) throw ConfigError("experiment: needs an instance");
  spec.instance = parse_instance(j.at("instance"));

  spec.code = j.value("code", std::string("auto"));
  spec.schedule = j.value("schedule", std::string("auto"));
  spec.digit = j.value("digit", std::string("auto"));
  spec.reps = j.value("reps", std::int64_t{1});
  if (spec.reps < 0) throw ConfigError("experiment: reps must be >= 0");
  spec.seed = j.value("seed", std::uint64_t{1});
  spec.threads = j.value("threads", 1);
  if (spec.threads < 1) throw ConfigError("experiment: threads must be >= 1");
  spec.round_cap = j.value("round_cap", PhasedSeEngine::kDefaultRoundCap);
  if (spec.round_cap < 1) throw ConfigError("experiment: round_cap must be >= 1");
  spec.sigma_threshold = j.value("sigma_threshold", 1e-9);
  spec.audit = j.value("audit", true);
  spec.dump_trace_dir = j.value("dump_trace_dir", std::string());
  return spec;
}

ExperimentSpec load_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_experiment_json(buf.str());
}

std::string experiment_to_json(const ExperimentSpec& spec) {
  json j;
  j["protocol"] = spec.protocol;
  if (!spec.channel.type.empty()) {
    json c;
    c["type"] = spec.channel.type;
    if (spec.channel.type == "typewriter") {
      c["k"] = spec.channel.k;
      c["eps"] = spec.channel.eps;
    } else {
      json rows = json::array();
      for (int x = 0; x < spec.channel.k; ++x) {
        json row = json::array();
        for (int y = 0; y < spec.channel.k; ++y) {
          row.push_back(spec.channel.rows[static_cast<std::size_t>(x) * spec.channel.k + y]);
        }
        rows.push_back(std::move(row));
      }
      c["rows"] = std::move(rows);
    }
    j["channel"] = std::move(c);
  }
  json inst;
  inst["mu"] = spec.instance.mu;
  inst["law"] = reward_law_name(spec.instance.law);
  inst["delta"] = spec.instance.delta;
  j["instance"] = std::move(inst);
  j["code"] = spec.code;
  j["schedule"] = spec.schedule;
  j["digit"] = spec.digit;
  j["reps"] = spec.reps;
  j["seed"] = spec.seed;
  j["threads"] = spec.threads;
  j["round_cap"] = spec.round_cap;
  j["sigma_threshold"] = spec.sigma_threshold;
  j["audit"] = spec.audit;
  j["dump_trace_dir"] = spec.dump_trace_dir;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Auto constructions

ZeroErrorCode auto_code(const TransitionMatrix& channel, int messages, int n_max) {
  if (messages < 1) throw ConfigError("a code needs at least one message");
  SupportSet support(channel);
  ConfusabilityGraph g = ConfusabilityGraph::from_support(support);
  BlocklengthResult found = minimal_blocklength(g, messages, n_max);
  if (!found.blocklength.has_value()) {
    if (found.reason == BlocklengthResult::Reason::graph_complete) {
      throw CodeTooSmall("every pair of inputs is confusable: no blocklength carries " +
                         std::to_string(messages) + " messages");
    }
    throw CapExceeded("auto code search hit its caps: " + found.note);
  }
  StrongPower power(g, *found.blocklength);
  AlphaResult alpha = independence_number(power);
  std::vector<std::int64_t> members(alpha.witness.begin(),
                                    alpha.witness.begin() + messages);
  return code_from_independent_set(support, power, IndependentSet(power, std::move(members)));
}

Schedule auto_schedule(const TransitionMatrix& channel) {
  SupportSet support(channel);
  ConfusabilityGraph g = ConfusabilityGraph::from_support(support);
  std::vector<std::vector<int>> slots;
  for (int v = 0; v < g.order(); ++v) {
    bool placed = false;
    for (std::vector<int>& slot : slots) {
      bool ok = true;
      for (int u : slot) {
        if (g.adjacent(u, v)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        slot.push_back(v);
        placed = true;
        break;
      }
    }
    if (!placed) slots.push_back({v});
  }
  return Schedule(g, std::move(slots));
}

DigitCode auto_digit(const TransitionMatrix& channel, int n_max) {
  Schedule sched = auto_schedule(channel);
  std::size_t min_slot = static_cast<std::size_t>(-1);
  for (const std::vector<int>& slot : sched.slot_sets()) {
    min_slot = std::min(min_slot, slot.size());
  }
  if (min_slot >= 2) {
    return DigitCode::scheduled(std::move(sched), SupportSet(channel));
  }
  return DigitCode::block(auto_code(channel, channel.k(), n_max));
}

// ---------------------------------------------------------------------------
// Named selectors

namespace {

void require_alphabet(const TransitionMatrix& w, int k, const std::string& name) {
  if (w.k() != k) {
    throw ConfigError("selector \"" + name + "\" needs a " + std::to_string(k) +
                      "-symbol channel");
  }
}

// Rebuild a calendar against the channel's own graph; proves every slot is
// independent for this channel, not just for the graph it was born on.
Schedule revalidated(const Schedule& s, const TransitionMatrix& w) {
  ConfusabilityGraph g = ConfusabilityGraph::from_support(SupportSet(w));
  return Schedule(g, s.slot_sets());
}

}  // namespace

ZeroErrorCode make_code(const ExperimentSpec& spec) {
  TransitionMatrix w = spec.channel.build();
  if (spec.code == "auto") return auto_code(w, w.k());
  if (spec.code == "slope-c5") {
    require_alphabet(w, 5, spec.code);
    return slope_code_c5();
  }
  if (spec.code == "product-c6") {
    require_alphabet(w, 6, spec.code);
    return product_code(SupportSet(w), {0, 2, 4}, 2);
  }
  throw ConfigError("unknown code selector \"" + spec.code + "\"");
}

Schedule make_schedule(const ExperimentSpec& spec) {
  TransitionMatrix w = spec.channel.build();
  if (spec.schedule == "auto") return auto_schedule(w);
  if (spec.schedule == "parity") return revalidated(parity_schedule(w.k()), w);
  throw ConfigError("unknown schedule selector \"" + spec.schedule + "\"");
}

DigitCode make_digit_code(const ExperimentSpec& spec) {
  TransitionMatrix w = spec.channel.build();
  if (spec.digit == "auto") return auto_digit(w);
  if (spec.digit == "block-slope-c5") {
    require_alphabet(w, 5, spec.digit);
    return DigitCode::block(slope_code_c5());
  }
  if (spec.digit == "block-product-c6") {
    require_alphabet(w, 6, spec.digit);
    return DigitCode::block(product_code(SupportSet(w), {0, 2, 4}, 2));
  }
  if (spec.digit == "scheduled-parity") {
    return DigitCode::scheduled(revalidated(parity_schedule(w.k()), w), SupportSet(w));
  }
  throw ConfigError("unknown digit selector \"" + spec.digit + "\"");
}

}  // namespace banditlink
