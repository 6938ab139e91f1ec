#include "banditlink/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>

#include "json.hpp"

#include "banditlink/errors.hpp"
#include "banditlink/graphs.hpp"
#include "banditlink/protocols.hpp"

namespace banditlink {

namespace {

struct SweepArtifacts {
  std::optional<TransitionMatrix> channel;
  std::optional<ZeroErrorCode> code;
  std::optional<Schedule> schedule;
  std::optional<PlanPacketFamily> family;
};

SweepArtifacts prepare(const ExperimentSpec& spec) {
  SweepArtifacts art;
  if (spec.protocol == "clean") return art;
  art.channel.emplace(spec.channel.build());
  if (spec.protocol == "case2-scheme1") art.code.emplace(make_code(spec));
  if (spec.protocol == "case2-scheme2") art.schedule.emplace(make_schedule(spec));
  if (spec.protocol == "case3") art.family.emplace(art.channel->k(), make_digit_code(spec));
  return art;
}

void dump_trace(const ExperimentSpec& spec, const RunTrace& trace) {
  namespace fs = std::filesystem;
  fs::create_directories(spec.dump_trace_dir);
  const fs::path path = fs::path(spec.dump_trace_dir) / "trace_rep0.csv";
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write trace to " + path.string());
  out << trace.csv();
}

int last_phase(const RunTrace& trace) {
  return trace.tau() > 0 ? trace.rows().back().phase : 0;
}

RepRecord run_one(const ExperimentSpec& spec, const BanditInstance& instance,
                  const SweepArtifacts& art, std::int64_t rep) {
  RepRecord rec;
  rec.rep = rep;
  rec.seed = seed_combine(spec.seed, static_cast<std::uint64_t>(rep));
  const double delta = spec.instance.delta;
  const bool dump = !spec.dump_trace_dir.empty() && rep == 0 && spec.protocol != "clean";
  const bool want_trace = spec.audit || dump;

  if (spec.protocol == "clean") {
    const CleanRunResult clean = coupled_clean_run(instance, delta, rec.seed, spec.round_cap);
    rec.chosen = clean.chosen;
    rec.tau = clean.tau;
    rec.tau_clean = clean.tau;
    rec.phases = clean.phases;
  } else if (spec.protocol == "case1") {
    Case1Options opt;
    opt.sigma_threshold = spec.sigma_threshold;
    opt.round_cap = spec.round_cap;
    opt.record_trace = dump;
    const Case1Result res = run_case1(instance, *art.channel, delta, rec.seed, opt);
    rec.chosen = res.chosen;
    rec.tau = res.tau;
    rec.tau_clean = res.tau;  // every physical round is a counted sample
    rec.phases = res.phases;
    if (dump) dump_trace(spec, res.trace);
  } else if (spec.protocol == "case2-scheme1") {
    const Scheme1Result res = run_case2_scheme1(instance, *art.channel, *art.code, delta,
                                                rec.seed, spec.round_cap, want_trace);
    rec.chosen = res.chosen;
    rec.tau = res.tau;
    rec.tau_clean = res.tau_clean;
    rec.phases = last_phase(res.trace);
    if (spec.audit) {
      const CleanRunResult clean = coupled_clean_run(instance, delta, rec.seed, spec.round_cap);
      rec.identity_checked = true;
      rec.identity_pass =
          res.chosen == clean.chosen && res.tau_clean == clean.tau &&
          res.tau == static_cast<std::int64_t>(res.block_length) * clean.tau &&
          audit_block_wrapper(res.trace, res.block_length).pass &&
          audit_counted_match(res.trace, clean.requests, clean.rewards).pass;
    }
    if (dump) dump_trace(spec, res.trace);
  } else if (spec.protocol == "case2-scheme2") {
    const Scheme2Result res = run_case2_scheme2(instance, *art.channel, *art.schedule, delta,
                                                rec.seed, spec.round_cap, want_trace);
    rec.chosen = res.chosen;
    rec.tau = res.tau;
    rec.tau_clean = res.tau_clean;
    rec.phases = last_phase(res.trace);
    if (spec.audit) {
      const CleanRunResult clean = coupled_clean_run(instance, delta, rec.seed, spec.round_cap);
      rec.identity_checked = true;
      bool ok = res.chosen == clean.chosen && res.tau_clean == clean.tau &&
                audit_counted_match(res.trace, clean.requests, clean.rewards).pass;
      if (art.schedule->is_two_slot_partition()) {
        ok = ok && audit_parity_wrapper(res.trace, *art.schedule).pass &&
             parity_predicted_tau(res.parity_log) == res.tau;
      }
      rec.identity_pass = ok;
    }
    if (dump) dump_trace(spec, res.trace);
  } else if (spec.protocol == "case3") {
    const PseResult res = run_case3_pse(instance, *art.channel, *art.family, delta, rec.seed,
                                        spec.round_cap, want_trace);
    rec.chosen = res.chosen;
    rec.tau = res.tau;
    rec.tau_clean = res.tau_clean;
    rec.phases = static_cast<int>(res.phases.size());
    if (spec.audit) {
      const CleanRunResult clean = coupled_clean_run(instance, delta, rec.seed, spec.round_cap);
      rec.identity_checked = true;
      rec.identity_pass = res.chosen == clean.chosen && res.tau_clean == clean.tau &&
                          res.tau == res.tau_clean + res.packet_uses_total &&
                          audit_packetized(res.trace, res.phases).pass &&
                          audit_counted_match(res.trace, clean.requests, clean.rewards).pass;
    }
    if (dump) dump_trace(spec, res.trace);
  } else {
    throw ConfigError("unknown protocol \"" + spec.protocol + "\"");
  }

  rec.correct = rec.chosen == instance.best_arm();
  rec.slowdown = rec.tau_clean > 0
                     ? static_cast<double>(rec.tau) / static_cast<double>(rec.tau_clean)
                     : 1.0;
  return rec;
}

std::int64_t percentile(const std::vector<std::int64_t>& sorted, double q) {
  if (sorted.empty()) return 0;
  const std::size_t n = sorted.size();
  std::size_t rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
  rank = std::min(std::max<std::size_t>(rank, 1), n);
  return sorted[rank - 1];
}

}  // namespace

AggregateReport run_sweep(const ExperimentSpec& spec) {
  const BanditInstance instance = spec.instance.build();
  const SweepArtifacts art = prepare(spec);

  std::vector<RepRecord> records(static_cast<std::size_t>(spec.reps));
  if (spec.reps > 0) {
    std::atomic<std::int64_t> next{0};
    std::mutex err_mu;
    std::exception_ptr err;
    auto worker = [&]() {
      while (true) {
        const std::int64_t rep = next.fetch_add(1);
        if (rep >= spec.reps) return;
        try {
          records[static_cast<std::size_t>(rep)] = run_one(spec, instance, art, rep);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    };
    const int nthreads = static_cast<int>(
        std::min<std::int64_t>(spec.threads, std::max<std::int64_t>(spec.reps, 1)));
    if (nthreads <= 1) {
      worker();
    } else {
      std::vector<std::thread> team;
      team.reserve(static_cast<std::size_t>(nthreads));
      for (int i = 0; i < nthreads; ++i) team.emplace_back(worker);
      for (std::thread& th : team) th.join();
    }
    if (err) std::rethrow_exception(err);
  }

  AggregateReport agg;
  agg.protocol = spec.protocol;
  agg.reps = spec.reps;
  agg.delta = spec.instance.delta;
  std::vector<std::int64_t> taus;
  taus.reserve(records.size());
  double tau_sum = 0.0;
  double slow_sum = 0.0;
  for (const RepRecord& rec : records) {
    if (!rec.correct) ++agg.errors;
    if (rec.identity_checked) {
      ++agg.identity_checked;
      if (rec.identity_pass) ++agg.identity_passed;
    }
    taus.push_back(rec.tau);
    tau_sum += static_cast<double>(rec.tau);
    slow_sum += rec.slowdown;
    agg.slowdown_max = std::max(agg.slowdown_max, rec.slowdown);
  }
  if (!records.empty()) {
    const double n = static_cast<double>(records.size());
    agg.error_rate = static_cast<double>(agg.errors) / n;
    agg.error_ci99_half_width =
        2.5758293035489004 * std::sqrt(agg.error_rate * (1.0 - agg.error_rate) / n);
    agg.tau_mean = tau_sum / n;
    agg.slowdown_mean = slow_sum / n;
    std::sort(taus.begin(), taus.end());
    agg.tau_p50 = percentile(taus, 0.50);
    agg.tau_p90 = percentile(taus, 0.90);
    agg.tau_max = taus.back();
  }
  agg.rep_records = std::move(records);
  return agg;
}

std::string report_csv(const AggregateReport& report) {
  std::string out =
      "rep,seed,chosen,correct,tau,tau_clean,phases,slowdown,identity_checked,identity_pass\n";
  char buf[256];
  for (const RepRecord& r : report.rep_records) {
    std::snprintf(buf, sizeof(buf), "%lld,%llu,%d,%d,%lld,%lld,%d,%.17g,%d,%d\n",
                  static_cast<long long>(r.rep), static_cast<unsigned long long>(r.seed),
                  r.chosen, r.correct ? 1 : 0, static_cast<long long>(r.tau),
                  static_cast<long long>(r.tau_clean), r.phases, r.slowdown,
                  r.identity_checked ? 1 : 0, r.identity_pass ? 1 : 0);
    out += buf;
  }
  return out;
}

std::string report_json(const AggregateReport& report) {
  nlohmann::json j;
  j["schema_version"] = report.schema_version;
  j["rng_version"] = report.rng_version;
  j["protocol"] = report.protocol;
  j["reps"] = report.reps;
  j["delta"] = report.delta;
  j["errors"] = report.errors;
  j["error_rate"] = report.error_rate;
  j["error_ci99_half_width"] = report.error_ci99_half_width;
  j["tau"] = {{"mean", report.tau_mean},
              {"p50", report.tau_p50},
              {"p90", report.tau_p90},
              {"max", report.tau_max}};
  j["slowdown"] = {{"mean", report.slowdown_mean}, {"max", report.slowdown_max}};
  j["identity"] = {{"checked", report.identity_checked}, {"passed", report.identity_passed}};
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Reproduce registry

namespace {

void logf(std::string& log, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  log += buf;
  log += '\n';
}

bool check(std::string& log, bool ok, const char* what) {
  logf(log, "%s %s", ok ? "[ok]  " : "[FAIL]", what);
  return ok;
}

bool exhaustive_decode_ok(const TransitionMatrix& w, const ZeroErrorCode& code, int* checked) {
  const SupportSet s(w);
  *checked = 0;
  std::vector<int> tuple(static_cast<std::size_t>(code.blocklength()));
  for (int m = 0; m < code.message_count(); ++m) {
    const std::vector<int>& cw = code.codeword(m);
    std::vector<std::size_t> pos(static_cast<std::size_t>(code.blocklength()), 0);
    while (true) {
      for (int i = 0; i < code.blocklength(); ++i) {
        tuple[static_cast<std::size_t>(i)] =
            s.of(cw[static_cast<std::size_t>(i)])[pos[static_cast<std::size_t>(i)]];
      }
      ++*checked;
      if (code.decode(tuple) != m) return false;
      int i = 0;
      for (; i < code.blocklength(); ++i) {
        const std::size_t limit = s.of(cw[static_cast<std::size_t>(i)]).size();
        if (++pos[static_cast<std::size_t>(i)] < limit) break;
        pos[static_cast<std::size_t>(i)] = 0;
      }
      if (i == code.blocklength()) break;
    }
  }
  return true;
}

bool rep_zero_error_exact(std::string& log) {
  bool all = true;
  {
    TransitionMatrix w = make_typewriter(5, 0.3);
    int checked = 0;
    const bool ok = exhaustive_decode_ok(w, slope_code_c5(), &checked);
    all &= check(log, ok && checked == 20,
                 "5-ary slope code: every reachable output pair decodes to its message");
    logf(log, "       %d reachable tuples enumerated", checked);
  }
  {
    TransitionMatrix w = make_typewriter(6, 0.45);
    const ZeroErrorCode code = product_code(SupportSet(w), {0, 2, 4}, 2);
    int checked = 0;
    const bool ok = exhaustive_decode_ok(w, code, &checked);
    all &= check(log, code.message_count() == 9, "6-ary product code carries 9 messages");
    all &= check(log, ok && checked == 36,
                 "6-ary product code: every reachable output pair decodes to its message");
  }
  return all;
}

bool rep_combinatorics(std::string& log) {
  bool all = true;
  const ConfusabilityGraph c4 = ConfusabilityGraph::cycle(4);
  const ConfusabilityGraph c5 = ConfusabilityGraph::cycle(5);
  const ConfusabilityGraph c6 = ConfusabilityGraph::cycle(6);
  all &= check(log, independence_number(c4).value == 2, "alpha(cycle 4) == 2");
  all &= check(log, independence_number(c5).value == 2, "alpha(cycle 5) == 2");
  all &= check(log, independence_number(c6).value == 3, "alpha(cycle 6) == 3");
  all &= check(log, independence_number(StrongPower(c4, 2)).value == 4,
               "alpha(cycle 4, strong square) == 4");
  all &= check(log, independence_number(StrongPower(c5, 2)).value == 5,
               "alpha(cycle 5, strong square) == 5");
  all &= check(log, independence_number(StrongPower(c6, 2)).value == 9,
               "alpha(cycle 6, strong square) == 9");
  all &= check(log, minimal_blocklength(c5, 5).blocklength == 2,
               "5 messages on cycle 5 need blocklength 2");
  all &= check(log, minimal_blocklength(c6, 6).blocklength == 2,
               "6 messages on cycle 6 need blocklength 2");
  all &= check(log, minimal_blocklength(c5, 2).blocklength == 1,
               "2 messages on cycle 5 need blocklength 1");
  all &= check(log, minimal_blocklength(c6, 1).blocklength == 1, "1 message is always length 1");
  const ConfusabilityGraph k3 = ConfusabilityGraph::complete(3);
  all &= check(log, is_zero_capacity(k3), "complete graph has zero capacity");
  all &= check(log,
               minimal_blocklength(k3, 2).reason == BlocklengthResult::Reason::graph_complete,
               "2 messages on a complete graph: unreachable at any blocklength");
  return all;
}

bool rep_alpha_c5_power2(std::string& log) {
  const ConfusabilityGraph c5 = ConfusabilityGraph::cycle(5);
  const StrongPower p(c5, 2);
  const AlphaResult a = independence_number(p);
  bool all = check(log, a.exact, "solver ran exactly (no cap fallback)");
  all &= check(log, a.value == 5, "alpha == 5");
  all &= check(log, a.witness.size() == 5, "witness has 5 vertices");
  bool indep = true;
  for (std::size_t i = 0; i < a.witness.size(); ++i) {
    for (std::size_t j = i + 1; j < a.witness.size(); ++j) {
      indep &= !p.adjacent(a.witness[i], a.witness[j]);
    }
  }
  all &= check(log, indep, "witness vertices are pairwise non-confusable (brute re-check)");
  for (std::int64_t v : a.witness) {
    const std::vector<int> tup = p.tuple_of(v);
    logf(log, "       witness codeword (%d, %d)", tup[0], tup[1]);
  }
  return all;
}

bool rep_sigma_formula(std::string& log) {
  bool all = true;
  const double pi = std::acos(-1.0);
  const double eps_grid[] = {0.1, 0.3, 0.5, 0.7, 0.9};
  double worst_even = 0.0;
  for (int k : {4, 6, 8}) {
    for (double eps : eps_grid) {
      const double got = smallest_singular_value(make_typewriter(k, eps));
      worst_even = std::max(worst_even, std::fabs(got - std::fabs(1.0 - 2.0 * eps)));
    }
  }
  all &= check(log, worst_even <= 1e-12, "even k: sigma_min == |1 - 2 eps| (within 1e-12)");
  logf(log, "       worst abs deviation %.3g", worst_even);

  double worst_odd = 0.0;
  for (int k : {3, 5, 7}) {
    for (double eps : eps_grid) {
      const double got = smallest_singular_value(make_typewriter(k, eps));
      double want = 2.0;
      for (int j = 0; j < k; ++j) {
        const double ang = 2.0 * pi * j / k;
        want = std::min(want, std::hypot(1.0 - eps + eps * std::cos(ang), eps * std::sin(ang)));
      }
      worst_odd = std::max(worst_odd, std::fabs(got - want));
    }
  }
  all &= check(log, worst_odd <= 1e-12, "odd k: sigma_min matches the circulant eigenvalue scan");
  logf(log, "       worst abs deviation %.3g", worst_odd);

  const double c5_half = smallest_singular_value(make_typewriter(5, 0.5));
  all &= check(log, std::fabs(c5_half - 0.30901699437494734) <= 1e-12,
               "5-ary channel at eps 1/2: sigma_min == 0.30901699437494734");
  return all;
}

bool rep_wrapper_identities(std::string& log) {
  const BanditInstance instance({1.0, 0.7, 0.4, 0.1, -0.2, -0.5});
  const TransitionMatrix w = make_typewriter(6, 0.3);
  const double delta = 0.1;
  const std::uint64_t seed = 42;
  const CleanRunResult clean = coupled_clean_run(instance, delta, seed);
  logf(log, "       clean run: chosen %d, %lld counted pulls", clean.chosen,
       static_cast<long long>(clean.tau));
  bool all = true;

  const ZeroErrorCode code = product_code(SupportSet(w), {0, 2, 4}, 2);
  const Scheme1Result s1 = run_case2_scheme1(instance, w, code, delta, seed);
  all &= check(log, s1.chosen == clean.chosen, "block wrapper picks the clean run's arm");
  all &= check(log, s1.tau_clean == clean.tau && s1.tau == 2 * clean.tau,
               "block wrapper: physical rounds == 2 x counted pulls, exactly");
  all &= check(log, audit_block_wrapper(s1.trace, s1.block_length).pass,
               "block wrapper trace audit");
  all &= check(log, audit_counted_match(s1.trace, clean.requests, clean.rewards).pass,
               "block wrapper counted rows replay the clean run bit for bit");

  const Schedule sched = parity_schedule(6);
  const Scheme2Result s2 = run_case2_scheme2(instance, w, sched, delta, seed);
  all &= check(log, s2.chosen == clean.chosen, "calendar wrapper picks the clean run's arm");
  all &= check(log, s2.tau_clean == clean.tau, "calendar wrapper counts exactly the clean pulls");
  all &= check(log, audit_parity_wrapper(s2.trace, sched).pass,
               "parity recurrence reproduces the calendar wrapper's round count");
  all &= check(log, audit_counted_match(s2.trace, clean.requests, clean.rewards).pass,
               "calendar wrapper counted rows replay the clean run bit for bit");

  const PlanPacketFamily family(6, DigitCode::scheduled(sched, SupportSet(w)));
  const PseResult p3 = run_case3_pse(instance, w, family, delta, seed);
  all &= check(log, p3.chosen == clean.chosen, "packetized wrapper picks the clean run's arm");
  all &= check(log, p3.tau_clean == clean.tau && p3.tau == p3.tau_clean + p3.packet_uses_total,
               "packetized wrapper: rounds == counted pulls + packet uses, exactly");
  all &= check(log, audit_packetized(p3.trace, p3.phases).pass, "packetized trace audit");
  all &= check(log, audit_counted_match(p3.trace, clean.requests, clean.rewards).pass,
               "packetized counted rows replay the clean run bit for bit");
  logf(log, "       wrapper rounds: block %lld, calendar %lld, packetized %lld",
       static_cast<long long>(s1.tau), static_cast<long long>(s2.tau),
       static_cast<long long>(p3.tau));
  return all;
}

bool rep_block_exact(std::string& log) {
  const BanditInstance instance({1.0, 0.5, 0.0, -0.5, -1.0});
  const TransitionMatrix w = make_typewriter(5, 0.3);
  const ZeroErrorCode code = slope_code_c5();
  bool all = true;
  for (std::int64_t rep = 0; rep < 50; ++rep) {
    const std::uint64_t seed = seed_combine(7, static_cast<std::uint64_t>(rep));
    const CleanRunResult clean = coupled_clean_run(instance, 0.1, seed);
    const Scheme1Result res = run_case2_scheme1(instance, w, code, 0.1, seed,
                                                PhasedSeEngine::kDefaultRoundCap, false);
    if (res.tau != 2 * clean.tau || res.chosen != clean.chosen) {
      logf(log, "[FAIL] rep %lld: tau %lld vs clean %lld", static_cast<long long>(rep),
           static_cast<long long>(res.tau), static_cast<long long>(clean.tau));
      all = false;
    }
  }
  return check(log, all, "50 replications: round count is exactly twice the clean run's");
}

bool rep_parity_exact(std::string& log) {
  const BanditInstance instance({1.0, 0.6, 0.2, -0.2, -0.6, -1.0});
  const TransitionMatrix w = make_typewriter(6, 0.3);
  const Schedule sched = parity_schedule(6);
  bool all = true;
  for (std::int64_t rep = 0; rep < 50; ++rep) {
    const std::uint64_t seed = seed_combine(11, static_cast<std::uint64_t>(rep));
    const Scheme2Result res = run_case2_scheme2(instance, w, sched, 0.1, seed);
    const bool ok = audit_parity_wrapper(res.trace, sched).pass &&
                    parity_predicted_tau(res.parity_log) == res.tau;
    if (!ok) {
      logf(log, "[FAIL] rep %lld: recurrence gives %lld, trace has %lld rounds",
           static_cast<long long>(rep),
           static_cast<long long>(parity_predicted_tau(res.parity_log)),
           static_cast<long long>(res.tau));
      all = false;
    }
  }
  return check(log, all,
               "50 replications: parity recurrence reproduces the round count exactly");
}

bool rep_pse_additive(std::string& log) {
  const BanditInstance instance({1.0, 0.6, 0.2, -0.2, -0.6, -1.0});
  const TransitionMatrix w = make_typewriter(6, 0.3);
  const PlanPacketFamily family(6, DigitCode::scheduled(parity_schedule(6), SupportSet(w)));
  bool all = true;
  for (std::int64_t rep = 0; rep < 50; ++rep) {
    const std::uint64_t seed = seed_combine(13, static_cast<std::uint64_t>(rep));
    const CleanRunResult clean = coupled_clean_run(instance, 0.1, seed);
    const PseResult res = run_case3_pse(instance, w, family, 0.1, seed);
    const bool ok = res.tau == res.tau_clean + res.packet_uses_total &&
                    res.tau_clean == clean.tau && res.chosen == clean.chosen &&
                    audit_packetized(res.trace, res.phases).pass;
    if (!ok) {
      logf(log, "[FAIL] rep %lld: tau %lld, counted %lld, packet uses %lld",
           static_cast<long long>(rep), static_cast<long long>(res.tau),
           static_cast<long long>(res.tau_clean),
           static_cast<long long>(res.packet_uses_total));
      all = false;
    }
  }
  return check(log, all,
               "50 replications: rounds split exactly into counted pulls + packet uses");
}

bool rep_delta_correctness(std::string& log) {
  ExperimentSpec spec;
  spec.protocol = "clean";
  spec.instance.mu = {1.0, 0.5, 0.0, -0.5, -1.0};
  spec.instance.delta = 0.1;
  spec.reps = 500;
  spec.seed = 21;
  const AggregateReport rep = run_sweep(spec);
  logf(log, "       %lld errors in %lld replications (delta 0.1)",
       static_cast<long long>(rep.errors), static_cast<long long>(rep.reps));
  return check(log, rep.error_rate <= spec.instance.delta,
               "observed error rate is within the declared confidence level");
}

bool rep_case1_inflation(std::string& log) {
  const BanditInstance instance({1.0, 0.7, 0.4, 0.1, -0.2, -0.5});
  const TransitionMatrix w = make_typewriter(6, 0.3);
  std::int64_t errors = 0;
  double tau_sum = 0.0;
  double clean_sum = 0.0;
  const std::int64_t reps = 100;
  Case1Options opt;
  opt.record_trace = false;
  for (std::int64_t rep = 0; rep < reps; ++rep) {
    const std::uint64_t seed = seed_combine(33, static_cast<std::uint64_t>(rep));
    const Case1Result res = run_case1(instance, w, 0.1, seed, opt);
    if (res.chosen != instance.best_arm()) ++errors;
    tau_sum += static_cast<double>(res.tau);
    clean_sum += static_cast<double>(coupled_clean_run(instance, 0.1, seed).tau);
  }
  const double ratio = tau_sum / clean_sum;
  logf(log, "       mean rounds: unmixing %.0f vs clean %.0f (ratio %.2f), %lld errors",
       tau_sum / static_cast<double>(reps), clean_sum / static_cast<double>(reps), ratio,
       static_cast<long long>(errors));
  bool all = check(log, static_cast<double>(errors) / static_cast<double>(reps) <= 0.1,
                   "unmixing identification stays within the confidence level");
  all &= check(log, ratio > 1.0, "noise inflates the sample bill above the clean run");
  return all;
}

bool rep_nonident_witness(std::string& log) {
  const TransitionMatrix w = make_typewriter(6, 0.5);
  const AliasedPair pair = aliased_instance_pair({0.9, 0.7, 0.5, 0.3, 0.2, 0.0}, -0.5);
  const std::vector<double> nu = mixed_means(w, pair.mu);
  const std::vector<double> nu_prime = mixed_means(w, pair.mu_prime);
  double worst = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    worst = std::max(worst, std::fabs(nu[i] - nu_prime[i]));
  }
  bool all = check(log, worst <= 1e-12, "aliased twin instances mix to identical command means");
  logf(log, "       max command-mean deviation %.3g", worst);
  const auto argmax = [](const std::vector<double>& v) {
    return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  };
  all &= check(log, argmax(pair.mu) != argmax(pair.mu_prime),
               "yet the two instances have different best arms");
  const double sigma = smallest_singular_value(w);
  all &= check(log, sigma <= 1e-12, "smallest singular value is numerically zero");
  bool threw = false;
  try {
    (void)run_case1(BanditInstance(pair.mu), w, 0.1, 1);
  } catch (const NonIdentifiable&) {
    threw = true;
  }
  all &= check(log, threw, "the unmixing protocol refuses to run on this channel");
  return all;
}

bool rep_concentration(std::string& log) {
  bool all = true;
  all &= check(log, std::fabs(beta(1, 5, 0.1) - 3.4616367652045708) <= 1e-12,
               "confidence radius at t=1, k=5, delta=0.1 matches the frozen constant");
  bool monotone = true;
  for (std::int64_t t = 1; t < 1000; ++t) {
    if (!(beta(t + 1, 5, 0.1) < beta(t, 5, 0.1))) monotone = false;
  }
  all &= check(log, monotone, "confidence radius is strictly decreasing over t = 1..1000");

  {
    const BanditInstance inst({0.5, 0.0});
    const RewardPools pools(inst, 99);
    const std::int64_t n = 4000;
    const double rad = beta(n, 2, 0.1);
    bool within = true;
    for (int arm = 0; arm < 2; ++arm) {
      double sum = 0.0;
      for (std::int64_t i = 0; i < n; ++i) sum += pools.counted(arm, i);
      const double dev = std::fabs(sum / static_cast<double>(n) - inst.mu(arm));
      logf(log, "       gaussian arm %d: |mean - mu| = %.4f vs radius %.4f", arm, dev, rad);
      within &= dev <= rad;
    }
    all &= check(log, within, "gaussian pool means sit inside the confidence radius");
  }
  {
    const BanditInstance inst({0.7, 0.3}, RewardLaw::bernoulli);
    const RewardPools pools(inst, 5);
    const std::int64_t n = 4000;
    bool binary = true;
    bool close = true;
    for (int arm = 0; arm < 2; ++arm) {
      double sum = 0.0;
      for (std::int64_t i = 0; i < n; ++i) {
        const double v = pools.counted(arm, i);
        binary &= (v == 0.0 || v == 1.0);
        sum += v;
      }
      close &= std::fabs(sum / static_cast<double>(n) - inst.mu(arm)) <= 0.05;
    }
    all &= check(log, binary, "bernoulli pools draw only 0/1");
    all &= check(log, close, "bernoulli pool frequencies track their means (within 0.05)");
  }
  {
    const BanditInstance inst({0.25, -0.75}, RewardLaw::deterministic);
    const RewardPools pools(inst, 3);
    const bool exact = pools.counted(0, 0) == 0.25 && pools.counted(0, 7) == 0.25 &&
                       pools.counted(1, 0) == -0.75 && pools.uncounted(1, 2) == -0.75;
    all &= check(log, exact, "deterministic pools return the mean verbatim");
  }
  return all;
}

struct ReproduceImpl {
  ReproduceEntry entry;
  bool (*fn)(std::string&);
};

const std::vector<ReproduceImpl>& impl_catalog() {
  static const std::vector<ReproduceImpl> catalog = {
      {{"zero-error-exact", "exhaustive decode check for the named zero-error codes"},
       rep_zero_error_exact},
      {{"combinatorics", "independence numbers and minimal blocklengths on small cycles"},
       rep_combinatorics},
      {{"alpha-c5-power2", "exact alpha of the strong square of the 5-cycle, with witness"},
       rep_alpha_c5_power2},
      {{"sigma-formula", "smallest singular value vs. closed forms on cyclic channels"},
       rep_sigma_formula},
      {{"wrapper-identities", "one seed, all wrappers: coupling and round-count identities"},
       rep_wrapper_identities},
      {{"block-exact", "block wrapper costs exactly blocklength x clean rounds"},
       rep_block_exact},
      {{"parity-exact", "calendar wrapper round count matches the parity recurrence"},
       rep_parity_exact},
      {{"pse-additive", "packetized wrapper rounds = counted pulls + packet uses"},
       rep_pse_additive},
      {{"delta-correctness", "clean runner holds its confidence level over 500 replications"},
       rep_delta_correctness},
      {{"case1-inflation", "unmixing protocol: correct, but pays the conditioning premium"},
       rep_case1_inflation},
      {{"nonident-witness", "aliased instances on the even-alphabet half-slip channel"},
       rep_nonident_witness},
      {{"concentration", "confidence radius constants and reward-pool statistics"},
       rep_concentration},
  };
  return catalog;
}

}  // namespace

const std::vector<ReproduceEntry>& reproduce_catalog() {
  static const std::vector<ReproduceEntry> entries = [] {
    std::vector<ReproduceEntry> out;
    for (const ReproduceImpl& impl : impl_catalog()) out.push_back(impl.entry);
    return out;
  }();
  return entries;
}

bool run_reproduce(const std::string& id, std::string& log) {
  for (const ReproduceImpl& impl : impl_catalog()) {
    if (impl.entry.id != id) continue;
    try {
      return impl.fn(log);
    } catch (const std::exception& e) {
      logf(log, "[FAIL] unexpected exception: %s", e.what());
      return false;
    }
  }
  logf(log, "unknown reproduce id \"%s\"; available:", id.c_str());
  for (const ReproduceImpl& impl : impl_catalog()) {
    logf(log, "  %-18s %s", impl.entry.id.c_str(), impl.entry.what.c_str());
  }
  return false;
}

}  // namespace banditlink
