// Acceptance gate: nine end-to-end checks, one [PASS]/[FAIL] line each, exit
// code = number of failures among the criteria that ran.
//
//   acceptance             run all nine
//   acceptance --skip N    drop criterion N (repeatable)
//   acceptance --only N    run just criterion N (repeatable)
//
// Criterion 7 measures the case-1 error inflation between two slip rates and
// checks the mean squared error ratio against the band [8, 32]. The measured
// ratio on this construction sits near 4.9 — the l2 error aggregates every
// singular direction of the channel, not just the worst one — so the check
// fails honestly. It is registered in ctest as an expected failure; see
// README.md.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <set>
#include <string>
#include <vector>

#include "banditlink/bandit.hpp"
#include "banditlink/channel.hpp"
#include "banditlink/codes.hpp"
#include "banditlink/errors.hpp"
#include "banditlink/graphs.hpp"
#include "banditlink/protocols.hpp"

using namespace banditlink;

namespace {

const std::vector<double> kMu5 = {1.0, 0.5, 0.0, -0.5, -1.0};        // gaps 0.5
const std::vector<double> kMu6 = {1.0, 0.7, 0.4, 0.1, -0.2, -0.5};   // gaps 0.3

constexpr std::int64_t kReps = 2000;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// ---------------------------------------------------------------------------
// 1. zero-error decode exactness on every support-consistent output tuple

std::vector<std::vector<int>> reachable_tuples(const SupportSet& s, const std::vector<int>& cw) {
  std::vector<std::vector<int>> out{{}};
  for (int x : cw) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out)
      for (int y : s.of(x)) {
        auto t = prefix;
        t.push_back(y);
        next.push_back(std::move(t));
      }
    out = std::move(next);
  }
  return out;
}

Outcome criterion1() {
  std::int64_t tuples = 0, wrong = 0;
  {
    const SupportSet s(make_typewriter(5, 0.3));
    const auto code = slope_code_c5();
    for (int m = 0; m < code.message_count(); ++m)
      for (const auto& t : reachable_tuples(s, code.codeword(m))) {
        ++tuples;
        if (code.decode(t) != m) ++wrong;
      }
  }
  {
    const SupportSet s(make_typewriter(6, 0.3));
    const auto code = product_code(s, {0, 2, 4}, 2);
    for (int m = 0; m < code.message_count(); ++m)
      for (const auto& t : reachable_tuples(s, code.codeword(m))) {
        ++tuples;
        if (code.decode(t) != m) ++wrong;
      }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%lld reachable output tuples decoded, %lld mismatches",
                static_cast<long long>(tuples), static_cast<long long>(wrong));
  return {wrong == 0 && tuples == 56, buf};
}

// ---------------------------------------------------------------------------
// 2. exact combinatorics: independence numbers and minimal blocklengths

Outcome criterion2() {
  const auto c5 = ConfusabilityGraph::cycle(5);
  const auto c6 = ConfusabilityGraph::cycle(6);
  struct Check {
    const char* label;
    std::int64_t got, want;
  };
  const std::vector<Check> checks = {
      {"alpha(C5)", independence_number(c5).value, 2},
      {"alpha(C6)", independence_number(c6).value, 3},
      {"alpha(C5 power 2)", independence_number(StrongPower(c5, 2)).value, 5},
      {"alpha(C6 power 2)", independence_number(StrongPower(c6, 2)).value, 9},
      {"n*(C5, 5 msgs)", minimal_blocklength(c5, 5).blocklength.value_or(-1), 2},
      {"n*(C6, 6 msgs)", minimal_blocklength(c6, 6).blocklength.value_or(-1), 2},
  };
  std::string detail;
  bool pass = true;
  for (const auto& c : checks) {
    if (!detail.empty()) detail += ", ";
    detail += c.label;
    detail += "=" + std::to_string(c.got);
    if (c.got != c.want) {
      pass = false;
      detail += "(want " + std::to_string(c.want) + ")";
    }
  }
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// 3. spectral closed form on the even typewriter

Outcome criterion3() {
  double worst = 0.0;
  for (int i = 1; i <= 19; ++i) {
    const double eps = 0.05 * i;
    const double sigma = smallest_singular_value(make_typewriter(6, eps));
    worst = std::max(worst, std::fabs(sigma - std::fabs(1.0 - 2.0 * eps)));
  }
  char buf[120];
  std::snprintf(buf, sizeof buf, "max |sigma_min - |1-2eps|| = %.3g over eps = 0.05..0.95", worst);
  return {worst <= 1e-8, buf};
}

// ---------------------------------------------------------------------------
// 4. round-count identities for both case-2 wrappers, every replication

Outcome criterion4() {
  std::int64_t bad = 0;
  std::string first;

  auto note = [&](const char* cfg, std::int64_t rep, const char* what) {
    ++bad;
    if (first.empty())
      first = std::string(cfg) + " rep " + std::to_string(rep) + ": " + what;
  };

  // blocks on the 5-ary channel (two-letter codewords)
  {
    const BanditInstance inst(kMu5);
    const auto w = make_typewriter(5, 0.3);
    const auto code = slope_code_c5();
    for (std::int64_t rep = 0; rep < kReps; ++rep) {
      const std::uint64_t seed = seed_combine(1001u, static_cast<std::uint64_t>(rep));
      const auto res = run_case2_scheme1(inst, w, code, 0.1, seed);
      const auto clean = coupled_clean_run(inst, 0.1, seed);
      if (res.chosen != clean.chosen) note("blocks-k5", rep, "chosen arm diverged");
      else if (res.tau_clean != clean.tau) note("blocks-k5", rep, "counted pulls diverged");
      else if (res.tau != 2 * clean.tau) note("blocks-k5", rep, "tau != 2 tau_clean");
    }
  }
  // blocks on the 6-ary channel (9-message product code)
  {
    const BanditInstance inst(kMu6);
    const auto w = make_typewriter(6, 0.3);
    const auto code = product_code(SupportSet(w), {0, 2, 4}, 2);
    for (std::int64_t rep = 0; rep < kReps; ++rep) {
      const std::uint64_t seed = seed_combine(1002u, static_cast<std::uint64_t>(rep));
      const auto res = run_case2_scheme1(inst, w, code, 0.1, seed);
      const auto clean = coupled_clean_run(inst, 0.1, seed);
      if (res.chosen != clean.chosen) note("blocks-k6", rep, "chosen arm diverged");
      else if (res.tau_clean != clean.tau) note("blocks-k6", rep, "counted pulls diverged");
      else if (res.tau != 2 * clean.tau) note("blocks-k6", rep, "tau != 2 tau_clean");
    }
  }
  // parity calendar on the 6-ary channel: recurrence must reproduce tau
  {
    const BanditInstance inst(kMu6);
    const auto w = make_typewriter(6, 0.3);
    const auto sched = parity_schedule(6);
    for (std::int64_t rep = 0; rep < kReps; ++rep) {
      const std::uint64_t seed = seed_combine(1003u, static_cast<std::uint64_t>(rep));
      const auto res = run_case2_scheme2(inst, w, sched, 0.1, seed);
      const auto clean = coupled_clean_run(inst, 0.1, seed);
      if (res.chosen != clean.chosen) note("parity-k6", rep, "chosen arm diverged");
      else if (res.tau_clean != clean.tau) note("parity-k6", rep, "counted pulls diverged");
      else if (static_cast<std::int64_t>(res.parity_log.size()) != clean.tau)
        note("parity-k6", rep, "parity log length diverged");
      else if (parity_predicted_tau(res.parity_log) != res.tau)
        note("parity-k6", rep, "recurrence missed tau");
    }
  }

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%lld replications x 3 configurations, %lld identity violations%s%s",
                static_cast<long long>(kReps), static_cast<long long>(bad),
                first.empty() ? "" : "; first: ", first.c_str());
  return {bad == 0, buf};
}

// ---------------------------------------------------------------------------
// 5. packetized decomposition: tau - sum n_r == tau_clean, fixed n_r

Outcome criterion5() {
  std::int64_t bad = 0;
  std::string first;
  auto note = [&](const char* cfg, std::int64_t rep, const char* what) {
    ++bad;
    if (first.empty())
      first = std::string(cfg) + " rep " + std::to_string(rep) + ": " + what;
  };

  struct Config {
    const char* label;
    BanditInstance inst;
    TransitionMatrix w;
    PlanPacketFamily family;
    std::int64_t n_r;
    std::uint64_t base;
  };
  const auto w5 = make_typewriter(5, 0.3);
  const auto w6 = make_typewriter(6, 0.3);
  std::vector<Config> configs;
  configs.push_back({"packets-k5", BanditInstance(kMu5), w5,
                     PlanPacketFamily(5, DigitCode::block(slope_code_c5())), 6, 2001u});
  configs.push_back({"packets-k6", BanditInstance(kMu6), w6,
                     PlanPacketFamily(6, DigitCode::scheduled(parity_schedule(6), SupportSet(w6))),
                     4, 2002u});

  for (const auto& cfg : configs) {
    for (std::int64_t rep = 0; rep < kReps; ++rep) {
      const std::uint64_t seed = seed_combine(cfg.base, static_cast<std::uint64_t>(rep));
      const auto res = run_case3_pse(cfg.inst, cfg.w, cfg.family, 0.1, seed);
      const auto clean = coupled_clean_run(cfg.inst, 0.1, seed);
      if (res.chosen != clean.chosen) {
        note(cfg.label, rep, "chosen arm diverged");
        continue;
      }
      if (res.tau - res.packet_uses_total != res.tau_clean ||
          res.tau_clean != clean.tau) {
        note(cfg.label, rep, "additive decomposition broke");
        continue;
      }
      for (const auto& ph : res.phases)
        if (ph.packet_uses != cfg.n_r) {
          note(cfg.label, rep, "phase install length drifted");
          break;
        }
    }
  }

  char buf[200];
  std::snprintf(buf, sizeof buf,
                "%lld replications x 2 plan families (install lengths 6 and 4), %lld violations%s%s",
                static_cast<long long>(kReps), static_cast<long long>(bad),
                first.empty() ? "" : "; first: ", first.c_str());
  return {bad == 0, buf};
}

// ---------------------------------------------------------------------------
// 6. delta-correctness of all four protocols

Outcome criterion6() {
  const double delta = 0.1;
  const double bound = delta + 3.0 * std::sqrt(delta * (1.0 - delta) / kReps);
  const auto w5 = make_typewriter(5, 0.3);
  const auto w6 = make_typewriter(6, 0.3);
  const BanditInstance i5(kMu5);
  const BanditInstance i6(kMu6);
  const auto code5 = slope_code_c5();
  const auto sched6 = parity_schedule(6);
  const PlanPacketFamily family6(6, DigitCode::scheduled(sched6, SupportSet(w6)));

  std::string detail;
  bool pass = true;
  auto record = [&](const char* label, std::int64_t errors) {
    const double rate = static_cast<double>(errors) / kReps;
    if (!detail.empty()) detail += ", ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.4f", label, rate);
    detail += buf;
    if (rate > bound) pass = false;
  };

  std::int64_t e = 0;
  for (std::int64_t rep = 0; rep < kReps; ++rep)
    e += coupled_clean_run(i5, delta, seed_combine(3001u, static_cast<std::uint64_t>(rep)))
                 .chosen != i5.best_arm();
  record("clean", e);

  e = 0;
  for (std::int64_t rep = 0; rep < kReps; ++rep)
    e += run_case2_scheme1(i5, w5, code5, delta,
                           seed_combine(3002u, static_cast<std::uint64_t>(rep)),
                           PhasedSeEngine::kDefaultRoundCap, false)
                 .chosen != i5.best_arm();
  record("blocks", e);

  e = 0;
  for (std::int64_t rep = 0; rep < kReps; ++rep)
    e += run_case2_scheme2(i6, w6, sched6, delta,
                           seed_combine(3003u, static_cast<std::uint64_t>(rep)),
                           PhasedSeEngine::kDefaultRoundCap, false)
                 .chosen != i6.best_arm();
  record("calendar", e);

  e = 0;
  for (std::int64_t rep = 0; rep < kReps; ++rep)
    e += run_case3_pse(i6, w6, family6, delta,
                       seed_combine(3004u, static_cast<std::uint64_t>(rep)),
                       PhasedSeEngine::kDefaultRoundCap, false)
                 .chosen != i6.best_arm();
  record("packets", e);

  char buf[64];
  std::snprintf(buf, sizeof buf, " (allowed %.4f)", bound);
  return {pass, detail + buf};
}

// ---------------------------------------------------------------------------
// 7. case-1 estimation error inflation between slip rates

Outcome criterion7() {
  const BanditInstance inst(kMu6);
  const std::int64_t budget = 50000;
  const std::int64_t reps = 200;
  auto mean_sq_error = [&](double eps) {
    const auto w = make_typewriter(6, eps);
    double total = 0.0;
    for (std::int64_t rep = 0; rep < reps; ++rep) {
      const auto mu_hat = case1_fixed_budget_estimate(
          inst, w, budget, seed_combine(4001u, static_cast<std::uint64_t>(rep)));
      double sq = 0.0;
      for (int a = 0; a < 6; ++a) {
        const double d = mu_hat[static_cast<std::size_t>(a)] - inst.mu(a);
        sq += d * d;
      }
      total += sq;
    }
    return total / static_cast<double>(reps);
  };
  const double noisy = mean_sq_error(0.4);
  const double quiet = mean_sq_error(0.1);
  const double ratio = noisy / quiet;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "mean squared l2 error %.4g (eps 0.4) / %.4g (eps 0.1): ratio %.3f vs band [8, 32]",
                noisy, quiet, ratio);
  return {ratio >= 8.0 && ratio <= 32.0, buf};
}

// ---------------------------------------------------------------------------
// 8. non-identifiability witness at eps = 1/2

Outcome criterion8() {
  const auto pair = aliased_instance_pair({0.9, 0.7, 0.5, 0.3, 0.2, 0.0}, -0.5);
  const auto w = make_typewriter(6, 0.5);
  const auto nu = mixed_means(w, pair.mu);
  const auto nup = mixed_means(w, pair.mu_prime);
  double gap = 0.0;
  for (int x = 0; x < 6; ++x) gap = std::max(gap, std::fabs(nu[x] - nup[x]));
  double mu_gap = 0.0;
  for (int a = 0; a < 6; ++a) mu_gap = std::max(mu_gap, std::fabs(pair.mu[a] - pair.mu_prime[a]));
  const int best = BanditInstance(pair.mu).best_arm();
  const int best_prime = BanditInstance(pair.mu_prime).best_arm();
  char buf[180];
  std::snprintf(buf, sizeof buf,
                "best arms %d vs %d, max |mu - mu'| = %.2f, max |W mu - W mu'| = %.3g",
                best, best_prime, mu_gap, gap);
  return {best != best_prime && mu_gap > 0.0 && gap <= 1e-12, buf};
}

// ---------------------------------------------------------------------------
// 9. anytime confidence envelope: violating replications stay under delta

Outcome criterion9() {
  const BanditInstance inst(kMu5);
  std::string detail;
  bool pass = true;
  for (double delta : {0.05, 0.1}) {
    std::int64_t violating = 0;
    for (std::int64_t rep = 0; rep < kReps; ++rep) {
      const std::uint64_t seed =
          seed_combine(delta == 0.05 ? 5001u : 5002u, static_cast<std::uint64_t>(rep));
      const auto run = coupled_clean_run(inst, delta, seed);
      std::vector<double> sum(5, 0.0);
      std::vector<std::int64_t> n(5, 0);
      bool violated = false;
      for (std::size_t i = 0; i < run.requests.size() && !violated; ++i) {
        const int a = run.requests[i];
        sum[static_cast<std::size_t>(a)] += run.rewards[i];
        const std::int64_t t = ++n[static_cast<std::size_t>(a)];
        const double mean = sum[static_cast<std::size_t>(a)] / static_cast<double>(t);
        if (std::fabs(mean - inst.mu(a)) > beta(t, 5, delta)) violated = true;
      }
      if (violated) ++violating;
    }
    const double rate = static_cast<double>(violating) / kReps;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%sdelta %.2f: violating fraction %.4f",
                  detail.empty() ? "" : ", ", delta, rate);
    detail += buf;
    if (rate > delta) pass = false;
  }
  return {pass, detail};
}

// ---------------------------------------------------------------------------

struct Criterion {
  int id;
  const char* label;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "zero-error decode exactness", criterion1},
    {2, "independence numbers and blocklengths", criterion2},
    {3, "spectral closed form", criterion3},
    {4, "wrapper round-count identities", criterion4},
    {5, "packetized decomposition", criterion5},
    {6, "delta-correctness of all protocols", criterion6},
    {7, "case-1 error inflation band", criterion7},
    {8, "non-identifiability witness", criterion8},
    {9, "anytime confidence envelope", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> selected;
  for (const auto& c : kCriteria) selected.insert(c.id);
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const bool skip = std::strcmp(argv[i], "--skip") == 0;
    const bool keep = std::strcmp(argv[i], "--only") == 0;
    if ((skip || keep) && i + 1 < argc) {
      const int id = std::atoi(argv[++i]);
      if (id < 1 || id > 9) {
        std::fprintf(stderr, "criterion id out of range: %d\n", id);
        return 64;
      }
      if (skip) selected.erase(id);
      else only.insert(id);
    } else {
      std::fprintf(stderr, "usage: %s [--skip N]... [--only N]...\n", argv[0]);
      return 64;
    }
  }
  if (!only.empty()) selected = only;

  int failures = 0;
  for (const auto& c : kCriteria) {
    if (!selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] criterion %d: %s — %s (%.1fs)\n", out.pass ? "PASS" : "FAIL", c.id,
                c.label, out.detail.c_str(), secs);
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
