#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "banditlink/config.hpp"

namespace banditlink {

// Bumped when the report layout changes / when any random stream derivation
// changes. Recorded in every report so archived numbers stay attributable.
inline constexpr int kReportSchemaVersion = 1;
inline constexpr int kRngVersion = 1;

struct RepRecord {
  std::int64_t rep = 0;
  std::uint64_t seed = 0;  // derived: seed_combine(base, rep)
  int chosen = -1;
  bool correct = false;
  std::int64_t tau = 0;        // physical rounds
  std::int64_t tau_clean = 0;  // counted pulls
  int phases = 0;
  bool identity_checked = false;
  bool identity_pass = false;
  double slowdown = 1.0;  // tau / tau_clean (1 when no pulls)
};

struct AggregateReport {
  int schema_version = kReportSchemaVersion;
  int rng_version = kRngVersion;
  std::string protocol;
  std::int64_t reps = 0;
  double delta = 0.0;
  std::int64_t errors = 0;
  double error_rate = 0.0;
  double error_ci99_half_width = 0.0;  // normal approximation
  double tau_mean = 0.0;
  std::int64_t tau_p50 = 0;
  std::int64_t tau_p90 = 0;
  std::int64_t tau_max = 0;
  double slowdown_mean = 0.0;
  double slowdown_max = 0.0;
  std::int64_t identity_checked = 0;
  std::int64_t identity_passed = 0;
  std::vector<RepRecord> rep_records;  // by rep index, regardless of thread count
};

// Replicated runs of one experiment. Rep r is seeded with
// seed_combine(spec.seed, r) and stored by index, so the report is
// byte-identical across thread counts and across runs.
AggregateReport run_sweep(const ExperimentSpec& spec);

std::string report_csv(const AggregateReport& report);   // one row per rep
std::string report_json(const AggregateReport& report);  // aggregate only

// Canned end-to-end checks, runnable by id. Each writes a human-readable
// account of what it measured into `log` and returns overall pass/fail.
struct ReproduceEntry {
  std::string id;
  std::string what;
};
const std::vector<ReproduceEntry>& reproduce_catalog();
bool run_reproduce(const std::string& id, std::string& log);

}  // namespace banditlink
