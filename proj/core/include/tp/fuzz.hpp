#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tp/audit.hpp"
#include "tp/runner.hpp"
#include "tp/scenario.hpp"

namespace tp {

// Extra invariant evaluated after every step; used to inject checks.
using LiveCheck = std::function<std::vector<AuditFinding>(const Protocol&)>;

// Random but well-formed command sequence over a small world: a handful of
// users, a juror pool and a few tokens. Names and token ids are sometimes
// out of range so rejections get exercised too.
Scenario generate_scenario(std::uint64_t seed, std::size_t steps);

// A holder keeps a token while an attacker files a report against it; the
// jury is seeded with up to f colluding R votes and the rest vote freely.
Scenario generate_malicious_report(std::uint64_t seed);

// Runs the scenario with live checks after each step (stopping at the first
// failing step) and the offline log audit at the end.
std::vector<AuditFinding> check_scenario(const Scenario& scenario, const LiveCheck& extra = {});

// For every filed report closed FOR_HOLDER: the reporter's balance right
// before escrow versus right after the case closed. Findings for any case
// where it did not strictly decrease.
struct ReportEconomics {
  CaseId case_id = 0;
  Amount before;
  Amount after;
};
std::vector<ReportEconomics> for_holder_economics(const std::vector<EventRecord>& events);

// Delta debugging over scenario steps. `fails` must hold for the input;
// the result still fails and no single step can be removed from it.
using FailurePredicate = std::function<bool(const Scenario&)>;
Scenario minimize_scenario(const Scenario& scenario, const FailurePredicate& fails);

struct FuzzOptions {
  std::uint64_t seed = 1;
  std::size_t iterations = 100;
  std::size_t steps = 200;
  // Every n-th iteration runs a malicious-report scenario (0 disables).
  std::size_t malicious_every = 4;
  LiveCheck extra;
  bool minimize = true;
};

struct FuzzFailure {
  Scenario scenario;
  Scenario minimized;
  std::vector<AuditFinding> findings;
};

struct FuzzStats {
  std::size_t scenarios = 0;
  std::size_t operations = 0;
  std::size_t rejected = 0;
  std::size_t transfers = 0;
  std::size_t guard_rejections = 0;
  std::size_t verdicts_safe = 0;
  std::size_t verdicts_may_lost = 0;
  std::size_t verdicts_hacked = 0;
  std::size_t malicious_scenarios = 0;
  std::size_t for_holder_closures = 0;
  std::size_t for_holder_not_decreasing = 0;
  std::vector<FuzzFailure> failures;

  bool ok() const { return failures.empty() && for_holder_not_decreasing == 0; }
};

// Stops at the first failing scenario.
FuzzStats run_fuzz(const FuzzOptions& options);

}  // namespace tp
