// sim: run, replay and inspect protocol scenarios.
//
// Exit status: 0 ok, 1 invariant / conservation failure or replay
// divergence, 2 usage or parse error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tp/audit.hpp"
#include "tp/config.hpp"
#include "tp/fuzz.hpp"
#include "tp/replay.hpp"
#include "tp/report.hpp"
#include "tp/runner.hpp"
#include "tp/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

std::vector<tp::EventRecord> load_events(const std::string& path) {
  return tp::parse_log(tp::read_log_file(path));
}

int cmd_run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out,
            const std::string& config_path, bool quiet) {
  tp::Scenario sc = tp::load_scenario(path);
  tp::RunOptions opts;
  opts.seed = seed;
  if (!config_path.empty()) opts.base = tp::load_config_file(config_path);
  const tp::RunResult result = tp::run_scenario(sc, opts);
  if (!out.empty()) {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw tp::Error(tp::Errc::InvalidInput, "cannot write " + out);
    f << result.jsonl();
  }
  const tp::RunReport report = tp::build_report(result.events);
  const auto findings = tp::audit_log(result.events);
  if (!quiet) {
    for (const auto& o : result.outcomes) {
      if (!o.ok()) std::cout << "step " << o.step << " " << o.verb << ": " << o.message << "\n";
    }
    std::cout << tp::format_report(report);
  }
  for (const auto& f : findings) std::cout << "audit: " << f.to_string() << "\n";
  return report.ok() && findings.empty() ? kOk : kFailure;
}

int cmd_replay(const std::string& path) {
  const tp::ReplayResult r = tp::replay_file(path);
  if (r.pass) {
    std::cout << "replay ok: " << r.events << " events\n";
    return kOk;
  }
  std::cout << "replay FAILED at seq " << r.divergence_seq.value_or(0) << ": " << r.reason << "\n";
  return kFailure;
}

int cmd_report(const std::string& path) {
  const auto events = load_events(path);
  const tp::RunReport report = tp::build_report(events);
  std::cout << tp::format_report(report);
  return report.ok() ? kOk : kFailure;
}

int cmd_state(const std::string& path, tp::TokenId id) {
  const tp::RunReport report = tp::build_report(load_events(path));
  auto it = report.tokens.find(id);
  if (it == report.tokens.end()) {
    std::cerr << "no token " << id << " in log\n";
    return kUsage;
  }
  std::cout << tp::format_token_state(it->second) << "\n";
  return kOk;
}

int cmd_case(const std::string& path, tp::CaseId id) {
  const tp::RunReport report = tp::build_report(load_events(path));
  auto it = report.cases.find(id);
  if (it == report.cases.end()) {
    std::cerr << "no case " << id << " in log\n";
    return kUsage;
  }
  std::cout << tp::format_case(report, it->second) << "\n";
  return kOk;
}

int cmd_explain(const std::string& path, tp::RequestId id) {
  const auto events = load_events(path);
  std::optional<tp::SimConfig> config;
  for (const auto& e : events) {
    if (e.kind == "Genesis") config = tp::SimConfig::from_json(e.payload.at("config"));
    if (e.kind == "RiskRequested" && e.payload.at("request_id") == id) {
      std::cout << "request " << id << " at seq " << e.seq << " t=" << e.time.ticks << "\n";
      std::cout << "  intent " << e.payload.at("intent").dump() << "\n";
    }
    if (e.kind == "RiskFulfilled" && e.payload.at("request_id") == id) {
      const tp::json& p = e.payload;
      std::cout << "verdict " << p.at("status").get<std::string>() << " at seq " << e.seq << "\n";
      for (const auto& h : p.at("hits")) {
        std::cout << "  " << h.at("rule").get<std::string>() << " (" << h.at("severity").get<std::string>()
                  << "): " << h.at("detail").get<std::string>() << "\n";
      }
      for (const auto& [k, v] : p.at("features").items()) std::cout << "  feature " << k << " = " << v.dump() << "\n";
      const auto features = tp::FeatureVector::from_json(p.at("features"));
      const auto again = tp::Drm::classify(features, config.value_or(tp::SimConfig{}).risk);
      const bool same = again.status == tp::risk_status_from_string(p.at("status").get<std::string>()) &&
                        again.to_json().at("hits") == p.at("hits");
      std::cout << "recomputed: " << tp::to_string(again.status) << (same ? " (matches)" : " (MISMATCH)") << "\n";
      return same ? kOk : kFailure;
    }
  }
  std::cerr << "no fulfilled request " << id << " in log\n";
  return kUsage;
}

int cmd_fuzz(std::size_t iters, std::size_t steps, std::uint64_t seed) {
  tp::FuzzOptions opts;
  opts.iterations = iters;
  opts.steps = steps;
  opts.seed = seed;
  const tp::FuzzStats s = tp::run_fuzz(opts);
  std::cout << "scenarios " << s.scenarios << " operations " << s.operations << " rejected " << s.rejected
            << " transfers " << s.transfers << " guard_rejections " << s.guard_rejections << "\n";
  std::cout << "verdicts safe " << s.verdicts_safe << " may_lost " << s.verdicts_may_lost << " hacked "
            << s.verdicts_hacked << "\n";
  std::cout << "malicious reports " << s.malicious_scenarios << " for_holder closures " << s.for_holder_closures
            << " not decreasing " << s.for_holder_not_decreasing << "\n";
  for (const auto& f : s.failures) {
    std::cout << "FAILURE in " << f.scenario.display_name() << "\n";
    for (const auto& finding : f.findings) std::cout << "  " << finding.to_string() << "\n";
    std::cout << "minimized counterexample (" << f.minimized.steps.size() << " steps):\n"
              << tp::format_scenario(f.minimized);
  }
  return s.ok() ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"token protocol simulator"};
  app.require_subcommand(1);

  std::string path;
  std::string out;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "execute a scenario");
  run->add_option("scenario", path, "scenario file")->required();
  run->add_option("--seed", seed, "override the scenario seed");
  run->add_option("--out", out, "write the event log (JSONL)");
  run->add_option("--config", config_path, "key=value configuration file");
  run->add_flag("--quiet", quiet, "print audit findings only");

  auto* replay = app.add_subcommand("replay", "verify a log by re-execution");
  replay->add_option("log", path)->required();

  auto* report = app.add_subcommand("report", "summarize a log");
  report->add_option("log", path)->required();

  std::uint64_t id = 0;
  auto* state = app.add_subcommand("state", "final state of one token");
  state->add_option("log", path)->required();
  state->add_option("token_id", id)->required();

  auto* kase = app.add_subcommand("case", "arbitration case record");
  kase->add_option("log", path)->required();
  kase->add_option("case_id", id)->required();

  auto* explain = app.add_subcommand("explain", "features and rule hits for a risk request");
  explain->add_option("log", path)->required();
  explain->add_option("request_id", id)->required();

  std::size_t iters = 100;
  std::size_t steps = 200;
  std::uint64_t fuzz_seed = 1;
  auto* fuzz = app.add_subcommand("fuzz", "random scenarios against the invariants");
  fuzz->add_option("--iters", iters, "scenarios to run");
  fuzz->add_option("--steps", steps, "steps per generated scenario");
  fuzz->add_option("--seed", fuzz_seed, "base seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(path, seed, out, config_path, quiet);
    if (*replay) return cmd_replay(path);
    if (*report) return cmd_report(path);
    if (*state) return cmd_state(path, id);
    if (*kase) return cmd_case(path, id);
    if (*explain) return cmd_explain(path, id);
    if (*fuzz) return cmd_fuzz(iters, steps, fuzz_seed);
  } catch (const tp::Error& e) {
    std::cerr << e.what() << "\n";
    if (e.code() == tp::Errc::ParseError || e.code() == tp::Errc::ConfigError) return kUsage;
    return kFailure;
  }
  return kUsage;
}
