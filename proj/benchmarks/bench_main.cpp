#include <benchmark/benchmark.h>

#include <string>

#include "tp/audit.hpp"
#include "tp/das.hpp"
#include "tp/drm.hpp"
#include "tp/fuzz.hpp"
#include "tp/replay.hpp"
#include "tp/runner.hpp"
#include "tp/scenario.hpp"

namespace {

tp::Scenario canned(const char* name) {
  return tp::load_scenario(std::string(TP_SCENARIO_DIR) + "/" + name + ".tps");
}

void BM_Classify(benchmark::State& state) {
  tp::FeatureVector f;
  f.price = tp::Amount::from_int(3);
  f.floor = tp::Amount::from_int(10);
  f.turnover_count = 4;
  f.recipient_credit = tp::Score::from_int(12);
  const tp::RiskConfig config;
  for (auto _ : state) benchmark::DoNotOptimize(tp::Drm::classify(f, config));
}
BENCHMARK(BM_Classify);

void BM_QuorumTally(benchmark::State& state) {
  const auto f = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) {
    tp::QuorumTally t(f);
    std::optional<tp::Vote> v;
    for (std::uint32_t i = 0; !v; ++i) v = t.add(i % 3 == 0 ? tp::Vote::ForReporter : tp::Vote::ForHolder);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_QuorumTally)->Arg(1)->Arg(2)->Arg(10);

void BM_RunScenario(benchmark::State& state) {
  const auto sc = canned("replevin");
  for (auto _ : state) benchmark::DoNotOptimize(tp::run_scenario(sc).digest);
}
BENCHMARK(BM_RunScenario);

void BM_GeneratedRun(benchmark::State& state) {
  const auto sc = tp::generate_scenario(42, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(tp::run_scenario(sc).digest);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sc.steps.size()));
}
BENCHMARK(BM_GeneratedRun)->Arg(200)->Arg(1000);

void BM_Replay(benchmark::State& state) {
  const std::string text = tp::run_scenario(canned("malicious_report")).jsonl();
  for (auto _ : state) benchmark::DoNotOptimize(tp::replay_log(text).pass);
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_Replay);

void BM_AuditLog(benchmark::State& state) {
  const auto events = tp::run_scenario(tp::generate_scenario(7, 500)).events;
  for (auto _ : state) benchmark::DoNotOptimize(tp::audit_log(events).size());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(events.size()));
}
BENCHMARK(BM_AuditLog);

void BM_ParseScenario(benchmark::State& state) {
  const std::string text = tp::format_scenario(tp::generate_scenario(3, 1000));
  for (auto _ : state) benchmark::DoNotOptimize(tp::parse_scenario(text).steps.size());
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ParseScenario);

}  // namespace

BENCHMARK_MAIN();
