#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tp/config.hpp"
#include "tp/error.hpp"
#include "tp/protocol.hpp"
#include "tp/scenario.hpp"

namespace tp {

inline constexpr std::uint64_t kDefaultSeed = 0;

struct StepOutcome {
  std::size_t step = 0;
  std::string verb;
  std::optional<Errc> error;
  std::string message;

  bool ok() const { return !error.has_value(); }
};

struct RunOptions {
  // Overrides the scenario's SEED line.
  std::optional<std::uint64_t> seed;
  // Scenario CONFIG lines are applied on top of this.
  SimConfig base;
};

SimConfig effective_config(const Scenario& scenario, const SimConfig& base = {});

// Executes scenario steps against one fresh Protocol. Names map to ledger
// addresses; the genesis accounts are pre-bound as `oracle`, `treasury` and
// `fee_collector`. Each step logs a Command event first; a rejected step
// logs StepError and execution continues.
class Runner {
 public:
  explicit Runner(const Scenario& scenario, const RunOptions& options = {});

  StepOutcome execute(const Command& cmd);
  void run_all();

  Protocol& protocol() { return *proto_; }
  const Protocol& protocol() const { return *proto_; }
  const Scenario& scenario() const { return scenario_; }
  const std::vector<StepOutcome>& outcomes() const { return outcomes_; }
  const std::map<std::string, Address>& names() const { return names_; }
  std::optional<Address> address_of(const std::string& name) const;

 private:
  void dispatch(const Command& cmd);
  Address resolve(const std::string& name) const;

  Scenario scenario_;
  std::unique_ptr<Protocol> proto_;
  std::map<std::string, Address> names_;
  std::map<Address, UnlockAttestation> last_attestation_;
  std::vector<StepOutcome> outcomes_;
  std::size_t next_step_ = 1;
};

struct RunResult {
  std::string scenario;
  std::uint64_t seed = kDefaultSeed;
  std::vector<EventRecord> events;
  Digest digest{};
  std::vector<StepOutcome> outcomes;
  std::map<std::string, Address> names;

  std::string jsonl() const { return to_jsonl(events); }
};

RunResult run_scenario(const Scenario& scenario, const RunOptions& options = {});

}  // namespace tp
