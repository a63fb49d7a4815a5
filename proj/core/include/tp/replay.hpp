#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tp/event_log.hpp"
#include "tp/scenario.hpp"

namespace tp {

struct ReplayResult {
  bool pass = true;
  // First seq at which the log stops matching (1-based line number).
  std::optional<std::uint64_t> divergence_seq;
  std::string reason;
  std::size_t events = 0;
};

// Splits JSONL text into records. Throws ReplayError naming the line on a
// malformed or non-canonical record. Does not check the chain.
std::vector<EventRecord> parse_log(std::string_view text);
std::string read_log_file(const std::filesystem::path& path);

// Scenario embedded in a log: Genesis seed, name and full configuration,
// plus the Command stream.
Scenario scenario_from_log(const std::vector<EventRecord>& events);

// Checks line framing, seq numbering and the hash chain, then re-executes
// the embedded command stream and compares every line byte for byte.
ReplayResult replay_log(std::string_view text);
ReplayResult replay_file(const std::filesystem::path& path);

}  // namespace tp
