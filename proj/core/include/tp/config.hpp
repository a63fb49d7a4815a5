#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "tp/event_log.hpp"
#include "tp/fixed.hpp"

namespace tp {

// Thresholds for the risk engine. Defaults are logged at genesis.
struct RiskConfig {
  Score beta_underprice = Score::parse_or_throw("0.5");
  std::uint64_t turnover_threshold = 3;
  std::uint64_t window_ticks = 86400;
  Score credit_threshold = Score::from_int(20);
  Score p_hacked = Score::parse_or_throw("0.9");
  Score p_suspect = Score::parse_or_throw("0.6");
  Score w1 = Score::from_int(10);
  Score w2 = Score::from_int(2);
  Score w3 = Score::from_int(1);

  bool operator==(const RiskConfig&) const = default;
};

struct JuryConfig {
  std::uint32_t f = 1;
  Amount juror_reward = Amount::parse_or_throw("0.01");
  Amount gas_fee = Amount::parse_or_throw("0.001");
  Score deposit_rate = Score::parse_or_throw("0.05");
  Amount deposit_min = Amount::parse_or_throw("0.01");
  std::uint64_t case_horizon_ticks = 604800;

  std::uint32_t jury_size() const { return 3 * f + 1; }
  std::uint32_t quorum() const { return 2 * f + 1; }

  bool operator==(const JuryConfig&) const = default;
};

struct SimConfig {
  std::uint64_t freeze_ticks = 7200;
  RiskConfig risk;
  JuryConfig jury;

  // Throws Error(ConfigError) on unknown keys, malformed or non-positive values.
  void set(std::string_view key, std::string_view value);
  std::map<std::string, std::string> entries() const;
  json to_json() const;
  static SimConfig from_json(const json& j);
  void validate() const;

  bool operator==(const SimConfig&) const = default;
};

// Flat `key=value` file; `#` starts a comment.
SimConfig load_config_file(const std::filesystem::path& path, SimConfig base = {});

}  // namespace tp
