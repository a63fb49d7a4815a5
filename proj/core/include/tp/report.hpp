#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tp/config.hpp"
#include "tp/das.hpp"
#include "tp/erc721g.hpp"
#include "tp/event_log.hpp"

namespace tp {

struct TokenRow {
  TokenId token_id = 0;
  Address owner;
  TokenState state = TokenState::Ok;
  std::optional<std::uint64_t> frozen_until;
};

struct CaseRow {
  CaseId case_id = 0;
  TokenId token_id = 0;
  Address reporter;
  Address respondent;
  bool auto_opened = false;
  bool report_filed = false;
  std::uint32_t for_reporter = 0;
  std::uint32_t for_holder = 0;
  std::optional<Vote> verdict;
  bool closed = false;
  std::optional<json> settlement;
};

// Everything here is recomputed from the event log alone.
struct RunReport {
  std::string scenario;
  std::uint64_t seed = 0;
  std::size_t event_count = 0;
  std::size_t steps = 0;
  std::size_t step_errors = 0;
  std::optional<SimConfig> config;
  std::map<TokenId, TokenRow> tokens;
  std::map<RiskStatus, std::size_t> verdicts;
  std::map<CaseId, CaseRow> cases;
  std::map<Address, Amount> balances;
  std::map<Address, std::string> labels;
  Amount initial;
  Amount minted;
  Amount escrow;
  bool conservation_ok = true;
  // Balance mismatches, conservation and settlement equation failures.
  std::vector<std::string> problems;
  std::string digest_hex;

  bool ok() const { return problems.empty(); }
  std::size_t verdict_count(RiskStatus s) const;
  std::string name_of(const Address& a) const;
};

RunReport build_report(const std::vector<EventRecord>& events);
std::string format_report(const RunReport& report);
// token=<id> owner=<addr> state=<OK|LOCKED|RECLAIMED> frozen_until=<tick|->
std::string format_token_state(const TokenRow& row);
std::string format_case(const RunReport& report, const CaseRow& row);

}  // namespace tp
