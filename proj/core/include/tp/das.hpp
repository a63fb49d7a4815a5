#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "tp/config.hpp"
#include "tp/crypto.hpp"
#include "tp/drm.hpp"
#include "tp/erc721g.hpp"
#include "tp/ledger.hpp"
#include "tp/oracle_bridge.hpp"

namespace tp {

enum class Vote { ForReporter, ForHolder };
enum class CaseStatus { Open, Voting, Closed };

std::string_view to_string(Vote v);
std::string_view to_string(CaseStatus s);

struct Evidence {
  Address party;
  Digest blob_digest{};
  ChainTime time;
};

struct SettlementRecord {
  CaseId case_id = 0;
  Vote verdict = Vote::ForHolder;
  Address token_to;          // where the token ended up (or stayed)
  Amount escrowed;           // deposit + prepaid gas taken from the reporter
  Amount refunded;           // back to the reporter
  Amount distributed;        // forfeited deposit paid to majority jurors
  Amount fees;               // gas fee plus rounding dust
  Amount minted;             // system-minted juror rewards
  std::vector<Address> rewarded;

  json to_json() const;
};

struct ArbitrationCase {
  CaseId case_id = 0;
  TokenId token_id = 0;
  Address reporter;
  Address respondent;
  // Owner the token was reclaimed from, when the token is in the treasury.
  std::optional<Address> prior_holder;
  bool auto_opened = false;
  // True once the reporter has escrowed a deposit for this case.
  bool report_filed = false;
  Amount deposit;
  Amount gas_prepaid;
  std::optional<ChainTime> prior_frozen_until;
  std::vector<Evidence> evidence;
  std::vector<Address> jury;
  std::vector<std::pair<Address, Vote>> votes;
  CaseStatus status = CaseStatus::Open;
  std::optional<Vote> verdict;
  std::optional<SettlementRecord> settlement;
};

// Incremental Byzantine-quorum tally over n = 3f+1 jurors. A side wins as
// soon as it holds 2f+1 votes; when all n votes are in without a quorum the
// status quo (ForHolder) wins.
class QuorumTally {
 public:
  explicit QuorumTally(std::uint32_t f) : f_(f) {}

  std::optional<Vote> add(Vote v);
  std::optional<Vote> verdict() const { return verdict_; }
  std::uint32_t for_reporter() const { return reporter_; }
  std::uint32_t for_holder() const { return holder_; }

 private:
  std::uint32_t f_;
  std::uint32_t reporter_ = 0;
  std::uint32_t holder_ = 0;
  std::optional<Vote> verdict_;
};

// Seeded sample without replacement of `count` elements of `pool`, taken in
// the pool's sorted order. Deterministic across platforms.
std::vector<Address> seeded_sample(std::vector<Address> pool, std::size_t count, std::uint64_t seed);

class Das {
 public:
  Das(Ledger& ledger, Erc721g& token, OracleBridge& bridge, JuryConfig config, Address fee_collector);

  const JuryConfig& config() const { return config_; }

  void enroll_juror(const Address& addr);
  const std::vector<Address>& referee_pool() const { return pool_; }

  Amount required_deposit(TokenId token_id) const;

  CaseId file_report(const Address& reporter, TokenId token_id);
  // Case opened by the bridge after a hacked verdict; prior owner is the
  // presumptive victim, the treasury is respondent, no deposit is held.
  CaseId open_auto_case(TokenId token_id, const Address& prior_owner);

  void submit_evidence(CaseId case_id, const Address& party, std::span<const std::uint8_t> blob);
  void submit_evidence(CaseId case_id, const Address& party, std::string_view blob);
  std::vector<Address> empanel_jury(CaseId case_id, const std::vector<Address>& pool, std::uint64_t seed);
  // Returns the verdict when this vote decides the case; the case is then
  // settled immediately.
  std::optional<Vote> cast_vote(CaseId case_id, const Address& juror, Vote vote);
  SettlementRecord close_case(CaseId case_id);

  const ArbitrationCase& get(CaseId case_id) const;
  const std::map<CaseId, ArbitrationCase>& cases() const { return cases_; }
  std::optional<CaseId> open_case_for(TokenId token_id) const;

 private:
  ArbitrationCase& mutable_case(CaseId case_id);
  SettlementRecord settle(ArbitrationCase& c);
  CaseId new_case_id() { return next_id_++; }

  Ledger& ledger_;
  Erc721g& token_;
  OracleBridge& bridge_;
  JuryConfig config_;
  Address fee_collector_;
  std::vector<Address> pool_;
  CaseId next_id_ = 1;
  std::map<CaseId, ArbitrationCase> cases_;
};

}  // namespace tp
