#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tp/crypto.hpp"
#include "tp/event_log.hpp"
#include "tp/fixed.hpp"
#include "tp/types.hpp"

namespace tp {

struct Account {
  Address address;
  Amount balance;
  bool explorer_flagged = false;
  ChainTime created_at;
  std::string label;
};

// In-process stand-in for the chain: accounts, value, logical time and the
// append-only event log. Every mutation of protocol state funnels through
// here in program order.
class Ledger {
 public:
  explicit Ledger(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  // Address is a pure function of (seed, creation counter).
  Address create_account(Amount initial_balance, std::string_view label = {});
  void transfer_value(const Address& from, const Address& to, Amount amount,
                      std::string_view reason = "transfer");
  ChainTime advance_time(std::uint64_t delta);
  ChainTime now() const { return now_; }

  void set_explorer_flag(const Address& addr, bool flagged);

  bool has_account(const Address& addr) const { return accounts_.contains(addr); }
  const Account& account(const Address& addr) const;
  const std::map<Address, Account>& accounts() const { return accounts_; }
  Amount balance(const Address& addr) const { return account(addr).balance; }

  // Deposits held on behalf of arbitration cases.
  void escrow(const Address& from, Amount amount, CaseId case_id);
  void release_escrow(CaseId case_id, const Address& to, Amount amount, std::string_view reason);
  // System-minted juror rewards.
  void mint_reward(const Address& to, Amount amount, CaseId case_id);

  Amount escrow_balance(CaseId case_id) const;
  Amount total_escrow() const { return total_escrow_; }
  Amount total_minted() const { return total_minted_; }
  Amount total_initial() const { return total_initial_; }
  Amount total_balances() const;
  // balances + escrow == initial issuance + minted rewards
  bool conservation_holds() const;

  const EventRecord& append(std::string kind, json payload);
  const std::vector<EventRecord>& events() const { return events_; }
  std::vector<EventRecord> events_since(std::uint64_t seq) const;
  Digest log_digest() const { return digest_of(events_); }
  std::string export_jsonl() const { return to_jsonl(events_); }

 private:
  Account& mutable_account(const Address& addr);

  std::uint64_t seed_;
  std::uint64_t creation_counter_ = 0;
  ChainTime now_;
  std::map<Address, Account> accounts_;
  std::map<CaseId, Amount> escrow_;
  Amount total_escrow_;
  Amount total_minted_;
  Amount total_initial_;
  std::vector<EventRecord> events_;
};

Address derive_address(std::uint64_t seed, std::uint64_t counter);

}  // namespace tp
