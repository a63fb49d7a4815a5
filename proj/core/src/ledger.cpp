#include "tp/ledger.hpp"

#include <algorithm>

#include "tp/error.hpp"

namespace tp {

namespace {

void put_be64(std::string& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

}  // namespace

Address derive_address(std::uint64_t seed, std::uint64_t counter) {
  std::string material = "tp-address";
  put_be64(material, seed);
  put_be64(material, counter);
  const Digest d = sha256(material);
  Address::Bytes bytes{};
  std::copy_n(d.begin(), Address::kSize, bytes.begin());
  return Address(bytes);
}

Ledger::Ledger(std::uint64_t seed) : seed_(seed) {}

Address Ledger::create_account(Amount initial_balance, std::string_view label) {
  if (initial_balance.is_negative()) {
    throw Error(Errc::InvalidInput, "initial balance must be non-negative");
  }
  Address addr = derive_address(seed_, creation_counter_++);
  while (accounts_.contains(addr)) addr = derive_address(seed_, creation_counter_++);
  accounts_.emplace(addr, Account{addr, initial_balance, false, now_, std::string(label)});
  total_initial_ += initial_balance;
  append("AccountCreated", {{"address", addr.to_hex()},
                            {"balance", initial_balance.to_string()},
                            {"label", std::string(label)}});
  return addr;
}

const Account& Ledger::account(const Address& addr) const {
  auto it = accounts_.find(addr);
  if (it == accounts_.end()) throw Error(Errc::UnknownAccount, addr.to_hex());
  return it->second;
}

Account& Ledger::mutable_account(const Address& addr) {
  auto it = accounts_.find(addr);
  if (it == accounts_.end()) throw Error(Errc::UnknownAccount, addr.to_hex());
  return it->second;
}

void Ledger::transfer_value(const Address& from, const Address& to, Amount amount,
                            std::string_view reason) {
  if (amount.is_negative()) throw Error(Errc::InvalidInput, "negative amount");
  Account& src = mutable_account(from);
  Account& dst = mutable_account(to);
  if (src.balance < amount) {
    throw Error(Errc::InsufficientFunds,
                from.to_hex() + " holds " + src.balance.to_string() + ", needs " + amount.to_string());
  }
  src.balance -= amount;
  dst.balance += amount;
  append("ValueTransferred", {{"from", from.to_hex()},
                              {"to", to.to_hex()},
                              {"amount", amount.to_string()},
                              {"reason", std::string(reason)},
                              {"from_balance", src.balance.to_string()},
                              {"to_balance", dst.balance.to_string()}});
}

ChainTime Ledger::advance_time(std::uint64_t delta) {
  now_ = now_ + delta;
  append("TimeAdvanced", {{"delta", delta}});
  return now_;
}

void Ledger::set_explorer_flag(const Address& addr, bool flagged) {
  mutable_account(addr).explorer_flagged = flagged;
  append("ExplorerFlagSet", {{"address", addr.to_hex()}, {"flagged", flagged}});
}

void Ledger::escrow(const Address& from, Amount amount, CaseId case_id) {
  if (amount.is_negative()) throw Error(Errc::InvalidInput, "negative escrow");
  Account& src = mutable_account(from);
  if (src.balance < amount) {
    throw Error(Errc::InsufficientFunds,
                from.to_hex() + " holds " + src.balance.to_string() + ", needs " + amount.to_string());
  }
  src.balance -= amount;
  escrow_[case_id] += amount;
  total_escrow_ += amount;
  append("DepositEscrowed", {{"case_id", case_id},
                             {"from", from.to_hex()},
                             {"amount", amount.to_string()},
                             {"from_balance", src.balance.to_string()}});
}

void Ledger::release_escrow(CaseId case_id, const Address& to, Amount amount,
                            std::string_view reason) {
  if (amount.is_negative()) throw Error(Errc::InvalidInput, "negative release");
  Amount& held = escrow_[case_id];
  if (held < amount) throw Error(Errc::InsufficientFunds, "escrow underflow");
  Account& dst = mutable_account(to);
  held -= amount;
  total_escrow_ -= amount;
  dst.balance += amount;
  append("EscrowReleased", {{"case_id", case_id},
                            {"to", to.to_hex()},
                            {"amount", amount.to_string()},
                            {"reason", std::string(reason)},
                            {"to_balance", dst.balance.to_string()}});
}

void Ledger::mint_reward(const Address& to, Amount amount, CaseId case_id) {
  if (amount.is_negative()) throw Error(Errc::InvalidInput, "negative reward");
  Account& dst = mutable_account(to);
  dst.balance += amount;
  total_minted_ += amount;
  append("RewardMinted", {{"case_id", case_id},
                          {"to", to.to_hex()},
                          {"amount", amount.to_string()},
                          {"to_balance", dst.balance.to_string()}});
}

Amount Ledger::escrow_balance(CaseId case_id) const {
  auto it = escrow_.find(case_id);
  return it == escrow_.end() ? Amount{} : it->second;
}

Amount Ledger::total_balances() const {
  Amount sum;
  for (const auto& [_, acct] : accounts_) sum += acct.balance;
  return sum;
}

bool Ledger::conservation_holds() const {
  for (const auto& [_, acct] : accounts_) {
    if (acct.balance.is_negative()) return false;
  }
  return total_balances() + total_escrow_ == total_initial_ + total_minted_;
}

const EventRecord& Ledger::append(std::string kind, json payload) {
  require_integral_payload(payload);
  EventRecord r;
  r.seq = events_.size() + 1;
  r.time = now_;
  r.kind = std::move(kind);
  r.payload = std::move(payload);
  r.link = chain_link(events_.empty() ? kGenesisLink : std::string_view(events_.back().link), r.body());
  events_.push_back(std::move(r));
  return events_.back();
}

std::vector<EventRecord> Ledger::events_since(std::uint64_t seq) const {
  if (seq >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(seq), events_.end()};
}

}  // namespace tp
