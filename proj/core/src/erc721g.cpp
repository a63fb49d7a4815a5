#include "tp/erc721g.hpp"

#include <stdexcept>

#include "tp/error.hpp"

namespace tp {

namespace {

Errc errc_for(GuardReject r) {
  switch (r) {
    case GuardReject::Locked: return Errc::Locked;
    case GuardReject::Reclaimed: return Errc::Reclaimed;
    case GuardReject::Frozen: return Errc::Frozen;
    case GuardReject::NotAuthorized: return Errc::NotAuthorized;
  }
  return Errc::NotAuthorized;
}

json freeze_json(const std::optional<ChainTime>& t) {
  return t ? json(t->ticks) : json("-");
}

}  // namespace

std::string_view to_string(TokenState s) {
  switch (s) {
    case TokenState::Ok: return "OK";
    case TokenState::Locked: return "LOCKED";
    case TokenState::Reclaimed: return "RECLAIMED";
  }
  return "?";
}

std::optional<TokenState> token_state_from_string(std::string_view s) {
  if (s == "OK") return TokenState::Ok;
  if (s == "LOCKED") return TokenState::Locked;
  if (s == "RECLAIMED") return TokenState::Reclaimed;
  return std::nullopt;
}

std::string_view to_string(ProvenanceKind k) {
  switch (k) {
    case ProvenanceKind::Transfer: return "transfer";
    case ProvenanceKind::Reclaim: return "reclaim";
    case ProvenanceKind::Return: return "return";
  }
  return "?";
}

std::string_view to_string(GuardReject r) {
  switch (r) {
    case GuardReject::Locked: return "Locked";
    case GuardReject::Reclaimed: return "Reclaimed";
    case GuardReject::Frozen: return "Frozen";
    case GuardReject::NotAuthorized: return "NotAuthorized";
  }
  return "?";
}

std::optional<Amount> TokenRecord::last_sale_price() const {
  for (auto it = provenance.rbegin(); it != provenance.rend(); ++it) {
    if (it->kind == ProvenanceKind::Transfer && it->price > Amount{}) return it->price;
  }
  return std::nullopt;
}

Erc721g::Erc721g(Ledger& ledger, Address oracle, Address treasury)
    : ledger_(ledger), oracle_(oracle), treasury_(treasury) {}

const TokenRecord& Erc721g::token(TokenId token_id) const {
  auto it = tokens_.find(token_id);
  if (it == tokens_.end()) throw Error(Errc::UnknownToken, "token " + std::to_string(token_id));
  return it->second;
}

TokenRecord& Erc721g::mutable_token(TokenId token_id) {
  auto it = tokens_.find(token_id);
  if (it == tokens_.end()) throw Error(Errc::UnknownToken, "token " + std::to_string(token_id));
  return it->second;
}

void Erc721g::require_oracle(const Address& caller) const {
  if (caller != oracle_) throw Error(Errc::NotOracle, caller.to_hex() + " is not the oracle");
}

void Erc721g::mint(const Address& to, TokenId token_id) {
  if (token_id == 0) throw Error(Errc::InvalidInput, "token id must be positive");
  ledger_.account(to);
  if (tokens_.contains(token_id)) {
    throw Error(Errc::AlreadyMinted, "token " + std::to_string(token_id));
  }
  TokenRecord rec;
  rec.token_id = token_id;
  rec.owner = to;
  tokens_.emplace(token_id, std::move(rec));
  ledger_.append("Minted", {{"token_id", token_id}, {"to", to.to_hex()}, {"state", "OK"}});
}

GuardResult Erc721g::transfer_guard(TokenId token_id, const Address& caller,
                                    const Address& /*from*/) const {
  const TokenRecord& t = token(token_id);
  if (t.state == TokenState::Locked) return GuardResult::fail(GuardReject::Locked);
  if (t.state == TokenState::Reclaimed) return GuardResult::fail(GuardReject::Reclaimed);
  if (t.frozen_until && ledger_.now() < *t.frozen_until) return GuardResult::fail(GuardReject::Frozen);
  if (caller == t.owner || (t.approved && *t.approved == caller) ||
      is_approved_for_all(t.owner, caller)) {
    return GuardResult::ok();
  }
  return GuardResult::fail(GuardReject::NotAuthorized);
}

void Erc721g::approve(const Address& caller, const Address& to, TokenId token_id) {
  ledger_.account(to);
  const GuardResult g = transfer_guard(token_id, caller, token(token_id).owner);
  if (!g.pass()) throw Error(errc_for(*g.reject), "approve token " + std::to_string(token_id));
  TokenRecord& t = mutable_token(token_id);
  t.approved = to;
  ledger_.append("Approval", {{"token_id", token_id},
                              {"owner", t.owner.to_hex()},
                              {"approved", to.to_hex()}});
}

void Erc721g::set_approval_for_all(const Address& caller, const Address& operator_addr,
                                   bool approved) {
  ledger_.account(caller);
  ledger_.account(operator_addr);
  if (caller == operator_addr) throw Error(Errc::InvalidInput, "operator equals owner");
  if (approved && supervisor_ != nullptr && supervisor_->operator_blocked(operator_addr)) {
    ledger_.append("SupervisionBlocked", {{"owner", caller.to_hex()},
                                          {"operator", operator_addr.to_hex()}});
    throw Error(Errc::PhishingOperatorBlocked, operator_addr.to_hex());
  }
  operator_approvals_[{caller, operator_addr}] = approved;
  ledger_.append("ApprovalForAll", {{"owner", caller.to_hex()},
                                    {"operator", operator_addr.to_hex()},
                                    {"approved", approved}});
}

bool Erc721g::is_approved_for_all(const Address& owner, const Address& operator_addr) const {
  auto it = operator_approvals_.find({owner, operator_addr});
  return it != operator_approvals_.end() && it->second;
}

TransferOutcome Erc721g::transfer_from(const Address& caller, const Address& from,
                                       const Address& to, TokenId token_id, Amount price) {
  return do_transfer(caller, from, to, token_id, price, false);
}

TransferOutcome Erc721g::safe_transfer_from(const Address& caller, const Address& from,
                                            const Address& to, TokenId token_id, Amount price) {
  return do_transfer(caller, from, to, token_id, price, true);
}

TransferOutcome Erc721g::do_transfer(const Address& caller, const Address& from, const Address& to,
                                     TokenId token_id, Amount price, bool safe) {
  if (price.is_negative()) throw Error(Errc::InvalidInput, "negative price");
  ledger_.account(to);
  const GuardResult g = transfer_guard(token_id, caller, from);
  if (!g.pass()) throw Error(errc_for(*g.reject), "transfer token " + std::to_string(token_id));
  if (token(token_id).owner != from) {
    throw Error(Errc::NotOwner, from.to_hex() + " does not own token " + std::to_string(token_id));
  }
  if (from == to) throw Error(Errc::InvalidInput, "transfer to current owner");
  if (gate_ == nullptr) throw std::logic_error("Erc721g has no risk gate");

  const TransferIntent intent{caller, from, to, token_id, price, ledger_.now()};
  const TransferOutcome outcome = gate_->request_risk_check(intent);
  if (outcome.status != RiskStatus::Safe) return outcome;

  TokenRecord& t = mutable_token(token_id);
  t.provenance.push_back({ProvenanceKind::Transfer, from, to, price, ledger_.now()});
  t.owner = to;
  t.state = TokenState::Locked;
  t.approved.reset();
  t.frozen_until.reset();
  ledger_.append(safe ? "SafeTransfer" : "Transfer", {{"token_id", token_id},
                                                      {"caller", caller.to_hex()},
                                                      {"from", from.to_hex()},
                                                      {"to", to.to_hex()},
                                                      {"price", price.to_string()},
                                                      {"request_id", outcome.request_id},
                                                      {"state", "LOCKED"}});
  return outcome;
}

bool Erc721g::oracle_lock(const Address& caller, TokenId token_id) {
  require_oracle(caller);
  TokenRecord& t = mutable_token(token_id);
  if (t.state == TokenState::Reclaimed) {
    throw Error(Errc::ReclaimedImmutable, "token " + std::to_string(token_id) + " is reclaimed");
  }
  const bool changed = t.state == TokenState::Ok;
  t.state = TokenState::Locked;
  ledger_.append("Locked", {{"token_id", token_id}, {"noop", !changed}});
  return changed;
}

void Erc721g::oracle_unlock(const Address& caller, TokenId token_id) {
  require_oracle(caller);
  TokenRecord& t = mutable_token(token_id);
  if (t.state == TokenState::Reclaimed) {
    throw Error(Errc::ReclaimedImmutable, "token " + std::to_string(token_id) + " is reclaimed");
  }
  if (t.state != TokenState::Locked) {
    throw Error(Errc::NotLocked, "token " + std::to_string(token_id));
  }
  t.state = TokenState::Ok;
  ledger_.append("Unlocked", {{"token_id", token_id}});
}

Address Erc721g::oracle_reclaim(const Address& caller, TokenId token_id) {
  require_oracle(caller);
  TokenRecord& t = mutable_token(token_id);
  if (t.state == TokenState::Reclaimed) {
    throw Error(Errc::AlreadyReclaimed, "token " + std::to_string(token_id));
  }
  const Address prior = t.owner;
  t.provenance.push_back({ProvenanceKind::Reclaim, prior, treasury_, Amount{}, ledger_.now()});
  t.owner = treasury_;
  t.state = TokenState::Reclaimed;
  t.approved.reset();
  t.frozen_until.reset();
  ledger_.append("Reclaimed", {{"token_id", token_id},
                               {"prior_owner", prior.to_hex()},
                               {"owner", treasury_.to_hex()}});
  return prior;
}

void Erc721g::oracle_freeze(const Address& caller, TokenId token_id, ChainTime until) {
  require_oracle(caller);
  TokenRecord& t = mutable_token(token_id);
  if (t.state == TokenState::Reclaimed) {
    throw Error(Errc::Reclaimed, "cannot freeze reclaimed token " + std::to_string(token_id));
  }
  if (!t.frozen_until || *t.frozen_until < until) t.frozen_until = until;
  ledger_.append("Frozen", {{"token_id", token_id}, {"frozen_until", t.frozen_until->ticks}});
}

void Erc721g::oracle_set_freeze(const Address& caller, TokenId token_id,
                                std::optional<ChainTime> until) {
  require_oracle(caller);
  TokenRecord& t = mutable_token(token_id);
  if (t.state == TokenState::Reclaimed) {
    throw Error(Errc::Reclaimed, "cannot unfreeze reclaimed token " + std::to_string(token_id));
  }
  t.frozen_until = until;
  ledger_.append("Unfrozen", {{"token_id", token_id}, {"frozen_until", freeze_json(until)}});
}

void Erc721g::oracle_mark_abnormal(const Address& caller, TokenId token_id, RiskStatus status) {
  require_oracle(caller);
  TokenRecord& t = mutable_token(token_id);
  t.abnormal.push_back({t.provenance.size(), ledger_.now(), status});
  ledger_.append("AbnormalRecorded", {{"token_id", token_id},
                                      {"status", std::string(to_string(status))},
                                      {"epoch", t.provenance.size()}});
}

void Erc721g::verdict_return(const Address& caller, TokenId token_id, const Address& to) {
  require_oracle(caller);
  TokenRecord& t = mutable_token(token_id);
  if (t.state != TokenState::Reclaimed) {
    throw Error(Errc::NotInArbitration, "token " + std::to_string(token_id) + " is not reclaimed");
  }
  ledger_.account(to);
  t.provenance.push_back({ProvenanceKind::Return, t.owner, to, Amount{}, ledger_.now()});
  t.owner = to;
  t.state = TokenState::Locked;
  t.approved.reset();
  t.frozen_until.reset();
  ledger_.append("Returned", {{"token_id", token_id}, {"to", to.to_hex()}, {"state", "LOCKED"}});
}

Digest Erc721g::state_digest() const {
  json j = json::object();
  json toks = json::array();
  for (const auto& [id, t] : tokens_) {
    json prov = json::array();
    for (const auto& p : t.provenance) {
      prov.push_back({std::string(to_string(p.kind)), p.from.to_hex(), p.to.to_hex(),
                      p.price.to_string(), p.time.ticks});
    }
    json marks = json::array();
    for (const auto& m : t.abnormal) {
      marks.push_back({m.epoch, m.time.ticks, std::string(to_string(m.status))});
    }
    toks.push_back({{"id", id},
                    {"owner", t.owner.to_hex()},
                    {"state", std::string(to_string(t.state))},
                    {"approved", t.approved ? t.approved->to_hex() : "-"},
                    {"frozen_until", freeze_json(t.frozen_until)},
                    {"provenance", prov},
                    {"abnormal", marks}});
  }
  j["tokens"] = toks;
  json ops = json::array();
  for (const auto& [key, approved] : operator_approvals_) {
    ops.push_back({key.first.to_hex(), key.second.to_hex(), approved});
  }
  j["operators"] = ops;
  return sha256(j.dump());
}

}  // namespace tp
