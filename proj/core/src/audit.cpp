#include "tp/audit.hpp"

#include <map>
#include <optional>
#include <set>

#include "log_fields.hpp"

namespace tp {

using detail::address_field;
using detail::amount_field;
using detail::uint_field;

std::string_view to_string(AuditCheck c) {
  switch (c) {
    case AuditCheck::TransferSafety: return "transfer_safety";
    case AuditCheck::ReclaimImmutability: return "reclaim_immutability";
    case AuditCheck::RequestPairing: return "request_pairing";
    case AuditCheck::PrivilegeAdjacency: return "privilege_adjacency";
    case AuditCheck::VerdictRecompute: return "verdict_recompute";
    case AuditCheck::QuorumVerdict: return "quorum_verdict";
    case AuditCheck::LiveState: return "live_state";
  }
  return "?";
}

std::string AuditFinding::to_string() const {
  return std::string(tp::to_string(check)) + " @" + std::to_string(seq) + ": " + message;
}

namespace {

struct TokenTrack {
  Address owner;
  TokenState state = TokenState::Ok;
  std::optional<std::uint64_t> frozen_until;
};

struct CaseTrack {
  std::set<Address> jury;
  std::set<Address> voted;
  std::uint32_t for_reporter = 0;
};

// State event kind -> dispatch action that must immediately precede it.
const std::map<std::string, std::string>& privileged_kinds() {
  static const std::map<std::string, std::string> m = {
      {"Locked", "lock"},     {"Unlocked", "unlock"},          {"Reclaimed", "reclaim"},
      {"Frozen", "freeze"},   {"Unfrozen", "unfreeze"},        {"AbnormalRecorded", "mark_abnormal"},
      {"Returned", "return"},
  };
  return m;
}

bool origin_allowed(const std::string& origin, const std::string& action) {
  if (action == "lock" || action == "unlock") return origin == "dac";
  if (action == "mark_abnormal") return origin == "drm";
  if (action == "reclaim" || action == "freeze") return origin == "drm" || origin == "das";
  if (action == "unfreeze" || action == "return") return origin == "das";
  return false;
}

// Kinds that must never touch a RECLAIMED token.
const std::set<std::string>& barred_while_reclaimed() {
  static const std::set<std::string> s = {"Transfer", "SafeTransfer", "Locked",   "Unlocked",
                                          "Frozen",   "Unfrozen",     "Approval", "Reclaimed",
                                          "Minted",   "RiskRequested", "AbnormalRecorded",
                                          "UnlockConfirmed"};
  return s;
}

class LogAuditor {
 public:
  void run(const std::vector<EventRecord>& events) {
    for (std::size_t i = 0; i < events.size(); ++i) {
      const EventRecord* prev = i > 0 ? &events[i - 1] : nullptr;
      const EventRecord* next = i + 1 < events.size() ? &events[i + 1] : nullptr;
      try {
        step(events[i], prev, next);
      } catch (const std::exception& ex) {
        add(AuditCheck::VerdictRecompute, events[i].seq, std::string("unreadable event: ") + ex.what());
      }
    }
    for (const auto& [id, _] : pending_) {
      add(AuditCheck::RequestPairing, 0, "request " + std::to_string(id) + " never fulfilled");
    }
  }

  std::vector<AuditFinding> findings;

 private:
  void add(AuditCheck c, std::uint64_t seq, std::string msg) { findings.push_back({c, seq, std::move(msg)}); }

  std::optional<TokenId> token_of(const EventRecord& e) const {
    if (e.kind == "RiskRequested") return uint_field(e.payload.at("intent"), "token_id");
    if (e.payload.contains("token_id")) return uint_field(e.payload, "token_id");
    return std::nullopt;
  }

  void step(const EventRecord& e, const EventRecord* prev, const EventRecord* next) {
    const json& p = e.payload;
    const std::string& k = e.kind;

    if (k == "Genesis") config_ = SimConfig::from_json(p.at("config"));
    if (k == "AccountCreated" && p.at("label") == "treasury" && !treasury_) {
      treasury_ = address_field(p, "address");
    }

    // Reclaim immutability is judged against the pre-event state.
    if (auto tid = token_of(e); tid && k != "Minted") {
      auto it = tokens_.find(*tid);
      if (it != tokens_.end() && it->second.state == TokenState::Reclaimed) {
        if (barred_while_reclaimed().contains(k)) {
          add(AuditCheck::ReclaimImmutability, e.seq, k + " on reclaimed token " + std::to_string(*tid));
        }
        if (k == "OracleDispatch" && p.at("action") != "return") {
          add(AuditCheck::ReclaimImmutability, e.seq,
              "dispatch " + p.at("action").get<std::string>() + " on reclaimed token " + std::to_string(*tid));
        }
      }
    }

    // Privilege adjacency, both directions.
    if (auto pk = privileged_kinds().find(k); pk != privileged_kinds().end()) {
      const bool ok = prev != nullptr && prev->kind == "OracleDispatch" &&
                      prev->payload.at("action") == pk->second &&
                      prev->payload.at("token_id") == p.at("token_id");
      if (!ok) add(AuditCheck::PrivilegeAdjacency, e.seq, k + " without a matching dispatch");
    }
    if (k == "OracleDispatch") {
      const auto origin = p.at("origin").get<std::string>();
      const auto action = p.at("action").get<std::string>();
      if (!origin_allowed(origin, action)) {
        add(AuditCheck::PrivilegeAdjacency, e.seq, origin + " dispatched " + action);
      }
      bool followed = false;
      if (next != nullptr) {
        auto pk = privileged_kinds().find(next->kind);
        followed = pk != privileged_kinds().end() && pk->second == action &&
                   next->payload.at("token_id") == p.at("token_id");
      }
      if (!followed) add(AuditCheck::PrivilegeAdjacency, e.seq, "dispatch " + action + " had no effect event");
      if (action == "return" && tokens_.contains(uint_field(p, "token_id")) &&
          tokens_.at(uint_field(p, "token_id")).state == TokenState::Reclaimed && origin != "das") {
        add(AuditCheck::ReclaimImmutability, e.seq, "return not ordered by arbitration");
      }
    }

    if (k == "RiskRequested") {
      const RequestId id = uint_field(p, "request_id");
      if (id != next_request_) {
        add(AuditCheck::RequestPairing, e.seq,
            "request id " + std::to_string(id) + ", expected " + std::to_string(next_request_));
      }
      next_request_ = id + 1;
      pending_[id] = p.at("intent");
    } else if (k == "RiskFulfilled") {
      const RequestId id = uint_field(p, "request_id");
      auto it = pending_.find(id);
      if (it == pending_.end()) {
        add(AuditCheck::RequestPairing, e.seq, "fulfillment of unknown or settled request " + std::to_string(id));
      } else {
        verify_verdict(e, it->second);
        pending_.erase(it);
      }
      fulfilled_[id] = p.at("status").get<std::string>();
    } else if (k == "Transfer" || k == "SafeTransfer") {
      const TokenId tid = uint_field(p, "token_id");
      auto it = tokens_.find(tid);
      if (it == tokens_.end()) {
        add(AuditCheck::TransferSafety, e.seq, "transfer of unminted token");
      } else {
        TokenTrack& t = it->second;
        if (t.state != TokenState::Ok) {
          add(AuditCheck::TransferSafety, e.seq,
              "transfer of " + std::string(to_string(t.state)) + " token " + std::to_string(tid));
        }
        if (t.frozen_until && e.time.ticks < *t.frozen_until) {
          add(AuditCheck::TransferSafety, e.seq, "transfer of frozen token " + std::to_string(tid));
        }
        if (t.owner != address_field(p, "from")) {
          add(AuditCheck::TransferSafety, e.seq, "transfer from a non-owner");
        }
        auto f = fulfilled_.find(uint_field(p, "request_id"));
        if (f == fulfilled_.end() || f->second != "safe") {
          add(AuditCheck::TransferSafety, e.seq, "transfer without a safe verdict");
        }
        t.owner = address_field(p, "to");
        t.state = TokenState::Locked;
        t.frozen_until.reset();
      }
    } else if (k == "Minted") {
      tokens_[uint_field(p, "token_id")] = TokenTrack{address_field(p, "to"), TokenState::Ok, {}};
    } else if (k == "Locked") {
      track(p).state = TokenState::Locked;
    } else if (k == "Unlocked") {
      track(p).state = TokenState::Ok;
    } else if (k == "Reclaimed") {
      TokenTrack& t = track(p);
      t.owner = address_field(p, "owner");
      t.state = TokenState::Reclaimed;
      t.frozen_until.reset();
      if (treasury_ && t.owner != *treasury_) {
        add(AuditCheck::ReclaimImmutability, e.seq, "reclaimed token not held by the treasury");
      }
    } else if (k == "Returned") {
      TokenTrack& t = track(p);
      t.owner = address_field(p, "to");
      t.state = TokenState::Locked;
      t.frozen_until.reset();
    } else if (k == "Frozen") {
      track(p).frozen_until = uint_field(p, "frozen_until");
    } else if (k == "Unfrozen") {
      TokenTrack& t = track(p);
      if (p.at("frozen_until").is_string()) {
        t.frozen_until.reset();
      } else {
        t.frozen_until = uint_field(p, "frozen_until");
      }
    } else if (k == "JuryEmpaneled") {
      CaseTrack& c = cases_[uint_field(p, "case_id")];
      for (const auto& j : p.at("jury")) {
        auto a = Address::from_hex(j.get<std::string>());
        if (a) c.jury.insert(*a);
      }
    } else if (k == "VoteCast") {
      CaseTrack& c = cases_[uint_field(p, "case_id")];
      const Address juror = address_field(p, "juror");
      if (!c.jury.contains(juror)) add(AuditCheck::QuorumVerdict, e.seq, "vote from a non-juror");
      if (!c.voted.insert(juror).second) add(AuditCheck::QuorumVerdict, e.seq, "juror voted twice");
      if (p.at("vote") == "FOR_REPORTER") ++c.for_reporter;
    } else if (k == "VerdictReached" || k == "CaseSettled") {
      if (p.at("verdict") == "FOR_REPORTER") {
        const CaseTrack& c = cases_[uint_field(p, "case_id")];
        if (c.for_reporter < config_.jury.quorum()) {
          add(AuditCheck::QuorumVerdict, e.seq,
              "FOR_REPORTER with " + std::to_string(c.for_reporter) + " matching votes");
        }
      }
    }
  }

  TokenTrack& track(const json& p) {
    const TokenId tid = uint_field(p, "token_id");
    auto it = tokens_.find(tid);
    if (it == tokens_.end()) throw Error(Errc::ReplayError, "unminted token " + std::to_string(tid));
    return it->second;
  }

  void verify_verdict(const EventRecord& e, const json& intent) {
    const json& p = e.payload;
    const FeatureVector f = FeatureVector::from_json(p.at("features"));
    const RiskVerdict v = Drm::classify(f, config_.risk);
    json logged = json::object();
    logged["status"] = p.at("status");
    logged["hits"] = p.at("hits");
    logged["features"] = p.at("features");
    if (v.to_json() != logged) {
      add(AuditCheck::VerdictRecompute, e.seq, "recomputed verdict differs from the logged one");
    }
    if (f.sender.to_hex() != intent.at("from") || f.recipient.to_hex() != intent.at("to") ||
        f.caller.to_hex() != intent.at("caller") || f.price.to_string() != intent.at("price") ||
        uint_field(p, "token_id") != uint_field(intent, "token_id")) {
      add(AuditCheck::VerdictRecompute, e.seq, "feature vector does not describe the requested intent");
    }
  }

  SimConfig config_;
  std::optional<Address> treasury_;
  std::map<TokenId, TokenTrack> tokens_;
  std::map<CaseId, CaseTrack> cases_;
  RequestId next_request_ = 1;
  std::map<RequestId, json> pending_;
  std::map<RequestId, std::string> fulfilled_;
};

}  // namespace

std::vector<AuditFinding> audit_log(const std::vector<EventRecord>& events) {
  LogAuditor a;
  a.run(events);
  return std::move(a.findings);
}

std::vector<AuditFinding> check_live_state(const Protocol& p) {
  std::vector<AuditFinding> out;
  const std::uint64_t seq = p.ledger().events().empty() ? 0 : p.ledger().events().back().seq;
  auto add = [&](std::string msg) { out.push_back({AuditCheck::LiveState, seq, std::move(msg)}); };

  if (!p.ledger().conservation_holds()) add("value conservation violated");

  const Digest before = p.token().state_digest();
  for (const auto& [id, t] : p.token().tokens()) {
    if (t.state == TokenState::Reclaimed) {
      if (t.owner != p.treasury()) add("reclaimed token " + std::to_string(id) + " not in treasury");
      if (t.frozen_until || t.approved) add("reclaimed token " + std::to_string(id) + " carries freeze or approval");
    }
    const GuardResult g = p.token().transfer_guard(id, t.owner, t.owner);
    if (t.state != TokenState::Ok && g.pass()) add("guard passes a non-OK token " + std::to_string(id));
  }
  if (p.token().state_digest() != before) add("transfer guard mutated state");

  Amount held;
  for (const auto& [id, c] : p.das().cases()) {
    const Amount e = p.ledger().escrow_balance(id);
    held += e;
    if (c.status == CaseStatus::Closed && e != Amount{}) add("closed case " + std::to_string(id) + " still holds escrow");
  }
  if (held != p.ledger().total_escrow()) add("escrow total differs from per-case escrow");
  return out;
}

}  // namespace tp
