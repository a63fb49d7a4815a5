#include "tp/oracle_bridge.hpp"

#include <stdexcept>

#include "tp/error.hpp"

namespace tp {

std::string_view to_string(Origin o) {
  switch (o) {
    case Origin::User: return "user";
    case Origin::Dac: return "dac";
    case Origin::Drm: return "drm";
    case Origin::Das: return "das";
  }
  return "?";
}

std::string_view to_string(DispatchAction a) {
  switch (a) {
    case DispatchAction::Lock: return "lock";
    case DispatchAction::Unlock: return "unlock";
    case DispatchAction::Reclaim: return "reclaim";
    case DispatchAction::Freeze: return "freeze";
    case DispatchAction::Unfreeze: return "unfreeze";
    case DispatchAction::MarkAbnormal: return "mark_abnormal";
    case DispatchAction::Return: return "return";
  }
  return "?";
}

json intent_to_json(const TransferIntent& intent) {
  return {{"caller", intent.caller.to_hex()},
          {"from", intent.from.to_hex()},
          {"to", intent.to.to_hex()},
          {"token_id", intent.token_id},
          {"price", intent.price.to_string()},
          {"time", intent.time.ticks}};
}

namespace {

bool authorized(Origin origin, DispatchAction action) {
  switch (action) {
    case DispatchAction::Lock:
    case DispatchAction::Unlock:
      return origin == Origin::Dac;
    case DispatchAction::MarkAbnormal:
      return origin == Origin::Drm;
    case DispatchAction::Reclaim:
    case DispatchAction::Freeze:
      return origin == Origin::Drm || origin == Origin::Das;
    case DispatchAction::Unfreeze:
    case DispatchAction::Return:
      return origin == Origin::Das;
  }
  return false;
}

// Preconditions of each token-side effect, checked before anything is logged
// so that a rejected dispatch leaves no trace in the event log.
void precheck(const Ledger& ledger, const Erc721g& token, DispatchAction action, const DispatchArgs& args) {
  const TokenRecord& t = token.token(args.token_id);
  const std::string id = std::to_string(args.token_id);
  const bool reclaimed = t.state == TokenState::Reclaimed;
  switch (action) {
    case DispatchAction::Lock:
      if (reclaimed) throw Error(Errc::ReclaimedImmutable, "token " + id + " is reclaimed");
      break;
    case DispatchAction::Unlock:
      if (reclaimed) throw Error(Errc::ReclaimedImmutable, "token " + id + " is reclaimed");
      if (t.state != TokenState::Locked) throw Error(Errc::NotLocked, "token " + id);
      break;
    case DispatchAction::Reclaim:
      if (reclaimed) throw Error(Errc::AlreadyReclaimed, "token " + id);
      break;
    case DispatchAction::Freeze:
      if (!args.until) throw Error(Errc::InvalidInput, "freeze needs a deadline");
      if (reclaimed) throw Error(Errc::Reclaimed, "cannot freeze reclaimed token " + id);
      break;
    case DispatchAction::Unfreeze:
      if (reclaimed) throw Error(Errc::Reclaimed, "cannot unfreeze reclaimed token " + id);
      break;
    case DispatchAction::MarkAbnormal:
      break;
    case DispatchAction::Return:
      if (!args.to) throw Error(Errc::InvalidInput, "return needs a recipient");
      if (!reclaimed) throw Error(Errc::NotInArbitration, "token " + id + " is not reclaimed");
      ledger.account(*args.to);
      break;
  }
}

}  // namespace

OracleBridge::OracleBridge(Ledger& ledger, Erc721g& token, Drm& drm, Address self,
                           std::uint64_t freeze_ticks)
    : ledger_(ledger), token_(token), drm_(drm), self_(self), freeze_ticks_(freeze_ticks) {}

bool OracleBridge::operator_blocked(const Address& operator_addr) const {
  return (ledger_.has_account(operator_addr) && ledger_.account(operator_addr).explorer_flagged) ||
         drm_.is_phishing_operator(operator_addr);
}

RequestId OracleBridge::submit(const TransferIntent& intent) {
  const RequestId id = next_id_++;
  requests_.emplace(id, RiskRequest{id, intent, ledger_.now(), RequestStatus::Pending});
  ledger_.append("RiskRequested", {{"request_id", id}, {"intent", intent_to_json(intent)}});
  return id;
}

TransferOutcome OracleBridge::request_risk_check(const TransferIntent& intent) {
  if (!snapshot_) throw std::logic_error("OracleBridge has no snapshot provider");
  const RequestId id = submit(intent);
  const RiskVerdict verdict = drm_.evaluate(intent, snapshot_());
  fulfill(id, verdict);
  return {id, verdict.status};
}

void OracleBridge::fulfill(RequestId request_id, const RiskVerdict& verdict) {
  auto it = requests_.find(request_id);
  if (it == requests_.end()) {
    throw Error(Errc::InvalidRequest, "unknown request " + std::to_string(request_id));
  }
  if (it->second.status != RequestStatus::Pending) {
    throw Error(Errc::InvalidRequest, "request " + std::to_string(request_id) + " already fulfilled");
  }
  it->second.status = RequestStatus::Fulfilled;
  json payload = verdict.to_json();
  payload["request_id"] = request_id;
  payload["token_id"] = it->second.intent.token_id;
  ledger_.append("RiskFulfilled", std::move(payload));

  const TokenId token_id = it->second.intent.token_id;
  switch (verdict.status) {
    case RiskStatus::Safe:
      break;
    case RiskStatus::MayLost: {
      DispatchArgs mark{token_id};
      mark.status = RiskStatus::MayLost;
      privileged_dispatch(Origin::Drm, DispatchAction::MarkAbnormal, mark);
      DispatchArgs freeze{token_id};
      freeze.until = ledger_.now() + freeze_ticks_;
      privileged_dispatch(Origin::Drm, DispatchAction::Freeze, freeze);
      break;
    }
    case RiskStatus::Hacked: {
      DispatchArgs mark{token_id};
      mark.status = RiskStatus::Hacked;
      privileged_dispatch(Origin::Drm, DispatchAction::MarkAbnormal, mark);
      const auto result = privileged_dispatch(Origin::Drm, DispatchAction::Reclaim, {token_id});
      if (open_case_) open_case_(token_id, *result.prior_owner);
      break;
    }
  }
}

DispatchResult OracleBridge::privileged_dispatch(Origin origin, DispatchAction action,
                                                 const DispatchArgs& args) {
  if (!authorized(origin, action)) {
    throw Error(Errc::NotOracle, std::string(to_string(origin)) + " may not " +
                                     std::string(to_string(action)));
  }
  precheck(ledger_, token_, action, args);
  ledger_.append("OracleDispatch", {{"origin", std::string(to_string(origin))},
                                    {"action", std::string(to_string(action))},
                                    {"token_id", args.token_id}});
  DispatchResult result;
  switch (action) {
    case DispatchAction::Lock:
      result.changed = token_.oracle_lock(self_, args.token_id);
      break;
    case DispatchAction::Unlock:
      token_.oracle_unlock(self_, args.token_id);
      break;
    case DispatchAction::Reclaim:
      result.prior_owner = token_.oracle_reclaim(self_, args.token_id);
      break;
    case DispatchAction::Freeze:
      if (!args.until) throw Error(Errc::InvalidInput, "freeze needs a deadline");
      token_.oracle_freeze(self_, args.token_id, *args.until);
      break;
    case DispatchAction::Unfreeze:
      token_.oracle_set_freeze(self_, args.token_id, args.until);
      break;
    case DispatchAction::MarkAbnormal:
      token_.oracle_mark_abnormal(self_, args.token_id, args.status);
      break;
    case DispatchAction::Return:
      if (!args.to) throw Error(Errc::InvalidInput, "return needs a recipient");
      token_.verdict_return(self_, args.token_id, *args.to);
      break;
  }
  return result;
}

}  // namespace tp
