#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string_view>

#include "tp/config.hpp"
#include "tp/drm.hpp"
#include "tp/erc721g.hpp"
#include "tp/ledger.hpp"

namespace tp {

// Who asks the bridge to touch the token contract.
enum class Origin { User, Dac, Drm, Das };

enum class DispatchAction { Lock, Unlock, Reclaim, Freeze, Unfreeze, MarkAbnormal, Return };

std::string_view to_string(Origin o);
std::string_view to_string(DispatchAction a);

struct DispatchArgs {
  TokenId token_id = 0;
  std::optional<Address> to;            // Return
  std::optional<ChainTime> until;       // Freeze / Unfreeze (absent clears)
  RiskStatus status = RiskStatus::MayLost;  // MarkAbnormal
};

struct DispatchResult {
  bool changed = true;     // Lock: false when already locked
  std::optional<Address> prior_owner;  // Reclaim
};

enum class RequestStatus { Pending, Fulfilled };

struct RiskRequest {
  RequestId request_id = 0;
  TransferIntent intent;
  ChainTime created_at;
  RequestStatus status = RequestStatus::Pending;
};

// The oracle contract: request/fulfill message pair between the token
// contract and the risk engine, and the only caller the token contract
// accepts for privileged operations.
class OracleBridge final : public RiskGate, public OperatorSupervisor {
 public:
  using SnapshotProvider = std::function<RiskSnapshot()>;
  // Invoked after a hacked verdict reclaims a token: (token, prior owner).
  using CaseOpener = std::function<void(TokenId, const Address&)>;

  OracleBridge(Ledger& ledger, Erc721g& token, Drm& drm, Address self, std::uint64_t freeze_ticks);

  const Address& address() const { return self_; }

  void set_snapshot_provider(SnapshotProvider provider) { snapshot_ = std::move(provider); }
  void set_case_opener(CaseOpener opener) { open_case_ = std::move(opener); }

  TransferOutcome request_risk_check(const TransferIntent& intent) override;
  bool operator_blocked(const Address& operator_addr) const override;

  // Logs RiskRequested and returns the new id; the request stays pending.
  RequestId submit(const TransferIntent& intent);
  void fulfill(RequestId request_id, const RiskVerdict& verdict);

  DispatchResult privileged_dispatch(Origin origin, DispatchAction action, const DispatchArgs& args);

  const std::map<RequestId, RiskRequest>& requests() const { return requests_; }
  std::uint64_t freeze_ticks() const { return freeze_ticks_; }

 private:
  Ledger& ledger_;
  Erc721g& token_;
  Drm& drm_;
  Address self_;
  std::uint64_t freeze_ticks_;
  SnapshotProvider snapshot_;
  CaseOpener open_case_;
  RequestId next_id_ = 1;
  std::map<RequestId, RiskRequest> requests_;
};

json intent_to_json(const TransferIntent& intent);

}  // namespace tp
