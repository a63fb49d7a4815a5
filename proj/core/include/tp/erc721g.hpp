#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "tp/crypto.hpp"
#include "tp/ledger.hpp"
#include "tp/types.hpp"

namespace tp {

enum class TokenState { Ok, Locked, Reclaimed };

std::string_view to_string(TokenState s);
std::optional<TokenState> token_state_from_string(std::string_view s);

enum class ProvenanceKind { Transfer, Reclaim, Return };

std::string_view to_string(ProvenanceKind k);

struct ProvenanceEntry {
  ProvenanceKind kind = ProvenanceKind::Transfer;
  Address from;
  Address to;
  Amount price;
  ChainTime time;
};

// A may_lost or hacked verdict recorded against a token. `epoch` is the
// provenance length when the verdict was fulfilled.
struct AbnormalMark {
  std::size_t epoch = 0;
  ChainTime time;
  RiskStatus status = RiskStatus::MayLost;
};

struct TokenRecord {
  TokenId token_id = 0;
  Address owner;
  TokenState state = TokenState::Ok;
  std::optional<Address> approved;
  std::optional<ChainTime> frozen_until;
  std::vector<ProvenanceEntry> provenance;
  std::vector<AbnormalMark> abnormal;

  // Price of the most recent transfer with a nonzero price.
  std::optional<Amount> last_sale_price() const;
};

enum class GuardReject { Locked, Reclaimed, Frozen, NotAuthorized };

std::string_view to_string(GuardReject r);

struct GuardResult {
  std::optional<GuardReject> reject;

  bool pass() const { return !reject.has_value(); }
  static GuardResult ok() { return {}; }
  static GuardResult fail(GuardReject r) { return GuardResult{r}; }
};

struct TransferOutcome {
  RequestId request_id = 0;
  RiskStatus status = RiskStatus::Safe;
};

// Risk checkpoint every guarded transfer must pass. Implemented by the
// oracle bridge, which applies any freeze or reclaim before returning.
class RiskGate {
 public:
  virtual ~RiskGate() = default;
  virtual TransferOutcome request_risk_check(const TransferIntent& intent) = 0;
};

// Decides whether setApprovalForAll may grant a given operator.
class OperatorSupervisor {
 public:
  virtual ~OperatorSupervisor() = default;
  virtual bool operator_blocked(const Address& operator_addr) const = 0;
};

// ERC-721 token contract extended with the OK / LOCKED / RECLAIMED state
// machine. Privileged entry points (oracle_*, verdict_return) only accept the
// oracle bridge address as caller.
class Erc721g {
 public:
  Erc721g(Ledger& ledger, Address oracle, Address treasury);

  void set_risk_gate(RiskGate* gate) { gate_ = gate; }
  void set_supervisor(const OperatorSupervisor* supervisor) { supervisor_ = supervisor; }

  const Address& oracle() const { return oracle_; }
  const Address& treasury() const { return treasury_; }

  void mint(const Address& to, TokenId token_id);

  GuardResult transfer_guard(TokenId token_id, const Address& caller, const Address& from) const;

  void approve(const Address& caller, const Address& to, TokenId token_id);
  void set_approval_for_all(const Address& caller, const Address& operator_addr, bool approved);
  bool is_approved_for_all(const Address& owner, const Address& operator_addr) const;

  TransferOutcome transfer_from(const Address& caller, const Address& from, const Address& to,
                                TokenId token_id, Amount price);
  // Identical to transfer_from; logged under its own event kind.
  TransferOutcome safe_transfer_from(const Address& caller, const Address& from, const Address& to,
                                     TokenId token_id, Amount price);

  // Returns false when the token was already LOCKED (idempotent no-op).
  bool oracle_lock(const Address& caller, TokenId token_id);
  void oracle_unlock(const Address& caller, TokenId token_id);
  // Returns the owner the token was taken from.
  Address oracle_reclaim(const Address& caller, TokenId token_id);
  void oracle_freeze(const Address& caller, TokenId token_id, ChainTime until);
  void oracle_set_freeze(const Address& caller, TokenId token_id, std::optional<ChainTime> until);
  void oracle_mark_abnormal(const Address& caller, TokenId token_id, RiskStatus status);
  void verdict_return(const Address& caller, TokenId token_id, const Address& to);

  bool exists(TokenId token_id) const { return tokens_.contains(token_id); }
  const TokenRecord& token(TokenId token_id) const;
  const std::map<TokenId, TokenRecord>& tokens() const { return tokens_; }
  std::size_t token_count() const { return tokens_.size(); }
  const std::map<std::pair<Address, Address>, bool>& operator_approvals() const {
    return operator_approvals_;
  }

  // Digest over all token and approval state; used to check guard purity.
  Digest state_digest() const;

 private:
  TokenRecord& mutable_token(TokenId token_id);
  void require_oracle(const Address& caller) const;
  TransferOutcome do_transfer(const Address& caller, const Address& from, const Address& to,
                              TokenId token_id, Amount price, bool safe);

  Ledger& ledger_;
  Address oracle_;
  Address treasury_;
  RiskGate* gate_ = nullptr;
  const OperatorSupervisor* supervisor_ = nullptr;
  std::map<TokenId, TokenRecord> tokens_;
  std::map<std::pair<Address, Address>, bool> operator_approvals_;
};

}  // namespace tp
