#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tp/config.hpp"
#include "tp/erc721g.hpp"
#include "tp/event_log.hpp"
#include "tp/types.hpp"

namespace tp {

// What the risk engine may read about an account.
struct AccountView {
  bool explorer_flagged = false;
  ChainTime created_at;
  bool aux_linked = false;
};

// Immutable copy of the ledger state a verdict is computed from.
struct RiskSnapshot {
  ChainTime now;
  std::map<Address, AccountView> accounts;
  std::map<TokenId, TokenRecord> tokens;
};

struct FeatureVector {
  Address sender;
  Address recipient;
  Address caller;
  Amount price;
  std::optional<Amount> floor;
  // price / floor truncated to 9 digits; absent for gifts or without a floor.
  std::optional<Score> price_ratio;
  std::uint64_t turnover_count = 0;
  Score sender_credit;
  Score recipient_credit;
  bool sender_flagged = false;
  bool recipient_flagged = false;
  bool sender_aux_linked = false;
  bool recipient_aux_linked = false;
  TokenState token_state = TokenState::Ok;
  bool prior_abnormal = false;
  Score model_score;

  json to_json() const;
  static FeatureVector from_json(const json& j);
  bool operator==(const FeatureVector&) const = default;
};

enum class RuleId { Underpriced, HighTurnover, LowCredit, FlaggedParty, PriorAbnormal };
enum class Severity { Weak, Strong };

std::string_view to_string(RuleId id);
std::string_view to_string(Severity s);
Severity severity_of(RuleId id);

struct RuleHit {
  RuleId rule = RuleId::Underpriced;
  Severity severity = Severity::Weak;
  std::string detail;

  bool operator==(const RuleHit&) const = default;
};

struct RiskVerdict {
  RiskStatus status = RiskStatus::Safe;
  std::vector<RuleHit> hits;
  FeatureVector features;

  json to_json() const;
  bool operator==(const RiskVerdict&) const = default;
};

// Pluggable stand-in for the learned risk model. Implementations must be pure.
class ModelScorer {
 public:
  virtual ~ModelScorer() = default;
  virtual Score score(const FeatureVector& features) const = 0;
};

class ZeroScorer final : public ModelScorer {
 public:
  Score score(const FeatureVector&) const override { return Score{}; }
};

// Lookup keyed by (sender, recipient); either side may be a wildcard.
// Resolution order: exact pair, (sender, *), (*, recipient), (*, *), else 0.
class TableScorer final : public ModelScorer {
 public:
  void set(std::optional<Address> sender, std::optional<Address> recipient, Score score);
  Score score(const FeatureVector& features) const override;
  bool empty() const { return table_.empty(); }

 private:
  std::map<std::pair<std::optional<Address>, std::optional<Address>>, Score> table_;
};

class Drm {
 public:
  explicit Drm(RiskConfig config);

  const RiskConfig& config() const { return config_; }

  void set_scorer(std::shared_ptr<const ModelScorer> scorer);
  // Installs or extends the table scorer used by scenarios.
  void set_model_entry(std::optional<Address> sender, std::optional<Address> recipient, Score score);

  void add_phishing_operator(const Address& addr) { phishing_.insert(addr); }
  bool is_phishing_operator(const Address& addr) const { return phishing_.contains(addr); }

  // Minimum over tokens of each token's last nonzero sale price.
  static std::optional<Amount> collection_floor(const std::map<TokenId, TokenRecord>& tokens);
  static std::optional<Amount> collection_floor(const RiskSnapshot& snapshot) {
    return collection_floor(snapshot.tokens);
  }
  Score credit_score(const Address& addr, const RiskSnapshot& snapshot) const;
  FeatureVector extract_features(const TransferIntent& intent, const RiskSnapshot& snapshot) const;
  Score model_score(const FeatureVector& features) const;
  RiskVerdict evaluate(const TransferIntent& intent, const RiskSnapshot& snapshot) const;

  // Rule table and status mapping over an already-extracted feature vector.
  // This is the path used to recompute logged verdicts offline.
  static RiskVerdict classify(const FeatureVector& features, const RiskConfig& config);

 private:
  RiskConfig config_;
  std::shared_ptr<const ModelScorer> scorer_;
  std::shared_ptr<TableScorer> table_;
  std::set<Address> phishing_;
};

}  // namespace tp
