#include "tp/drm.hpp"

#include <cmath>

#include "tp/error.hpp"

namespace tp {

namespace {

template <typename F>
json optional_json(const std::optional<F>& v) {
  return v ? json(v->to_string()) : json("-");
}

template <typename F>
std::optional<F> optional_from_json(const json& v) {
  const auto s = v.get<std::string>();
  if (s == "-") return std::nullopt;
  return F::parse_or_throw(s);
}

Address address_from_json(const json& v) {
  auto a = Address::from_hex(v.get<std::string>());
  if (!a) throw Error(Errc::InvalidInput, "bad address in feature payload");
  return *a;
}

}  // namespace

std::string_view to_string(RuleId id) {
  switch (id) {
    case RuleId::Underpriced: return "R1_UNDERPRICED";
    case RuleId::HighTurnover: return "R2_HIGH_TURNOVER";
    case RuleId::LowCredit: return "R3_LOW_CREDIT";
    case RuleId::FlaggedParty: return "R4_FLAGGED_PARTY";
    case RuleId::PriorAbnormal: return "R5_PRIOR_ABNORMAL";
  }
  return "?";
}

std::string_view to_string(Severity s) { return s == Severity::Strong ? "strong" : "weak"; }

Severity severity_of(RuleId id) {
  return id == RuleId::FlaggedParty ? Severity::Strong : Severity::Weak;
}

json FeatureVector::to_json() const {
  return {
      {"sender", sender.to_hex()},
      {"recipient", recipient.to_hex()},
      {"caller", caller.to_hex()},
      {"price", price.to_string()},
      {"floor", optional_json(floor)},
      {"price_ratio", optional_json(price_ratio)},
      {"turnover_count", turnover_count},
      {"sender_credit", sender_credit.to_string()},
      {"recipient_credit", recipient_credit.to_string()},
      {"sender_flagged", sender_flagged},
      {"recipient_flagged", recipient_flagged},
      {"sender_aux_linked", sender_aux_linked},
      {"recipient_aux_linked", recipient_aux_linked},
      {"token_state", std::string(tp::to_string(token_state))},
      {"prior_abnormal", prior_abnormal},
      {"model_score", model_score.to_string()},
  };
}

FeatureVector FeatureVector::from_json(const json& j) {
  try {
    FeatureVector f;
    f.sender = address_from_json(j.at("sender"));
    f.recipient = address_from_json(j.at("recipient"));
    f.caller = address_from_json(j.at("caller"));
    f.price = Amount::parse_or_throw(j.at("price").get<std::string>());
    f.floor = optional_from_json<Amount>(j.at("floor"));
    f.price_ratio = optional_from_json<Score>(j.at("price_ratio"));
    f.turnover_count = j.at("turnover_count").get<std::uint64_t>();
    f.sender_credit = Score::parse_or_throw(j.at("sender_credit").get<std::string>());
    f.recipient_credit = Score::parse_or_throw(j.at("recipient_credit").get<std::string>());
    f.sender_flagged = j.at("sender_flagged").get<bool>();
    f.recipient_flagged = j.at("recipient_flagged").get<bool>();
    f.sender_aux_linked = j.at("sender_aux_linked").get<bool>();
    f.recipient_aux_linked = j.at("recipient_aux_linked").get<bool>();
    auto st = token_state_from_string(j.at("token_state").get<std::string>());
    if (!st) throw Error(Errc::InvalidInput, "bad token_state in feature payload");
    f.token_state = *st;
    f.prior_abnormal = j.at("prior_abnormal").get<bool>();
    f.model_score = Score::parse_or_throw(j.at("model_score").get<std::string>());
    return f;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidInput, std::string("malformed feature payload: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(Errc::InvalidInput, std::string("malformed feature payload: ") + e.what());
  }
}

json RiskVerdict::to_json() const {
  json hit_list = json::array();
  for (const auto& h : hits) {
    hit_list.push_back({{"rule", std::string(to_string(h.rule))},
                        {"severity", std::string(to_string(h.severity))},
                        {"detail", h.detail}});
  }
  return {{"status", std::string(to_string(status))},
          {"hits", hit_list},
          {"features", features.to_json()}};
}

void TableScorer::set(std::optional<Address> sender, std::optional<Address> recipient, Score score) {
  table_[{sender, recipient}] = score;
}

Score TableScorer::score(const FeatureVector& features) const {
  const std::pair<std::optional<Address>, std::optional<Address>> keys[] = {
      {features.sender, features.recipient},
      {features.sender, std::nullopt},
      {std::nullopt, features.recipient},
      {std::nullopt, std::nullopt},
  };
  for (const auto& k : keys) {
    if (auto it = table_.find(k); it != table_.end()) return it->second;
  }
  return Score{};
}

Drm::Drm(RiskConfig config) : config_(config), scorer_(std::make_shared<ZeroScorer>()) {}

void Drm::set_scorer(std::shared_ptr<const ModelScorer> scorer) {
  scorer_ = scorer ? std::move(scorer) : std::make_shared<ZeroScorer>();
  table_.reset();
}

void Drm::set_model_entry(std::optional<Address> sender, std::optional<Address> recipient,
                          Score score) {
  if (!table_) {
    table_ = std::make_shared<TableScorer>();
    scorer_ = table_;
  }
  table_->set(sender, recipient, score);
}

std::optional<Amount> Drm::collection_floor(const std::map<TokenId, TokenRecord>& tokens) {
  std::optional<Amount> floor;
  for (const auto& [_, t] : tokens) {
    if (auto last = t.last_sale_price(); last && (!floor || *last < *floor)) floor = last;
  }
  return floor;
}

Score Drm::credit_score(const Address& addr, const RiskSnapshot& snapshot) const {
  auto it = snapshot.accounts.find(addr);
  if (it == snapshot.accounts.end()) throw Error(Errc::UnknownAccount, addr.to_hex());
  Amount portfolio;
  for (const auto& [_, t] : snapshot.tokens) {
    if (t.owner == addr) portfolio += t.last_sale_price().value_or(Amount{});
  }
  const double age = static_cast<double>(snapshot.now.ticks - it->second.created_at.ticks);
  const double flag = it->second.explorer_flagged ? 1.0 : 0.0;
  const double score = config_.w1.to_double() * std::log2(1.0 + portfolio.to_double()) +
                       config_.w2.to_double() * std::log2(1.0 + age) -
                       config_.w3.to_double() * flag * 100.0;
  return score_from_double(score);
}

FeatureVector Drm::extract_features(const TransferIntent& intent, const RiskSnapshot& snapshot) const {
  auto tok = snapshot.tokens.find(intent.token_id);
  if (tok == snapshot.tokens.end()) {
    throw Error(Errc::UnknownToken, "token " + std::to_string(intent.token_id));
  }
  const TokenRecord& t = tok->second;
  auto view = [&](const Address& a) -> const AccountView& {
    auto it = snapshot.accounts.find(a);
    if (it == snapshot.accounts.end()) throw Error(Errc::UnknownAccount, a.to_hex());
    return it->second;
  };
  const std::uint64_t now = snapshot.now.ticks;
  const std::uint64_t window = config_.window_ticks;

  FeatureVector f;
  f.sender = intent.from;
  f.recipient = intent.to;
  f.caller = intent.caller;
  f.price = intent.price;
  f.floor = collection_floor(snapshot);
  if (f.price > Amount{} && f.floor && *f.floor > Amount{}) {
    f.price_ratio = Score::from_raw(
        static_cast<std::int64_t>(f.price.raw() * Score::kScale / f.floor->raw()));
  }
  for (const auto& p : t.provenance) {
    if (p.kind == ProvenanceKind::Transfer && now - p.time.ticks < window) ++f.turnover_count;
  }
  f.sender_credit = credit_score(intent.from, snapshot);
  f.recipient_credit = credit_score(intent.to, snapshot);
  f.sender_flagged = view(intent.from).explorer_flagged || view(intent.caller).explorer_flagged;
  f.recipient_flagged = view(intent.to).explorer_flagged;
  f.sender_aux_linked = view(intent.from).aux_linked;
  f.recipient_aux_linked = view(intent.to).aux_linked;
  f.token_state = t.state;
  for (const auto& m : t.abnormal) {
    if (m.epoch < t.provenance.size() && now - m.time.ticks < window) f.prior_abnormal = true;
  }
  f.model_score = model_score(f);
  return f;
}

Score Drm::model_score(const FeatureVector& features) const { return scorer_->score(features); }

RiskVerdict Drm::evaluate(const TransferIntent& intent, const RiskSnapshot& snapshot) const {
  return classify(extract_features(intent, snapshot), config_);
}

RiskVerdict Drm::classify(const FeatureVector& f, const RiskConfig& config) {
  RiskVerdict v;
  v.features = f;
  auto hit = [&](RuleId id, std::string detail) {
    v.hits.push_back({id, severity_of(id), std::move(detail)});
  };
  if (f.price > Amount{} && f.floor &&
      f.price.raw() * Score::kScale < static_cast<__int128>(config.beta_underprice.raw()) * f.floor->raw()) {
    hit(RuleId::Underpriced, "price " + f.price.to_string() + " below " +
                                 config.beta_underprice.to_string() + " x floor " +
                                 f.floor->to_string());
  }
  if (f.turnover_count >= config.turnover_threshold) {
    hit(RuleId::HighTurnover, std::to_string(f.turnover_count) + " transfers within window");
  }
  if (f.recipient_credit < config.credit_threshold) {
    hit(RuleId::LowCredit, "recipient credit " + f.recipient_credit.to_string() + " below " +
                               config.credit_threshold.to_string());
  }
  if (f.sender_flagged || f.recipient_flagged) {
    hit(RuleId::FlaggedParty, std::string(f.sender_flagged ? "sender" : "") +
                                  (f.sender_flagged && f.recipient_flagged ? "+" : "") +
                                  (f.recipient_flagged ? "recipient" : "") + " flagged");
  }
  if (f.prior_abnormal) hit(RuleId::PriorAbnormal, "abnormal verdict under a previous holder");

  bool strong = false;
  bool weak = false;
  for (const auto& h : v.hits) (h.severity == Severity::Strong ? strong : weak) = true;
  if (strong || f.model_score >= config.p_hacked) {
    v.status = RiskStatus::Hacked;
  } else if (weak || f.model_score >= config.p_suspect) {
    v.status = RiskStatus::MayLost;
  } else {
    v.status = RiskStatus::Safe;
  }
  return v;
}

}  // namespace tp
