#include "tp/report.hpp"

#include <sstream>

#include "log_fields.hpp"

namespace tp {

using detail::address_field;
using detail::amount_field;
using detail::uint_field;

namespace {

class ReportBuilder {
 public:
  explicit ReportBuilder(RunReport& r) : r_(r) {
    r_.verdicts[RiskStatus::Safe] = 0;
    r_.verdicts[RiskStatus::MayLost] = 0;
    r_.verdicts[RiskStatus::Hacked] = 0;
  }

  void apply(const EventRecord& e) {
    const json& p = e.payload;
    const std::string& k = e.kind;
    if (k == "Genesis") {
      r_.scenario = p.at("scenario").get<std::string>();
      r_.seed = uint_field(p, "seed");
      r_.config = SimConfig::from_json(p.at("config"));
    } else if (k == "Command") {
      ++r_.steps;
    } else if (k == "StepError") {
      ++r_.step_errors;
    } else if (k == "AccountCreated") {
      const Address a = address_field(p, "address");
      const Amount b = amount_field(p, "balance");
      r_.balances[a] = b;
      r_.labels[a] = p.at("label").get<std::string>();
      r_.initial += b;
    } else if (k == "ValueTransferred") {
      const Address from = address_field(p, "from");
      const Address to = address_field(p, "to");
      const Amount amt = amount_field(p, "amount");
      r_.balances[from] -= amt;
      r_.balances[to] += amt;
      expect_balance(e, from, amount_field(p, "from_balance"));
      expect_balance(e, to, amount_field(p, "to_balance"));
    } else if (k == "DepositEscrowed") {
      const Address from = address_field(p, "from");
      const Amount amt = amount_field(p, "amount");
      r_.balances[from] -= amt;
      r_.escrow += amt;
      escrowed_[uint_field(p, "case_id")] += amt;
      expect_balance(e, from, amount_field(p, "from_balance"));
    } else if (k == "EscrowReleased") {
      const Address to = address_field(p, "to");
      const Amount amt = amount_field(p, "amount");
      r_.balances[to] += amt;
      r_.escrow -= amt;
      released_[uint_field(p, "case_id")] += amt;
      expect_balance(e, to, amount_field(p, "to_balance"));
    } else if (k == "RewardMinted") {
      const Address to = address_field(p, "to");
      const Amount amt = amount_field(p, "amount");
      r_.balances[to] += amt;
      r_.minted += amt;
      expect_balance(e, to, amount_field(p, "to_balance"));
    } else if (k == "Minted") {
      TokenRow row;
      row.token_id = uint_field(p, "token_id");
      row.owner = address_field(p, "to");
      r_.tokens[row.token_id] = row;
    } else if (k == "Transfer" || k == "SafeTransfer") {
      TokenRow& t = token(p);
      t.owner = address_field(p, "to");
      t.state = TokenState::Locked;
      t.frozen_until.reset();
    } else if (k == "Locked") {
      token(p).state = TokenState::Locked;
    } else if (k == "Unlocked") {
      token(p).state = TokenState::Ok;
    } else if (k == "Reclaimed") {
      TokenRow& t = token(p);
      t.owner = address_field(p, "owner");
      t.state = TokenState::Reclaimed;
      t.frozen_until.reset();
    } else if (k == "Returned") {
      TokenRow& t = token(p);
      t.owner = address_field(p, "to");
      t.state = TokenState::Locked;
      t.frozen_until.reset();
    } else if (k == "Frozen") {
      token(p).frozen_until = uint_field(p, "frozen_until");
    } else if (k == "Unfrozen") {
      TokenRow& t = token(p);
      if (p.at("frozen_until").is_string()) {
        t.frozen_until.reset();
      } else {
        t.frozen_until = uint_field(p, "frozen_until");
      }
    } else if (k == "RiskFulfilled") {
      auto s = risk_status_from_string(p.at("status").get<std::string>());
      if (!s) throw Error(Errc::ReplayError, "bad verdict status at seq " + std::to_string(e.seq));
      ++r_.verdicts[*s];
    } else if (k == "CaseOpened") {
      CaseRow c;
      c.case_id = uint_field(p, "case_id");
      c.token_id = uint_field(p, "token_id");
      c.reporter = address_field(p, "reporter");
      c.respondent = address_field(p, "respondent");
      c.auto_opened = p.at("auto").get<bool>();
      c.report_filed = !c.auto_opened;
      r_.cases[c.case_id] = c;
    } else if (k == "ReportFiled") {
      kase(p).report_filed = true;
    } else if (k == "VoteCast") {
      CaseRow& c = kase(p);
      (p.at("vote").get<std::string>() == "FOR_REPORTER" ? c.for_reporter : c.for_holder)++;
    } else if (k == "VerdictReached") {
      kase(p).verdict = vote_field(p);
    } else if (k == "CaseSettled") {
      CaseRow& c = kase(p);
      c.settlement = p;
      check_settlement(e, c);
    } else if (k == "CaseClosed") {
      kase(p).closed = true;
    }
  }

  void finish() {
    Amount total;
    for (const auto& [_, b] : r_.balances) {
      total += b;
    }
    r_.conservation_ok = total + r_.escrow == r_.initial + r_.minted;
    if (!r_.conservation_ok) {
      r_.problems.push_back("conservation: balances " + total.to_string() + " + escrow " +
                            r_.escrow.to_string() + " != issuance " + r_.initial.to_string() +
                            " + minted " + r_.minted.to_string());
    }
    for (const auto& [id, amt] : escrowed_) {
      const Amount out = released_[id];
      if (out > amt) r_.problems.push_back("case " + std::to_string(id) + ": escrow released beyond deposit");
    }
    if (r_.config) {
      Amount expected;
      for (const auto& [_, c] : r_.cases) {
        if (c.settlement) {
          expected += r_.config->jury.juror_reward * static_cast<std::int64_t>(c.settlement->at("rewarded").size());
        }
      }
      if (expected != r_.minted) {
        r_.problems.push_back("minted rewards " + r_.minted.to_string() + " != juror_reward x winners " +
                              expected.to_string());
      }
    }
  }

 private:
  TokenRow& token(const json& p) {
    const TokenId id = uint_field(p, "token_id");
    auto it = r_.tokens.find(id);
    if (it == r_.tokens.end()) throw Error(Errc::ReplayError, "event for unminted token " + std::to_string(id));
    return it->second;
  }

  CaseRow& kase(const json& p) {
    const CaseId id = uint_field(p, "case_id");
    auto it = r_.cases.find(id);
    if (it == r_.cases.end()) throw Error(Errc::ReplayError, "event for unknown case " + std::to_string(id));
    return it->second;
  }

  static Vote vote_field(const json& p) {
    const auto s = p.at("verdict").get<std::string>();
    if (s == "FOR_REPORTER") return Vote::ForReporter;
    if (s == "FOR_HOLDER") return Vote::ForHolder;
    throw Error(Errc::ReplayError, "bad verdict " + s);
  }

  void expect_balance(const EventRecord& e, const Address& a, Amount logged) {
    if (r_.balances[a] != logged) {
      r_.problems.push_back("seq " + std::to_string(e.seq) + ": logged balance " + logged.to_string() +
                            " of " + a.to_hex() + " != recomputed " + r_.balances[a].to_string());
    }
  }

  void check_settlement(const EventRecord& e, const CaseRow& c) {
    const json& s = *c.settlement;
    const Amount escrowed = amount_field(s, "escrowed");
    const Amount refunded = amount_field(s, "refunded");
    const Amount distributed = amount_field(s, "distributed");
    const Amount fees = amount_field(s, "fees");
    const Amount minted = amount_field(s, "minted");
    const std::string where = "seq " + std::to_string(e.seq) + " case " + std::to_string(c.case_id);
    if (escrowed != refunded + distributed + fees) {
      r_.problems.push_back(where + ": escrowed != refunded + distributed + fees");
    }
    if (escrowed != escrowed_[c.case_id]) {
      r_.problems.push_back(where + ": settlement escrow differs from deposits logged");
    }
    if (r_.config) {
      const auto winners = static_cast<std::int64_t>(s.at("rewarded").size());
      if (minted != r_.config->jury.juror_reward * winners) {
        r_.problems.push_back(where + ": minted != juror_reward x winners");
      }
    }
  }

  RunReport& r_;
  std::map<CaseId, Amount> escrowed_;
  std::map<CaseId, Amount> released_;
};

}  // namespace

std::size_t RunReport::verdict_count(RiskStatus s) const {
  auto it = verdicts.find(s);
  return it == verdicts.end() ? 0 : it->second;
}

std::string RunReport::name_of(const Address& a) const {
  auto it = labels.find(a);
  if (it == labels.end() || it->second.empty()) return a.to_hex();
  return it->second;
}

RunReport build_report(const std::vector<EventRecord>& events) {
  RunReport r;
  ReportBuilder b(r);
  try {
    for (const auto& e : events) b.apply(e);
  } catch (const json::exception& ex) {
    throw Error(Errc::ReplayError, std::string("malformed payload: ") + ex.what());
  }
  b.finish();
  r.event_count = events.size();
  r.digest_hex = to_hex(digest_of(events));
  return r;
}

std::string format_token_state(const TokenRow& row) {
  std::ostringstream out;
  out << "token=" << row.token_id << " owner=" << row.owner.to_hex() << " state=" << to_string(row.state)
      << " frozen_until=" << (row.frozen_until ? std::to_string(*row.frozen_until) : std::string("-"));
  return out.str();
}

std::string format_case(const RunReport& report, const CaseRow& c) {
  std::ostringstream out;
  out << "case=" << c.case_id << " token=" << c.token_id << " reporter=" << report.name_of(c.reporter)
      << " respondent=" << report.name_of(c.respondent) << " auto=" << (c.auto_opened ? "yes" : "no")
      << " filed=" << (c.report_filed ? "yes" : "no") << " votes=R" << c.for_reporter << "/H" << c.for_holder
      << " verdict=" << (c.verdict ? std::string(to_string(*c.verdict)) : std::string("-"))
      << " status=" << (c.closed ? "closed" : "open");
  if (c.settlement) {
    const json& s = *c.settlement;
    out << " escrowed=" << s.at("escrowed").get<std::string>() << " refunded=" << s.at("refunded").get<std::string>()
        << " distributed=" << s.at("distributed").get<std::string>() << " fees=" << s.at("fees").get<std::string>()
        << " minted=" << s.at("minted").get<std::string>();
  }
  return out.str();
}

std::string format_report(const RunReport& r) {
  std::ostringstream out;
  out << "scenario: " << (r.scenario.empty() ? "-" : r.scenario) << "\n";
  out << "seed: " << r.seed << "\n";
  out << "events: " << r.event_count << "  steps: " << r.steps << "  step errors: " << r.step_errors << "\n";
  out << "verdicts: safe=" << r.verdict_count(RiskStatus::Safe)
      << " may_lost=" << r.verdict_count(RiskStatus::MayLost)
      << " hacked=" << r.verdict_count(RiskStatus::Hacked) << "\n";
  out << "tokens:\n";
  for (const auto& [_, t] : r.tokens) {
    out << "  " << format_token_state(t) << " (" << r.name_of(t.owner) << ")\n";
  }
  out << "cases:\n";
  for (const auto& [_, c] : r.cases) out << "  " << format_case(r, c) << "\n";
  out << "balances:\n";
  for (const auto& [a, b] : r.balances) out << "  " << r.name_of(a) << " " << b.to_string() << "\n";
  out << "issuance: " << r.initial.to_string() << "  minted: " << r.minted.to_string()
      << "  escrow: " << r.escrow.to_string() << "\n";
  out << "conservation: " << (r.conservation_ok ? "ok" : "FAILED") << "\n";
  for (const auto& p : r.problems) out << "problem: " << p << "\n";
  out << "log digest: " << r.digest_hex << "\n";
  return out.str();
}

}  // namespace tp
