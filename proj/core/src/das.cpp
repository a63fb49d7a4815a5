#include "tp/das.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "tp/error.hpp"

namespace tp {

namespace {

std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t range) {
  const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % range;
  std::uint64_t x = 0;
  do {
    x = gen();
  } while (x >= limit);
  return x % range;
}

std::uint64_t jury_seed(std::uint64_t seed, CaseId case_id) {
  std::string material = "tp-jury";
  for (int shift = 56; shift >= 0; shift -= 8) material.push_back(static_cast<char>((seed >> shift) & 0xff));
  for (int shift = 56; shift >= 0; shift -= 8) material.push_back(static_cast<char>((case_id >> shift) & 0xff));
  const Digest d = sha256(material);
  std::uint64_t out = 0;
  for (int i = 0; i < 8; ++i) out = (out << 8) | d[i];
  return out;
}

}  // namespace

std::string_view to_string(Vote v) { return v == Vote::ForReporter ? "FOR_REPORTER" : "FOR_HOLDER"; }

std::string_view to_string(CaseStatus s) {
  switch (s) {
    case CaseStatus::Open: return "open";
    case CaseStatus::Voting: return "voting";
    case CaseStatus::Closed: return "closed";
  }
  return "?";
}

json SettlementRecord::to_json() const {
  json winners = json::array();
  for (const auto& a : rewarded) winners.push_back(a.to_hex());
  return {{"case_id", case_id},
          {"verdict", std::string(to_string(verdict))},
          {"token_to", token_to.to_hex()},
          {"escrowed", escrowed.to_string()},
          {"refunded", refunded.to_string()},
          {"distributed", distributed.to_string()},
          {"fees", fees.to_string()},
          {"minted", minted.to_string()},
          {"rewarded", winners}};
}

std::optional<Vote> QuorumTally::add(Vote v) {
  if (verdict_) throw std::logic_error("tally already decided");
  (v == Vote::ForReporter ? reporter_ : holder_)++;
  const std::uint32_t quorum = 2 * f_ + 1;
  if (reporter_ >= quorum) verdict_ = Vote::ForReporter;
  else if (holder_ >= quorum) verdict_ = Vote::ForHolder;
  else if (reporter_ + holder_ >= 3 * f_ + 1) verdict_ = Vote::ForHolder;
  return verdict_;
}

std::vector<Address> seeded_sample(std::vector<Address> pool, std::size_t count, std::uint64_t seed) {
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (count > pool.size()) throw std::invalid_argument("sample larger than pool");
  std::mt19937_64 gen(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(bounded(gen, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

Das::Das(Ledger& ledger, Erc721g& token, OracleBridge& bridge, JuryConfig config,
         Address fee_collector)
    : ledger_(ledger), token_(token), bridge_(bridge), config_(config), fee_collector_(fee_collector) {}

void Das::enroll_juror(const Address& addr) {
  ledger_.account(addr);
  if (std::find(pool_.begin(), pool_.end(), addr) != pool_.end()) return;
  pool_.push_back(addr);
  ledger_.append("JurorEnrolled", {{"juror", addr.to_hex()}});
}

Amount Das::required_deposit(TokenId token_id) const {
  const TokenRecord& t = token_.token(token_id);
  Amount value;
  if (auto last = t.last_sale_price()) value = std::max(value, *last);
  if (auto floor = Drm::collection_floor(token_.tokens())) value = std::max(value, *floor);
  return std::max(config_.deposit_min, value.scaled_by(config_.deposit_rate));
}

const ArbitrationCase& Das::get(CaseId case_id) const {
  auto it = cases_.find(case_id);
  if (it == cases_.end()) throw Error(Errc::UnknownCase, "case " + std::to_string(case_id));
  return it->second;
}

ArbitrationCase& Das::mutable_case(CaseId case_id) {
  auto it = cases_.find(case_id);
  if (it == cases_.end()) throw Error(Errc::UnknownCase, "case " + std::to_string(case_id));
  return it->second;
}

std::optional<CaseId> Das::open_case_for(TokenId token_id) const {
  for (const auto& [id, c] : cases_) {
    if (c.token_id == token_id && c.status != CaseStatus::Closed) return id;
  }
  return std::nullopt;
}

CaseId Das::file_report(const Address& reporter, TokenId token_id) {
  ledger_.account(reporter);
  const TokenRecord& t = token_.token(token_id);
  const Amount deposit = required_deposit(token_id);
  const Amount needed = deposit + config_.gas_fee;

  if (auto existing = open_case_for(token_id)) {
    ArbitrationCase& c = mutable_case(*existing);
    if (!(c.auto_opened && !c.report_filed && c.reporter == reporter)) {
      throw Error(Errc::DuplicateCase, "token " + std::to_string(token_id) + " already has case " +
                                           std::to_string(*existing));
    }
    if (ledger_.balance(reporter) < needed) {
      throw Error(Errc::InsufficientFunds, "deposit " + deposit.to_string() + " plus gas " +
                                               config_.gas_fee.to_string());
    }
    ledger_.escrow(reporter, needed, c.case_id);
    c.deposit = deposit;
    c.gas_prepaid = config_.gas_fee;
    c.report_filed = true;
    ledger_.append("ReportFiled", {{"case_id", c.case_id},
                                   {"token_id", token_id},
                                   {"reporter", reporter.to_hex()},
                                   {"deposit", deposit.to_string()},
                                   {"gas_prepaid", config_.gas_fee.to_string()}});
    return c.case_id;
  }

  if (t.state != TokenState::Reclaimed && t.owner == reporter) {
    throw Error(Errc::InvalidInput, "holder cannot report its own token");
  }
  if (ledger_.balance(reporter) < needed) {
    throw Error(Errc::InsufficientFunds, "deposit " + deposit.to_string() + " plus gas " +
                                             config_.gas_fee.to_string());
  }

  ArbitrationCase c;
  c.case_id = new_case_id();
  c.token_id = token_id;
  c.reporter = reporter;
  c.respondent = t.owner;
  c.report_filed = true;
  c.deposit = deposit;
  c.gas_prepaid = config_.gas_fee;
  if (t.state == TokenState::Reclaimed) {
    for (auto it = t.provenance.rbegin(); it != t.provenance.rend(); ++it) {
      if (it->kind == ProvenanceKind::Reclaim) {
        c.prior_holder = it->from;
        break;
      }
    }
  }
  const bool freeze = t.state != TokenState::Reclaimed;
  if (freeze) c.prior_frozen_until = t.frozen_until;
  const CaseId id = c.case_id;
  cases_.emplace(id, c);

  ledger_.append("CaseOpened", {{"case_id", id},
                                {"token_id", token_id},
                                {"reporter", reporter.to_hex()},
                                {"respondent", c.respondent.to_hex()},
                                {"deposit", deposit.to_string()},
                                {"gas_prepaid", config_.gas_fee.to_string()},
                                {"auto", false}});
  ledger_.escrow(reporter, needed, id);
  if (freeze) {
    DispatchArgs args{token_id};
    args.until = ledger_.now() + config_.case_horizon_ticks;
    bridge_.privileged_dispatch(Origin::Das, DispatchAction::Freeze, args);
  }
  return id;
}

CaseId Das::open_auto_case(TokenId token_id, const Address& prior_owner) {
  if (auto existing = open_case_for(token_id)) {
    ArbitrationCase& c = mutable_case(*existing);
    c.prior_holder = prior_owner;
    ledger_.append("CaseLinked", {{"case_id", c.case_id},
                                  {"token_id", token_id},
                                  {"prior_holder", prior_owner.to_hex()}});
    return c.case_id;
  }
  ArbitrationCase c;
  c.case_id = new_case_id();
  c.token_id = token_id;
  c.reporter = prior_owner;
  c.respondent = token_.treasury();
  c.prior_holder = prior_owner;
  c.auto_opened = true;
  const CaseId id = c.case_id;
  cases_.emplace(id, c);
  ledger_.append("CaseOpened", {{"case_id", id},
                                {"token_id", token_id},
                                {"reporter", prior_owner.to_hex()},
                                {"respondent", token_.treasury().to_hex()},
                                {"deposit", Amount{}.to_string()},
                                {"gas_prepaid", Amount{}.to_string()},
                                {"auto", true}});
  return id;
}

void Das::submit_evidence(CaseId case_id, const Address& party, std::span<const std::uint8_t> blob) {
  ArbitrationCase& c = mutable_case(case_id);
  if (c.status == CaseStatus::Closed) throw Error(Errc::CaseClosed, "case " + std::to_string(case_id));
  if (party != c.reporter && party != c.respondent) {
    throw Error(Errc::NotAParty, party.to_hex() + " in case " + std::to_string(case_id));
  }
  const Digest d = sha256(blob);
  c.evidence.push_back({party, d, ledger_.now()});
  ledger_.append("EvidenceSubmitted", {{"case_id", case_id},
                                       {"party", party.to_hex()},
                                       {"digest", to_hex(d)},
                                       {"index", c.evidence.size() - 1}});
}

void Das::submit_evidence(CaseId case_id, const Address& party, std::string_view blob) {
  submit_evidence(case_id, party,
                  std::span(reinterpret_cast<const std::uint8_t*>(blob.data()), blob.size()));
}

std::vector<Address> Das::empanel_jury(CaseId case_id, const std::vector<Address>& pool,
                                       std::uint64_t seed) {
  ArbitrationCase& c = mutable_case(case_id);
  if (c.status == CaseStatus::Closed) throw Error(Errc::CaseClosed, "case " + std::to_string(case_id));
  if (c.status != CaseStatus::Open) {
    throw Error(Errc::InvalidInput, "case " + std::to_string(case_id) + " already has a jury");
  }
  std::vector<Address> eligible;
  for (const auto& a : pool) {
    if (a == c.reporter || a == c.respondent || (c.prior_holder && a == *c.prior_holder)) continue;
    if (!ledger_.has_account(a)) continue;
    eligible.push_back(a);
  }
  std::sort(eligible.begin(), eligible.end());
  eligible.erase(std::unique(eligible.begin(), eligible.end()), eligible.end());
  const std::size_t n = config_.jury_size();
  if (eligible.size() < n) {
    throw Error(Errc::InsufficientJurors, std::to_string(eligible.size()) + " eligible, need " +
                                              std::to_string(n));
  }
  c.jury = seeded_sample(std::move(eligible), n, jury_seed(seed, case_id));
  c.status = CaseStatus::Voting;
  json jurors = json::array();
  for (const auto& j : c.jury) jurors.push_back(j.to_hex());
  ledger_.append("JuryEmpaneled", {{"case_id", case_id}, {"jury", jurors}});
  return c.jury;
}

std::optional<Vote> Das::cast_vote(CaseId case_id, const Address& juror, Vote vote) {
  ArbitrationCase& c = mutable_case(case_id);
  if (c.status == CaseStatus::Closed) throw Error(Errc::CaseClosed, "case " + std::to_string(case_id));
  if (c.status != CaseStatus::Voting) throw Error(Errc::NotVoting, "case " + std::to_string(case_id));
  if (std::find(c.jury.begin(), c.jury.end(), juror) == c.jury.end()) {
    throw Error(Errc::NotJuror, juror.to_hex());
  }
  for (const auto& [who, _] : c.votes) {
    if (who == juror) throw Error(Errc::AlreadyVoted, juror.to_hex());
  }
  c.votes.emplace_back(juror, vote);
  ledger_.append("VoteCast", {{"case_id", case_id},
                              {"juror", juror.to_hex()},
                              {"vote", std::string(to_string(vote))}});
  QuorumTally tally(config_.f);
  std::optional<Vote> verdict;
  for (const auto& [_, v] : c.votes) verdict = tally.add(v);
  if (!verdict) return std::nullopt;
  c.verdict = verdict;
  ledger_.append("VerdictReached", {{"case_id", case_id},
                                    {"verdict", std::string(to_string(*verdict))},
                                    {"for_reporter", tally.for_reporter()},
                                    {"for_holder", tally.for_holder()}});
  settle(c);
  return verdict;
}

SettlementRecord Das::close_case(CaseId case_id) {
  ArbitrationCase& c = mutable_case(case_id);
  if (c.status == CaseStatus::Closed) throw Error(Errc::CaseClosed, "case " + std::to_string(case_id));
  if (!c.verdict) throw Error(Errc::NoVerdict, "case " + std::to_string(case_id));
  return settle(c);
}

SettlementRecord Das::settle(ArbitrationCase& c) {
  SettlementRecord rec;
  rec.case_id = c.case_id;
  rec.verdict = *c.verdict;
  rec.escrowed = ledger_.escrow_balance(c.case_id);
  const TokenRecord& t = token_.token(c.token_id);

  std::vector<Address> winners;
  for (const auto& [juror, v] : c.votes) {
    if (v == rec.verdict) winners.push_back(juror);
  }

  if (rec.verdict == Vote::ForReporter) {
    if (t.state != TokenState::Reclaimed) {
      bridge_.privileged_dispatch(Origin::Das, DispatchAction::Reclaim, {c.token_id});
    }
    DispatchArgs ret{c.token_id};
    ret.to = c.reporter;
    bridge_.privileged_dispatch(Origin::Das, DispatchAction::Return, ret);
    rec.token_to = c.reporter;
    if (c.deposit > Amount{}) {
      ledger_.release_escrow(c.case_id, c.reporter, c.deposit, "refund");
      rec.refunded = c.deposit;
    }
  } else {
    if (t.state == TokenState::Reclaimed) {
      DispatchArgs ret{c.token_id};
      ret.to = c.prior_holder.value_or(c.respondent);
      bridge_.privileged_dispatch(Origin::Das, DispatchAction::Return, ret);
      rec.token_to = *ret.to;
    } else {
      if (c.report_filed && !c.auto_opened) {
        DispatchArgs unfreeze{c.token_id};
        unfreeze.until = c.prior_frozen_until;
        bridge_.privileged_dispatch(Origin::Das, DispatchAction::Unfreeze, unfreeze);
      }
      rec.token_to = token_.token(c.token_id).owner;
    }
    if (c.deposit > Amount{}) {
      const Amount share = c.deposit.div_floor(static_cast<std::int64_t>(winners.size()));
      for (const auto& w : winners) {
        ledger_.release_escrow(c.case_id, w, share, "juror_share");
        rec.distributed += share;
      }
    }
  }

  const Amount leftover = ledger_.escrow_balance(c.case_id);
  if (leftover > Amount{}) {
    ledger_.release_escrow(c.case_id, fee_collector_, leftover, "gas");
    rec.fees = leftover;
  }

  for (const auto& w : winners) {
    if (config_.juror_reward > Amount{}) {
      ledger_.mint_reward(w, config_.juror_reward, c.case_id);
      rec.minted += config_.juror_reward;
    }
    ledger_.append("HonorAwarded", {{"case_id", c.case_id}, {"juror", w.to_hex()}});
  }
  rec.rewarded = winners;

  c.status = CaseStatus::Closed;
  c.settlement = rec;
  ledger_.append("CaseSettled", rec.to_json());
  ledger_.append("CaseClosed", {{"case_id", c.case_id}, {"verdict", std::string(to_string(rec.verdict))}});
  return rec;
}

}  // namespace tp
