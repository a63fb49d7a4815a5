#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "world.hpp"

namespace {

using tp::Amount;
using tp::Errc;
using tp::TokenState;
using tp::Vote;
using tp::oracle::kUnit;
using tp::oracle::Raw;
using tp::test::amt;
using tp::test::errc_of;
using tp::test::World;

// ---- tally ------------------------------------------------------------------

void enumerate_tally(std::uint32_t f) {
  const std::uint32_t n = 3 * f + 1;
  std::vector<std::uint32_t> order(n);
  std::size_t sequences = 0;
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    const auto votes = tp::oracle::votes_from_mask(mask, n);
    std::iota(order.begin(), order.end(), 0);
    do {
      std::vector<Vote> seq;
      for (auto i : order) seq.push_back(votes[i]);
      tp::QuorumTally tally(f);
      std::optional<Vote> verdict;
      std::size_t used = 0;
      while (!verdict && used < n) verdict = tally.add(seq[used++]);
      ASSERT_TRUE(verdict.has_value());
      ASSERT_EQ(*verdict, tp::oracle::final_tally_verdict(seq, f)) << "mask " << mask;
      ASSERT_EQ(used, tp::oracle::votes_until_close(seq, f)) << "mask " << mask;
      ASSERT_THROW(tally.add(Vote::ForReporter), std::logic_error);
      ++sequences;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  std::size_t fact = 1;
  for (std::uint32_t i = 2; i <= n; ++i) fact *= i;
  EXPECT_EQ(sequences, fact << n);
}

TEST(QuorumTally, AllSequencesF1) { enumerate_tally(1); }
TEST(QuorumTally, AllSequencesF2) { enumerate_tally(2); }

TEST(QuorumTally, FByzantineCannotForceReporter) {
  for (std::uint32_t f = 1; f <= 4; ++f) {
    tp::QuorumTally t(f);
    for (std::uint32_t i = 0; i < 2 * f; ++i) EXPECT_FALSE(t.add(Vote::ForReporter).has_value());
    EXPECT_EQ(t.add(Vote::ForHolder), std::nullopt);
    EXPECT_EQ(t.add(Vote::ForReporter), Vote::ForReporter);
  }
}

// ---- full arbitration flow ----------------------------------------------------

struct CaseWorld {
  std::unique_ptr<World> w;
  tp::Address seller, holder, attacker, fees;
  std::vector<tp::Address> pool;
  tp::CaseId id = 0;
};

CaseWorld make_case(std::uint32_t f, const char* price, std::size_t extra_jurors = 0, const char* gas = "0.001") {
  tp::SimConfig cfg;
  cfg.jury.f = f;
  cfg.jury.gas_fee = amt(gas);
  CaseWorld c;
  c.w = std::make_unique<World>(cfg, 21);
  c.seller = c.w->user("seller");
  c.holder = c.w->user("holder");
  c.attacker = c.w->user("attacker", "5");
  for (std::size_t i = 0; i < 3 * f + 1 + extra_jurors; ++i) {
    c.pool.push_back(c.w->user("j" + std::to_string(i), "0"));
    c.w->p.das().enroll_juror(c.pool.back());
  }
  c.fees = c.w->p.fee_collector();
  c.w->age();
  c.w->p.token().mint(c.seller, 1);
  EXPECT_EQ(c.w->send(c.seller, c.holder, 1, price).status, tp::RiskStatus::Safe);
  c.id = c.w->p.das().file_report(c.attacker, 1);
  return c;
}

Raw raw(Amount a) { return a.raw(); }

// Outcome of one complete case, checked against integer arithmetic.
void run_case(std::uint32_t f, const std::vector<Vote>& seq, const std::vector<std::size_t>& order) {
  CaseWorld c = make_case(f, "8");
  auto& p = c.w->p;
  const auto jury = p.das().empanel_jury(c.id, p.das().referee_pool(), 5);
  ASSERT_EQ(jury.size(), 3 * f + 1);
  const Raw deposit = 8 * kUnit / 20;  // 5% of 8
  const Raw gas = kUnit / 1000;
  const Raw attacker_before = 5 * kUnit - deposit - gas;
  ASSERT_EQ(raw(p.ledger().balance(c.attacker)), attacker_before);

  std::vector<Vote> cast;
  std::optional<Vote> verdict;
  for (std::size_t k = 0; k < order.size() && !verdict; ++k) {
    cast.push_back(seq[k]);
    verdict = p.das().cast_vote(c.id, jury[order[k]], seq[k]);
  }
  ASSERT_TRUE(verdict.has_value());
  ASSERT_EQ(*verdict, tp::oracle::final_tally_verdict(seq, f));
  ASSERT_EQ(cast.size(), tp::oracle::votes_until_close(seq, f));
  const auto& kase = p.das().get(c.id);
  EXPECT_EQ(kase.status, tp::CaseStatus::Closed);
  EXPECT_EQ(errc_of([&] { p.das().close_case(c.id); }), Errc::CaseClosed);
  if (cast.size() < jury.size()) {
    EXPECT_EQ(errc_of([&] { p.das().cast_vote(c.id, jury[order[cast.size()]], Vote::ForHolder); }), Errc::CaseClosed);
  }

  std::size_t winners = 0;
  for (Vote v : cast) winners += v == *verdict ? 1 : 0;
  const Raw reward = kUnit / 100;
  const auto& token = p.token().token(1);
  if (*verdict == Vote::ForReporter) {
    EXPECT_EQ(token.owner, c.attacker);
    EXPECT_EQ(token.state, TokenState::Locked);
    EXPECT_EQ(raw(p.ledger().balance(c.attacker)), attacker_before + deposit);
    EXPECT_EQ(raw(p.ledger().balance(c.fees)), gas);
  } else {
    EXPECT_EQ(token.owner, c.holder);
    EXPECT_FALSE(token.frozen_until.has_value());
    EXPECT_EQ(raw(p.ledger().balance(c.attacker)), attacker_before);
    const Raw share = deposit / static_cast<Raw>(winners);
    EXPECT_EQ(raw(p.ledger().balance(c.fees)), gas + deposit - share * static_cast<Raw>(winners));
  }
  for (std::size_t k = 0; k < cast.size(); ++k) {
    const auto bal = raw(p.ledger().balance(jury[order[k]]));
    if (cast[k] != *verdict) {
      EXPECT_EQ(bal, 0);
    } else if (*verdict == Vote::ForReporter) {
      EXPECT_EQ(bal, reward);
    } else {
      EXPECT_EQ(bal, deposit / static_cast<Raw>(winners) + reward);
    }
  }
  EXPECT_EQ(raw(p.ledger().total_minted()), reward * static_cast<Raw>(winners));
  EXPECT_TRUE(p.ledger().conservation_holds());
  EXPECT_EQ(raw(p.ledger().total_escrow()), 0);
}

TEST(DasFlow, AllSequencesF1) {
  const std::uint32_t n = 4;
  std::vector<std::size_t> order(n);
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    const auto votes = tp::oracle::votes_from_mask(mask, n);
    std::iota(order.begin(), order.end(), 0);
    do {
      std::vector<Vote> seq;
      for (auto i : order) seq.push_back(votes[i]);
      SCOPED_TRACE("mask " + std::to_string(mask));
      run_case(1, seq, order);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST(DasFlow, AllVoteVectorsF2) {
  const std::uint32_t n = 7;
  std::mt19937_64 rng(9);
  std::vector<std::size_t> order(n);
  for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
    const auto seq = tp::oracle::votes_from_mask(mask, n);
    for (int rep = 0; rep < 3; ++rep) {
      std::iota(order.begin(), order.end(), 0);
      if (rep > 0) std::shuffle(order.begin(), order.end(), rng);
      SCOPED_TRACE("mask " + std::to_string(mask));
      run_case(2, seq, order);
    }
  }
}

// ---- deposits -----------------------------------------------------------------

TEST(DasDeposit, Examples) {
  World w;
  const auto a = w.user("a");
  const auto b = w.user("b");
  const auto c = w.user("c");
  w.age();
  w.p.token().mint(a, 1);
  w.p.token().mint(a, 2);
  EXPECT_EQ(w.p.das().required_deposit(1), amt("0.01"));
  w.send(a, b, 2, "10");
  w.send(a, c, 1, "12");
  EXPECT_EQ(w.p.das().required_deposit(1), amt("0.6"));
  EXPECT_EQ(w.p.das().required_deposit(2), amt("0.5"));
}

TEST(DasDeposit, MonotoneInPrice) {
  Raw prev = 0;
  for (int price = 1; price <= 100; ++price) {
    World w;
    const auto a = w.user("a");
    const auto b = w.user("b");
    w.age();
    w.p.token().mint(a, 1);
    w.send(a, b, 1, std::to_string(price));
    const Raw d = w.p.das().required_deposit(1).raw();
    const Raw want = std::max<Raw>(kUnit / 100, static_cast<Raw>(price) * kUnit / 20);
    EXPECT_EQ(d, want) << price;
    EXPECT_GE(d, prev);
    prev = d;
  }
}

// ---- case lifecycle -----------------------------------------------------------

TEST(DasCase, ReportFreezesAndChecksFunds) {
  CaseWorld c = make_case(1, "8");
  auto& p = c.w->p;
  const auto& t = p.token().token(1);
  EXPECT_EQ(t.frozen_until, p.ledger().now() + 604800);
  EXPECT_EQ(errc_of([&] { p.das().file_report(c.seller, 1); }), Errc::DuplicateCase);
  p.token().mint(c.seller, 2);
  EXPECT_EQ(errc_of([&] { p.das().file_report(c.seller, 2); }), Errc::InvalidInput);
  EXPECT_EQ(errc_of([&] { p.das().file_report(c.pool[0], 2); }), Errc::InsufficientFunds);
  EXPECT_EQ(errc_of([&] { p.das().get(99); }), Errc::UnknownCase);
}

TEST(DasCase, EvidenceOnlyFromParties) {
  CaseWorld c = make_case(1, "8");
  auto& das = c.w->p.das();
  das.submit_evidence(c.id, c.attacker, "claim");
  das.submit_evidence(c.id, c.holder, "receipt");
  EXPECT_EQ(errc_of([&] { das.submit_evidence(c.id, c.pool[0], "noise"); }), Errc::NotAParty);
  EXPECT_EQ(das.get(c.id).evidence.size(), 2u);
  EXPECT_EQ(das.get(c.id).evidence[0].blob_digest, tp::sha256("claim"));
}

TEST(DasCase, EmpanelDeterministicAndExcludesParties) {
  std::vector<tp::Address> first;
  for (int run = 0; run < 2; ++run) {
    CaseWorld c = make_case(1, "8", 6);
    auto& das = c.w->p.das();
    auto pool = das.referee_pool();
    pool.push_back(c.attacker);
    pool.push_back(c.holder);
    const auto jury = das.empanel_jury(c.id, pool, 77);
    EXPECT_EQ(jury.size(), 4u);
    for (const auto& j : jury) {
      EXPECT_NE(j, c.attacker);
      EXPECT_NE(j, c.holder);
    }
    if (run == 0) first = jury;
    else EXPECT_EQ(jury, first);
    EXPECT_EQ(errc_of([&] { das.empanel_jury(c.id, pool, 77); }), Errc::InvalidInput);
  }
  // different seed, (very likely) different jury from a pool of 10
  CaseWorld c = make_case(1, "8", 6);
  EXPECT_NE(c.w->p.das().empanel_jury(c.id, c.w->p.das().referee_pool(), 78), first);
}

TEST(DasCase, InsufficientJurors) {
  CaseWorld c = make_case(1, "8");
  std::vector<tp::Address> small(c.pool.begin(), c.pool.begin() + 3);
  EXPECT_EQ(errc_of([&] { c.w->p.das().empanel_jury(c.id, small, 1); }), Errc::InsufficientJurors);
}

TEST(DasCase, VotingErrors) {
  CaseWorld c = make_case(1, "8");
  auto& das = c.w->p.das();
  EXPECT_EQ(errc_of([&] { das.cast_vote(c.id, c.pool[0], Vote::ForHolder); }), Errc::NotVoting);
  EXPECT_EQ(errc_of([&] { das.close_case(c.id); }), Errc::NoVerdict);
  const auto jury = das.empanel_jury(c.id, das.referee_pool(), 1);
  EXPECT_EQ(errc_of([&] { das.cast_vote(c.id, c.seller, Vote::ForHolder); }), Errc::NotJuror);
  das.cast_vote(c.id, jury[0], Vote::ForReporter);
  EXPECT_EQ(errc_of([&] { das.cast_vote(c.id, jury[0], Vote::ForHolder); }), Errc::AlreadyVoted);
  EXPECT_EQ(errc_of([&] { das.close_case(c.id); }), Errc::NoVerdict);
}

TEST(DasCase, DustGoesToFeeCollector) {
  // 0.4 split three ways leaves one unit
  CaseWorld c = make_case(1, "8");
  auto& das = c.w->p.das();
  const auto jury = das.empanel_jury(c.id, das.referee_pool(), 1);
  das.cast_vote(c.id, jury[0], Vote::ForReporter);
  for (int i = 1; i < 4; ++i) das.cast_vote(c.id, jury[i], Vote::ForHolder);
  const auto& s = *das.get(c.id).settlement;
  EXPECT_EQ(s.distributed, amt("0.399999999999999999"));
  EXPECT_EQ(s.fees, amt("0.001000000000000001"));
  EXPECT_EQ(s.escrowed, s.refunded + s.distributed + s.fees);
  EXPECT_EQ(c.w->p.ledger().balance(c.attacker), amt("4.599"));
}

TEST(DasCase, AutoCaseJoinedByVictim) {
  World w;
  const auto alice = w.user("alice");
  const auto mallory = w.user("mallory");
  std::vector<tp::Address> pool;
  for (int i = 0; i < 4; ++i) {
    pool.push_back(w.user("j" + std::to_string(i), "0"));
    w.p.das().enroll_juror(pool.back());
  }
  w.age();
  w.p.token().mint(alice, 1);
  w.p.ledger().set_explorer_flag(mallory, true);
  EXPECT_EQ(w.send(alice, mallory, 1).status, tp::RiskStatus::Hacked);
  EXPECT_EQ(w.token(1).owner, w.p.treasury());
  const auto id = w.p.das().open_case_for(1).value();
  EXPECT_EQ(errc_of([&] { w.p.das().file_report(mallory, 1); }), Errc::DuplicateCase);
  EXPECT_EQ(w.p.das().file_report(alice, 1), id);
  EXPECT_TRUE(w.p.das().get(id).report_filed);
  EXPECT_EQ(w.p.ledger().balance(alice), amt("9.989"));
  const auto jury = w.p.das().empanel_jury(id, w.p.das().referee_pool(), 3);
  for (int i = 0; i < 3; ++i) w.p.das().cast_vote(id, jury[i], Vote::ForReporter);
  EXPECT_EQ(w.token(1).owner, alice);
  EXPECT_EQ(w.token(1).state, TokenState::Locked);
  EXPECT_EQ(w.p.ledger().balance(alice), amt("9.999"));
}

TEST(DasCase, ForHolderOnReclaimedReturnsToPriorHolder) {
  World w;
  const auto alice = w.user("alice");
  const auto mallory = w.user("mallory");
  std::vector<tp::Address> pool;
  for (int i = 0; i < 4; ++i) {
    pool.push_back(w.user("j" + std::to_string(i), "0"));
    w.p.das().enroll_juror(pool.back());
  }
  w.age();
  w.p.token().mint(alice, 1);
  w.p.ledger().set_explorer_flag(mallory, true);
  w.send(alice, mallory, 1);
  const auto id = *w.p.das().open_case_for(1);
  const auto jury = w.p.das().empanel_jury(id, w.p.das().referee_pool(), 3);
  for (int i = 0; i < 3; ++i) w.p.das().cast_vote(id, jury[i], Vote::ForHolder);
  EXPECT_EQ(w.token(1).owner, alice);
  EXPECT_EQ(w.token(1).state, TokenState::Locked);
  EXPECT_TRUE(w.p.ledger().conservation_holds());
}

}  // namespace
