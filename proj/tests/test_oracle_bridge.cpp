#include <gtest/gtest.h>

#include <set>

#include "world.hpp"

namespace {

using tp::DispatchAction;
using tp::Errc;
using tp::Origin;
using tp::RiskStatus;
using tp::TokenState;
using tp::test::errc_of;
using tp::test::World;

// Who may ask for what, written out by hand.
const std::set<std::pair<Origin, DispatchAction>> kAllowed = {
    {Origin::Dac, DispatchAction::Lock},        {Origin::Dac, DispatchAction::Unlock},
    {Origin::Drm, DispatchAction::MarkAbnormal}, {Origin::Drm, DispatchAction::Reclaim},
    {Origin::Drm, DispatchAction::Freeze},      {Origin::Das, DispatchAction::Reclaim},
    {Origin::Das, DispatchAction::Freeze},      {Origin::Das, DispatchAction::Unfreeze},
    {Origin::Das, DispatchAction::Return},
};

tp::DispatchArgs args_for(World& w, DispatchAction a, const tp::Address& to) {
  tp::DispatchArgs args{1};
  if (a == DispatchAction::Freeze) args.until = w.p.ledger().now() + 10;
  if (a == DispatchAction::Return) args.to = to;
  return args;
}

// Token state in which the action is valid, so only authorization can fail.
void prepare(World& w, DispatchAction a) {
  const auto oracle = w.p.oracle_address();
  if (a == DispatchAction::Unlock) w.p.token().oracle_lock(oracle, 1);
  if (a == DispatchAction::Return) w.p.token().oracle_reclaim(oracle, 1);
  if (a == DispatchAction::Unfreeze) w.p.token().oracle_freeze(oracle, 1, w.p.ledger().now() + 50);
}

TEST(OracleBridge, AuthorizationMatrix) {
  const Origin origins[] = {Origin::User, Origin::Dac, Origin::Drm, Origin::Das};
  const DispatchAction actions[] = {DispatchAction::Lock,   DispatchAction::Unlock,   DispatchAction::Reclaim,
                                    DispatchAction::Freeze, DispatchAction::Unfreeze, DispatchAction::MarkAbnormal,
                                    DispatchAction::Return};
  for (Origin o : origins) {
    for (DispatchAction a : actions) {
      World w;
      const auto alice = w.user("alice");
      w.p.token().mint(alice, 1);
      prepare(w, a);
      const auto digest = w.p.token().state_digest();
      const auto err = errc_of([&] { w.p.bridge().privileged_dispatch(o, a, args_for(w, a, alice)); });
      if (kAllowed.contains({o, a})) {
        EXPECT_FALSE(err.has_value()) << to_string(o) << " " << to_string(a);
        EXPECT_NE(w.p.token().state_digest(), digest) << to_string(o) << " " << to_string(a);
      } else {
        EXPECT_EQ(err, Errc::NotOracle) << to_string(o) << " " << to_string(a);
        EXPECT_EQ(w.p.token().state_digest(), digest);
      }
    }
  }
}

tp::RiskVerdict verdict(RiskStatus s) {
  tp::RiskVerdict v;
  v.status = s;
  return v;
}

struct BridgeTest : ::testing::Test {
  World w;
  tp::Address alice = w.user("alice");
  tp::Address bob = w.user("bob");
  void SetUp() override {
    w.age();
    w.p.token().mint(alice, 1);
  }
  tp::TransferIntent intent() const { return {alice, alice, bob, 1, tp::Amount{}, w.p.ledger().now()}; }
};

TEST_F(BridgeTest, RequestFulfillPairing) {
  const auto id = w.p.bridge().submit(intent());
  EXPECT_EQ(id, 1u);
  EXPECT_EQ(w.p.bridge().requests().at(id).status, tp::RequestStatus::Pending);
  EXPECT_EQ(w.count("RiskFulfilled"), 0u);
  w.p.bridge().fulfill(id, verdict(RiskStatus::Safe));
  EXPECT_EQ(w.p.bridge().requests().at(id).status, tp::RequestStatus::Fulfilled);
  EXPECT_EQ(errc_of([&] { w.p.bridge().fulfill(id, verdict(RiskStatus::Safe)); }), Errc::InvalidRequest);
  EXPECT_EQ(errc_of([&] { w.p.bridge().fulfill(77, verdict(RiskStatus::Safe)); }), Errc::InvalidRequest);
  EXPECT_EQ(w.p.bridge().submit(intent()), 2u);
}

TEST_F(BridgeTest, MayLostMarksAndFreezes) {
  const auto id = w.p.bridge().submit(intent());
  w.p.bridge().fulfill(id, verdict(RiskStatus::MayLost));
  const auto& t = w.token(1);
  EXPECT_EQ(t.state, TokenState::Ok);
  EXPECT_EQ(t.owner, alice);
  ASSERT_EQ(t.abnormal.size(), 1u);
  EXPECT_EQ(t.abnormal[0].status, RiskStatus::MayLost);
  EXPECT_EQ(t.frozen_until, w.p.ledger().now() + 7200);
}

TEST_F(BridgeTest, HackedReclaimsAndOpensCase) {
  const auto id = w.p.bridge().submit(intent());
  w.p.bridge().fulfill(id, verdict(RiskStatus::Hacked));
  EXPECT_EQ(w.token(1).state, TokenState::Reclaimed);
  EXPECT_EQ(w.token(1).owner, w.p.treasury());
  ASSERT_EQ(w.p.das().cases().size(), 1u);
  const auto& c = w.p.das().cases().begin()->second;
  EXPECT_TRUE(c.auto_opened);
  EXPECT_EQ(c.reporter, alice);
  EXPECT_EQ(c.respondent, w.p.treasury());
  EXPECT_EQ(c.prior_holder, alice);
}

TEST_F(BridgeTest, RejectedDispatchLeavesNoEvent) {
  auto& bridge = w.p.bridge();
  const auto events = w.p.ledger().events().size();
  EXPECT_EQ(errc_of([&] { bridge.privileged_dispatch(Origin::Dac, DispatchAction::Unlock, {1}); }), Errc::NotLocked);
  EXPECT_EQ(errc_of([&] { bridge.privileged_dispatch(Origin::Das, DispatchAction::Return, {1, alice}); }),
            Errc::NotInArbitration);
  EXPECT_EQ(errc_of([&] { bridge.privileged_dispatch(Origin::Drm, DispatchAction::Freeze, {1}); }), Errc::InvalidInput);
  EXPECT_EQ(w.p.ledger().events().size(), events);
  bridge.privileged_dispatch(Origin::Drm, DispatchAction::Reclaim, {1});
  const auto after = w.p.ledger().events().size();
  EXPECT_EQ(errc_of([&] { bridge.privileged_dispatch(Origin::Dac, DispatchAction::Lock, {1}); }), Errc::ReclaimedImmutable);
  EXPECT_EQ(errc_of([&] { bridge.privileged_dispatch(Origin::Drm, DispatchAction::Reclaim, {1}); }), Errc::AlreadyReclaimed);
  EXPECT_EQ(w.p.ledger().events().size(), after);
  EXPECT_EQ(errc_of([&] { bridge.privileged_dispatch(Origin::Das, DispatchAction::Lock, {1}); }), Errc::NotOracle);
}

TEST_F(BridgeTest, OperatorBlocked) {
  EXPECT_FALSE(w.p.bridge().operator_blocked(bob));
  w.p.ledger().set_explorer_flag(bob, true);
  EXPECT_TRUE(w.p.bridge().operator_blocked(bob));
  w.p.drm().add_phishing_operator(alice);
  EXPECT_TRUE(w.p.bridge().operator_blocked(alice));
}

}  // namespace
