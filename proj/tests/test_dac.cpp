#include <gtest/gtest.h>

#include "world.hpp"

namespace {

using tp::Errc;
using tp::TokenState;
using tp::test::errc_of;
using tp::test::World;

struct DacTest : ::testing::Test {
  World w;
  tp::Address alice = w.user("alice");
  tp::Address phone = w.user("alice_phone", "0");
  tp::Address thief = w.user("thief");
  tp::Address bob = w.user("bob");
  void SetUp() override {
    w.age();
    w.p.token().mint(alice, 1);
  }
};

TEST_F(DacTest, DigestsAreKeyed) {
  const auto k1 = w.p.keys().secret(alice);
  const auto k2 = w.p.keys().secret(phone);
  EXPECT_NE(k1, k2);
  EXPECT_EQ(k1, tp::KeyStore(1).secret(alice));
  EXPECT_NE(k1, tp::KeyStore(2).secret(alice));
  EXPECT_NE(tp::link_digest(k1, alice, phone, 0), tp::link_digest(k1, alice, phone, 1));
  EXPECT_NE(tp::attestation_digest(k2, alice, phone, 1, tp::ChainTime{5}, 0),
            tp::attestation_digest(k2, alice, phone, 2, tp::ChainTime{5}, 0));
}

TEST_F(DacTest, RegistrationChecksSignature) {
  EXPECT_EQ(errc_of([&] { w.p.dac().register_aux(alice, alice, {}); }), Errc::SelfLink);
  EXPECT_EQ(errc_of([&] { w.p.dac().register_aux(alice, phone, w.p.forge_registration(alice, phone, false)); }),
            Errc::SignatureInvalid);
  w.link(alice, phone);
  EXPECT_EQ(w.p.dac().active_link(alice)->aux, phone);
  EXPECT_EQ(w.p.dac().registration_nonce(alice), 1u);
}

TEST_F(DacTest, RotationNeedsCurrentAux) {
  w.link(alice, phone);
  // The thief has alice's key only: a main-key signature is not enough.
  const auto main_signed = tp::link_digest(w.p.keys().secret(alice), alice, thief, 1);
  EXPECT_EQ(errc_of([&] { w.p.dac().register_aux(alice, thief, main_signed); }), Errc::SignatureInvalid);
  EXPECT_EQ(w.p.dac().active_link(alice)->aux, phone);
  const auto aux_signed = tp::link_digest(w.p.keys().secret(phone), alice, bob, 1);
  w.p.dac().register_aux(alice, bob, aux_signed);
  EXPECT_EQ(w.p.dac().active_link(alice)->aux, bob);
}

TEST_F(DacTest, LockUnlockFlow) {
  EXPECT_EQ(errc_of([&] { w.p.dac().lock(bob, 1); }), Errc::NotOwner);
  w.p.dac().lock(alice, 1);
  EXPECT_EQ(w.token(1).state, TokenState::Locked);
  w.p.dac().lock(alice, 1);  // no-op
  EXPECT_EQ(errc_of([&] { w.unlock(alice, 1); }), Errc::NoAuxRegistered);
  w.link(alice, phone);
  EXPECT_EQ(errc_of([&] { w.p.dac().unlock(alice, 1, w.p.forge_attestation(alice, 1, false)); }),
            Errc::SignatureInvalid);
  EXPECT_EQ(w.token(1).state, TokenState::Locked);
  w.unlock(alice, 1);
  EXPECT_EQ(w.token(1).state, TokenState::Ok);
  EXPECT_EQ(errc_of([&] { w.unlock(alice, 1); }), Errc::NotLocked);
  EXPECT_EQ(w.count("UnlockConfirmed"), 1u);
}

TEST_F(DacTest, AttestationReplayRejected) {
  w.link(alice, phone);
  w.p.dac().lock(alice, 1);
  const auto att = w.p.forge_attestation(alice, 1, true);
  w.p.dac().unlock(alice, 1, att);
  w.p.dac().lock(alice, 1);
  EXPECT_EQ(errc_of([&] { w.p.dac().unlock(alice, 1, att); }), Errc::SignatureInvalid);
  EXPECT_EQ(w.p.dac().attestation_nonce(alice), 1u);
}

TEST_F(DacTest, AttestationBoundToToken) {
  w.p.token().mint(alice, 2);
  w.link(alice, phone);
  w.p.dac().lock(alice, 1);
  w.p.dac().lock(alice, 2);
  const auto att = w.p.forge_attestation(alice, 1, true);
  EXPECT_EQ(errc_of([&] { w.p.dac().unlock(alice, 2, att); }), Errc::SignatureInvalid);
}

TEST_F(DacTest, ReclaimedTokenRefusesOwnerFlow) {
  w.link(alice, phone);
  w.p.token().oracle_reclaim(w.p.oracle_address(), 1);
  EXPECT_EQ(errc_of([&] { w.p.dac().lock(alice, 1); }), Errc::ReclaimedImmutable);
  EXPECT_EQ(errc_of([&] { w.unlock(alice, 1); }), Errc::ReclaimedImmutable);
  const auto treasury = w.p.treasury();
  EXPECT_EQ(errc_of([&] { w.p.dac().unlock(treasury, 1, w.p.forge_attestation(treasury, 1, true)); }),
            Errc::ReclaimedImmutable);
}

}  // namespace
