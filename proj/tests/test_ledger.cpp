#include <gtest/gtest.h>

#include "tp/error.hpp"
#include "tp/ledger.hpp"
#include "world.hpp"

namespace {

using tp::Amount;
using tp::Errc;
using tp::Ledger;
using tp::test::amt;
using tp::test::errc_of;

TEST(Ledger, AddressesAreSeedDeterministic) {
  Ledger a(5);
  Ledger b(5);
  Ledger c(6);
  const auto x = a.create_account(amt("1"), "x");
  EXPECT_EQ(x, b.create_account(amt("1"), "x"));
  EXPECT_NE(x, c.create_account(amt("1"), "x"));
  EXPECT_EQ(x, tp::derive_address(5, 0));
  EXPECT_EQ(x.to_hex().size(), 42u);
  EXPECT_EQ(tp::Address::from_hex(x.to_hex()), x);
  EXPECT_FALSE(tp::Address::from_hex("0x12").has_value());
}

TEST(Ledger, TransferAndInsufficientFunds) {
  Ledger l(1);
  const auto a = l.create_account(amt("2"));
  const auto b = l.create_account(amt("0"));
  l.transfer_value(a, b, amt("0.5"));
  EXPECT_EQ(l.balance(a), amt("1.5"));
  EXPECT_EQ(l.balance(b), amt("0.5"));
  EXPECT_EQ(errc_of([&] { l.transfer_value(b, a, amt("0.6")); }), Errc::InsufficientFunds);
  EXPECT_EQ(errc_of([&] { l.transfer_value(a, b, amt("-1")); }), Errc::InvalidInput);
  EXPECT_EQ(errc_of([&] { l.balance(tp::derive_address(9, 9)); }), Errc::UnknownAccount);
  EXPECT_EQ(errc_of([&] { l.create_account(amt("-1")); }), Errc::InvalidInput);
  EXPECT_TRUE(l.conservation_holds());
}

TEST(Ledger, EscrowAndMintingConserve) {
  Ledger l(1);
  const auto a = l.create_account(amt("3"));
  const auto b = l.create_account(amt("0"));
  l.escrow(a, amt("1"), 4);
  EXPECT_EQ(l.escrow_balance(4), amt("1"));
  EXPECT_EQ(l.total_escrow(), amt("1"));
  EXPECT_TRUE(l.conservation_holds());
  l.release_escrow(4, b, amt("0.25"), "share");
  EXPECT_EQ(errc_of([&] { l.release_escrow(4, b, amt("0.8"), "share"); }), Errc::InsufficientFunds);
  l.mint_reward(b, amt("0.01"), 4);
  EXPECT_EQ(l.total_minted(), amt("0.01"));
  EXPECT_EQ(l.total_balances() + l.total_escrow(), l.total_initial() + l.total_minted());
  EXPECT_TRUE(l.conservation_holds());
}

TEST(Ledger, LogIsChained) {
  Ledger l(1);
  const auto a = l.create_account(amt("1"));
  l.advance_time(10);
  l.set_explorer_flag(a, true);
  const auto& ev = l.events();
  ASSERT_EQ(ev.size(), 3u);
  std::string prev(tp::kGenesisLink);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    EXPECT_EQ(ev[i].seq, i + 1);
    EXPECT_EQ(ev[i].link, tp::chain_link(prev, ev[i].body()));
    prev = ev[i].link;
  }
  EXPECT_EQ(ev[2].time.ticks, 10u);
  EXPECT_EQ(l.events_since(2).size(), 1u);
  EXPECT_EQ(l.log_digest(), tp::sha256(l.export_jsonl()));
}

TEST(Ledger, RejectsFloatPayload) {
  Ledger l(1);
  EXPECT_THROW(l.append("Bad", tp::json{{"x", 0.5}}), std::logic_error);
}

}  // namespace
