#include <gtest/gtest.h>

#include <random>

#include "tp/fixed.hpp"

namespace {

using tp::Amount;
using tp::Score;

TEST(Fixed, ParseAndRender) {
  EXPECT_EQ(Amount::parse_or_throw("1").raw(), static_cast<__int128>(1000000000000000000));
  EXPECT_EQ(Amount::parse_or_throw("0.001").raw(), static_cast<__int128>(1000000000000000));
  EXPECT_EQ(Amount::parse_or_throw("-2.5").to_string(), "-2.500000000000000000");
  EXPECT_EQ(Amount::parse_or_throw("+3").to_string(), "3.000000000000000000");
  EXPECT_EQ(Score::parse_or_throw(".5").raw(), 500000000);
  EXPECT_EQ(Score::parse_or_throw("1.").raw(), 1000000000);
  EXPECT_EQ(Score::from_raw(-1).to_string(), "-0.000000001");
  EXPECT_EQ(Amount{}.to_string(), "0.000000000000000000");
}

TEST(Fixed, RejectsMalformed) {
  for (const char* bad : {"", "-", ".", "1.2.3", "1e5", "abc", " 1", "1 ", "0.0000000001", "--1"}) {
    EXPECT_FALSE(Score::parse(bad).has_value()) << bad;
  }
  EXPECT_FALSE(Amount::parse("0.0000000000000000001").has_value());
  EXPECT_THROW(Amount::parse_or_throw("x"), std::invalid_argument);
}

TEST(Fixed, RejectsOverflow) {
  EXPECT_FALSE(Score::parse("99999999999").has_value());
  EXPECT_TRUE(Score::parse("9223372036").has_value());
}

TEST(Fixed, RenderParseRoundTrip) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 2000; ++i) {
    const auto raw = static_cast<std::int64_t>(rng()) >> 8;
    const Score s = Score::from_raw(raw);
    EXPECT_EQ(Score::parse_or_throw(s.to_string()), s);
    const Amount a = Amount::from_raw(static_cast<__int128>(raw) * 1000003);
    EXPECT_EQ(Amount::parse_or_throw(a.to_string()), a);
  }
}

TEST(Fixed, DivFloorTruncates) {
  const Amount third = Amount::parse_or_throw("1").div_floor(3);
  EXPECT_EQ(third.to_string(), "0.333333333333333333");
  // three shares leave one unit of dust
  EXPECT_EQ((Amount::parse_or_throw("1") - third * 3).raw(), 1);
}

TEST(Fixed, ScaledBy) {
  const Amount v = Amount::parse_or_throw("12");
  EXPECT_EQ(v.scaled_by(Score::parse_or_throw("0.05")).to_string(), "0.600000000000000000");
  EXPECT_EQ(Amount::parse_or_throw("0.000000000000000019").scaled_by(Score::parse_or_throw("0.05")).raw(), 0);
}

TEST(Fixed, Ordering) {
  EXPECT_LT(Score::parse_or_throw("19.999999999"), Score::from_int(20));
  EXPECT_EQ(Score::parse_or_throw("20.000000000"), Score::from_int(20));
  EXPECT_LT(Amount::parse_or_throw("-0.1"), Amount{});
}

TEST(Fixed, ScoreFromDouble) {
  EXPECT_EQ(tp::score_from_double(0.6).raw(), 600000000);
  EXPECT_EQ(tp::score_from_double(-1.25).raw(), -1250000000);
}

}  // namespace
