#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "tp/fixed.hpp"

namespace tp {

using TokenId = std::uint64_t;
using CaseId = std::uint64_t;
using RequestId = std::uint64_t;

// 20-byte account identifier, rendered as lowercase hex with a 0x prefix.
class Address {
 public:
  static constexpr std::size_t kSize = 20;
  using Bytes = std::array<std::uint8_t, kSize>;

  constexpr Address() = default;
  explicit constexpr Address(const Bytes& bytes) : bytes_(bytes) {}

  static std::optional<Address> from_hex(std::string_view text);

  const Bytes& bytes() const { return bytes_; }
  std::string to_hex() const;

  auto operator<=>(const Address&) const = default;

 private:
  Bytes bytes_{};
};

// Logical chain time; one tick stands for one simulated second.
struct ChainTime {
  std::uint64_t ticks = 0;

  constexpr ChainTime operator+(std::uint64_t delta) const { return ChainTime{ticks + delta}; }
  auto operator<=>(const ChainTime&) const = default;
};

enum class RiskStatus { Safe, MayLost, Hacked };

std::string_view to_string(RiskStatus s);
std::optional<RiskStatus> risk_status_from_string(std::string_view s);

// Immutable snapshot of a proposed token transfer.
struct TransferIntent {
  Address caller;
  Address from;
  Address to;
  TokenId token_id = 0;
  Amount price;
  ChainTime time;
};

}  // namespace tp
