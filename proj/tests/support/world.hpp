#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tp/error.hpp"
#include "tp/protocol.hpp"
#include "tp/runner.hpp"
#include "tp/scenario.hpp"

namespace tp::test {

inline Amount amt(std::string_view s) { return Amount::parse_or_throw(s); }
inline Score score(std::string_view s) { return Score::parse_or_throw(s); }

inline std::string scenario_path(std::string_view name) {
  return std::string(TP_SCENARIO_DIR) + "/" + std::string(name) + ".tps";
}

// A protocol instance plus shortcuts for the common owner-side moves.
// Accounts created here are aged past the low-credit threshold by `age()`.
struct World {
  Protocol p;

  explicit World(SimConfig config = {}, std::uint64_t seed = 1) : p(seed, config, "unit") {}

  Address user(std::string_view label, std::string_view balance = "10") {
    return p.ledger().create_account(amt(balance), label);
  }
  void age(std::uint64_t ticks = 2000) { p.ledger().advance_time(ticks); }
  void link(const Address& main, const Address& aux) {
    p.dac().register_aux(main, aux, p.forge_registration(main, aux, true));
  }
  void unlock(const Address& main, TokenId id) {
    p.dac().unlock(main, id, p.forge_attestation(main, id, true));
  }
  TransferOutcome send(const Address& from, const Address& to, TokenId id, std::string_view price = "0") {
    return p.token().transfer_from(from, from, to, id, amt(price));
  }
  const TokenRecord& token(TokenId id) const { return p.token().token(id); }
  std::size_t count(std::string_view kind) const {
    std::size_t n = 0;
    for (const auto& e : p.ledger().events()) n += e.kind == kind ? 1 : 0;
    return n;
  }
};

// Code of the tp::Error thrown by fn, or nullopt when nothing was thrown.
template <typename Fn>
std::optional<Errc> errc_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

inline RunResult run_text(std::string_view text, const RunOptions& options = {}) {
  return run_scenario(parse_scenario(text), options);
}

}  // namespace tp::test
