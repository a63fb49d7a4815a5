#pragma once

#include <cstdint>
#include <string>

#include "tp/config.hpp"
#include "tp/dac.hpp"
#include "tp/das.hpp"
#include "tp/drm.hpp"
#include "tp/erc721g.hpp"
#include "tp/ledger.hpp"
#include "tp/oracle_bridge.hpp"

namespace tp {

// One simulation instance: a fresh ledger with the token contract, oracle
// bridge, risk engine, access control and arbitration wired together.
// Genesis logs the effective configuration and creates the oracle, treasury
// and fee-collector accounts.
class Protocol {
 public:
  Protocol(std::uint64_t seed, SimConfig config, std::string scenario_name = {});
  Protocol(const Protocol&) = delete;
  Protocol& operator=(const Protocol&) = delete;

  Ledger& ledger() { return ledger_; }
  const Ledger& ledger() const { return ledger_; }
  Erc721g& token() { return token_; }
  const Erc721g& token() const { return token_; }
  Drm& drm() { return drm_; }
  const Drm& drm() const { return drm_; }
  OracleBridge& bridge() { return bridge_; }
  Dac& dac() { return dac_; }
  const Dac& dac() const { return dac_; }
  Das& das() { return das_; }
  const Das& das() const { return das_; }
  const KeyStore& keys() const { return keys_; }
  const SimConfig& config() const { return config_; }

  const Address& oracle_address() const { return genesis_.oracle; }
  const Address& treasury() const { return genesis_.treasury; }
  const Address& fee_collector() const { return genesis_.fee_collector; }

  RiskSnapshot snapshot() const;

  // Signature forging for scenario scripts. `valid == false` signs with a
  // key that is not the expected signer (what a main-key thief can produce).
  Digest forge_registration(const Address& main, const Address& aux, bool valid) const;
  UnlockAttestation forge_attestation(const Address& main, TokenId token_id, bool valid) const;

 private:
  struct Genesis {
    Address oracle;
    Address treasury;
    Address fee_collector;
  };
  static Genesis make_genesis(Ledger& ledger, const SimConfig& config, const std::string& name);

  SimConfig config_;
  Ledger ledger_;
  KeyStore keys_;
  Genesis genesis_;
  Drm drm_;
  Erc721g token_;
  OracleBridge bridge_;
  Dac dac_;
  Das das_;
};

}  // namespace tp
