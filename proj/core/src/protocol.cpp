#include "tp/protocol.hpp"

namespace tp {

Protocol::Genesis Protocol::make_genesis(Ledger& ledger, const SimConfig& config,
                                         const std::string& name) {
  config.validate();
  ledger.append("Genesis", {{"scenario", name}, {"seed", ledger.seed()}, {"config", config.to_json()}});
  Genesis g;
  g.oracle = ledger.create_account(Amount{}, "oracle");
  g.treasury = ledger.create_account(Amount{}, "treasury");
  g.fee_collector = ledger.create_account(Amount{}, "fee_collector");
  return g;
}

Protocol::Protocol(std::uint64_t seed, SimConfig config, std::string scenario_name)
    : config_(config),
      ledger_(seed),
      keys_(seed),
      genesis_(make_genesis(ledger_, config_, scenario_name)),
      drm_(config_.risk),
      token_(ledger_, genesis_.oracle, genesis_.treasury),
      bridge_(ledger_, token_, drm_, genesis_.oracle, config_.freeze_ticks),
      dac_(ledger_, token_, bridge_),
      das_(ledger_, token_, bridge_, config_.jury, genesis_.fee_collector) {
  token_.set_risk_gate(&bridge_);
  token_.set_supervisor(&bridge_);
  bridge_.set_snapshot_provider([this] { return snapshot(); });
  bridge_.set_case_opener([this](TokenId token_id, const Address& prior_owner) {
    das_.open_auto_case(token_id, prior_owner);
  });
}

RiskSnapshot Protocol::snapshot() const {
  RiskSnapshot s;
  s.now = ledger_.now();
  for (const auto& [addr, acct] : ledger_.accounts()) {
    s.accounts.emplace(addr, AccountView{acct.explorer_flagged, acct.created_at, dac_.aux_linked(addr)});
  }
  s.tokens = token_.tokens();
  return s;
}

Digest Protocol::forge_registration(const Address& main, const Address& aux, bool valid) const {
  const Address signer = dac_.registration_signer(main);
  Address key_owner = signer;
  if (!valid) key_owner = signer == main ? aux : main;
  return link_digest(keys_.secret(key_owner), main, aux, dac_.registration_nonce(main));
}

UnlockAttestation Protocol::forge_attestation(const Address& main, TokenId token_id, bool valid) const {
  UnlockAttestation a;
  a.main = main;
  const auto link = dac_.active_link(main);
  a.aux = link ? link->aux : main;
  a.token_id = token_id;
  a.time = ledger_.now();
  a.nonce = dac_.attestation_nonce(main);
  const Address key_owner = valid ? a.aux : main;
  a.digest = attestation_digest(keys_.secret(key_owner), main, a.aux, token_id, a.time, a.nonce);
  return a;
}

}  // namespace tp
