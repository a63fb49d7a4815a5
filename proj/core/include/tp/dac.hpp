#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "tp/crypto.hpp"
#include "tp/erc721g.hpp"
#include "tp/ledger.hpp"
#include "tp/oracle_bridge.hpp"

namespace tp {

// Per-address secret keys derived from the run seed. Stands in for wallet
// private keys; a keyed digest stands in for a signature.
class KeyStore {
 public:
  explicit KeyStore(std::uint64_t seed);
  Digest secret(const Address& addr) const;

 private:
  std::array<std::uint8_t, 8> seed_bytes_{};
};

struct WalletLink {
  Address main;
  Address aux;
  std::uint64_t nonce = 0;
  Digest digest{};
};

struct UnlockAttestation {
  Address main;
  Address aux;
  TokenId token_id = 0;
  ChainTime time;
  std::uint64_t nonce = 0;
  Digest digest{};
};

Digest link_digest(const Digest& key, const Address& main, const Address& aux, std::uint64_t nonce);
Digest attestation_digest(const Digest& key, const Address& main, const Address& aux,
                          TokenId token_id, ChainTime time, std::uint64_t nonce);

// Main/auxiliary wallet linkage and the owner-facing lock/unlock flow.
//
// A first registration is signed with the main wallet's key. Replacing an
// active link must be signed by the currently linked aux wallet, so a stolen
// main key alone can neither rotate the aux wallet nor produce unlock
// attestations.
class Dac {
 public:
  Dac(Ledger& ledger, Erc721g& token, OracleBridge& bridge);

  // Nonce the next registration for `main` must sign.
  std::uint64_t registration_nonce(const Address& main) const;
  // Nonce the next unlock attestation for `main` must carry.
  std::uint64_t attestation_nonce(const Address& main) const;
  // Key that must sign the next registration for `main`: the active aux if
  // one exists, otherwise main itself.
  Address registration_signer(const Address& main) const;

  void register_aux(const Address& main, const Address& aux, const Digest& digest);
  void lock(const Address& owner, TokenId token_id);
  void unlock(const Address& main, TokenId token_id, const UnlockAttestation& attestation);

  std::optional<WalletLink> active_link(const Address& main) const;
  bool aux_linked(const Address& main) const { return links_.contains(main); }

 private:
  Ledger& ledger_;
  Erc721g& token_;
  OracleBridge& bridge_;
  std::map<Address, WalletLink> links_;
  std::map<Address, std::uint64_t> registration_nonces_;
  std::map<Address, std::uint64_t> attestation_nonces_;
};

}  // namespace tp
