#include "tp/dac.hpp"

#include "tp/error.hpp"

namespace tp {

namespace {

void put_be64(std::string& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<char>((v >> shift) & 0xff));
}

void put_address(std::string& out, const Address& a) {
  out.append(reinterpret_cast<const char*>(a.bytes().data()), a.bytes().size());
}

}  // namespace

KeyStore::KeyStore(std::uint64_t seed) {
  for (int i = 0; i < 8; ++i) seed_bytes_[i] = static_cast<std::uint8_t>(seed >> (56 - 8 * i));
}

Digest KeyStore::secret(const Address& addr) const {
  std::string msg = "tp-key";
  put_address(msg, addr);
  return hmac_sha256(seed_bytes_, msg);
}

Digest link_digest(const Digest& key, const Address& main, const Address& aux, std::uint64_t nonce) {
  std::string msg = "tp-link";
  put_address(msg, main);
  put_address(msg, aux);
  put_be64(msg, nonce);
  return hmac_sha256(key, msg);
}

Digest attestation_digest(const Digest& key, const Address& main, const Address& aux,
                          TokenId token_id, ChainTime time, std::uint64_t nonce) {
  std::string msg = "tp-unlock";
  put_address(msg, main);
  put_address(msg, aux);
  put_be64(msg, token_id);
  put_be64(msg, time.ticks);
  put_be64(msg, nonce);
  return hmac_sha256(key, msg);
}

Dac::Dac(Ledger& ledger, Erc721g& token, OracleBridge& bridge)
    : ledger_(ledger), token_(token), bridge_(bridge) {}

std::uint64_t Dac::registration_nonce(const Address& main) const {
  auto it = registration_nonces_.find(main);
  return it == registration_nonces_.end() ? 0 : it->second;
}

std::uint64_t Dac::attestation_nonce(const Address& main) const {
  auto it = attestation_nonces_.find(main);
  return it == attestation_nonces_.end() ? 0 : it->second;
}

Address Dac::registration_signer(const Address& main) const {
  auto it = links_.find(main);
  return it == links_.end() ? main : it->second.aux;
}

std::optional<WalletLink> Dac::active_link(const Address& main) const {
  auto it = links_.find(main);
  if (it == links_.end()) return std::nullopt;
  return it->second;
}

void Dac::register_aux(const Address& main, const Address& aux, const Digest& digest) {
  ledger_.account(main);
  ledger_.account(aux);
  if (main == aux) throw Error(Errc::SelfLink, main.to_hex());
  const std::uint64_t nonce = registration_nonce(main);
  const Digest key = KeyStore(ledger_.seed()).secret(registration_signer(main));
  if (link_digest(key, main, aux, nonce) != digest) {
    throw Error(Errc::SignatureInvalid, "registration digest for " + main.to_hex());
  }
  links_[main] = WalletLink{main, aux, nonce, digest};
  registration_nonces_[main] = nonce + 1;
  ledger_.append("AuxRegistered", {{"main", main.to_hex()},
                                   {"aux", aux.to_hex()},
                                   {"nonce", nonce},
                                   {"digest", to_hex(digest)}});
}

void Dac::lock(const Address& owner, TokenId token_id) {
  const TokenRecord& t = token_.token(token_id);
  if (t.state == TokenState::Reclaimed) {
    throw Error(Errc::ReclaimedImmutable, "token " + std::to_string(token_id));
  }
  if (t.owner != owner) {
    throw Error(Errc::NotOwner, owner.to_hex() + " does not own token " + std::to_string(token_id));
  }
  bridge_.privileged_dispatch(Origin::Dac, DispatchAction::Lock, {token_id});
}

void Dac::unlock(const Address& main, TokenId token_id, const UnlockAttestation& attestation) {
  const TokenRecord& t = token_.token(token_id);
  if (t.state == TokenState::Reclaimed) {
    throw Error(Errc::ReclaimedImmutable, "token " + std::to_string(token_id));
  }
  if (t.owner != main) {
    throw Error(Errc::NotOwner, main.to_hex() + " does not own token " + std::to_string(token_id));
  }
  if (t.state != TokenState::Locked) throw Error(Errc::NotLocked, "token " + std::to_string(token_id));
  auto link = links_.find(main);
  if (link == links_.end()) throw Error(Errc::NoAuxRegistered, main.to_hex());

  const std::uint64_t expected_nonce = attestation_nonce(main);
  const Digest key = KeyStore(ledger_.seed()).secret(link->second.aux);
  const bool valid = attestation.main == main && attestation.aux == link->second.aux &&
                     attestation.token_id == token_id && attestation.nonce == expected_nonce &&
                     attestation.digest == attestation_digest(key, main, link->second.aux, token_id,
                                                              attestation.time, attestation.nonce);
  if (!valid) throw Error(Errc::SignatureInvalid, "unlock attestation for token " + std::to_string(token_id));

  attestation_nonces_[main] = expected_nonce + 1;
  bridge_.privileged_dispatch(Origin::Dac, DispatchAction::Unlock, {token_id});
  ledger_.append("UnlockConfirmed", {{"main", main.to_hex()},
                                     {"aux", attestation.aux.to_hex()},
                                     {"token_id", token_id},
                                     {"nonce", attestation.nonce},
                                     {"risk_accepted", true}});
}

}  // namespace tp
