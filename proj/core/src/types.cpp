#include "tp/types.hpp"

#include "tp/crypto.hpp"
#include "tp/error.hpp"

namespace tp {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::optional<Address> Address::from_hex(std::string_view text) {
  if (text.size() != 2 + 2 * kSize || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) {
    return std::nullopt;
  }
  Bytes bytes{};
  for (std::size_t i = 0; i < kSize; ++i) {
    const int hi = hex_value(text[2 + 2 * i]);
    const int lo = hex_value(text[3 + 2 * i]);
    if (hi < 0 || lo < 0) return std::nullopt;
    bytes[i] = static_cast<std::uint8_t>(hi * 16 + lo);
  }
  return Address(bytes);
}

std::string Address::to_hex() const { return "0x" + tp::to_hex(bytes_); }

std::string_view to_string(RiskStatus s) {
  switch (s) {
    case RiskStatus::Safe:
      return "safe";
    case RiskStatus::MayLost:
      return "may_lost";
    case RiskStatus::Hacked:
      return "hacked";
  }
  return "?";
}

std::optional<RiskStatus> risk_status_from_string(std::string_view s) {
  if (s == "safe") return RiskStatus::Safe;
  if (s == "may_lost") return RiskStatus::MayLost;
  if (s == "hacked") return RiskStatus::Hacked;
  return std::nullopt;
}

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidInput: return "InvalidInput";
    case Errc::UnknownAccount: return "UnknownAccount";
    case Errc::InsufficientFunds: return "InsufficientFunds";
    case Errc::UnknownToken: return "UnknownToken";
    case Errc::AlreadyMinted: return "AlreadyMinted";
    case Errc::Locked: return "Locked";
    case Errc::Reclaimed: return "Reclaimed";
    case Errc::Frozen: return "Frozen";
    case Errc::NotAuthorized: return "NotAuthorized";
    case Errc::NotOwner: return "NotOwner";
    case Errc::NotLocked: return "NotLocked";
    case Errc::PhishingOperatorBlocked: return "PhishingOperatorBlocked";
    case Errc::NotOracle: return "NotOracle";
    case Errc::ReclaimedImmutable: return "ReclaimedImmutable";
    case Errc::AlreadyReclaimed: return "AlreadyReclaimed";
    case Errc::NotInArbitration: return "NotInArbitration";
    case Errc::InvalidRequest: return "InvalidRequest";
    case Errc::SignatureInvalid: return "SignatureInvalid";
    case Errc::SelfLink: return "SelfLink";
    case Errc::NoAuxRegistered: return "NoAuxRegistered";
    case Errc::UnknownCase: return "UnknownCase";
    case Errc::DuplicateCase: return "DuplicateCase";
    case Errc::NotAParty: return "NotAParty";
    case Errc::CaseClosed: return "CaseClosed";
    case Errc::InsufficientJurors: return "InsufficientJurors";
    case Errc::NotVoting: return "NotVoting";
    case Errc::NotJuror: return "NotJuror";
    case Errc::AlreadyVoted: return "AlreadyVoted";
    case Errc::NoVerdict: return "NoVerdict";
    case Errc::ConfigError: return "ConfigError";
    case Errc::ParseError: return "ParseError";
    case Errc::ReplayError: return "ReplayError";
  }
  return "Unknown";
}

}  // namespace tp
