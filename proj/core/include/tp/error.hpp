#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tp {

enum class Errc {
  InvalidInput,
  UnknownAccount,
  InsufficientFunds,
  UnknownToken,
  AlreadyMinted,
  Locked,
  Reclaimed,
  Frozen,
  NotAuthorized,
  NotOwner,
  NotLocked,
  PhishingOperatorBlocked,
  NotOracle,
  ReclaimedImmutable,
  AlreadyReclaimed,
  NotInArbitration,
  InvalidRequest,
  SignatureInvalid,
  SelfLink,
  NoAuxRegistered,
  UnknownCase,
  DuplicateCase,
  NotAParty,
  CaseClosed,
  InsufficientJurors,
  NotVoting,
  NotJuror,
  AlreadyVoted,
  NoVerdict,
  ConfigError,
  ParseError,
  ReplayError,
};

std::string_view errc_name(Errc code);

// Protocol-level failure. Scenario runs record these as StepError events and
// keep going.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}
  explicit Error(Errc code) : std::runtime_error(std::string(errc_name(code))), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace tp
