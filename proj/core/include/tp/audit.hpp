#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tp/event_log.hpp"
#include "tp/protocol.hpp"

namespace tp {

enum class AuditCheck {
  TransferSafety,       // every transfer leaves an OK, unfrozen token
  ReclaimImmutability,  // a RECLAIMED token only leaves via a das return
  RequestPairing,       // request ids gap-free, each fulfilled exactly once
  PrivilegeAdjacency,   // state events directly follow an authorized dispatch
  VerdictRecompute,     // logged verdict == classify(logged features)
  QuorumVerdict,        // FOR_REPORTER only with >= 2f+1 matching votes
  LiveState,            // in-memory checks, see check_live_state
};

std::string_view to_string(AuditCheck c);

struct AuditFinding {
  AuditCheck check = AuditCheck::TransferSafety;
  std::uint64_t seq = 0;
  std::string message;

  std::string to_string() const;
};

// Offline audit of a complete event log. Uses the configuration recorded in
// the Genesis event; a log without one is audited with defaults.
std::vector<AuditFinding> audit_log(const std::vector<EventRecord>& events);

// Cheap checks against live protocol state: conservation, reclaimed tokens
// held by the treasury, escrow matching open cases, guard purity.
std::vector<AuditFinding> check_live_state(const Protocol& protocol);

}  // namespace tp
