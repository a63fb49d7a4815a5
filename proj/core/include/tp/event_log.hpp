#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tp/crypto.hpp"
#include "tp/types.hpp"

namespace tp {

using json = nlohmann::json;

// One canonical ledger event. Payload objects carry sorted keys, integers
// and strings only; amounts travel as fixed decimal strings.
//
// `link` chains the log: link_i = sha256(link_{i-1} || body_i), where body_i
// is the canonical serialization of the record without its link. The first
// record chains from 64 zero characters.
struct EventRecord {
  std::uint64_t seq = 0;
  ChainTime time;
  std::string kind;
  json payload = json::object();
  std::string link;

  // Canonical JSON body without the link field.
  std::string body() const;
  // Canonical JSONL line (no trailing newline).
  std::string line() const;

  static EventRecord from_line(std::string_view line);
};

inline constexpr std::string_view kGenesisLink =
    "0000000000000000000000000000000000000000000000000000000000000000";

std::string chain_link(std::string_view previous_link, std::string_view body);

// Throws std::logic_error if the payload holds a floating-point number.
void require_integral_payload(const json& payload);

// Digest over the JSONL export: each line followed by '\n'.
Digest digest_of(const std::vector<EventRecord>& events);
std::string to_jsonl(const std::vector<EventRecord>& events);

}  // namespace tp
