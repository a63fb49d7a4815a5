#pragma once

#include <string>

#include "tp/error.hpp"
#include "tp/event_log.hpp"
#include "tp/fixed.hpp"
#include "tp/types.hpp"

namespace tp::detail {

inline Address address_field(const json& payload, const char* key) {
  auto a = Address::from_hex(payload.at(key).get<std::string>());
  if (!a) throw Error(Errc::ReplayError, std::string("bad address in field ") + key);
  return *a;
}

inline Amount amount_field(const json& payload, const char* key) {
  auto v = Amount::parse(payload.at(key).get<std::string>());
  if (!v) throw Error(Errc::ReplayError, std::string("bad amount in field ") + key);
  return *v;
}

inline std::uint64_t uint_field(const json& payload, const char* key) {
  const json& v = payload.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) throw Error(Errc::ReplayError, std::string("bad integer in field ") + key);
  return v.get<std::uint64_t>();
}

}  // namespace tp::detail
