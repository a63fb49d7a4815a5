#include "tp/event_log.hpp"

#include <stdexcept>

#include "tp/error.hpp"

namespace tp {

std::string EventRecord::body() const {
  json j = json::object();
  j["seq"] = seq;
  j["time"] = time.ticks;
  j["kind"] = kind;
  j["payload"] = payload;
  return j.dump();
}

std::string EventRecord::line() const {
  json j = json::object();
  j["seq"] = seq;
  j["time"] = time.ticks;
  j["kind"] = kind;
  j["payload"] = payload;
  j["link"] = link;
  return j.dump();
}

EventRecord EventRecord::from_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(Errc::ReplayError, std::string("malformed event line: ") + e.what());
  }
  if (!j.is_object() || j.size() != 5 || !j.contains("seq") || !j["seq"].is_number_unsigned() ||
      !j.contains("time") || !j["time"].is_number_unsigned() || !j.contains("kind") ||
      !j["kind"].is_string() || !j.contains("payload") || !j["payload"].is_object() ||
      !j.contains("link") || !j["link"].is_string()) {
    throw Error(Errc::ReplayError, "event line does not match the record schema");
  }
  EventRecord r;
  r.seq = j["seq"].get<std::uint64_t>();
  r.time = ChainTime{j["time"].get<std::uint64_t>()};
  r.kind = j["kind"].get<std::string>();
  r.payload = j["payload"];
  r.link = j["link"].get<std::string>();
  if (r.line() != line) throw Error(Errc::ReplayError, "event line is not in canonical form");
  return r;
}

std::string chain_link(std::string_view previous_link, std::string_view body) {
  std::string material;
  material.reserve(previous_link.size() + body.size());
  material.append(previous_link);
  material.append(body);
  return to_hex(sha256(material));
}

void require_integral_payload(const json& payload) {
  if (payload.is_number_float()) throw std::logic_error("floating-point value in event payload");
  if (payload.is_structured()) {
    for (const auto& item : payload) require_integral_payload(item);
  }
}

std::string to_jsonl(const std::vector<EventRecord>& events) {
  std::string out;
  for (const auto& e : events) {
    out += e.line();
    out += '\n';
  }
  return out;
}

Digest digest_of(const std::vector<EventRecord>& events) { return sha256(to_jsonl(events)); }

}  // namespace tp
