#include "tp/replay.hpp"

#include <fstream>
#include <sstream>

#include "tp/error.hpp"
#include "tp/runner.hpp"

namespace tp {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

ReplayResult fail_at(std::uint64_t seq, std::string reason, std::size_t events) {
  ReplayResult r;
  r.pass = false;
  r.divergence_seq = seq;
  r.reason = std::move(reason);
  r.events = events;
  return r;
}

}  // namespace

std::vector<EventRecord> parse_log(std::string_view text) {
  std::vector<EventRecord> out;
  std::uint64_t n = 0;
  for (auto line : split_lines(text)) {
    ++n;
    try {
      out.push_back(EventRecord::from_line(line));
    } catch (const Error& e) {
      throw Error(Errc::ReplayError, "line " + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::string read_log_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ReplayError, "cannot read log " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Scenario scenario_from_log(const std::vector<EventRecord>& events) {
  Scenario sc;
  bool genesis = false;
  for (const auto& e : events) {
    if (e.kind == "Genesis") {
      if (genesis) throw Error(Errc::ReplayError, "second Genesis at seq " + std::to_string(e.seq));
      genesis = true;
      const auto name = e.payload.at("scenario").get<std::string>();
      if (!name.empty()) sc.name = name;
      sc.seed = e.payload.at("seed").get<std::uint64_t>();
      const SimConfig cfg = SimConfig::from_json(e.payload.at("config"));
      for (const auto& [k, v] : cfg.entries()) sc.config.emplace_back(k, v);
    } else if (e.kind == "Command") {
      sc.steps.push_back(parse_command(e.payload.at("line").get<std::string>(), e.seq));
    }
  }
  if (!events.empty() && !genesis) throw Error(Errc::ReplayError, "log has no Genesis event");
  return sc;
}

ReplayResult replay_log(std::string_view text) {
  const auto lines = split_lines(text);
  if (!text.empty() && text.back() != '\n') {
    return fail_at(lines.size(), "last line is not newline-terminated", lines.size());
  }

  std::vector<EventRecord> events;
  events.reserve(lines.size());
  std::string link(kGenesisLink);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::uint64_t seq = i + 1;
    EventRecord rec;
    try {
      rec = EventRecord::from_line(lines[i]);
    } catch (const Error& e) {
      return fail_at(seq, e.what(), lines.size());
    }
    if (rec.seq != seq) return fail_at(seq, "seq " + std::to_string(rec.seq) + " out of order", lines.size());
    const std::string expect = chain_link(link, rec.body());
    if (rec.link != expect) return fail_at(seq, "hash chain broken", lines.size());
    link = rec.link;
    events.push_back(std::move(rec));
  }

  if (events.empty()) return ReplayResult{true, std::nullopt, "empty log", 0};

  std::vector<EventRecord> fresh;
  try {
    const Scenario sc = scenario_from_log(events);
    RunOptions opts;
    fresh = run_scenario(sc, opts).events;
  } catch (const std::exception& e) {
    // The chain is intact but the embedded inputs do not form a runnable
    // scenario; blame the first Genesis/Command line that fails to parse.
    for (const auto& ev : events) {
      if (ev.kind != "Genesis" && ev.kind != "Command") continue;
      try {
        if (ev.kind == "Command") parse_command(ev.payload.at("line").get<std::string>(), ev.seq);
        else SimConfig::from_json(ev.payload.at("config"));
      } catch (const std::exception&) {
        return fail_at(ev.seq, e.what(), events.size());
      }
    }
    return fail_at(1, e.what(), events.size());
  }

  const std::size_t common = std::min(fresh.size(), events.size());
  for (std::size_t i = 0; i < common; ++i) {
    if (fresh[i].line() != lines[i]) {
      return fail_at(i + 1, "re-execution produced a different " + fresh[i].kind + " event", events.size());
    }
  }
  if (fresh.size() != events.size()) {
    return fail_at(common + 1,
                   "re-execution produced " + std::to_string(fresh.size()) + " events, log has " +
                       std::to_string(events.size()),
                   events.size());
  }
  ReplayResult ok;
  ok.events = events.size();
  ok.reason = "ok";
  return ok;
}

ReplayResult replay_file(const std::filesystem::path& path) { return replay_log(read_log_file(path)); }

}  // namespace tp
