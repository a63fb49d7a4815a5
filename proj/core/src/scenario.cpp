#include "tp/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "tp/config.hpp"
#include "tp/error.hpp"
#include "tp/fixed.hpp"

namespace tp {

namespace {

enum class Arg { Name, NameOrStar, Uint, Amount, Score, OnOff, Vote, Text };

struct VerbSpec {
  std::vector<Arg> required;
  std::vector<Arg> optional;
};

const std::map<std::string, VerbSpec>& verb_table() {
  static const std::map<std::string, VerbSpec> table = {
      {"ACCOUNT", {{Arg::Name, Arg::Amount}, {}}},
      {"FLAG", {{Arg::Name}, {}}},
      {"UNFLAG", {{Arg::Name}, {}}},
      {"PHISHING", {{Arg::Name}, {}}},
      {"MODEL", {{Arg::NameOrStar, Arg::NameOrStar, Arg::Score}, {}}},
      {"JUROR", {{Arg::Name}, {}}},
      {"PAY", {{Arg::Name, Arg::Name, Arg::Amount}, {}}},
      {"MINT", {{Arg::Name, Arg::Uint}, {}}},
      {"APPROVE", {{Arg::Name, Arg::Name, Arg::Uint}, {}}},
      {"APPROVE_ALL", {{Arg::Name, Arg::Name, Arg::OnOff}, {}}},
      {"TRANSFER", {{Arg::Name, Arg::Name, Arg::Name, Arg::Uint}, {Arg::Amount}}},
      {"SAFE_TRANSFER", {{Arg::Name, Arg::Name, Arg::Name, Arg::Uint}, {Arg::Amount}}},
      {"ADVANCE", {{Arg::Uint}, {}}},
      {"REGISTER_AUX", {{Arg::Name, Arg::Name}, {}}},
      {"REGISTER_AUX_BAD", {{Arg::Name, Arg::Name}, {}}},
      {"LOCK", {{Arg::Name, Arg::Uint}, {}}},
      {"UNLOCK", {{Arg::Name, Arg::Uint}, {}}},
      {"UNLOCK_BAD", {{Arg::Name, Arg::Uint}, {}}},
      {"UNLOCK_REPLAY", {{Arg::Name, Arg::Uint}, {}}},
      {"REPORT", {{Arg::Name, Arg::Uint}, {}}},
      {"EVIDENCE", {{Arg::Name, Arg::Uint, Arg::Text}, {}}},
      {"EMPANEL", {{Arg::Uint}, {}}},
      {"VOTE", {{Arg::Name, Arg::Uint, Arg::Vote}, {}}},
      {"CLOSE", {{Arg::Uint}, {}}},
  };
  return table;
}

[[noreturn]] void parse_fail(std::size_t lineno, const std::string& reason) {
  throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": " + reason);
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t b = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > b) out.emplace_back(s.substr(b, i - b));
  }
  return out;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

std::string strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return std::string(hash == std::string_view::npos ? line : line.substr(0, hash));
}

bool valid_name(std::string_view s) {
  if (s.empty() || s == "*") return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-' || c == '.';
  });
}

bool valid_uint(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

void check_arg(Arg kind, const std::string& value, std::size_t lineno, const std::string& verb) {
  bool ok = true;
  switch (kind) {
    case Arg::Name: ok = valid_name(value); break;
    case Arg::NameOrStar: ok = value == "*" || valid_name(value); break;
    case Arg::Uint: ok = valid_uint(value); break;
    case Arg::Amount: {
      auto v = tp::Amount::parse(value);
      ok = v && !v->is_negative();
      break;
    }
    case Arg::Score: {
      auto v = tp::Score::parse(value);
      ok = v && !v->is_negative();
      break;
    }
    case Arg::OnOff: ok = value == "on" || value == "off"; break;
    case Arg::Vote: ok = value == "R" || value == "H"; break;
    case Arg::Text: ok = true; break;
  }
  if (!ok) parse_fail(lineno, verb + ": bad argument '" + value + "'");
}

void check_printable(std::string_view line, std::size_t lineno) {
  for (unsigned char c : line) {
    if (c != '\t' && (c < 0x20 || c > 0x7e)) parse_fail(lineno, "non-printable or non-ASCII byte");
  }
}

}  // namespace

const std::vector<std::string>& known_verbs() {
  static const std::vector<std::string> verbs = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : verb_table()) v.push_back(k);
    return v;
  }();
  return verbs;
}

std::string Command::to_string() const {
  std::string out = verb;
  for (const auto& a : args) {
    out += ' ';
    out += a;
  }
  return out;
}

Command parse_command(std::string_view line, std::size_t lineno) {
  check_printable(line, lineno);
  auto tokens = split_ws(strip_comment(line));
  if (tokens.empty()) parse_fail(lineno, "empty command");
  Command cmd;
  cmd.line = lineno;
  cmd.verb = upper(tokens.front());
  auto it = verb_table().find(cmd.verb);
  if (it == verb_table().end()) parse_fail(lineno, "unknown verb '" + tokens.front() + "'");
  const VerbSpec& spec = it->second;
  std::vector<std::string> args(tokens.begin() + 1, tokens.end());

  const bool has_text = !spec.required.empty() && spec.required.back() == Arg::Text;
  if (has_text) {
    const std::size_t fixed = spec.required.size() - 1;
    if (args.size() < spec.required.size()) parse_fail(lineno, cmd.verb + ": too few arguments");
    std::string text;
    for (std::size_t i = fixed; i < args.size(); ++i) {
      if (!text.empty()) text += ' ';
      text += args[i];
    }
    args.resize(fixed);
    args.push_back(text);
  } else {
    if (args.size() < spec.required.size()) parse_fail(lineno, cmd.verb + ": too few arguments");
    if (args.size() > spec.required.size() + spec.optional.size()) {
      parse_fail(lineno, cmd.verb + ": too many arguments");
    }
  }
  for (std::size_t i = 0; i < args.size(); ++i) {
    const Arg kind = i < spec.required.size() ? spec.required[i] : spec.optional[i - spec.required.size()];
    check_arg(kind, args[i], lineno, cmd.verb);
  }
  cmd.args = std::move(args);
  return cmd;
}

Scenario parse_scenario(std::string_view text) {
  Scenario sc;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    check_printable(raw, lineno);
    const auto tokens = split_ws(strip_comment(raw));
    if (tokens.empty()) continue;
    const std::string head = upper(tokens.front());
    if (head == "SCENARIO" || head == "SEED" || head == "CONFIG") {
      if (!sc.steps.empty()) parse_fail(lineno, head + " must precede the first step");
      if (tokens.size() != 2) parse_fail(lineno, head + " takes exactly one argument");
      if (head == "SCENARIO") {
        if (sc.name) parse_fail(lineno, "duplicate SCENARIO");
        if (!valid_name(tokens[1])) parse_fail(lineno, "bad scenario name");
        sc.name = tokens[1];
      } else if (head == "SEED") {
        if (sc.seed) parse_fail(lineno, "duplicate SEED");
        if (!valid_uint(tokens[1])) parse_fail(lineno, "SEED expects an unsigned integer");
        sc.seed = std::stoull(tokens[1]);
      } else {
        const auto eq = tokens[1].find('=');
        if (eq == std::string::npos) parse_fail(lineno, "CONFIG expects key=value");
        std::string key = tokens[1].substr(0, eq);
        std::string value = tokens[1].substr(eq + 1);
        try {
          SimConfig probe;
          probe.set(key, value);
        } catch (const Error& e) {
          parse_fail(lineno, e.what());
        }
        sc.config.emplace_back(std::move(key), std::move(value));
      }
      continue;
    }
    sc.steps.push_back(parse_command(raw, lineno));
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot read scenario " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  Scenario sc = parse_scenario(buf.str());
  if (!sc.name) sc.name = path.stem().string();
  return sc;
}

std::string format_scenario(const Scenario& sc) {
  std::string out;
  if (sc.name) out += "SCENARIO " + *sc.name + "\n";
  if (sc.seed) out += "SEED " + std::to_string(*sc.seed) + "\n";
  for (const auto& [k, v] : sc.config) out += "CONFIG " + k + "=" + v + "\n";
  for (const auto& step : sc.steps) out += step.to_string() + "\n";
  return out;
}

std::string normalize_scenario_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string out;
  while (std::getline(in, raw)) {
    auto tokens = split_ws(strip_comment(raw));
    if (tokens.empty()) continue;
    tokens.front() = upper(tokens.front());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace tp
