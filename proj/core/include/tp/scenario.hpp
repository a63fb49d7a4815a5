#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tp {

// One DSL step: an upper-case verb and its whitespace-separated arguments.
struct Command {
  std::size_t line = 0;  // source line, 0 when synthesized
  std::string verb;
  std::vector<std::string> args;

  std::string to_string() const;
  bool operator==(const Command& o) const { return verb == o.verb && args == o.args; }
};

struct Scenario {
  std::optional<std::string> name;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Command> steps;

  std::string display_name() const { return name.value_or("unnamed"); }
};

// Line-oriented scenario text:
//
//   # comment (from '#' to end of line)
//   SCENARIO <name>
//   SEED <u64>
//   CONFIG <key>=<value>
//   <VERB> <args...>
//
// Header directives must precede the first step. Verbs are case-insensitive
// on input and upper-cased on output. Arity and argument types are checked
// here; unknown verbs fail with ParseError naming the line.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);
Command parse_command(std::string_view line, std::size_t lineno = 0);

std::string format_scenario(const Scenario& scenario);
// Comments and blank lines removed, whitespace collapsed, verbs upper-cased.
std::string normalize_scenario_text(std::string_view text);

// Verbs accepted in scenario steps.
const std::vector<std::string>& known_verbs();

}  // namespace tp
