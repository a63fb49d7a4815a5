#include "tp/config.hpp"

#include <charconv>
#include <fstream>

#include "tp/error.hpp"

namespace tp {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(Errc::ConfigError, std::string(key) + ": expected integer, got '" + std::string(value) + "'");
  }
  return out;
}

template <typename F>
F parse_fixed(std::string_view key, std::string_view value) {
  auto v = F::parse(value);
  if (!v) {
    throw Error(Errc::ConfigError, std::string(key) + ": expected decimal, got '" + std::string(value) + "'");
  }
  return *v;
}

}  // namespace

void SimConfig::set(std::string_view key, std::string_view value) {
  if (key == "freeze_ticks") freeze_ticks = parse_u64(key, value);
  else if (key == "beta_underprice") risk.beta_underprice = parse_fixed<Score>(key, value);
  else if (key == "turnover_threshold") risk.turnover_threshold = parse_u64(key, value);
  else if (key == "window_ticks") risk.window_ticks = parse_u64(key, value);
  else if (key == "credit_threshold") risk.credit_threshold = parse_fixed<Score>(key, value);
  else if (key == "p_hacked") risk.p_hacked = parse_fixed<Score>(key, value);
  else if (key == "p_suspect") risk.p_suspect = parse_fixed<Score>(key, value);
  else if (key == "w1") risk.w1 = parse_fixed<Score>(key, value);
  else if (key == "w2") risk.w2 = parse_fixed<Score>(key, value);
  else if (key == "w3") risk.w3 = parse_fixed<Score>(key, value);
  else if (key == "jury_f") {
    const auto f = parse_u64(key, value);
    if (f > 1000) throw Error(Errc::ConfigError, "jury_f too large");
    jury.f = static_cast<std::uint32_t>(f);
  } else if (key == "juror_reward") jury.juror_reward = parse_fixed<Amount>(key, value);
  else if (key == "gas_fee") jury.gas_fee = parse_fixed<Amount>(key, value);
  else if (key == "deposit_rate") jury.deposit_rate = parse_fixed<Score>(key, value);
  else if (key == "deposit_min") jury.deposit_min = parse_fixed<Amount>(key, value);
  else if (key == "case_horizon_ticks") jury.case_horizon_ticks = parse_u64(key, value);
  else throw Error(Errc::ConfigError, "unknown config key '" + std::string(key) + "'");
  validate();
}

void SimConfig::validate() const {
  auto positive = [](bool ok, const char* key) {
    if (!ok) throw Error(Errc::ConfigError, std::string(key) + " must be positive");
  };
  positive(freeze_ticks > 0, "freeze_ticks");
  positive(risk.beta_underprice > Score{}, "beta_underprice");
  positive(risk.turnover_threshold > 0, "turnover_threshold");
  positive(risk.window_ticks > 0, "window_ticks");
  positive(risk.credit_threshold > Score{}, "credit_threshold");
  positive(risk.p_hacked > Score{}, "p_hacked");
  positive(risk.p_suspect > Score{}, "p_suspect");
  positive(!risk.w1.is_negative(), "w1");
  positive(!risk.w2.is_negative(), "w2");
  positive(!risk.w3.is_negative(), "w3");
  positive(jury.f > 0, "jury_f");
  positive(!jury.juror_reward.is_negative(), "juror_reward");
  positive(!jury.gas_fee.is_negative(), "gas_fee");
  positive(jury.deposit_rate > Score{}, "deposit_rate");
  positive(jury.deposit_min > Amount{}, "deposit_min");
  positive(jury.case_horizon_ticks > 0, "case_horizon_ticks");
}

std::map<std::string, std::string> SimConfig::entries() const {
  return {
      {"freeze_ticks", std::to_string(freeze_ticks)},
      {"beta_underprice", risk.beta_underprice.to_string()},
      {"turnover_threshold", std::to_string(risk.turnover_threshold)},
      {"window_ticks", std::to_string(risk.window_ticks)},
      {"credit_threshold", risk.credit_threshold.to_string()},
      {"p_hacked", risk.p_hacked.to_string()},
      {"p_suspect", risk.p_suspect.to_string()},
      {"w1", risk.w1.to_string()},
      {"w2", risk.w2.to_string()},
      {"w3", risk.w3.to_string()},
      {"jury_f", std::to_string(jury.f)},
      {"juror_reward", jury.juror_reward.to_string()},
      {"gas_fee", jury.gas_fee.to_string()},
      {"deposit_rate", jury.deposit_rate.to_string()},
      {"deposit_min", jury.deposit_min.to_string()},
      {"case_horizon_ticks", std::to_string(jury.case_horizon_ticks)},
  };
}

json SimConfig::to_json() const {
  json j = json::object();
  for (const auto& [k, v] : entries()) j[k] = v;
  return j;
}

SimConfig SimConfig::from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::ConfigError, "config payload is not an object");
  SimConfig c;
  for (const auto& [k, v] : j.items()) {
    if (!v.is_string()) throw Error(Errc::ConfigError, "config value for " + k + " is not a string");
    c.set(k, v.get<std::string>());
  }
  return c;
}

SimConfig load_config_file(const std::filesystem::path& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "cannot open config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::ConfigError, path.string() + ":" + std::to_string(lineno) + ": expected key=value");
    }
    base.set(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
  }
  return base;
}

}  // namespace tp
