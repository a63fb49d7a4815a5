#include "tp/fuzz.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "log_fields.hpp"

namespace tp {

using detail::address_field;
using detail::amount_field;
using detail::uint_field;

namespace {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : rng_() % n; }
  bool chance(unsigned percent) { return below(100) < percent; }
  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 rng_;
};

void add(Scenario& sc, const std::string& line) { sc.steps.push_back(parse_command(line, sc.steps.size() + 1)); }

std::string amount_text(Gen& g, std::uint64_t max_units) {
  const std::uint64_t units = g.below(max_units + 1);
  const std::uint64_t frac = g.chance(30) ? g.below(1000) : 0;
  std::string s = std::to_string(units);
  if (frac != 0) {
    std::string f = std::to_string(frac);
    s += "." + std::string(3 - f.size(), '0') + f;
  }
  return s;
}

}  // namespace

Scenario generate_scenario(std::uint64_t seed, std::size_t steps) {
  Gen g(seed);
  Scenario sc;
  sc.name = "fuzz-" + std::to_string(seed);
  sc.seed = seed;

  const std::vector<std::string> users = {"u0", "u1", "u2", "u3", "u4", "thief", "op"};
  std::vector<std::string> jurors;
  for (int i = 0; i < 8; ++i) jurors.push_back("j" + std::to_string(i));
  std::vector<std::string> anyone = users;
  anyone.insert(anyone.end(), jurors.begin(), jurors.end());
  anyone.push_back("ghost");  // never created
  anyone.push_back("treasury");

  // A shadow run steers targets toward live owners, jurors and cases so a
  // useful share of steps gets past the guards. The scenario itself stays a
  // plain command list.
  Runner shadow(Scenario{sc.name, sc.seed, {}, {}});
  auto emit = [&](const std::string& line) {
    add(sc, line);
    shadow.execute(sc.steps.back());
  };
  std::map<Address, std::string> name_of;
  auto refresh_names = [&] {
    for (const auto& [n, a] : shadow.names()) name_of[a] = n;
  };

  for (const auto& u : users) emit("ACCOUNT " + u + " " + amount_text(g, 30));
  for (const auto& j : jurors) {
    emit("ACCOUNT " + j + " 1");
    emit("JUROR " + j);
  }
  emit("ADVANCE " + std::to_string(g.chance(75) ? 1100 + g.below(3000) : g.below(900)));
  const std::uint64_t minted = 3 + g.below(4);
  for (std::uint64_t t = 1; t <= minted; ++t) emit("MINT " + g.pick(users) + " " + std::to_string(t));
  for (const auto& u : users) {
    if (g.chance(90)) {
      std::string aux = g.pick(users);
      if (aux == u) aux = u == "op" ? "u0" : "op";
      emit("REGISTER_AUX " + u + " " + aux);
    }
  }
  refresh_names();

  const Protocol& p = shadow.protocol();
  auto token_id = [&] { return 1 + g.below(minted + (g.chance(5) ? 2 : 0)); };
  auto user = [&] { return g.chance(92) ? g.pick(users) : g.pick(anyone); };
  auto owner_or_user = [&](std::uint64_t t) {
    if (g.chance(80) && p.token().exists(t)) {
      auto it = name_of.find(p.token().token(t).owner);
      if (it != name_of.end()) return it->second;
    }
    return user();
  };
  auto locked_token = [&] {
    std::vector<std::uint64_t> locked;
    for (const auto& [id, t] : p.token().tokens()) {
      if (t.state == TokenState::Locked) locked.push_back(id);
    }
    return locked.empty() || g.chance(20) ? token_id() : g.pick(locked);
  };
  auto case_id = [&]() -> std::uint64_t {
    const auto& cases = p.das().cases();
    if (cases.empty() || g.chance(10)) return 1 + g.below(3);
    if (g.chance(80)) {
      for (auto it = cases.rbegin(); it != cases.rend(); ++it) {
        if (it->second.status != CaseStatus::Closed) return it->first;
      }
    }
    return 1 + g.below(cases.size());
  };

  struct Choice {
    unsigned weight;
    std::function<std::string()> make;
  };
  const std::vector<Choice> choices = {
      {24, [&] {
         const std::uint64_t t = token_id();
         const std::string from = owner_or_user(t);
         const std::string caller = g.chance(80) ? from : user();
         std::string to = user();
         if (to == from) to = g.pick(users);
         std::string line = std::string(g.chance(80) ? "TRANSFER " : "SAFE_TRANSFER ") + caller + " " + from + " " +
                            to + " " + std::to_string(t);
         if (g.chance(85)) line += " " + amount_text(g, 20);
         return line;
       }},
      {16, [&] {
         const std::uint64_t t = locked_token();
         return "UNLOCK " + owner_or_user(t) + " " + std::to_string(t);
       }},
      {3, [&] {
         const std::uint64_t t = token_id();
         return "UNLOCK_BAD " + owner_or_user(t) + " " + std::to_string(t);
       }},
      {3, [&] {
         const std::uint64_t t = token_id();
         return "UNLOCK_REPLAY " + owner_or_user(t) + " " + std::to_string(t);
       }},
      {5, [&] {
         const std::uint64_t t = token_id();
         return "LOCK " + owner_or_user(t) + " " + std::to_string(t);
       }},
      {8, [&] { return "ADVANCE " + std::to_string(g.chance(70) ? g.below(3000) : 7000 + g.below(700000)); }},
      {4, [&] {
         const std::uint64_t t = token_id();
         return "APPROVE " + owner_or_user(t) + " " + user() + " " + std::to_string(t);
       }},
      {4, [&] { return "APPROVE_ALL " + user() + " " + user() + (g.chance(80) ? " on" : " off"); }},
      {3, [&] { return "FLAG " + user(); }},
      {4, [&] { return "UNFLAG " + user(); }},
      {1, [&] { return "PHISHING " + user(); }},
      {1, [&] {
         const std::string s = g.chance(50) ? "*" : user();
         const std::string r = g.chance(50) ? "*" : user();
         return "MODEL " + s + " " + r + " 0." + std::to_string(g.below(10));
       }},
      {3, [&] { return "REGISTER_AUX " + user() + " " + user(); }},
      {1, [&] { return "REGISTER_AUX_BAD " + user() + " " + user(); }},
      {2, [&] { return "PAY " + user() + " " + user() + " " + amount_text(g, 5); }},
      {4, [&] { return "REPORT " + user() + " " + std::to_string(token_id()); }},
      {2, [&] {
         const std::uint64_t c = case_id();
         std::string party = user();
         if (p.das().cases().contains(c) && g.chance(70)) {
           const auto& k = p.das().get(c);
           auto it = name_of.find(g.chance(50) ? k.reporter : k.respondent);
           if (it != name_of.end()) party = it->second;
         }
         return "EVIDENCE " + party + " " + std::to_string(c) + " log " + std::to_string(g.below(1000));
       }},
      {4, [&] { return "EMPANEL " + std::to_string(case_id()); }},
      {10, [&] {
         const std::uint64_t c = case_id();
         std::string juror = g.pick(g.chance(90) ? jurors : anyone);
         if (p.das().cases().contains(c) && !p.das().get(c).jury.empty() && g.chance(85)) {
           auto it = name_of.find(g.pick(p.das().get(c).jury));
           if (it != name_of.end()) juror = it->second;
         }
         return "VOTE " + juror + " " + std::to_string(c) + (g.chance(55) ? " R" : " H");
       }},
      {2, [&] { return "CLOSE " + std::to_string(case_id()); }},
  };
  unsigned total = 0;
  for (const auto& c : choices) total += c.weight;
  for (std::size_t i = 0; i < steps; ++i) {
    std::uint64_t roll = g.below(total);
    for (const auto& c : choices) {
      if (roll < c.weight) {
        emit(c.make());
        break;
      }
      roll -= c.weight;
    }
  }
  return sc;
}

Scenario generate_malicious_report(std::uint64_t seed) {
  Gen g(seed);
  Scenario sc;
  sc.name = "malicious-" + std::to_string(seed);
  sc.seed = seed;
  const std::uint32_t f = g.chance(70) ? 1 : 2;
  const std::uint32_t n = 3 * f + 1;
  sc.config.emplace_back("jury_f", std::to_string(f));
  if (g.chance(30)) sc.config.emplace_back("gas_fee", "0.0" + std::to_string(1 + g.below(9)));
  if (g.chance(30)) sc.config.emplace_back("juror_reward", "0.00" + std::to_string(g.below(10)));

  add(sc, "ACCOUNT seller " + amount_text(g, 10));
  add(sc, "ACCOUNT holder " + amount_text(g, 10));
  add(sc, "ACCOUNT attacker " + amount_text(g, 6));
  add(sc, "ACCOUNT holder_aux 0");
  const std::uint32_t pool = n + static_cast<std::uint32_t>(g.below(5));
  std::vector<std::string> jurors;
  for (std::uint32_t i = 0; i < pool; ++i) {
    jurors.push_back("j" + std::to_string(i));
    add(sc, "ACCOUNT " + jurors.back() + " 0");
    add(sc, "JUROR " + jurors.back());
  }
  add(sc, "ADVANCE " + std::to_string(1100 + g.below(5000)));
  add(sc, "MINT seller 1");
  add(sc, "MINT seller 2");
  add(sc, "TRANSFER seller seller holder 1 " + amount_text(g, 60));
  if (g.chance(50)) add(sc, "TRANSFER seller seller holder 2 " + amount_text(g, 60));
  add(sc, "REGISTER_AUX holder holder_aux");
  if (g.chance(50)) add(sc, "UNLOCK holder 1");
  add(sc, "REPORT attacker 1");
  if (g.chance(60)) add(sc, "EVIDENCE attacker 1 fabricated chat log");
  if (g.chance(60)) add(sc, "EVIDENCE holder 1 purchase receipt");
  add(sc, "EMPANEL 1");

  std::vector<std::string> order = jurors;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[g.below(i)]);
  const std::uint32_t colluders = static_cast<std::uint32_t>(g.below(f + 1));
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (g.chance(10)) continue;  // abstains or not on the jury
    const bool r = i < colluders || g.chance(15);
    add(sc, "VOTE " + order[i] + " 1 " + (r ? "R" : "H"));
  }
  add(sc, "CLOSE 1");
  return sc;
}

std::vector<AuditFinding> check_scenario(const Scenario& scenario, const LiveCheck& extra) {
  std::vector<AuditFinding> findings;
  Runner runner(scenario);
  for (const auto& cmd : scenario.steps) {
    runner.execute(cmd);
    auto live = check_live_state(runner.protocol());
    if (extra) {
      auto more = extra(runner.protocol());
      live.insert(live.end(), more.begin(), more.end());
    }
    if (!live.empty()) {
      findings = std::move(live);
      break;
    }
  }
  const auto& events = runner.protocol().ledger().events();
  auto offline = audit_log(events);
  findings.insert(findings.end(), offline.begin(), offline.end());
  for (const auto& econ : for_holder_economics(events)) {
    if (!(econ.after < econ.before)) {
      findings.push_back({AuditCheck::LiveState, 0,
                          "case " + std::to_string(econ.case_id) + " FOR_HOLDER did not cost the reporter"});
    }
  }
  return findings;
}

std::vector<ReportEconomics> for_holder_economics(const std::vector<EventRecord>& events) {
  std::map<Address, Amount> balance;
  std::map<CaseId, std::pair<Address, Amount>> before;
  std::vector<ReportEconomics> out;
  for (const auto& e : events) {
    const json& p = e.payload;
    if (e.kind == "AccountCreated") {
      balance[address_field(p, "address")] = amount_field(p, "balance");
    } else if (e.kind == "ValueTransferred") {
      balance[address_field(p, "from")] = amount_field(p, "from_balance");
      balance[address_field(p, "to")] = amount_field(p, "to_balance");
    } else if (e.kind == "DepositEscrowed") {
      const Address from = address_field(p, "from");
      const CaseId id = uint_field(p, "case_id");
      if (!before.contains(id)) before[id] = {from, amount_field(p, "from_balance") + amount_field(p, "amount")};
      balance[from] = amount_field(p, "from_balance");
    } else if (e.kind == "EscrowReleased" || e.kind == "RewardMinted") {
      balance[address_field(p, "to")] = amount_field(p, "to_balance");
    } else if (e.kind == "CaseClosed" && p.at("verdict") == "FOR_HOLDER") {
      const CaseId id = uint_field(p, "case_id");
      auto it = before.find(id);
      if (it != before.end()) out.push_back({id, it->second.second, balance[it->second.first]});
    }
  }
  return out;
}

Scenario minimize_scenario(const Scenario& scenario, const FailurePredicate& fails) {
  Scenario best = scenario;
  auto with_steps = [&](std::vector<Command> steps) {
    Scenario s = best;
    s.steps = std::move(steps);
    return s;
  };

  std::size_t chunks = 2;
  while (best.steps.size() >= 2) {
    const std::size_t size = best.steps.size();
    chunks = std::min(chunks, size);
    const std::size_t len = (size + chunks - 1) / chunks;
    bool reduced = false;
    for (std::size_t start = 0; start < size; start += len) {
      std::vector<Command> rest(best.steps.begin(), best.steps.begin() + static_cast<std::ptrdiff_t>(start));
      rest.insert(rest.end(), best.steps.begin() + static_cast<std::ptrdiff_t>(std::min(size, start + len)),
                  best.steps.end());
      Scenario cand = with_steps(std::move(rest));
      if (fails(cand)) {
        best = std::move(cand);
        chunks = std::max<std::size_t>(chunks - 1, 2);
        reduced = true;
        break;
      }
    }
    if (!reduced) {
      if (chunks >= size) break;
      chunks = std::min(chunks * 2, size);
    }
  }
  // Final 1-minimality sweep.
  for (std::size_t i = 0; i < best.steps.size();) {
    std::vector<Command> rest = best.steps;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    Scenario cand = with_steps(std::move(rest));
    if (fails(cand)) {
      best = std::move(cand);
    } else {
      ++i;
    }
  }
  return best;
}

FuzzStats run_fuzz(const FuzzOptions& options) {
  FuzzStats stats;
  for (std::size_t it = 0; it < options.iterations; ++it) {
    const std::uint64_t seed = options.seed * 1000003ULL + it;
    const bool malicious = options.malicious_every != 0 && it % options.malicious_every == options.malicious_every - 1;
    const Scenario sc = malicious ? generate_malicious_report(seed) : generate_scenario(seed, options.steps);

    std::vector<AuditFinding> findings;
    Runner runner(sc);
    for (const auto& cmd : sc.steps) {
      const StepOutcome out = runner.execute(cmd);
      ++stats.operations;
      if (!out.ok()) {
        ++stats.rejected;
        if (out.error == Errc::Locked || out.error == Errc::Reclaimed || out.error == Errc::Frozen) {
          ++stats.guard_rejections;
        }
      }
      auto live = check_live_state(runner.protocol());
      if (options.extra) {
        auto more = options.extra(runner.protocol());
        live.insert(live.end(), more.begin(), more.end());
      }
      if (!live.empty()) {
        findings = std::move(live);
        break;
      }
    }
    const auto& events = runner.protocol().ledger().events();
    auto offline = audit_log(events);
    findings.insert(findings.end(), offline.begin(), offline.end());
    ++stats.scenarios;

    for (const auto& e : events) {
      if (e.kind == "Transfer" || e.kind == "SafeTransfer") ++stats.transfers;
      if (e.kind == "RiskFulfilled") {
        const auto s = e.payload.at("status").get<std::string>();
        if (s == "safe") ++stats.verdicts_safe;
        else if (s == "may_lost") ++stats.verdicts_may_lost;
        else ++stats.verdicts_hacked;
      }
    }
    if (malicious) ++stats.malicious_scenarios;
    for (const auto& econ : for_holder_economics(events)) {
      ++stats.for_holder_closures;
      if (!(econ.after < econ.before)) {
        ++stats.for_holder_not_decreasing;
        findings.push_back({AuditCheck::LiveState, 0,
                            "case " + std::to_string(econ.case_id) + " FOR_HOLDER left reporter at " +
                                econ.after.to_string() + " from " + econ.before.to_string()});
      }
    }

    if (!findings.empty()) {
      FuzzFailure failure;
      failure.scenario = sc;
      failure.findings = findings;
      failure.minimized = sc;
      if (options.minimize) {
        const LiveCheck extra = options.extra;
        failure.minimized = minimize_scenario(sc, [&extra](const Scenario& s) {
          return !check_scenario(s, extra).empty();
        });
      }
      stats.failures.push_back(std::move(failure));
      break;
    }
  }
  return stats;
}

}  // namespace tp
