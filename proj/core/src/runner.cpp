#include "tp/runner.hpp"

#include <charconv>

namespace tp {

namespace {

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw Error(Errc::InvalidInput, "bad integer " + s);
  return v;
}

Amount to_amount(const std::string& s) { return Amount::parse_or_throw(s); }

}  // namespace

SimConfig effective_config(const Scenario& scenario, const SimConfig& base) {
  SimConfig cfg = base;
  for (const auto& [k, v] : scenario.config) cfg.set(k, v);
  cfg.validate();
  return cfg;
}

Runner::Runner(const Scenario& scenario, const RunOptions& options) : scenario_(scenario) {
  const std::uint64_t seed = options.seed.value_or(scenario.seed.value_or(kDefaultSeed));
  proto_ = std::make_unique<Protocol>(seed, effective_config(scenario, options.base),
                                      scenario.display_name());
  names_["oracle"] = proto_->oracle_address();
  names_["treasury"] = proto_->treasury();
  names_["fee_collector"] = proto_->fee_collector();
}

std::optional<Address> Runner::address_of(const std::string& name) const {
  auto it = names_.find(name);
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

Address Runner::resolve(const std::string& name) const {
  auto it = names_.find(name);
  if (it == names_.end()) throw Error(Errc::UnknownAccount, "no account named " + name);
  return it->second;
}

void Runner::run_all() {
  for (const auto& cmd : scenario_.steps) execute(cmd);
}

StepOutcome Runner::execute(const Command& cmd) {
  Ledger& ledger = proto_->ledger();
  StepOutcome out;
  out.step = next_step_++;
  out.verb = cmd.verb;
  ledger.append("Command", {{"step", out.step}, {"line", cmd.to_string()}});
  try {
    dispatch(cmd);
  } catch (const Error& e) {
    out.error = e.code();
    out.message = e.what();
    ledger.append("StepError", {{"step", out.step},
                                {"verb", cmd.verb},
                                {"error", std::string(errc_name(e.code()))},
                                {"message", out.message}});
  }
  outcomes_.push_back(out);
  return out;
}

void Runner::dispatch(const Command& cmd) {
  Protocol& p = *proto_;
  const auto& a = cmd.args;
  const std::string& v = cmd.verb;

  if (v == "ACCOUNT") {
    if (names_.contains(a[0])) throw Error(Errc::InvalidInput, "account " + a[0] + " already exists");
    names_[a[0]] = p.ledger().create_account(to_amount(a[1]), a[0]);
  } else if (v == "FLAG" || v == "UNFLAG") {
    p.ledger().set_explorer_flag(resolve(a[0]), v == "FLAG");
  } else if (v == "PHISHING") {
    p.drm().add_phishing_operator(resolve(a[0]));
  } else if (v == "MODEL") {
    std::optional<Address> s;
    std::optional<Address> r;
    if (a[0] != "*") s = resolve(a[0]);
    if (a[1] != "*") r = resolve(a[1]);
    p.drm().set_model_entry(s, r, Score::parse_or_throw(a[2]));
  } else if (v == "JUROR") {
    p.das().enroll_juror(resolve(a[0]));
  } else if (v == "PAY") {
    p.ledger().transfer_value(resolve(a[0]), resolve(a[1]), to_amount(a[2]), "payment");
  } else if (v == "MINT") {
    p.token().mint(resolve(a[0]), to_u64(a[1]));
  } else if (v == "APPROVE") {
    p.token().approve(resolve(a[0]), resolve(a[1]), to_u64(a[2]));
  } else if (v == "APPROVE_ALL") {
    p.token().set_approval_for_all(resolve(a[0]), resolve(a[1]), a[2] == "on");
  } else if (v == "TRANSFER" || v == "SAFE_TRANSFER") {
    const Amount price = a.size() > 4 ? to_amount(a[4]) : Amount{};
    const Address caller = resolve(a[0]);
    const Address from = resolve(a[1]);
    const Address to = resolve(a[2]);
    const TokenId id = to_u64(a[3]);
    if (v == "TRANSFER") {
      p.token().transfer_from(caller, from, to, id, price);
    } else {
      p.token().safe_transfer_from(caller, from, to, id, price);
    }
  } else if (v == "ADVANCE") {
    p.ledger().advance_time(to_u64(a[0]));
  } else if (v == "REGISTER_AUX" || v == "REGISTER_AUX_BAD") {
    const Address main = resolve(a[0]);
    const Address aux = resolve(a[1]);
    p.dac().register_aux(main, aux, p.forge_registration(main, aux, v == "REGISTER_AUX"));
  } else if (v == "LOCK") {
    p.dac().lock(resolve(a[0]), to_u64(a[1]));
  } else if (v == "UNLOCK" || v == "UNLOCK_BAD") {
    const Address main = resolve(a[0]);
    const TokenId id = to_u64(a[1]);
    const UnlockAttestation att = p.forge_attestation(main, id, v == "UNLOCK");
    p.dac().unlock(main, id, att);
    last_attestation_[main] = att;
  } else if (v == "UNLOCK_REPLAY") {
    // Resubmits the last attestation this owner got accepted, retargeted
    // at the named token.
    const Address main = resolve(a[0]);
    auto it = last_attestation_.find(main);
    if (it == last_attestation_.end()) {
      throw Error(Errc::InvalidInput, "no accepted attestation to replay for " + a[0]);
    }
    p.dac().unlock(main, to_u64(a[1]), it->second);
  } else if (v == "REPORT") {
    p.das().file_report(resolve(a[0]), to_u64(a[1]));
  } else if (v == "EVIDENCE") {
    p.das().submit_evidence(to_u64(a[1]), resolve(a[0]), std::string_view(a[2]));
  } else if (v == "EMPANEL") {
    p.das().empanel_jury(to_u64(a[0]), p.das().referee_pool(), p.ledger().seed());
  } else if (v == "VOTE") {
    p.das().cast_vote(to_u64(a[1]), resolve(a[0]), a[2] == "R" ? Vote::ForReporter : Vote::ForHolder);
  } else if (v == "CLOSE") {
    p.das().close_case(to_u64(a[0]));
  } else {
    throw Error(Errc::InvalidInput, "unhandled verb " + v);
  }
}

RunResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  Runner runner(scenario, options);
  runner.run_all();
  RunResult r;
  r.scenario = scenario.display_name();
  r.seed = runner.protocol().ledger().seed();
  r.events = runner.protocol().ledger().events();
  r.digest = runner.protocol().ledger().log_digest();
  r.outcomes = runner.outcomes();
  r.names = runner.names();
  return r;
}

}  // namespace tp
