// Copyright 2026 The edhoc-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli_app.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "edhoc/error.hpp"
#include "edhoc/json_io.hpp"
#include "edhoc/scenario.hpp"

namespace edhoc::cli {

namespace {

using json::Json;
using scenario::Party;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::uint64_t seed = 0;
  int method = 0;
  int suite = 0;
  bool json_only = false;
  std::string scenario_path;
  std::string credentials_path;
  std::string write_credentials_path;
  bool strict = false;
  bool weak = false;
  bool psk_mismatch = false;
  bool message4 = false;
  bool compromised = false;
  bool own_keys = false;
  bool all = false;
  std::string cooperate = "all";
  bool no_mirror = false;
};

class Output {
 public:
  Output(std::ostream& out, std::ostream& err, bool quiet) : out_(out), err_(err), quiet_(quiet) {}
  void emit(const Json& j) { out_ << json::line(j) << '\n'; }
  std::ostream& say() { return quiet_ ? null_ : err_; }

 private:
  std::ostream& out_;
  std::ostream& err_;
  bool quiet_;
  std::ostringstream null_;
};

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

json::ScenarioFile load_scenario(const std::string& path, const std::string& verb) {
  json::ScenarioFile s;
  try {
    s = json::scenario_from_json(read_json_file(path));
  } catch (const EdhocError& e) {
    throw UsageError(path + ": " + e.what());
  }
  if (s.verb != verb) throw UsageError(path + ": scenario is for '" + s.verb + "', not '" + verb + "'");
  return s;
}

/// The built-in scenario a verb runs when no file is given.
json::ScenarioFile from_flags(const Flags& f, const std::string& verb) {
  json::ScenarioFile s;
  s.name = "cli";
  s.verb = verb;
  s.handshake.method = f.method;
  s.handshake.suite = f.suite;
  s.handshake.seed = f.seed;
  const TrustMode mode = f.weak ? TrustMode::kWeakAccept : TrustMode::kStrict;
  s.handshake.initiator_policy.mode = mode;
  s.handshake.responder_policy.mode = mode;
  s.handshake.psk_mismatch = f.psk_mismatch;
  s.handshake.use_message4 = f.message4;
  s.impersonation = f.own_keys ? mitm::Impersonation::kUseOwnKeys : mitm::Impersonation::kUseCompromisedKeys;
  s.all = f.all;
  try {
    s.cooperating = json::parse_parties(f.cooperate);
  } catch (const EdhocError& e) {
    throw UsageError(e.what());
  }
  s.mirror = !f.no_mirror;
  s.endpoints = {"I", "R"};
  if (verb == "mitm") s.endpoints.push_back("M");
  if (verb == "li") s.endpoints.push_back("P");
  return s;
}

void apply_credentials(const Flags& f, scenario::HandshakeOptions& opt) {
  if (f.credentials_path.empty()) return;
  try {
    opt.credential_overrides = json::credentials_from_json(read_json_file(f.credentials_path));
  } catch (const EdhocError& e) {
    throw UsageError(f.credentials_path + ": " + e.what());
  }
}

std::string describe_failure(const Json& failure) {
  if (failure.is_null()) return "no error recorded";
  std::ostringstream os;
  os << failure.at("error").get<std::string>() << " at message " << failure.at("round").get<int>();
  if (!failure.at("role").is_null()) os << " (" << failure.at("role").get<std::string>() << ")";
  return os.str();
}

// ---- verbs -------------------------------------------------------------------

int cmd_handshake(const json::ScenarioFile& s, const Flags& f, Output& o) {
  scenario::HandshakeOptions opt = s.handshake;
  apply_credentials(f, opt);
  netsim::Network net;
  for (const auto& e : s.endpoints) net.attach({e});
  for (const auto& r : s.rules) net.add_rule(r);
  const auto result = scenario::run_handshake(net, opt);
  const Json report = json::handshake_report(opt, result);
  o.emit(report);
  if (!f.write_credentials_path.empty()) {
    auto provider = make_provider(opt.suite);
    const auto cast = scenario::cast_for(*provider, opt);
    std::ofstream(f.write_credentials_path)
        << json::credentials_to_json({cast.initiator, cast.responder, cast.adversary_as_responder,
                                      cast.adversary_as_initiator})
               .dump(2)
        << '\n';
  }
  const bool ok = result.completed && result.exporters_match;
  o.say() << "handshake method " << opt.method << " suite " << opt.suite << ": "
          << (ok ? "completed, exporters match" : "FAILED, " + describe_failure(report.at("failure"))) << '\n';
  return ok ? kOk : kProtocolFailure;
}

int cmd_mitm(const json::ScenarioFile& s, Output& o) {
  std::vector<scenario::MitmCell> cells;
  if (s.all) {
    cells = scenario::full_matrix();
  } else {
    cells.push_back({s.handshake.method, s.impersonation, s.handshake.initiator_policy.mode});
  }
  for (auto& cell : cells) cell.copy_connection_ids = s.copy_connection_ids;
  std::vector<scenario::MitmResult> results;
  for (const auto& cell : cells) {
    results.push_back(scenario::run_mitm_cell(cell, s.handshake.seed, s.handshake.use_message4));
    o.emit(json::attack_line(results.back(), s.handshake.seed));
  }
  const Json summary = json::matrix_summary(results, s.handshake.seed);
  o.emit(summary);

  auto& err = o.say();
  err << "method  impersonation     policy       outcome            expected           match\n";
  for (const auto& r : results) {
    err << std::left << std::setw(8) << r.cell.method << std::setw(18) << mitm::impersonation_name(r.cell.impersonation)
        << std::setw(13) << trust_mode_name(r.cell.policy) << std::setw(19) << mitm::outcome_name(r.report.outcome)
        << std::setw(19) << mitm::outcome_name(r.expected) << (r.matches ? "yes" : "NO") << '\n';
  }
  err << summary.at("matching").get<std::size_t>() << "/" << results.size() << " cells match\n";
  return summary.at("all_match").get<bool>() ? kOk : kProtocolFailure;
}

int cmd_li(const json::ScenarioFile& s, const Flags& f, Output& o) {
  scenario::LiOptions opt{s.handshake, s.cooperating, s.mirror};
  apply_credentials(f, opt.handshake);
  const auto r = scenario::run_li(opt);
  if (!r.handshake.completed) {
    o.emit(json::handshake_report(opt.handshake, r.handshake));
    o.say() << "li: handshake failed, nothing to escrow\n";
    return kProtocolFailure;
  }
  Json pkg{{"type", "escrow_package"}};
  pkg.update(json::to_json(*r.package));
  o.emit(pkg);
  for (const auto& share : r.shares) {
    Json j{{"type", "escrow_share"}};
    j.update(json::to_json(share));
    o.emit(j);
  }

  Json line{{"type", "interception_record"}};
  line.update(json::to_json(r.record));
  Json cooperating = Json::array();
  for (auto p : opt.cooperating) cooperating.push_back(scenario::party_name(p));
  Json subsets = Json::array();
  for (const auto& [parties, error] : r.subset_outcomes) {
    Json names = Json::array();
    for (auto p : parties) names.push_back(scenario::party_name(p));
    subsets.push_back({{"parties", names}, {"result", error ? std::string(error_name(*error)) : "recovered"}});
  }
  std::vector<Bytes> mirrored;
  for (const auto& fr : r.record.frames) mirrored.push_back(fr.payload);
  const bool mirror_complete = mirrored == r.handshake_frames;
  const bool fidelity = r.record.recovered_secret && *r.record.recovered_secret == r.responder_session_secret;
  line["mirror"] = opt.mirror;
  line["mirror_complete"] = mirror_complete;
  line["cooperating"] = cooperating;
  line["recovery_attempted"] = r.recovery_attempted;
  line["recovery_error"] = r.recovery_error ? Json(std::string(error_name(*r.recovery_error))) : Json(nullptr);
  line["recovered_matches_session_secret"] = fidelity;
  line["subset_outcomes"] = subsets;
  o.emit(line);

  auto& err = o.say();
  err << "li: " << r.record.frames.size() << " frames mirrored to proxy"
      << (mirror_complete ? " (complete)" : " (INCOMPLETE)") << '\n';
  if (!r.recovery_attempted) {
    err << "li: no shares contributed, no recovery attempted\n";
  } else if (r.recovery_error) {
    err << "li: recovery denied: " << error_name(*r.recovery_error) << '\n';
  } else {
    err << "li: session secret recovered" << (fidelity ? ", matches the Responder's" : ", MISMATCH") << '\n';
  }
  if (r.recovery_error) return kDenied;
  if (r.recovery_attempted && !fidelity) return kProtocolFailure;
  return kOk;
}

int cmd_demo(const Flags& f, Output& o) {
  int failures = 0;
  for (int method = 0; method <= kMaxMethod; ++method) {
    Flags hf = f;
    hf.method = method;
    if (cmd_handshake(from_flags(hf, "handshake"), f, o) != kOk) ++failures;
  }
  for (bool own : {false, true}) {
    Flags mf = f;
    mf.own_keys = own;
    if (cmd_mitm(from_flags(mf, "mitm"), o) != kOk) ++failures;
  }
  Flags lf = f;
  lf.cooperate = "all";
  if (cmd_li(from_flags(lf, "li"), f, o) != kOk) ++failures;
  lf.cooperate = "authority-only";
  if (cmd_li(from_flags(lf, "li"), f, o) != kDenied) ++failures;
  o.say() << "demo: " << (failures == 0 ? "all scenarios behaved as expected" : "unexpected results") << '\n';
  return failures == 0 ? kOk : kProtocolFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"EDHOC handshake, MitM and lawful-interception lab", "edhoc_lab"};
  app.require_subcommand(1);
  Flags f;

  auto common = [&f](CLI::App* sub) {
    sub->add_option("--seed", f.seed, "Scenario seed");
    sub->add_option("--method", f.method, "Authentication method")->check(CLI::Range(0, kMaxMethod));
    sub->add_option("--suite", f.suite, "Cipher suite (0, or 255 for the toy suite)")->check(CLI::IsMember({0, 255}));
    sub->add_flag("--json-only", f.json_only, "Suppress the summary on stderr");
    sub->add_option("--scenario", f.scenario_path, "Scenario file");
    sub->add_option("--credentials", f.credentials_path, "Credential fixture replacing the derived cast");
    sub->add_flag("--message4", f.message4, "Send message 4");
    auto* strict = sub->add_flag("--strict", f.strict, "Only trust stored credentials (default)");
    auto* weak = sub->add_flag("--weak", f.weak, "Accept credentials sent by value");
    strict->excludes(weak);
  };

  auto* hs = app.add_subcommand("handshake", "Honest handshake between I and R");
  common(hs);
  hs->add_flag("--psk-mismatch", f.psk_mismatch, "Responder holds a wrong copy of the Initiator's PSK");
  hs->add_option("--write-credentials", f.write_credentials_path, "Write the cast as a credential fixture");

  auto* mm = app.add_subcommand("mitm", "Adversary splicing two handshakes");
  common(mm);
  auto* comp = mm->add_flag("--compromised", f.compromised, "Adversary holds the victims' secrets (default)");
  auto* own = mm->add_flag("--own-keys", f.own_keys, "Adversary uses its own credentials");
  comp->excludes(own);
  mm->add_flag("--all", f.all, "Run the full method x impersonation x policy matrix");

  auto* li = app.add_subcommand("li", "Mirrored handshake plus three-party escrow");
  common(li);
  li->add_option("--cooperate", f.cooperate, "all, none, authority-only or a comma list of parties");
  li->add_flag("--no-mirror", f.no_mirror, "Control run without mirror rules");

  auto* demo = app.add_subcommand("demo", "Every scenario once");
  common(demo);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    err << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  }

  Output o(out, err, f.json_only);
  try {
    auto pick = [&](const std::string& verb) {
      return f.scenario_path.empty() ? from_flags(f, verb) : load_scenario(f.scenario_path, verb);
    };
    if (hs->parsed()) return cmd_handshake(pick("handshake"), f, o);
    if (mm->parsed()) return cmd_mitm(pick("mitm"), o);
    if (li->parsed()) return cmd_li(pick("li"), f, o);
    return cmd_demo(f, o);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const EdhocError& e) {
    err << "error: " << e.what() << '\n';
    return kProtocolFailure;
  }
}

}  // namespace edhoc::cli
