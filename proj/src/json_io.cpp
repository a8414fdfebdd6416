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

#include "edhoc/json_io.hpp"

#include <algorithm>
#include <set>

#include "edhoc/error.hpp"

namespace edhoc::json {

namespace {

Json hex_or_null(const std::optional<Bytes>& b) { return b ? Json(to_hex(*b)) : Json(nullptr); }

Json error_or_null(const std::optional<ErrorCode>& e) { return e ? Json(std::string(error_name(*e))) : Json(nullptr); }

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) raise(ErrorCode::kMalformed, std::string("missing field ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    raise(ErrorCode::kMalformed, std::string("bad field ") + key);
  }
}

Bytes hex_field(const Json& j, const char* key) { return from_hex(field<std::string>(j, key)); }

CredentialKind kind_from_name(const std::string& s) {
  for (auto k : {CredentialKind::kSignature, CredentialKind::kStaticDh, CredentialKind::kPsk}) {
    if (credential_kind_name(k) == s) return k;
  }
  raise(ErrorCode::kMalformed, "unknown credential kind " + s);
}

Json view_json(const mitm::VictimView& v) {
  return Json{{"phase", phase_name(v.phase)},
              {"failure", error_or_null(v.failure)},
              {"failed_round", v.failed_round},
              {"decode_error", error_or_null(v.decode_error)},
              {"believes_authenticated", v.believes_authenticated},
              {"peer_unverified", v.peer_unverified},
              {"error_records", v.error_records},
              {"transitions", to_json(v.transitions)}};
}

}  // namespace

Json credentials_to_json(const std::vector<Credential>& creds) {
  Json out = Json::array();
  for (const auto& c : creds) {
    Json e{{"id_cred", to_hex(c.id_cred)}, {"kind", credential_kind_name(c.kind)}, {"public", to_hex(c.public_key)}};
    if (c.secret) e[c.kind == CredentialKind::kPsk ? "psk" : "secret"] = to_hex(*c.secret);
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<Credential> credentials_from_json(const Json& j) {
  if (!j.is_array()) raise(ErrorCode::kMalformed, "credential fixture must be a list");
  std::vector<Credential> out;
  for (const auto& e : j) {
    Credential c;
    c.id_cred = hex_field(e, "id_cred");
    c.kind = kind_from_name(field<std::string>(e, "kind"));
    if (e.contains("public")) c.public_key = hex_field(e, "public");
    if (c.kind == CredentialKind::kPsk) {
      c.secret = hex_field(e, "psk");
    } else {
      if (c.public_key.empty()) raise(ErrorCode::kMalformed, "public key required");
      if (e.contains("secret")) c.secret = hex_field(e, "secret");
    }
    if (c.id_cred.empty()) raise(ErrorCode::kMalformed, "empty id_cred");
    out.push_back(std::move(c));
  }
  return out;
}

Json to_json(const escrow::EscrowPackage& pkg) {
  Json recipients = Json::array();
  for (const auto& r : pkg.recipients) recipients.push_back({{"id", r.id}, {"public", to_hex(r.public_key)}});
  return Json{{"session_id", pkg.session_id},
              {"wrapped_secret", to_hex(pkg.wrapped_secret)},
              {"eph_public", to_hex(pkg.eph_public)},
              {"recipients", std::move(recipients)}};
}

escrow::EscrowPackage package_from_json(const Json& j) {
  escrow::EscrowPackage pkg;
  pkg.session_id = field<std::string>(j, "session_id");
  pkg.wrapped_secret = hex_field(j, "wrapped_secret");
  pkg.eph_public = hex_field(j, "eph_public");
  const auto rs = field<Json>(j, "recipients");
  if (!rs.is_array() || rs.size() != 3) raise(ErrorCode::kMalformed, "exactly three recipients");
  for (std::size_t i = 0; i < 3; ++i) {
    pkg.recipients[i] = {field<std::string>(rs[i], "id"), hex_field(rs[i], "public")};
  }
  return pkg;
}

Json to_json(const escrow::EscrowShare& share) {
  return Json{{"contributor_id", share.contributor_id}, {"share", to_hex(share.share)}};
}

escrow::EscrowShare share_from_json(const Json& j) {
  return {field<std::string>(j, "contributor_id"), hex_field(j, "share")};
}

Json to_json(const TransitionRecord& t) {
  return Json{{"session_id", t.session_id},
              {"role", role_name(t.role)},
              {"phase_from", phase_name(t.from)},
              {"phase_to", phase_name(t.to)},
              {"round", t.round},
              {"error", error_or_null(t.error)}};
}

Json to_json(const std::vector<TransitionRecord>& transcript) {
  Json out = Json::array();
  for (const auto& t : transcript) out.push_back(to_json(t));
  return out;
}

Json handshake_report(const scenario::HandshakeOptions& opt, const scenario::HandshakeResult& r) {
  Json failure = nullptr;
  for (const auto& t : r.transcript) {
    if (t.error) {
      failure = {{"role", role_name(t.role)}, {"round", t.round}, {"error", error_name(*t.error)}};
      break;
    }
  }
  if (failure.is_null() && r.decode_error) failure = {{"role", nullptr}, {"round", 0}, {"error", error_name(*r.decode_error)}};
  Json exporter = nullptr;
  if (r.completed && r.exporters_match) exporter = to_hex(session_keys(*r.initiator).exporter_secret);
  return Json{{"type", "handshake"},
              {"method", opt.method},
              {"suite", opt.suite},
              {"seed", opt.seed},
              {"initiator_policy", trust_mode_name(opt.initiator_policy.mode)},
              {"responder_policy", trust_mode_name(opt.responder_policy.mode)},
              {"message4", opt.use_message4},
              {"completed", r.completed},
              {"exporters_match", r.exporters_match},
              {"exporter_secret", exporter},
              {"failure", failure},
              {"transcript", to_json(r.transcript)}};
}

Json to_json(const mitm::AttackReport& report) {
  Json records = Json::array();
  for (const auto& rec : report.relayed_records) {
    records.push_back({{"direction", direction_name(rec.direction)},
                       {"plaintext_in", to_hex(rec.plaintext_in)},
                       {"plaintext_out", to_hex(rec.plaintext_out)},
                       {"modified", rec.modified},
                       {"accepted", rec.accepted}});
  }
  Json failing = report.failing_party ? Json(*report.failing_party) : Json(nullptr);
  return Json{{"outcome", outcome_name(report.outcome)},
              {"failing_party", failing},
              {"failure_code", error_or_null(report.failure_code)},
              {"initiator", view_json(report.initiator)},
              {"responder", view_json(report.responder)},
              {"relayed_records", std::move(records)},
              {"adversary_keys_match_victims", report.adversary_keys_match_victims},
              {"adversary_keys_distinct", report.adversary_keys_distinct},
              {"steps", report.steps}};
}

Json attack_line(const scenario::MitmResult& r, std::uint64_t seed) {
  Json out{{"type", "attack_report"},
           {"method", r.cell.method},
           {"impersonation", mitm::impersonation_name(r.cell.impersonation)},
           {"policy", trust_mode_name(r.cell.policy)},
           {"copy_connection_ids", r.cell.copy_connection_ids},
           {"seed", seed},
           {"expected", mitm::outcome_name(r.expected)},
           {"matches", r.matches}};
  out["report"] = to_json(r.report);
  return out;
}

Json matrix_summary(const std::vector<scenario::MitmResult>& results, std::uint64_t seed) {
  std::size_t matching = 0;
  for (const auto& r : results) matching += r.matches ? 1 : 0;
  return Json{{"type", "matrix_summary"},
              {"seed", seed},
              {"cells", results.size()},
              {"matching", matching},
              {"all_match", matching == results.size()}};
}

Json to_json(const escrow::InterceptionRecord& record) {
  Json frames = Json::array();
  for (const auto& f : record.frames) frames.push_back({{"seq", f.seq}, {"payload", to_hex(f.payload)}});
  return Json{{"session_id", record.session_id},
              {"frames", std::move(frames)},
              {"recovered_secret", hex_or_null(record.recovered_secret)}};
}

std::set<scenario::Party> parse_parties(const std::string& spec) {
  using scenario::Party;
  if (spec == "all") return {Party::kInitiator, Party::kResponder, Party::kAuthority};
  if (spec == "none") return {};
  if (spec == "authority-only") return {Party::kAuthority};
  std::set<Party> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = std::min(spec.find(',', start), spec.size());
    const std::string name = spec.substr(start, comma - start);
    bool found = false;
    for (auto p : {Party::kInitiator, Party::kResponder, Party::kAuthority}) {
      if (scenario::party_name(p) == name) {
        out.insert(p);
        found = true;
      }
    }
    if (!found) raise(ErrorCode::kInvalidArgument, "unknown party '" + name + "'");
    start = comma + 1;
  }
  return out;
}

TrustMode parse_trust_mode(const std::string& s) {
  for (auto m : {TrustMode::kStrict, TrustMode::kWeakAccept}) {
    if (trust_mode_name(m) == s) return m;
  }
  raise(ErrorCode::kInvalidArgument, "unknown trust policy '" + s + "'");
}

ScenarioFile scenario_from_json(const Json& j) {
  ScenarioFile s;
  s.name = field<std::string>(j, "name");
  s.verb = field<std::string>(j, "verb");
  if (s.verb != "handshake" && s.verb != "mitm" && s.verb != "li") raise(ErrorCode::kInvalidArgument, "verb");
  s.handshake.seed = field<std::uint64_t>(j, "seed");
  s.handshake.method = field<int>(j, "method");
  if (s.handshake.method < 0 || s.handshake.method > kMaxMethod) raise(ErrorCode::kInvalidArgument, "method");
  s.handshake.suite = j.value("suite", 0);
  if (!find_suite(s.handshake.suite)) raise(ErrorCode::kInvalidArgument, "suite");
  if (j.contains("policies")) {
    const auto& p = j.at("policies");
    s.handshake.initiator_policy.mode = parse_trust_mode(field<std::string>(p, "initiator"));
    s.handshake.responder_policy.mode = parse_trust_mode(field<std::string>(p, "responder"));
  }
  s.handshake.use_message4 = j.value("message4", false);
  s.handshake.psk_mismatch = j.value("psk_mismatch", false);
  if (j.contains("attack")) {
    const auto& a = j.at("attack");
    const auto imp = field<std::string>(a, "impersonation");
    if (imp == mitm::impersonation_name(mitm::Impersonation::kUseOwnKeys)) {
      s.impersonation = mitm::Impersonation::kUseOwnKeys;
    } else if (imp != mitm::impersonation_name(mitm::Impersonation::kUseCompromisedKeys)) {
      raise(ErrorCode::kInvalidArgument, "impersonation");
    }
    s.all = a.value("all", false);
    s.copy_connection_ids = a.value("copy_connection_ids", false);
  }
  if (j.contains("li")) {
    const auto& l = j.at("li");
    for (const auto& name : field<std::vector<std::string>>(l, "cooperate")) {
      const auto one = parse_parties(name);
      s.cooperating.insert(one.begin(), one.end());
    }
    s.mirror = l.value("mirror", true);
  }
  const auto topo = field<Json>(j, "topology");
  s.endpoints = field<std::vector<std::string>>(topo, "endpoints");
  const std::set<std::string> known(s.endpoints.begin(), s.endpoints.end());
  auto endpoint = [&](const Json& r, const char* key) -> std::optional<netsim::EndpointId> {
    if (!r.contains(key) || r.at(key).is_null()) return std::nullopt;
    const auto name = field<std::string>(r, key);
    if (!known.count(name)) raise(ErrorCode::kInvalidArgument, "rule names unknown endpoint '" + name + "'");
    return netsim::EndpointId{name};
  };
  for (const auto& r : topo.value("rules", Json::array())) {
    netsim::PathRule rule;
    const auto kind = field<std::string>(r, "kind");
    bool found = false;
    for (auto k : {netsim::RuleKind::kMirror, netsim::RuleKind::kRedirect, netsim::RuleKind::kDrop}) {
      if (netsim::rule_kind_name(k) == kind) {
        rule.kind = k;
        found = true;
      }
    }
    if (!found) raise(ErrorCode::kInvalidArgument, "rule kind");
    rule.match.from = endpoint(r, "from");
    rule.match.to = endpoint(r, "to");
    if (rule.kind != netsim::RuleKind::kDrop) {
      const auto target = endpoint(r, "target");
      if (!target) raise(ErrorCode::kInvalidArgument, "rule needs a target");
      rule.target = *target;
    }
    s.rules.push_back(std::move(rule));
  }
  for (const char* needed : {"I", "R"}) {
    if (!known.count(needed)) raise(ErrorCode::kInvalidArgument, std::string("topology lacks endpoint ") + needed);
  }
  return s;
}

Json to_json(const ScenarioFile& s) {
  Json rules = Json::array();
  for (const auto& r : s.rules) {
    Json e{{"kind", netsim::rule_kind_name(r.kind)},
           {"from", r.match.from ? Json(r.match.from->name) : Json(nullptr)},
           {"to", r.match.to ? Json(r.match.to->name) : Json(nullptr)}};
    if (r.kind != netsim::RuleKind::kDrop) e["target"] = r.target.name;
    rules.push_back(std::move(e));
  }
  Json cooperate = Json::array();
  for (auto p : s.cooperating) cooperate.push_back(scenario::party_name(p));
  return Json{{"name", s.name},
              {"verb", s.verb},
              {"method", s.handshake.method},
              {"suite", s.handshake.suite},
              {"seed", s.handshake.seed},
              {"policies",
               {{"initiator", trust_mode_name(s.handshake.initiator_policy.mode)},
                {"responder", trust_mode_name(s.handshake.responder_policy.mode)}}},
              {"message4", s.handshake.use_message4},
              {"psk_mismatch", s.handshake.psk_mismatch},
              {"attack",
               {{"impersonation", mitm::impersonation_name(s.impersonation)},
                {"all", s.all},
                {"copy_connection_ids", s.copy_connection_ids}}},
              {"li", {{"cooperate", std::move(cooperate)}, {"mirror", s.mirror}}},
              {"topology", {{"endpoints", s.endpoints}, {"rules", std::move(rules)}}}};
}

std::string line(const Json& j) { return j.dump(); }

}  // namespace edhoc::json
