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

#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "edhoc/auth.hpp"
#include "edhoc/escrow.hpp"
#include "edhoc/mitm.hpp"
#include "edhoc/protocol.hpp"
#include "edhoc/scenario.hpp"

/// JSON forms of everything the CLI emits or loads. Byte strings are
/// lowercase hex; keys keep insertion order so output is byte-stable.
namespace edhoc::json {

using Json = nlohmann::ordered_json;

/// Credential fixture: a list of {id_cred, kind, public, secret?, psk?}.
/// Malformed files throw MALFORMED.
Json credentials_to_json(const std::vector<Credential>& creds);
std::vector<Credential> credentials_from_json(const Json& j);

Json to_json(const escrow::EscrowPackage& pkg);
escrow::EscrowPackage package_from_json(const Json& j);
Json to_json(const escrow::EscrowShare& share);
escrow::EscrowShare share_from_json(const Json& j);

Json to_json(const TransitionRecord& t);
Json to_json(const std::vector<TransitionRecord>& transcript);

/// One line per handshake run.
Json handshake_report(const scenario::HandshakeOptions& opt, const scenario::HandshakeResult& r);

Json to_json(const mitm::AttackReport& report);
/// AttackReport plus the cell it came from and the expected outcome.
Json attack_line(const scenario::MitmResult& r, std::uint64_t seed);
/// The matrix summary as a JSON object.
Json matrix_summary(const std::vector<scenario::MitmResult>& results, std::uint64_t seed);

Json to_json(const escrow::InterceptionRecord& record);

/// Scenario file: the same knobs the CLI flags set, plus a topology.
struct ScenarioFile {
  std::string name;
  /// "handshake", "mitm" or "li".
  std::string verb;
  scenario::HandshakeOptions handshake;
  mitm::Impersonation impersonation = mitm::Impersonation::kUseCompromisedKeys;
  /// mitm: run the whole matrix instead of one cell.
  bool all = false;
  bool copy_connection_ids = false;
  std::set<scenario::Party> cooperating;
  bool mirror = true;
  std::vector<std::string> endpoints;
  std::vector<netsim::PathRule> rules;
};

/// Throws MALFORMED for shape errors and INVALID_ARGUMENT for values out of
/// range or rules naming endpoints that are not listed.
ScenarioFile scenario_from_json(const Json& j);
Json to_json(const ScenarioFile& s);

/// "all", "none", "authority-only" or a comma list of party names.
std::set<scenario::Party> parse_parties(const std::string& spec);
TrustMode parse_trust_mode(const std::string& s);

/// Compact single-line dump used for every JSON-lines output.
std::string line(const Json& j);

}  // namespace edhoc::json
