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

#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "edhoc/bytes.hpp"
#include "edhoc/codec.hpp"
#include "edhoc/protocol.hpp"
#include "edhoc/scenario.hpp"

namespace edhoc::test {

/// One [section] of a .hex fixture.
struct VectorSection {
  std::string name;
  std::map<std::string, std::string> fields;

  Bytes hex(const std::string& key) const { return from_hex(fields.at(key)); }
  std::uint64_t number(const std::string& key) const { return std::stoull(fields.at(key)); }
};

inline std::vector<VectorSection> load_vectors(const std::string& file) {
  std::ifstream in(std::string(EDHOC_LAB_SOURCE_DIR) + "/tests/vectors/" + file);
  if (!in) throw std::runtime_error("missing vector file " + file);
  std::vector<VectorSection> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      out.push_back({line.substr(1, line.size() - 2), {}});
      continue;
    }
    const auto eq = line.find(" = ");
    if (eq == std::string::npos || out.empty()) throw std::runtime_error("bad vector line: " + line);
    out.back().fields[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return out;
}

inline VectorSection vector_section(const std::string& file, const std::string& name) {
  for (auto& s : load_vectors(file)) {
    if (s.name == name) return s;
  }
  throw std::runtime_error("no section " + name);
}

/// A handshake driven by hand, without the network, keeping every message.
struct DirectRun {
  std::optional<SessionState> initiator;
  std::optional<SessionState> responder;
  Bytes m1, m2, m3, m4;
};

inline DirectRun direct_handshake(const scenario::HandshakeOptions& opt, ProviderPtr provider = nullptr) {
  if (!provider) provider = make_provider(opt.suite);
  const auto cast = scenario::cast_for(*provider, opt);
  DirectRun run;
  run.initiator.emplace(make_initiator(scenario::initiator_config(cast, opt, provider)));
  run.responder.emplace(make_responder(scenario::responder_config(cast, opt, provider)));
  auto& i = *run.initiator;
  auto& r = *run.responder;
  run.m1 = encode(initiator_start(i));
  run.m2 = encode(responder_on_message1(r, decode_message1(run.m1)));
  run.m3 = encode(initiator_on_message2(i, decode_message2(run.m2)));
  if (auto m4 = responder_on_message3(r, decode_message3(run.m3))) {
    run.m4 = encode(*m4);
    initiator_on_message4(i, decode_message4(run.m4));
  }
  return run;
}

inline scenario::HandshakeOptions options(int method, std::uint64_t seed, int suite = 0, bool message4 = false) {
  scenario::HandshakeOptions o;
  o.method = method;
  o.seed = seed;
  o.suite = suite;
  o.use_message4 = message4;
  return o;
}

}  // namespace edhoc::test
