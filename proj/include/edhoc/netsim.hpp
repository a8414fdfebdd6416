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

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "edhoc/bytes.hpp"

namespace edhoc::netsim {

struct EndpointId {
  std::string name;

  friend auto operator<=>(const EndpointId&, const EndpointId&) = default;
};

struct Frame {
  std::uint64_t seq = 0;
  EndpointId from;
  EndpointId to;
  Bytes payload;
};

enum class RuleKind { kMirror, kRedirect, kDrop };

std::string_view rule_kind_name(RuleKind kind);

/// Match pattern; an unset side matches any endpoint.
struct Match {
  std::optional<EndpointId> from;
  std::optional<EndpointId> to;

  bool matches(const EndpointId& f, const EndpointId& t) const;
  /// Number of concrete sides.
  int specificity() const;
  friend bool operator==(const Match&, const Match&) = default;
};

/// Link-layer stand-in for a reconfigurable surface: Mirror copies a flow to
/// an extra receiver, Redirect steers it away from its destination, Drop
/// swallows it.
struct PathRule {
  RuleKind kind = RuleKind::kMirror;
  Match match;
  EndpointId target;  // ignored for Drop
};

using RuleId = std::uint64_t;

enum class DeliveryReason { kDirect, kRedirected, kMirrored };

std::string_view delivery_reason_name(DeliveryReason reason);

struct Delivery {
  EndpointId at;
  Frame frame;
  DeliveryReason reason = DeliveryReason::kDirect;
  std::optional<RuleId> rule;
};

struct DeliveryLogEntry {
  std::uint64_t step_index;
  Delivery delivery;
};

/// Deterministic in-process network. Single driver thread by contract.
///
/// Routing is resolved when a frame is sent, so rule changes only affect
/// frames sent afterwards. step() delivers the oldest queued frame: the
/// primary delivery first, then mirror copies in rule-insertion order.
class Network {
 public:
  void attach(const EndpointId& id);
  void detach(const EndpointId& id);
  bool attached(const EndpointId& id) const { return mailboxes_.contains(id); }

  /// Throws UNKNOWN_ENDPOINT or PAYLOAD_TOO_LARGE.
  std::uint64_t send(const EndpointId& from, const EndpointId& to, Bytes payload);

  std::vector<Delivery> step();
  /// Steps until the queue is empty or `max_steps` is reached.
  std::vector<Delivery> run(std::size_t max_steps);

  bool idle() const { return queue_.empty(); }
  std::size_t steps_taken() const { return step_index_; }

  /// Throws RULE_CONFLICT when a Redirect with the identical match exists.
  RuleId add_rule(const PathRule& rule);
  /// Throws UNKNOWN_RULE.
  void remove_rule(RuleId id);

  /// Pops the oldest delivered frame for an endpoint.
  std::optional<Frame> receive(const EndpointId& at);
  std::size_t pending(const EndpointId& at) const;

  const std::vector<DeliveryLogEntry>& log() const { return log_; }
  /// One JSON object per line, in delivery order.
  std::string log_jsonl() const;

 private:
  struct Queued {
    Frame frame;
    std::vector<Delivery> route;
  };

  std::vector<Delivery> route(const Frame& frame) const;
  void check_attached(const EndpointId& id) const;

  std::map<EndpointId, std::deque<Frame>> mailboxes_;
  std::vector<std::pair<RuleId, PathRule>> rules_;
  std::deque<Queued> queue_;
  std::vector<DeliveryLogEntry> log_;
  std::uint64_t next_seq_ = 1;
  RuleId next_rule_ = 1;
  std::uint64_t step_index_ = 0;
};

}  // namespace edhoc::netsim
