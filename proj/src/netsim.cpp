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

#include "edhoc/netsim.hpp"

#include <algorithm>
#include <json.hpp>

#include "edhoc/error.hpp"

namespace edhoc::netsim {

std::string_view rule_kind_name(RuleKind kind) {
  switch (kind) {
    case RuleKind::kMirror: return "mirror";
    case RuleKind::kRedirect: return "redirect";
    case RuleKind::kDrop: return "drop";
  }
  return "?";
}

std::string_view delivery_reason_name(DeliveryReason reason) {
  switch (reason) {
    case DeliveryReason::kDirect: return "none";
    case DeliveryReason::kRedirected: return "redirect";
    case DeliveryReason::kMirrored: return "mirror";
  }
  return "?";
}

bool Match::matches(const EndpointId& f, const EndpointId& t) const {
  return (!from || *from == f) && (!to || *to == t);
}

int Match::specificity() const { return (from ? 1 : 0) + (to ? 1 : 0); }

void Network::attach(const EndpointId& id) { mailboxes_.try_emplace(id); }

void Network::detach(const EndpointId& id) { mailboxes_.erase(id); }

void Network::check_attached(const EndpointId& id) const {
  if (!attached(id)) raise(ErrorCode::kUnknownEndpoint, id.name);
}

std::uint64_t Network::send(const EndpointId& from, const EndpointId& to, Bytes payload) {
  check_attached(from);
  check_attached(to);
  if (payload.size() > kMaxMessageSize) raise(ErrorCode::kPayloadTooLarge, std::to_string(payload.size()) + " bytes");
  Frame frame{next_seq_++, from, to, std::move(payload)};
  auto r = route(frame);
  queue_.push_back({std::move(frame), std::move(r)});
  return queue_.back().frame.seq;
}

std::vector<Delivery> Network::route(const Frame& frame) const {
  // Most specific Drop/Redirect decides the primary path; earlier rules win
  // ties.
  const std::pair<RuleId, PathRule>* steering = nullptr;
  for (const auto& entry : rules_) {
    const auto& rule = entry.second;
    if (rule.kind == RuleKind::kMirror || !rule.match.matches(frame.from, frame.to)) continue;
    if (!steering || rule.match.specificity() > steering->second.match.specificity()) steering = &entry;
  }
  std::vector<Delivery> out;
  if (steering && steering->second.kind == RuleKind::kDrop) return out;
  if (steering) {
    out.push_back({steering->second.target, frame, DeliveryReason::kRedirected, steering->first});
  } else {
    out.push_back({frame.to, frame, DeliveryReason::kDirect, std::nullopt});
  }
  for (const auto& [id, rule] : rules_) {
    if (rule.kind == RuleKind::kMirror && rule.match.matches(frame.from, frame.to)) {
      out.push_back({rule.target, frame, DeliveryReason::kMirrored, id});
    }
  }
  return out;
}

std::vector<Delivery> Network::step() {
  if (queue_.empty()) return {};
  Queued next = std::move(queue_.front());
  queue_.pop_front();
  const auto index = step_index_++;
  std::vector<Delivery> delivered;
  for (auto& d : next.route) {
    // An endpoint detached while the frame was in flight just misses it.
    auto box = mailboxes_.find(d.at);
    if (box == mailboxes_.end()) continue;
    box->second.push_back(d.frame);
    log_.push_back({index, d});
    delivered.push_back(std::move(d));
  }
  return delivered;
}

std::vector<Delivery> Network::run(std::size_t max_steps) {
  std::vector<Delivery> all;
  for (std::size_t i = 0; i < max_steps && !queue_.empty(); ++i) {
    auto d = step();
    all.insert(all.end(), std::make_move_iterator(d.begin()), std::make_move_iterator(d.end()));
  }
  return all;
}

RuleId Network::add_rule(const PathRule& rule) {
  if (rule.kind != RuleKind::kDrop) check_attached(rule.target);
  if (rule.kind == RuleKind::kRedirect) {
    for (const auto& [_, existing] : rules_) {
      if (existing.kind == RuleKind::kRedirect && existing.match == rule.match) {
        raise(ErrorCode::kRuleConflict, "a Redirect already covers this match");
      }
    }
  }
  const RuleId id = next_rule_++;
  rules_.emplace_back(id, rule);
  return id;
}

void Network::remove_rule(RuleId id) {
  auto it = std::find_if(rules_.begin(), rules_.end(), [id](const auto& e) { return e.first == id; });
  if (it == rules_.end()) raise(ErrorCode::kUnknownRule, std::to_string(id));
  rules_.erase(it);
}

std::optional<Frame> Network::receive(const EndpointId& at) {
  auto box = mailboxes_.find(at);
  if (box == mailboxes_.end() || box->second.empty()) return std::nullopt;
  Frame f = std::move(box->second.front());
  box->second.pop_front();
  return f;
}

std::size_t Network::pending(const EndpointId& at) const {
  auto box = mailboxes_.find(at);
  return box == mailboxes_.end() ? 0 : box->second.size();
}

std::string Network::log_jsonl() const {
  std::string out;
  for (const auto& e : log_) {
    nlohmann::ordered_json j;
    j["step_index"] = e.step_index;
    j["seq"] = e.delivery.frame.seq;
    j["from"] = e.delivery.frame.from.name;
    j["to"] = e.delivery.frame.to.name;
    j["delivered_at"] = e.delivery.at.name;
    j["rule_applied"] = delivery_reason_name(e.delivery.reason);
    j["payload_hex"] = to_hex(e.delivery.frame.payload);
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace edhoc::netsim
