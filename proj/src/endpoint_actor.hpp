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

#include <optional>

#include "edhoc/codec.hpp"
#include "edhoc/error.hpp"
#include "edhoc/netsim.hpp"
#include "edhoc/protocol.hpp"

namespace edhoc::detail {

/// Honest endpoint reacting to whatever lands in its mailbox.
struct Victim {
  SessionState state;
  netsim::EndpointId self;
  netsim::EndpointId peer;
  std::optional<ErrorCode> decode_error;

  void on_frame(netsim::Network& net, const netsim::Frame& frame) {
    if (decode_error || state.phase() == Phase::kFailed || state.phase() == Phase::kCompleted) return;
    const int round = expected_round();
    if (round == 0) return;
    EdhocMessage msg;
    try {
      msg = decode(round, frame.payload);
    } catch (const EdhocError& e) {
      decode_error = e.code();
      return;
    }
    try {
      switch (round) {
        case 1: net.send(self, peer, encode(responder_on_message1(state, std::get<Message1>(msg)))); break;
        case 2: net.send(self, peer, encode(initiator_on_message2(state, std::get<Message2>(msg)))); break;
        case 3:
          if (auto m4 = responder_on_message3(state, std::get<Message3>(msg))) net.send(self, peer, encode(*m4));
          break;
        case 4: initiator_on_message4(state, std::get<Message4>(msg)); break;
      }
    } catch (const EdhocError&) {
      // recorded in state
    }
  }

  int expected_round() const {
    switch (state.phase()) {
      case Phase::kStart: return state.role() == Role::kResponder ? 1 : 0;
      case Phase::kWaitMsg2: return 2;
      case Phase::kWaitMsg3: return 3;
      case Phase::kWaitMsg4: return 4;
      default: return 0;
    }
  }
};

}  // namespace edhoc::detail
