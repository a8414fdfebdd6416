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

#include "edhoc/bytes.hpp"
#include "edhoc/protocol.hpp"

namespace edhoc {

enum class Direction { kInitiatorToResponder, kResponderToInitiator };

std::string_view direction_name(Direction d);

/// Per-direction application traffic key, exported from a completed session.
struct TrafficKeys {
  Bytes key;
  Bytes iv;
};

/// Export labels "i2r"/"r2i" (key) and "i2r iv"/"r2i iv" (nonce base).
TrafficKeys traffic_keys(const SessionState& state, Direction d);

/// Record wire form: 8-byte big-endian sequence number, then
/// aead_seal(key, iv XOR seq, aad = the 8 seq bytes, plaintext).
Bytes seal_record(const CryptoProvider& provider, const TrafficKeys& keys, std::uint64_t seq, ByteView plaintext);

struct OpenedRecord {
  std::uint64_t seq;
  Bytes plaintext;
};

/// Throws AEAD_AUTH_FAILURE (also for records shorter than the header).
OpenedRecord open_record(const CryptoProvider& provider, const TrafficKeys& keys, ByteView record);

}  // namespace edhoc
