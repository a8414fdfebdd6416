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

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "edhoc/bytes.hpp"
#include "edhoc/crypto.hpp"
#include "edhoc/netsim.hpp"

namespace edhoc::escrow {

struct Recipient {
  std::string id;
  Bytes public_key;
};

/// Session secret sealed under a key that needs one ECDH contribution from
/// each of the three recipients (Initiator, Responder, Authority, in that
/// order).
struct EscrowPackage {
  std::string session_id;
  Bytes wrapped_secret;
  Bytes eph_public;
  std::array<Recipient, 3> recipients;
};

struct EscrowShare {
  std::string contributor_id;
  Bytes share;
};

/// Throws DUPLICATE_RECIPIENT when two recipients share a key or an id.
EscrowPackage escrow_wrap(const CryptoProvider& provider, const std::string& session_id, ByteView session_secret,
                          const std::array<Recipient, 3>& recipients, ByteView seed);

/// share = ecdh(private_key, package ephemeral). Throws NOT_A_RECIPIENT when
/// the key's public half is not one of the package's recipients.
EscrowShare contribute(const CryptoProvider& provider, ByteView private_key, const EscrowPackage& package);

/// Needs a share from every recipient. Throws INSUFFICIENT_SHARES when one is
/// missing and AEAD_AUTH_FAILURE when a share is wrong.
Bytes recover(const CryptoProvider& provider, const EscrowPackage& package, const std::vector<EscrowShare>& shares);

struct MirroredFrame {
  std::uint64_t seq;
  Bytes payload;
};

/// What the proxy holds for one targeted session.
struct InterceptionRecord {
  std::string session_id;
  std::vector<MirroredFrame> frames;
  std::optional<Bytes> recovered_secret;
};

/// Appends a mirrored delivery in arrival order. Deliveries that are not
/// mirror copies, and sequence numbers already recorded, leave the record
/// unchanged.
InterceptionRecord proxy_ingest(InterceptionRecord record, const netsim::Delivery& delivery);

}  // namespace edhoc::escrow
