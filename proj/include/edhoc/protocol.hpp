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
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "edhoc/auth.hpp"
#include "edhoc/bytes.hpp"
#include "edhoc/codec.hpp"
#include "edhoc/crypto.hpp"
#include "edhoc/error.hpp"

namespace edhoc {

struct SessionConfig {
  Role role = Role::kInitiator;
  int method = 0;
  ProviderPtr provider;
  /// Responder allow-list. Empty means "the provider's suite only".
  std::vector<int> accepted_suites;
  /// Responder allow-list. Empty means "config.method only".
  std::vector<int> accepted_methods;
  Credential own;
  CredentialStore store;
  TrustPolicy policy;
  ConnectionId connection_id;
  /// EAD to attach, indexed by round - 1.
  std::array<EadList, 4> ead_to_send;
  /// Labels this endpoint understands; a received critical item outside the
  /// set fails the handshake.
  std::set<std::int64_t> understood_ead_labels;
  /// Both sides must agree; see the harness for what a mismatch looks like.
  bool use_message4 = false;
  /// Send ID_CRED with the credential attached instead of a bare kid.
  bool credential_by_value = false;
  /// When false the peer's Signature_or_MAC is not checked and the peer is
  /// never reported as authenticated. Only the adversary sets this.
  bool verify_peer = true;
  Bytes rng_seed;
  std::string session_id;
};

enum class Phase { kStart, kWaitMsg2, kWaitMsg3, kWaitMsg4, kCompleted, kFailed };

std::string_view phase_name(Phase phase);

struct TransitionRecord {
  std::string session_id;
  Role role;
  Phase from;
  Phase to;
  int round;
  std::optional<ErrorCode> error;
};

struct TranscriptHashes {
  Bytes th_2;
  Bytes th_3;
  Bytes th_4;
};

struct SessionKeys {
  bool handshake_complete = false;
  Bytes exporter_secret;
};

namespace detail {
class Engine;
}

/// One endpoint's view of one handshake. Single owner; move it between
/// threads only between calls. The ephemeral private key has no accessor
/// and is wiped once the key schedule no longer needs it.
class SessionState {
 public:
  SessionState(SessionState&&) noexcept = default;
  SessionState& operator=(SessionState&&) noexcept = default;
  SessionState(const SessionState&) = delete;
  SessionState& operator=(const SessionState&) = delete;
  ~SessionState();

  Role role() const { return config_.role; }
  int method() const { return method_; }
  Phase phase() const { return phase_; }
  const SessionConfig& config() const { return config_; }
  const std::string& session_id() const { return config_.session_id; }

  std::optional<ErrorCode> failure() const { return failure_; }
  /// Round of the message whose processing failed, 0 when none.
  int failed_round() const { return failed_round_; }

  const Bytes& own_ephemeral_public() const { return own_ephemeral_public_; }
  const Bytes& peer_ephemeral_public() const { return peer_ephemeral_public_; }
  const ConnectionId& peer_connection_id() const { return peer_connection_id_; }
  const TranscriptHashes& transcript() const { return th_; }

  /// G_XY-derived secret (PRK_2e). Empty until both ephemerals are known.
  const Bytes& session_secret() const { return prk_2e_; }

  /// Set once the peer's credential has been resolved.
  const std::optional<Credential>& peer_credential() const { return peer_credential_; }
  /// True once the peer's Signature_or_MAC checked out.
  bool peer_authenticated() const { return peer_authenticated_; }
  /// True when the peer credential came off the wire (WeakAccept).
  bool peer_unverified() const { return peer_unverified_; }

  const EadList& received_ead(int round) const { return received_ead_.at(static_cast<std::size_t>(round - 1)); }
  const std::vector<TransitionRecord>& transitions() const { return transitions_; }

  bool holds_ephemeral_private() const { return !ephemeral_private_.empty(); }

  /// Diagnostic dump. Carries an "ephemeral_private" field only while the
  /// key is still held.
  std::string debug_json() const;

 private:
  friend class detail::Engine;
  explicit SessionState(SessionConfig config);

  SessionConfig config_;
  int method_ = 0;
  Phase phase_ = Phase::kStart;
  std::optional<ErrorCode> failure_;
  int failed_round_ = 0;

  Bytes ephemeral_private_;
  Bytes own_ephemeral_public_;
  Bytes peer_ephemeral_public_;
  ConnectionId peer_connection_id_;

  Bytes h_message1_;
  TranscriptHashes th_;
  Bytes prk_2e_;
  Bytes prk_3e2m_;
  Bytes prk_4e3m_;
  Bytes prk_out_;
  Bytes prk_exporter_;

  std::optional<Credential> peer_credential_;
  bool peer_authenticated_ = false;
  bool peer_unverified_ = false;
  std::array<EadList, 4> received_ead_;
  std::vector<TransitionRecord> transitions_;
};

/// Validates the config and builds an Initiator/Responder in phase Start.
/// Throws CONFIG_INCONSISTENT.
SessionState make_initiator(SessionConfig config);
SessionState make_responder(SessionConfig config);

// Each step below either advances the state and returns the next message,
// or marks the state Failed (recording the code and round) and rethrows the
// EdhocError. Calling a step in the wrong phase throws UNEXPECTED_MESSAGE
// and leaves the state untouched.

Message1 initiator_start(SessionState& state);
Message2 responder_on_message1(SessionState& state, const Message1& m1);
Message3 initiator_on_message2(SessionState& state, const Message2& m2);
std::optional<Message4> responder_on_message3(SessionState& state, const Message3& m3);
void initiator_on_message4(SessionState& state, const Message4& m4);

/// Application keying material. Throws NOT_COMPLETED before Completed.
Bytes export_key(const SessionState& state, ByteView label, std::size_t length);
SessionKeys session_keys(const SessionState& state);

/// One link of the transcript hash chain: hash(previous || material).
Bytes transcript_step(const CryptoProvider& provider, ByteView previous, ByteView material);

/// Key-schedule label numbers, shared with the documentation table.
enum class KdfLabel : std::uint8_t {
  kKeystream2 = 0,
  kSalt3e2m = 1,
  kMac2 = 2,
  kK3 = 3,
  kIv3 = 4,
  kSalt4e3m = 5,
  kMac3 = 6,
  kPrkOut = 7,
  kK4 = 8,
  kIv4 = 9,
  kMac4 = 10,
  kPrkExporter = 11,
  kExporter = 12,
};

/// info = CBOR sequence (uint label, bstr context, uint length).
Bytes kdf_info(KdfLabel label, ByteView context, std::size_t length);

}  // namespace edhoc
