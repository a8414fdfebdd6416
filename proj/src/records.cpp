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

#include "edhoc/records.hpp"

namespace edhoc {

std::string_view direction_name(Direction d) {
  return d == Direction::kInitiatorToResponder ? "I-to-R" : "R-to-I";
}

TrafficKeys traffic_keys(const SessionState& state, Direction d) {
  const auto& suite = state.config().provider->suite();
  const std::string base = d == Direction::kInitiatorToResponder ? "i2r" : "r2i";
  return TrafficKeys{export_key(state, to_bytes(base), suite.aead_key_length),
                     export_key(state, to_bytes(base + " iv"), suite.aead_nonce_length)};
}

namespace {

Bytes seq_bytes(std::uint64_t seq) {
  Bytes out(8);
  for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(seq >> (56 - 8 * i));
  return out;
}

Bytes record_nonce(const TrafficKeys& keys, ByteView seq) {
  Bytes nonce = keys.iv;
  // right-align the sequence number
  const std::size_t off = nonce.size() >= seq.size() ? nonce.size() - seq.size() : 0;
  for (std::size_t i = 0; i + off < nonce.size() && i < seq.size(); ++i) nonce[off + i] ^= seq[i];
  return nonce;
}

}  // namespace

Bytes seal_record(const CryptoProvider& provider, const TrafficKeys& keys, std::uint64_t seq, ByteView plaintext) {
  Bytes header = seq_bytes(seq);
  Bytes out = header;
  append(out, provider.aead_seal(keys.key, record_nonce(keys, header), header, plaintext));
  return out;
}

OpenedRecord open_record(const CryptoProvider& provider, const TrafficKeys& keys, ByteView record) {
  if (record.size() < 8) raise(ErrorCode::kAeadAuthFailure, "record shorter than its header");
  const auto header = record.first(8);
  std::uint64_t seq = 0;
  for (auto b : header) seq = (seq << 8) | b;
  return {seq, provider.aead_open(keys.key, record_nonce(keys, header), header, record.subspan(8))};
}

}  // namespace edhoc
