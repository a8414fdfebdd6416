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

#include "edhoc/escrow.hpp"

#include <algorithm>

#include "edhoc/error.hpp"

namespace edhoc::escrow {

namespace {

const Bytes kEscrowSalt = to_bytes("edhoc-lab escrow v1");

Bytes unwrap_key(const CryptoProvider& provider, const std::string& session_id, ByteView combined) {
  Bytes k = provider.kdf_extract(kEscrowSalt, combined);
  Bytes key = provider.kdf_expand(k, to_bytes(session_id), provider.suite().aead_key_length);
  secure_wipe(k);
  return key;
}

Bytes zero_nonce(const CryptoProvider& provider) { return Bytes(provider.suite().aead_nonce_length, 0); }

}  // namespace

EscrowPackage escrow_wrap(const CryptoProvider& provider, const std::string& session_id, ByteView session_secret,
                          const std::array<Recipient, 3>& recipients, ByteView seed) {
  for (std::size_t i = 0; i < recipients.size(); ++i) {
    for (std::size_t j = i + 1; j < recipients.size(); ++j) {
      if (recipients[i].public_key == recipients[j].public_key || recipients[i].id == recipients[j].id) {
        raise(ErrorCode::kDuplicateRecipient, recipients[i].id + " / " + recipients[j].id);
      }
    }
  }
  KeyPair eph = provider.generate_keypair(KeyKind::kEphemeralDh, seed);
  Bytes combined;
  for (const auto& r : recipients) {
    Bytes s = provider.ecdh(eph.private_key, r.public_key);
    append(combined, s);
    secure_wipe(s);
  }
  secure_wipe(eph.private_key);
  Bytes key = unwrap_key(provider, session_id, combined);
  secure_wipe(combined);
  // One fresh ephemeral per package means each key seals exactly once, so
  // the fixed nonce never repeats under a key.
  EscrowPackage pkg{session_id, provider.aead_seal(key, zero_nonce(provider), to_bytes(session_id), session_secret),
                    eph.public_key, recipients};
  secure_wipe(key);
  return pkg;
}

EscrowShare contribute(const CryptoProvider& provider, ByteView private_key, const EscrowPackage& package) {
  const Bytes pub = provider.public_from_private(KeyKind::kStaticDh, private_key);
  auto it = std::find_if(package.recipients.begin(), package.recipients.end(),
                         [&](const Recipient& r) { return r.public_key == pub; });
  if (it == package.recipients.end()) raise(ErrorCode::kNotARecipient);
  return EscrowShare{it->id, provider.ecdh(private_key, package.eph_public)};
}

Bytes recover(const CryptoProvider& provider, const EscrowPackage& package, const std::vector<EscrowShare>& shares) {
  Bytes combined;
  for (const auto& r : package.recipients) {
    auto it = std::find_if(shares.begin(), shares.end(),
                           [&](const EscrowShare& s) { return s.contributor_id == r.id; });
    if (it == shares.end()) raise(ErrorCode::kInsufficientShares, "no share from " + r.id);
    append(combined, it->share);
  }
  Bytes key = unwrap_key(provider, package.session_id, combined);
  secure_wipe(combined);
  Bytes secret;
  try {
    secret = provider.aead_open(key, zero_nonce(provider), to_bytes(package.session_id), package.wrapped_secret);
  } catch (...) {
    secure_wipe(key);
    throw;
  }
  secure_wipe(key);
  return secret;
}

InterceptionRecord proxy_ingest(InterceptionRecord record, const netsim::Delivery& delivery) {
  if (delivery.reason != netsim::DeliveryReason::kMirrored) return record;
  const auto seq = delivery.frame.seq;
  const bool seen = std::any_of(record.frames.begin(), record.frames.end(),
                                [seq](const MirroredFrame& f) { return f.seq == seq; });
  if (!seen) record.frames.push_back({seq, delivery.frame.payload});
  return record;
}

}  // namespace edhoc::escrow
