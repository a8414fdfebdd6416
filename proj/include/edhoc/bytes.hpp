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

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace edhoc {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

/// Upper bound on any single handshake message or network frame.
inline constexpr std::size_t kMaxMessageSize = 4096;

std::string to_hex(ByteView data);

/// Parses lower- or upper-case hex. Throws EdhocError(MALFORMED) on odd
/// length or non-hex characters.
Bytes from_hex(std::string_view hex);

Bytes to_bytes(std::string_view text);

inline void append(Bytes& out, ByteView data) { out.insert(out.end(), data.begin(), data.end()); }

Bytes concat(std::initializer_list<ByteView> parts);

/// Overwrites the buffer with zeros in a way the optimizer cannot elide,
/// then clears it.
void secure_wipe(Bytes& data);

/// 32 bytes of seed material derived from a numeric scenario seed and a
/// purpose label. Every random input in the lab flows through here.
Bytes derive_seed(std::uint64_t seed, std::string_view label);

}  // namespace edhoc
