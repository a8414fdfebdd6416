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

#include "edhoc/bytes.hpp"

/// Canonical CBOR subset: unsigned and negative integers, byte strings and
/// definite-length arrays, always in shortest form. The reader rejects
/// anything outside that subset, which makes every accepted encoding the
/// unique encoding of its value.
namespace edhoc::cbor {

enum class MajorType : std::uint8_t {
  kUnsigned = 0,
  kNegative = 1,
  kBytes = 2,
  kText = 3,
  kArray = 4,
  kMap = 5,
  kTag = 6,
  kSimple = 7,
};

class Writer {
 public:
  Writer& uint(std::uint64_t value);
  Writer& integer(std::int64_t value);
  Writer& bytes(ByteView value);
  Writer& array(std::size_t count);

  const Bytes& data() const& { return out_; }
  Bytes take() && { return std::move(out_); }

 private:
  void head(MajorType type, std::uint64_t argument);

  Bytes out_;
};

class Reader {
 public:
  explicit Reader(ByteView input) : input_(input) {}

  bool at_end() const { return pos_ == input_.size(); }
  std::size_t position() const { return pos_; }

  /// Major type of the next item. Throws TRUNCATED at end of input.
  MajorType peek() const;

  std::uint64_t uint();
  std::int64_t integer();
  Bytes bytes();
  std::size_t array();

 private:
  std::uint64_t head(MajorType expected);

  ByteView input_;
  std::size_t pos_ = 0;
};

}  // namespace edhoc::cbor
