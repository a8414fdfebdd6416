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

#include "edhoc/cbor.hpp"

#include <limits>

#include "edhoc/error.hpp"

namespace edhoc::cbor {

void Writer::head(MajorType type, std::uint64_t argument) {
  const auto mt = static_cast<std::uint8_t>(static_cast<std::uint8_t>(type) << 5);
  if (argument < 24) {
    out_.push_back(static_cast<std::uint8_t>(mt | argument));
    return;
  }
  int width;
  std::uint8_t info;
  if (argument <= 0xff) {
    width = 1, info = 24;
  } else if (argument <= 0xffff) {
    width = 2, info = 25;
  } else if (argument <= 0xffffffffULL) {
    width = 4, info = 26;
  } else {
    width = 8, info = 27;
  }
  out_.push_back(static_cast<std::uint8_t>(mt | info));
  for (int i = width - 1; i >= 0; --i) out_.push_back(static_cast<std::uint8_t>(argument >> (8 * i)));
}

Writer& Writer::uint(std::uint64_t value) {
  head(MajorType::kUnsigned, value);
  return *this;
}

Writer& Writer::integer(std::int64_t value) {
  if (value >= 0) {
    head(MajorType::kUnsigned, static_cast<std::uint64_t>(value));
  } else {
    // -1 - n without overflow for INT64_MIN
    head(MajorType::kNegative, static_cast<std::uint64_t>(-(value + 1)));
  }
  return *this;
}

Writer& Writer::bytes(ByteView value) {
  head(MajorType::kBytes, value.size());
  append(out_, value);
  return *this;
}

Writer& Writer::array(std::size_t count) {
  head(MajorType::kArray, count);
  return *this;
}

MajorType Reader::peek() const {
  if (at_end()) raise(ErrorCode::kTruncated, "expected a data item");
  return static_cast<MajorType>(input_[pos_] >> 5);
}

std::uint64_t Reader::head(MajorType expected) {
  if (peek() != expected) raise(ErrorCode::kMalformed, "unexpected major type");
  const std::uint8_t info = input_[pos_] & 0x1f;
  ++pos_;
  if (info < 24) return info;
  if (info > 27) raise(ErrorCode::kMalformed, "indefinite or reserved length");
  const std::size_t width = std::size_t{1} << (info - 24);
  if (input_.size() - pos_ < width) raise(ErrorCode::kTruncated, "item head cut short");
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < width; ++i) value = (value << 8) | input_[pos_ + i];
  pos_ += width;
  // Shortest form: the value must not fit a narrower head.
  const std::uint64_t floor = width == 1 ? 24 : (std::uint64_t{1} << (4 * width));
  if (value < floor) raise(ErrorCode::kMalformed, "non-shortest integer encoding");
  return value;
}

std::uint64_t Reader::uint() { return head(MajorType::kUnsigned); }

std::int64_t Reader::integer() {
  constexpr auto kMax = static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
  if (peek() == MajorType::kNegative) {
    const auto n = head(MajorType::kNegative);
    if (n > kMax) raise(ErrorCode::kMalformed, "negative integer out of range");
    return -1 - static_cast<std::int64_t>(n);
  }
  const auto v = head(MajorType::kUnsigned);
  if (v > kMax) raise(ErrorCode::kMalformed, "integer out of range");
  return static_cast<std::int64_t>(v);
}

Bytes Reader::bytes() {
  const auto len = head(MajorType::kBytes);
  if (len > input_.size() - pos_) raise(ErrorCode::kTruncated, "byte string cut short");
  Bytes out(input_.begin() + static_cast<std::ptrdiff_t>(pos_),
            input_.begin() + static_cast<std::ptrdiff_t>(pos_ + len));
  pos_ += len;
  return out;
}

std::size_t Reader::array() {
  const auto count = head(MajorType::kArray);
  // every element takes at least one byte
  if (count > input_.size() - pos_) raise(ErrorCode::kTruncated, "array cut short");
  return static_cast<std::size_t>(count);
}

}  // namespace edhoc::cbor
