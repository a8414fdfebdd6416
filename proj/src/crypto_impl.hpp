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

#include "edhoc/crypto.hpp"

namespace edhoc::detail {

void ensure_sodium();
ProviderPtr make_sodium_provider();
ProviderPtr make_toy_provider();

/// Seeds shorter than this are rejected by every provider.
inline constexpr std::size_t kMinSeedLength = 16;

}  // namespace edhoc::detail
