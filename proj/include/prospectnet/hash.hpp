// Copyright 2026 The ProspectNet Authors
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

#ifndef PROSPECTNET__HASH_HPP_
#define PROSPECTNET__HASH_HPP_

#include <cstdint>
#include <string_view>

namespace prospectnet
{

/**
 * @brief FNV-1a over the bytes of @p text.
 *
 * Used to derive per-scenario sampling seeds. Unlike std::hash the result is
 * pinned by this implementation, so seeds survive compiler upgrades.
 */
constexpr std::uint64_t stable_hash(std::string_view text)
{
  std::uint64_t state = 14695981039346656037ULL;
  for (const char ch : text) {
    state ^= static_cast<std::uint64_t>(static_cast<unsigned char>(ch));
    state *= 1099511628211ULL;
  }
  return state;
}

}  // namespace prospectnet

#endif  // PROSPECTNET__HASH_HPP_
