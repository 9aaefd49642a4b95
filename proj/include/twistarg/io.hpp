// Copyright 2026 The twistarg Authors
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
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "json.hpp"
#include "twistarg/characters.hpp"
#include "twistarg/forms.hpp"

// Report serialization and the on-disk caches.

namespace twistarg {

using Json = nlohmann::ordered_json;

/// Write to a sibling temporary file, then rename over the target.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// 17 significant digits; non-finite values become "nan", "inf", "-inf".
std::string format_double(double v);

/// JSON text with every float printed by format_double (non-finite ones as null).
std::string dump_json(const Json& j, int indent = 2);

enum class CacheOutcome { Hit, Miss, Extended, Regenerated };
const char* to_string(CacheOutcome o);

/// Coefficient tables and character-table manifests under one directory.
/// A coefficient file holds the largest table generated so far for a form; smaller
/// requests are served from it. Every payload carries a SHA-256 that is verified on load.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }

  /// "delta" goes through the coefficient cache; form files are rebuilt from their prime data.
  std::shared_ptr<const HeckeForm> form(const std::string& descriptor, std::size_t n_max);
  std::shared_ptr<const CharacterTable> characters(std::uint64_t q);

  CacheOutcome last_outcome() const { return last_; }
  std::filesystem::path coefficient_file(const std::string& form_id) const;
  std::filesystem::path character_file(std::uint64_t q) const;

 private:
  std::filesystem::path dir_;
  CacheOutcome last_ = CacheOutcome::Miss;
};

}  // namespace twistarg
