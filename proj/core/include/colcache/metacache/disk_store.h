// Copyright 2026 The colcache Authors.
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

#include <filesystem>
#include <vector>

#include "colcache/common/bytes.h"
#include "colcache/metacache/cache_key.h"
#include "colcache/metacache/eviction.h"

namespace colcache::metacache {

/// One file per entry under a directory. The file is named by the key's
/// 26-character hex form and holds u64 insert_seq ‖ u64 access_seq ‖ payload.
/// All failures surface as BackendError.
class DiskStore {
 public:
  static constexpr size_t kEntryHeader = 16;

  /// Creates the directory if needed and checks that it is writable.
  explicit DiskStore(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }
  std::filesystem::path entry_path(const CacheKey& key) const;

  /// Atomically replaces the entry file (write to a temp name, then rename).
  void write(const CacheKey& key, const Bookkeeping& book, ByteSpan payload) const;
  Bytes read_payload(const CacheKey& key) const;
  /// Rewrites the stored access sequence in place.
  void touch(const CacheKey& key, uint64_t access_seq) const;
  /// Missing files are not an error.
  void remove(const CacheKey& key) const;

  struct StoredEntry {
    CacheKey key;
    uint64_t insert_seq = 0;
    uint64_t access_seq = 0;
    Bytes payload;
  };
  /// Loads every well-formed entry, sorted by key. Leftover temp files are
  /// deleted; unrelated or malformed files are skipped.
  std::vector<StoredEntry> load_all() const;

 private:
  std::filesystem::path dir_;
};

}  // namespace colcache::metacache
