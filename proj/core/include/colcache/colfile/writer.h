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

#include <memory>
#include <span>

#include "colcache/colfile/compression.h"
#include "colcache/colfile/stats.h"
#include "colcache/colfile/types.h"
#include "colcache/common/bytes.h"

namespace colcache::colfile {

struct WriterOptions {
  /// Target rows per stripe; the last stripe takes the remainder.
  uint64_t stripe_rows = 10'000;
  int compression_level = kDefaultCompressionLevel;
};

struct WrittenFile {
  Bytes bytes;
  FileFooter footer;
};

/// Streams rows into an in-memory colfile image.
///
///   FileWriter w(schema, {.stripe_rows = 1024});
///   for (const Row& r : rows) w.append(r);
///   WrittenFile f = std::move(w).finish();
///
/// A row that does not conform to the schema raises SchemaError and is not
/// applied, so the writer stays usable.
class FileWriter {
 public:
  FileWriter(Schema schema, WriterOptions options);
  ~FileWriter();
  FileWriter(FileWriter&&) noexcept;
  FileWriter& operator=(FileWriter&&) noexcept;

  void append(const Row& row);
  void append(std::span<const Row> rows);

  uint64_t rows_written() const noexcept;

  /// Throws EmptyInputError when no row was appended.
  WrittenFile finish() &&;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

WrittenFile write_file(const Schema& schema, std::span<const Row> rows, const WriterOptions& options);

}  // namespace colcache::colfile
