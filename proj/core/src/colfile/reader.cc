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

#include "colcache/colfile/reader.h"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "colcache/colfile/compression.h"
#include "colcache/colfile/metadata_codec.h"
#include "colcache/common/error.h"

namespace colcache::colfile {

namespace {

class PosixSource final : public RandomAccessSource {
 public:
  explicit PosixSource(const std::filesystem::path& path) : path_(path.string()) {
    fd_ = ::open(path_.c_str(), O_RDONLY | O_CLOEXEC);
    if (fd_ < 0) throw IoError("open " + path_ + ": " + std::strerror(errno));
    struct stat st {};
    if (::fstat(fd_, &st) != 0) {
      int err = errno;
      ::close(fd_);
      throw IoError("fstat " + path_ + ": " + std::strerror(err));
    }
    size_ = static_cast<uint64_t>(st.st_size);
  }
  ~PosixSource() override { ::close(fd_); }
  PosixSource(const PosixSource&) = delete;
  PosixSource& operator=(const PosixSource&) = delete;

  uint64_t size() const override { return size_; }

  void read_at(uint64_t offset, std::span<uint8_t> out) const override {
    size_t done = 0;
    while (done < out.size()) {
      ssize_t n = ::pread(fd_, out.data() + done, out.size() - done, static_cast<off_t>(offset + done));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw IoError("pread " + path_ + ": " + std::strerror(errno));
      }
      if (n == 0) throw IoError("short read from " + path_);
      done += static_cast<size_t>(n);
    }
  }

 private:
  std::string path_;
  int fd_ = -1;
  uint64_t size_ = 0;
};

class MemorySource final : public RandomAccessSource {
 public:
  explicit MemorySource(std::shared_ptr<const Bytes> bytes) : bytes_(std::move(bytes)) {}
  uint64_t size() const override { return bytes_->size(); }
  void read_at(uint64_t offset, std::span<uint8_t> out) const override {
    if (offset > bytes_->size() || out.size() > bytes_->size() - offset) {
      throw IoError("read past end of in-memory file");
    }
    std::memcpy(out.data(), bytes_->data() + offset, out.size());
  }

 private:
  std::shared_ptr<const Bytes> bytes_;
};

bool is_magic(std::span<const uint8_t> p) {
  return p.size() >= kMagicLen && std::memcmp(p.data(), kMagic, kMagicLen) == 0;
}

uint64_t fixed_chunk_size(ColumnType type, uint64_t rows) {
  return type == ColumnType::kUtf8 ? 0 : (rows + 7) / 8 + rows * 8;
}

}  // namespace

std::shared_ptr<RandomAccessSource> open_posix_source(const std::filesystem::path& path) {
  return std::make_shared<PosixSource>(path);
}

std::shared_ptr<RandomAccessSource> make_memory_source(std::shared_ptr<const Bytes> bytes) {
  return std::make_shared<MemorySource>(std::move(bytes));
}

FooterLocation locate_footer(std::span<const uint8_t> tail, uint64_t file_length) {
  if (tail.size() != kTailLen) throw CorruptFileError("file tail must be 8 bytes");
  if (!is_magic(tail.subspan(4))) throw CorruptFileError("bad trailing magic");
  uint64_t len = load_le<uint32_t>(tail.data());
  if (file_length < kMagicLen + kTailLen || len > file_length - kMagicLen - kTailLen) {
    throw CorruptFileError("footer length " + std::to_string(len) + " exceeds file length " +
                           std::to_string(file_length));
  }
  return {file_length - kTailLen - len, len};
}

ColumnChunk::ColumnChunk(ColumnType type, uint64_t num_rows, Bytes data)
    : type_(type), num_rows_(num_rows), data_(std::move(data)) {
  if (data_.size() < bitmap_len()) throw CorruptFileError("column chunk shorter than null bitmap");
  if (type_ != ColumnType::kUtf8) {
    if (data_.size() != fixed_chunk_size(type_, num_rows_)) {
      throw CorruptFileError("fixed-width column chunk has wrong size");
    }
    return;
  }
  auto vals = values();
  uint64_t off = 0;
  for (uint64_t r = 0; r < num_rows_; ++r) {
    if (vals.size() - off < 4) throw CorruptFileError("utf8 slot header past chunk end");
    uint32_t len = load_le<uint32_t>(vals.data() + off);
    if (vals.size() - off - 4 < len) throw CorruptFileError("utf8 slot past chunk end");
    if (is_null(r) && len != 0) throw CorruptFileError("null utf8 slot is not empty");
    off += 4 + len;
  }
  if (off != vals.size()) throw CorruptFileError("trailing bytes in utf8 chunk");
}

Scalar ColumnChunk::cell(uint64_t row) const {
  if (row >= num_rows_) throw PreconditionError("row out of range");
  if (is_null(row)) return std::monostate{};
  switch (type_) {
    case ColumnType::kInt64: return int64_at(row);
    case ColumnType::kFloat64: return float64_at(row);
    case ColumnType::kUtf8: {
      uint64_t off = 0;
      for (uint64_t r = 0; r < row; ++r) off += 4 + load_le<uint32_t>(values().data() + off);
      return std::string(utf8_at(off));
    }
  }
  return std::monostate{};
}

FileReader::FileReader(std::shared_ptr<RandomAccessSource> source) : source_(std::move(source)) {
  size_ = source_->size();
  if (size_ < kMagicLen + kTailLen) throw CorruptFileError("file too short");
  uint8_t head[kMagicLen];
  source_->read_at(0, head);
  if (!is_magic(head)) throw CorruptFileError("bad leading magic");
  uint8_t tail[kTailLen];
  source_->read_at(size_ - kTailLen, tail);
  footer_loc_ = locate_footer(tail, size_);
}

std::shared_ptr<const FileReader> FileReader::open(const std::filesystem::path& path) {
  return std::make_shared<FileReader>(open_posix_source(path));
}

std::shared_ptr<const FileReader> FileReader::from_bytes(Bytes bytes) {
  return std::make_shared<FileReader>(make_memory_source(std::make_shared<const Bytes>(std::move(bytes))));
}

Bytes FileReader::read_range(uint64_t offset, uint64_t len) const {
  if (offset > size_ || len > size_ - offset) throw CorruptFileError("range outside file");
  Bytes out(len);
  source_->read_at(offset, out);
  return out;
}

Bytes FileReader::read_footer_compressed() const {
  return read_range(footer_loc_.offset, footer_loc_.compressed_len);
}

void FileReader::check_stripe_bounds(const StripeInfo& info) const {
  uint64_t limit = footer_loc_.offset;
  bool ok = info.stripe_offset >= kMagicLen && info.stripe_offset <= limit &&
            info.index_len <= limit - info.stripe_offset &&
            info.data_len <= limit - info.stripe_offset - info.index_len &&
            info.footer_len <= limit - info.stripe_offset - info.index_len - info.data_len;
  if (!ok) throw CorruptFileError("stripe sections extend past the footer");
}

Bytes FileReader::read_stripe_index_compressed(const StripeInfo& info) const {
  check_stripe_bounds(info);
  return read_range(info.stripe_offset, info.index_len);
}

Bytes FileReader::read_stripe_footer_compressed(const StripeInfo& info) const {
  check_stripe_bounds(info);
  return read_range(info.footer_offset(), info.footer_len);
}

ColumnChunk FileReader::read_column_chunk(uint32_t stripe, uint32_t column, const FileFooter& footer,
                                          const StripeFooter& stripe_footer,
                                          CostCounters* counters) const {
  if (stripe >= footer.stripes.size()) throw PreconditionError("stripe index out of range");
  if (column >= footer.columns.size() || column >= stripe_footer.streams.size()) {
    throw PreconditionError("column index out of range");
  }
  return read_column_chunk(footer.stripes[stripe], footer.columns[column].type,
                           stripe_footer.streams[column], counters);
}

ColumnChunk FileReader::read_column_chunk(const StripeInfo& info, ColumnType type,
                                          const StreamInfo& stream, CostCounters* counters) const {
  check_stripe_bounds(info);
  if (stream.chunk_offset > info.data_len || stream.chunk_len > info.data_len - stream.chunk_offset) {
    throw CorruptFileError("column chunk outside stripe data region");
  }
  Bytes compressed = read_range(info.data_offset() + stream.chunk_offset, stream.chunk_len);
  Bytes raw;
  try {
    raw = inflate_section(compressed, counters, fixed_chunk_size(type, info.num_rows));
  } catch (const DecompressError& e) {
    throw CorruptFileError(std::string("column chunk: ") + e.what());
  }
  return ColumnChunk(type, info.num_rows, std::move(raw));
}

FileFooter read_footer(const FileReader& reader, CostCounters* counters) {
  Bytes raw = inflate_section(reader.read_footer_compressed(), counters);
  return parse_footer(raw, counters);
}

StripeFooter read_stripe_footer(const FileReader& reader, const StripeInfo& info, CostCounters* counters) {
  Bytes raw = inflate_section(reader.read_stripe_footer_compressed(info), counters);
  return parse_stripe_footer(raw, counters);
}

StripeIndex read_stripe_index(const FileReader& reader, const StripeInfo& info,
                              std::span<const ColumnType> types, CostCounters* counters) {
  Bytes raw = inflate_section(reader.read_stripe_index_compressed(info), counters);
  return parse_stripe_index(raw, types, counters);
}

}  // namespace colcache::colfile
