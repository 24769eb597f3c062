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

#include "colcache/colfile/compression.h"

#include <zlib.h>

#include <limits>
#include <string>

#include "colcache/common/error.h"

namespace colcache::colfile {

namespace {

constexpr int kRawWindowBits = -15;
constexpr int kMemLevel = 8;

struct DeflateStream {
  z_stream zs{};
  explicit DeflateStream(int level) {
    if (deflateInit2(&zs, level, Z_DEFLATED, kRawWindowBits, kMemLevel, Z_DEFAULT_STRATEGY) != Z_OK) {
      throw Error("deflateInit2 failed");
    }
  }
  ~DeflateStream() { deflateEnd(&zs); }
};

struct InflateStream {
  z_stream zs{};
  InflateStream() {
    if (inflateInit2(&zs, kRawWindowBits) != Z_OK) throw DecompressError("inflateInit2 failed");
  }
  ~InflateStream() { inflateEnd(&zs); }
};

}  // namespace

Bytes deflate_section(ByteSpan raw, int level) {
  if (raw.size() > std::numeric_limits<uInt>::max()) throw Error("section too large to compress");
  DeflateStream s(level);
  Bytes out(deflateBound(&s.zs, static_cast<uLong>(raw.size())));
  s.zs.next_in = const_cast<Bytef*>(raw.data());
  s.zs.avail_in = static_cast<uInt>(raw.size());
  s.zs.next_out = out.data();
  s.zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&s.zs, Z_FINISH);
  if (rc != Z_STREAM_END) throw Error("deflate did not finish: " + std::to_string(rc));
  out.resize(s.zs.total_out);
  return out;
}

Bytes inflate_section(ByteSpan compressed, CostCounters* counters, size_t size_hint) {
  if (counters) counters->add_inflate();
  if (compressed.size() > std::numeric_limits<uInt>::max()) throw DecompressError("input too large");
  InflateStream s;
  Bytes out(size_hint > 0 ? size_hint : compressed.size() * 3 + 64);
  s.zs.next_in = const_cast<Bytef*>(compressed.data());
  s.zs.avail_in = static_cast<uInt>(compressed.size());
  for (;;) {
    if (s.zs.total_out == out.size()) out.resize(out.size() * 2);
    s.zs.next_out = out.data() + s.zs.total_out;
    s.zs.avail_out = static_cast<uInt>(out.size() - s.zs.total_out);
    int rc = inflate(&s.zs, Z_NO_FLUSH);
    if (rc == Z_STREAM_END) break;
    if (rc == Z_OK) continue;
    if (rc == Z_BUF_ERROR && s.zs.avail_out > 0) throw DecompressError("truncated deflate stream");
    if (rc == Z_BUF_ERROR) continue;
    throw DecompressError(std::string("malformed deflate stream: ") + (s.zs.msg ? s.zs.msg : "?"));
  }
  if (s.zs.avail_in != 0) throw DecompressError("trailing bytes after deflate stream");
  out.resize(s.zs.total_out);
  return out;
}

}  // namespace colcache::colfile
