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

#include "colcache/metacache/disk_store.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstring>
#include <system_error>

#include "colcache/common/error.h"

namespace colcache::metacache {

namespace fs = std::filesystem;

namespace {

std::atomic<uint64_t> g_temp_counter{0};

[[noreturn]] void fail(const std::string& what, const fs::path& p, int err) {
  throw BackendError(what + " " + p.string() + ": " + std::strerror(err));
}

class Fd {
 public:
  explicit Fd(int fd) noexcept : fd_(fd) {}
  ~Fd() {
    if (fd_ >= 0) ::close(fd_);
  }
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  int get() const noexcept { return fd_; }
  int release() noexcept { return std::exchange(fd_, -1); }

 private:
  int fd_;
};

void write_all(int fd, const uint8_t* p, size_t n, const fs::path& path) {
  while (n > 0) {
    ssize_t w = ::write(fd, p, n);
    if (w < 0) {
      if (errno == EINTR) continue;
      fail("write", path, errno);
    }
    p += w;
    n -= static_cast<size_t>(w);
  }
}

Bytes read_whole(const fs::path& path) {
  Fd fd(::open(path.c_str(), O_RDONLY | O_CLOEXEC));
  if (fd.get() < 0) fail("open", path, errno);
  Bytes out;
  uint8_t buf[1 << 14];
  for (;;) {
    ssize_t n = ::read(fd.get(), buf, sizeof(buf));
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("read", path, errno);
    }
    if (n == 0) break;
    out.insert(out.end(), buf, buf + n);
  }
  return out;
}

}  // namespace

DiskStore::DiskStore(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw BackendError("cannot create cache directory " + dir_.string() + ": " + ec.message());
  if (::access(dir_.c_str(), W_OK | X_OK) != 0) fail("cache directory not writable", dir_, errno);
}

fs::path DiskStore::entry_path(const CacheKey& key) const { return dir_ / key.hex(); }

void DiskStore::write(const CacheKey& key, const Bookkeeping& book, ByteSpan payload) const {
  fs::path final_path = entry_path(key);
  fs::path tmp = dir_ / (key.hex() + ".tmp." + std::to_string(::getpid()) + "." +
                         std::to_string(g_temp_counter.fetch_add(1)));
  {
    Fd fd(::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644));
    if (fd.get() < 0) fail("create", tmp, errno);
    uint8_t header[kEntryHeader];
    store_le(header, book.insert_seq);
    store_le(header + 8, book.access_seq);
    try {
      write_all(fd.get(), header, sizeof(header), tmp);
      write_all(fd.get(), payload.data(), payload.size(), tmp);
    } catch (...) {
      ::unlink(tmp.c_str());
      throw;
    }
    if (::close(fd.release()) != 0) {
      int err = errno;
      ::unlink(tmp.c_str());
      fail("close", tmp, err);
    }
  }
  if (::rename(tmp.c_str(), final_path.c_str()) != 0) {
    int err = errno;
    ::unlink(tmp.c_str());
    fail("rename", final_path, err);
  }
}

Bytes DiskStore::read_payload(const CacheKey& key) const {
  fs::path p = entry_path(key);
  Bytes all = read_whole(p);
  if (all.size() < kEntryHeader) throw BackendError("cache entry truncated: " + p.string());
  all.erase(all.begin(), all.begin() + kEntryHeader);
  return all;
}

void DiskStore::touch(const CacheKey& key, uint64_t access_seq) const {
  fs::path p = entry_path(key);
  Fd fd(::open(p.c_str(), O_WRONLY | O_CLOEXEC));
  if (fd.get() < 0) fail("open", p, errno);
  uint8_t buf[8];
  store_le(buf, access_seq);
  if (::pwrite(fd.get(), buf, sizeof(buf), 8) != static_cast<ssize_t>(sizeof(buf))) fail("pwrite", p, errno);
}

void DiskStore::remove(const CacheKey& key) const {
  fs::path p = entry_path(key);
  if (::unlink(p.c_str()) != 0 && errno != ENOENT) fail("unlink", p, errno);
}

std::vector<DiskStore::StoredEntry> DiskStore::load_all() const {
  std::vector<StoredEntry> out;
  std::error_code ec;
  fs::directory_iterator it(dir_, ec);
  if (ec) throw BackendError("cannot list cache directory " + dir_.string() + ": " + ec.message());
  for (const auto& de : it) {
    std::string name = de.path().filename().string();
    if (name.find(".tmp.") != std::string::npos) {
      ::unlink(de.path().c_str());
      continue;
    }
    auto key = CacheKey::from_hex(name);
    if (!key || !de.is_regular_file()) continue;
    Bytes all = read_whole(de.path());
    if (all.size() < kEntryHeader) continue;
    StoredEntry e;
    e.key = *key;
    e.insert_seq = load_le<uint64_t>(all.data());
    e.access_seq = load_le<uint64_t>(all.data() + 8);
    e.payload.assign(all.begin() + kEntryHeader, all.end());
    out.push_back(std::move(e));
  }
  std::sort(out.begin(), out.end(), [](const StoredEntry& a, const StoredEntry& b) { return a.key < b.key; });
  return out;
}

}  // namespace colcache::metacache
