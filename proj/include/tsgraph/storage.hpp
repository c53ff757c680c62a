/*
 * Copyright (c) 2026 tsgraph authors.
 *     All rights reserved.
 *
 *  Licensed under the Apache License, Version 2.0 (the "License");
 *  you may not use this file except in compliance with the License.
 *  You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 *  Unless required by applicable law or agreed to in writing,
 *  software distributed under the License is distributed on an "AS
 *  IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either
 *  express or implied.  See the License for the specific language
 *  governing permissions and limitations under the License.
 */

// Storage backend contract: sequential/positional reads, atomic create,
// list, rename. The local filesystem is the only shipped backend; the
// instrumented wrapper counts IO for tests and run statistics.

#ifndef TSGRAPH_STORAGE_HPP
#define TSGRAPH_STORAGE_HPP

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tsgraph/errors.hpp"

namespace tsgraph {

class ReadFile {
 public:
  virtual ~ReadFile() = default;
  virtual uint64_t size() const = 0;
  // Reads exactly out.size() bytes at offset; throws on short read.
  virtual void read_at(uint64_t offset, std::span<uint8_t> out) = 0;
};

class WriteFile {
 public:
  virtual ~WriteFile() = default;
  virtual void append(std::span<const uint8_t> data) = 0;
  // Durably publishes the file under its final name. Without commit the
  // file never becomes visible.
  virtual void commit() = 0;
};

class StorageBackend {
 public:
  virtual ~StorageBackend() = default;

  virtual std::unique_ptr<ReadFile> open_read(const std::string& path) = 0;
  // Writes to a temp name, renamed into place on commit().
  virtual std::unique_ptr<WriteFile> create_atomic(const std::string& path) = 0;
  virtual bool exists(const std::string& path) const = 0;
  // Child names (not full paths) of a directory, sorted; empty if absent.
  virtual std::vector<std::string> list(const std::string& dir) const = 0;
  virtual void rename(const std::string& from, const std::string& to) = 0;
};

std::unique_ptr<StorageBackend> make_local_backend();

// ---------------------------------------------------------------------------
// Instrumented wrapper: IO counters shared by tests and `run` statistics.
// ---------------------------------------------------------------------------

struct IoStats {
  std::atomic<uint64_t> bytes_read{0};
  std::atomic<uint64_t> read_calls{0};
  std::atomic<uint64_t> files_opened{0};
  std::atomic<uint64_t> max_read_len{0};  // largest single read

  void reset() {
    bytes_read = 0;
    read_calls = 0;
    files_opened = 0;
    max_read_len = 0;
  }
};

class InstrumentedBackend : public StorageBackend {
 public:
  explicit InstrumentedBackend(std::shared_ptr<StorageBackend> inner)
      : inner_(std::move(inner)) {}

  IoStats& stats() { return stats_; }

  std::unique_ptr<ReadFile> open_read(const std::string& path) override;
  std::unique_ptr<WriteFile> create_atomic(const std::string& path) override;
  bool exists(const std::string& path) const override {
    return inner_->exists(path);
  }
  std::vector<std::string> list(const std::string& dir) const override {
    return inner_->list(dir);
  }
  void rename(const std::string& from, const std::string& to) override {
    inner_->rename(from, to);
  }

 private:
  std::shared_ptr<StorageBackend> inner_;
  IoStats stats_;
};

}  // namespace tsgraph

#endif  // TSGRAPH_STORAGE_HPP
