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

#include "tsgraph/storage.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace tsgraph {

namespace fs = std::filesystem;

namespace {

class LocalReadFile : public ReadFile {
 public:
  explicit LocalReadFile(const std::string& path) : path_(path) {
    in_.open(path, std::ios::binary);
    if (!in_) throw IoError("cannot open for read: " + path);
    in_.seekg(0, std::ios::end);
    size_ = static_cast<uint64_t>(in_.tellg());
  }

  uint64_t size() const override { return size_; }

  void read_at(uint64_t offset, std::span<uint8_t> out) override {
    if (offset + out.size() > size_)
      throw IoError("read past end of " + path_);
    in_.seekg(static_cast<std::streamoff>(offset));
    in_.read(reinterpret_cast<char*>(out.data()),
             static_cast<std::streamsize>(out.size()));
    if (static_cast<size_t>(in_.gcount()) != out.size())
      throw IoError("short read from " + path_);
  }

 private:
  std::string path_;
  std::ifstream in_;
  uint64_t size_ = 0;
};

class LocalWriteFile : public WriteFile {
 public:
  explicit LocalWriteFile(const std::string& path)
      : final_path_(path), tmp_path_(path + ".tmp") {
    fs::create_directories(fs::path(path).parent_path());
    out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
    if (!out_) throw IoError("cannot open for write: " + tmp_path_);
  }

  ~LocalWriteFile() override {
    if (!committed_) {
      out_.close();
      std::error_code ec;
      fs::remove(tmp_path_, ec);
    }
  }

  void append(std::span<const uint8_t> data) override {
    out_.write(reinterpret_cast<const char*>(data.data()),
               static_cast<std::streamsize>(data.size()));
    if (!out_) throw IoError("write failed: " + tmp_path_);
  }

  void commit() override {
    out_.flush();
    out_.close();
    if (!out_) throw IoError("flush failed: " + tmp_path_);
    fs::rename(tmp_path_, final_path_);
    committed_ = true;
  }

 private:
  std::string final_path_;
  std::string tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

class LocalBackend : public StorageBackend {
 public:
  std::unique_ptr<ReadFile> open_read(const std::string& path) override {
    return std::make_unique<LocalReadFile>(path);
  }

  std::unique_ptr<WriteFile> create_atomic(const std::string& path) override {
    return std::make_unique<LocalWriteFile>(path);
  }

  bool exists(const std::string& path) const override {
    return fs::exists(path);
  }

  std::vector<std::string> list(const std::string& dir) const override {
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : fs::directory_iterator(dir, ec))
      names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());
    return names;
  }

  void rename(const std::string& from, const std::string& to) override {
    fs::rename(from, to);
  }
};

class CountingReadFile : public ReadFile {
 public:
  CountingReadFile(std::unique_ptr<ReadFile> inner, IoStats* stats)
      : inner_(std::move(inner)), stats_(stats) {}

  uint64_t size() const override { return inner_->size(); }

  void read_at(uint64_t offset, std::span<uint8_t> out) override {
    inner_->read_at(offset, out);
    stats_->bytes_read += out.size();
    stats_->read_calls += 1;
    uint64_t len = out.size();
    uint64_t prev = stats_->max_read_len.load();
    while (len > prev && !stats_->max_read_len.compare_exchange_weak(prev, len)) {
    }
  }

 private:
  std::unique_ptr<ReadFile> inner_;
  IoStats* stats_;
};

}  // namespace

std::unique_ptr<StorageBackend> make_local_backend() {
  return std::make_unique<LocalBackend>();
}

std::unique_ptr<ReadFile> InstrumentedBackend::open_read(
    const std::string& path) {
  stats_.files_opened += 1;
  return std::make_unique<CountingReadFile>(inner_->open_read(path), &stats_);
}

std::unique_ptr<WriteFile> InstrumentedBackend::create_atomic(
    const std::string& path) {
  return inner_->create_atomic(path);
}

}  // namespace tsgraph
