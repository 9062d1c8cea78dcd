// Copyright 2026 The m50 Authors
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

#include "mobility/line_reader.hpp"

#include <zlib.h>

#include <cerrno>
#include <cstdio>
#include <cstring>

#include "mobility/error.hpp"

namespace mobility {

namespace {

constexpr std::size_t kChunk = 1 << 16;

}  // namespace

class LineReader::Source {
 public:
  virtual ~Source() = default;
  // Appends up to n bytes to out; returns bytes read, 0 at end of input.
  virtual std::size_t read(char* out, std::size_t n) = 0;
};

namespace {

class PlainSource final : public LineReader::Source {
 public:
  explicit PlainSource(const std::filesystem::path& path) : path_(path) {
    file_ = std::fopen(path.c_str(), "rb");
    if (file_ == nullptr) {
      throw io_error("cannot open '" + path.string() +
                     "': " + std::strerror(errno));
    }
  }
  ~PlainSource() override { std::fclose(file_); }

  std::size_t read(char* out, std::size_t n) override {
    const std::size_t got = std::fread(out, 1, n, file_);
    if (got == 0 && std::ferror(file_)) {
      throw io_error("read failed on '" + path_.string() + "'");
    }
    return got;
  }

 private:
  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
};

class GzipSource final : public LineReader::Source {
 public:
  explicit GzipSource(const std::filesystem::path& path) : path_(path) {
    file_ = gzopen(path.c_str(), "rb");
    if (file_ == nullptr) {
      throw io_error("cannot open '" + path.string() + "'");
    }
    gzbuffer(file_, kChunk);
    if (gzdirect(file_) == 1) {
      gzclose(file_);
      throw io_error("decompression failed on '" + path.string() +
                     "': not in gzip format");
    }
  }
  ~GzipSource() override { gzclose(file_); }

  std::size_t read(char* out, std::size_t n) override {
    const int got = gzread(file_, out, static_cast<unsigned>(n));
    int err = Z_OK;
    const char* msg = gzerror(file_, &err);
    // A truncated stream reads as a short EOF with Z_BUF_ERROR set.
    if (got < 0 || (err != Z_OK && err != Z_STREAM_END)) {
      throw io_error("decompression failed on '" + path_.string() +
                     "': " + msg);
    }
    return static_cast<std::size_t>(got);
  }

 private:
  std::filesystem::path path_;
  gzFile file_ = nullptr;
};

}  // namespace

bool is_gzip_path(const std::filesystem::path& path) {
  return path.extension() == ".gz";
}

LineReader::LineReader(const std::filesystem::path& path) : path_(path) {
  if (is_gzip_path(path)) {
    source_ = std::make_unique<GzipSource>(path);
  } else {
    source_ = std::make_unique<PlainSource>(path);
  }
}

LineReader::~LineReader() = default;

bool LineReader::fill() {
  if (eof_) return false;
  buffer_.erase(0, begin_);
  begin_ = 0;
  const std::size_t old = buffer_.size();
  buffer_.resize(old + kChunk);
  const std::size_t got = source_->read(buffer_.data() + old, kChunk);
  buffer_.resize(old + got);
  if (got == 0) eof_ = true;
  return got > 0;
}

bool LineReader::next(std::string_view& line) {
  std::size_t scan_from = begin_;
  for (;;) {
    const std::size_t nl = buffer_.find('\n', scan_from);
    if (nl != std::string::npos) {
      std::size_t end = nl;
      if (end > begin_ && buffer_[end - 1] == '\r') --end;
      line = std::string_view(buffer_).substr(begin_, end - begin_);
      begin_ = nl + 1;
      return true;
    }
    const std::size_t consumed = buffer_.size() - begin_;
    if (!fill()) {
      if (begin_ >= buffer_.size()) return false;
      // Final line without a terminator.
      std::size_t end = buffer_.size();
      if (end > begin_ && buffer_[end - 1] == '\r') --end;
      line = std::string_view(buffer_).substr(begin_, end - begin_);
      begin_ = buffer_.size();
      return true;
    }
    scan_from = begin_ + consumed;
  }
}

}  // namespace mobility
