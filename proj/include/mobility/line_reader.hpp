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

#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

namespace mobility {

// Reads a text file one line at a time. Files whose name ends in ".gz" are
// decompressed on the fly. Line terminators (LF or CRLF) are stripped.
//
// Throws Error(io) when the file cannot be opened or when decompression
// fails part-way through.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);
  ~LineReader();

  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  // The returned view is valid until the next call.
  bool next(std::string_view& line);

  const std::filesystem::path& path() const noexcept { return path_; }

  class Source;

 private:

  bool fill();

  std::filesystem::path path_;
  std::unique_ptr<Source> source_;
  std::string buffer_;
  std::size_t begin_ = 0;
  bool eof_ = false;
};

bool is_gzip_path(const std::filesystem::path& path);

}  // namespace mobility
