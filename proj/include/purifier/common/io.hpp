// Copyright 2026 The Purifier Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef PURIFIER_COMMON_IO_HPP_
#define PURIFIER_COMMON_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace purifier {

// Writes to "<path>.tmp" and renames over the destination.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view contents);

std::string ReadFile(const std::filesystem::path& path);

// Little-endian byte sink/source used by the binary formats.
class ByteWriter {
 public:
  void Bytes(std::string_view raw) { buffer_.append(raw); }
  void U8(uint8_t v) { buffer_.push_back(static_cast<char>(v)); }
  void U16(uint16_t v);
  void U32(uint32_t v);
  void F32(float v);

  const std::string& buffer() const { return buffer_; }

 private:
  std::string buffer_;
};

class ByteReader {
 public:
  ByteReader(std::string_view data, std::string source) : data_(data), source_(std::move(source)) {}

  std::string_view Bytes(size_t n);
  uint8_t U8();
  uint16_t U16();
  uint32_t U32();
  float F32();

  bool AtEnd() const { return pos_ == data_.size(); }
  const std::string& source() const { return source_; }

 private:
  void Need(size_t n) const;

  std::string_view data_;
  std::string source_;
  size_t pos_ = 0;
};

}  // namespace purifier

#endif  // PURIFIER_COMMON_IO_HPP_
