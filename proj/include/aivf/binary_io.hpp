#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace aivf::io {

// Append-only little-endian encoder; flushes to disk in one write.
class ByteWriter {
 public:
  void put_bytes(std::string_view bytes);
  void put_u8(std::uint8_t v);
  void put_u32(std::uint32_t v);
  void put_u64(std::uint64_t v);
  void put_f32(float v);
  void put_f32s(std::span<const float> v);

  const std::vector<std::uint8_t>& bytes() const { return buf_; }
  void write_file(const std::filesystem::path& path) const;

 private:
  std::vector<std::uint8_t> buf_;
};

// Bounds-checked little-endian decoder over a whole file. Every read past the
// end throws FormatError with `what` in the message.
class ByteReader {
 public:
  explicit ByteReader(std::vector<std::uint8_t> bytes);
  static ByteReader from_file(const std::filesystem::path& path);

  std::string take_bytes(std::size_t n, std::string_view what);
  std::uint8_t u8(std::string_view what);
  std::uint32_t u32(std::string_view what);
  std::uint64_t u64(std::string_view what);
  float f32(std::string_view what);
  void f32s(std::span<float> out, std::string_view what);

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, std::string_view what) const;

  std::vector<std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace aivf::io
