#include "aivf/binary_io.hpp"

#include <bit>
#include <fstream>
#include <iterator>

#include "aivf/error.hpp"

namespace aivf::io {

void ByteWriter::put_bytes(std::string_view bytes) {
  buf_.insert(buf_.end(), bytes.begin(), bytes.end());
}

void ByteWriter::put_u8(std::uint8_t v) { buf_.push_back(v); }

void ByteWriter::put_u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::put_u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::put_f32(float v) { put_u32(std::bit_cast<std::uint32_t>(v)); }

void ByteWriter::put_f32s(std::span<const float> v) {
  buf_.reserve(buf_.size() + 4 * v.size());
  for (float x : v) put_f32(x);
}

void ByteWriter::write_file(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(buf_.data()),
            static_cast<std::streamsize>(buf_.size()));
  if (!out) throw IoError("short write to '" + path.string() + "'");
}

ByteReader::ByteReader(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}

ByteReader ByteReader::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return ByteReader(std::move(bytes));
}

void ByteReader::need(std::size_t n, std::string_view what) const {
  if (remaining() < n) {
    throw FormatError("truncated file: need " + std::to_string(n) + " bytes for " +
                      std::string(what) + ", have " + std::to_string(remaining()));
  }
}

std::string ByteReader::take_bytes(std::size_t n, std::string_view what) {
  need(n, what);
  std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return s;
}

std::uint8_t ByteReader::u8(std::string_view what) {
  need(1, what);
  return bytes_[pos_++];
}

std::uint32_t ByteReader::u32(std::string_view what) {
  need(4, what);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
  pos_ += 4;
  return v;
}

std::uint64_t ByteReader::u64(std::string_view what) {
  need(8, what);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
  pos_ += 8;
  return v;
}

float ByteReader::f32(std::string_view what) { return std::bit_cast<float>(u32(what)); }

void ByteReader::f32s(std::span<float> out, std::string_view what) {
  need(4 * out.size(), what);
  for (float& x : out) x = std::bit_cast<float>(u32(what));
}

}  // namespace aivf::io
