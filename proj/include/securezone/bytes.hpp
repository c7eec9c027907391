#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace securezone {

using Byte = std::uint8_t;
using Bytes = std::vector<Byte>;

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised while reading a wire blob: truncation, bad magic, bad framing.
/// Carries the byte offset at which decoding gave up.
class WireError : public Error {
 public:
  WireError(const std::string& msg, std::size_t offset)
      : Error(msg + " (offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

inline Bytes to_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

inline std::span<const Byte> as_span(const Bytes& b) {
  return {b.data(), b.size()};
}

inline std::string to_hex(std::span<const Byte> data) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(data.size() * 2);
  for (Byte b : data) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

inline Bytes from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw Error("invalid hex digit");
  };
  if (hex.size() % 2 != 0) throw Error("odd hex length");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    out.push_back(static_cast<Byte>(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
  }
  return out;
}

/// Append-only big-endian serializer.
class ByteWriter {
 public:
  ByteWriter() { out_.reserve(64); }

  void u8(Byte v) { out_.push_back(v); }

  void u16(std::uint16_t v) {
    out_.push_back(static_cast<Byte>(v >> 8));
    out_.push_back(static_cast<Byte>(v));
  }

  void u32(std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out_.push_back(static_cast<Byte>(v >> shift));
  }

  void u64(std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out_.push_back(static_cast<Byte>(v >> shift));
  }

  void raw(std::span<const Byte> data) { out_.insert(out_.end(), data.begin(), data.end()); }

  void raw(std::string_view s) {
    out_.insert(out_.end(), reinterpret_cast<const Byte*>(s.data()),
                reinterpret_cast<const Byte*>(s.data()) + s.size());
  }

  /// u16 length prefix + payload. Payload must fit in 16 bits.
  void block16(std::span<const Byte> data) {
    if (data.size() > 0xffff) throw Error("block16 payload too large");
    u16(static_cast<std::uint16_t>(data.size()));
    raw(data);
  }

  void block16(std::string_view s) {
    block16(std::span<const Byte>(reinterpret_cast<const Byte*>(s.data()), s.size()));
  }

  /// u32 length prefix + payload.
  void block32(std::span<const Byte> data) {
    if (data.size() > 0xffffffffull) throw Error("block32 payload too large");
    u32(static_cast<std::uint32_t>(data.size()));
    raw(data);
  }

  std::size_t size() const noexcept { return out_.size(); }
  const Bytes& bytes() const noexcept { return out_; }
  Bytes take() { return std::move(out_); }

 private:
  Bytes out_;
};

/// Strict bounds-checked big-endian reader. Every overrun throws WireError
/// with the offset where the read started.
class ByteReader {
 public:
  explicit ByteReader(std::span<const Byte> data) : data_(data) {}

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  bool done() const noexcept { return pos_ == data_.size(); }

  Byte u8() { return take(1)[0]; }

  std::uint16_t u16() {
    auto b = take(2);
    return static_cast<std::uint16_t>(b[0]) << 8 | b[1];
  }

  std::uint32_t u32() {
    auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | b[i];
    return v;
  }

  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | b[i];
    return v;
  }

  std::span<const Byte> take(std::size_t n) {
    if (n > remaining()) throw WireError("truncated input", pos_);
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

  template <std::size_t N>
  std::array<Byte, N> fixed() {
    auto s = take(N);
    std::array<Byte, N> out{};
    std::copy(s.begin(), s.end(), out.begin());
    return out;
  }

  std::span<const Byte> block16() { return take(u16()); }
  std::span<const Byte> block32() { return take(u32()); }

  std::string string_block16() {
    auto b = block16();
    return std::string(reinterpret_cast<const char*>(b.data()), b.size());
  }

  void expect(std::string_view magic, const char* what) {
    const std::size_t at = pos_;
    auto got = take(magic.size());
    if (!std::equal(got.begin(), got.end(), reinterpret_cast<const Byte*>(magic.data()))) {
      throw WireError(std::string("bad magic for ") + what, at);
    }
  }

  void require_end(const char* what) {
    if (!done()) throw WireError(std::string("trailing bytes after ") + what, pos_);
  }

 private:
  std::span<const Byte> data_;
  std::size_t pos_ = 0;
};

}  // namespace securezone
