#include "canids/can/message.hpp"

#include <cctype>

namespace canids::can {

namespace {

int hex_digit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

CanId parse_hex_id(std::string_view text) {
  if (text.empty() || text.size() > 8) {
    throw ParseError("hex ID must be 1-8 digits, got \"" + std::string(text) +
                     "\"");
  }
  std::uint64_t value = 0;
  for (const char c : text) {
    const int d = hex_digit(c);
    if (d < 0) {
      throw ParseError("invalid hex digit in ID \"" + std::string(text) +
                       "\"");
    }
    value = value * 16 + static_cast<std::uint64_t>(d);
  }
  if (value > kMaxId) {
    throw RangeError("hex ID \"" + std::string(text) +
                     "\" exceeds 29-bit range");
  }
  return CanId(static_cast<std::uint32_t>(value));
}

std::string format_hex_id(CanId id, int min_width) {
  static constexpr char digits[] = "0123456789ABCDEF";
  std::string out;
  std::uint32_t v = id.value();
  do {
    out += digits[v & 0xF];
    v >>= 4;
  } while (v != 0);
  while (static_cast<int>(out.size()) < min_width) out += '0';
  return {out.rbegin(), out.rend()};
}

BitRow encode_id_bits(CanId id) {
  BitRow row;
  const std::uint32_t v = id.value();
  for (std::uint32_t i = 0; i < kIdBits; ++i) {
    row.bits[i] = static_cast<std::uint8_t>((v >> (kIdBits - 1 - i)) & 1u);
  }
  return row;
}

CanId decode_id_bits(const BitRow& row) {
  std::uint32_t v = 0;
  for (std::uint32_t i = 0; i < kIdBits; ++i) {
    v = (v << 1) | (row.bits[i] & 1u);
  }
  return CanId(v);
}

}  // namespace canids::can
