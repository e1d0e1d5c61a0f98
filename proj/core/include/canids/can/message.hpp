#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "canids/errors.hpp"

namespace canids::can {

inline constexpr std::uint32_t kIdBits = 29;
inline constexpr std::uint32_t kMaxId = (1u << kIdBits) - 1;

// 29-bit CAN identifier (CAN 2.0B extended width). 11-bit CAN 2.0A IDs are
// zero-extended into the high-order bits so both versions share one type.
class CanId {
 public:
  constexpr CanId() = default;

  explicit CanId(std::uint32_t value) : value_(value) {
    if (value > kMaxId) {
      throw RangeError("CAN ID " + std::to_string(value) +
                       " exceeds 29-bit range");
    }
  }

  constexpr std::uint32_t value() const { return value_; }

  friend constexpr bool operator==(CanId a, CanId b) {
    return a.value_ == b.value_;
  }
  friend constexpr auto operator<=>(CanId a, CanId b) {
    return a.value_ <=> b.value_;
  }

 private:
  std::uint32_t value_ = 0;
};

enum class MessageFlag : std::uint8_t { Normal = 0, Injected = 1 };

struct CanMessage {
  double timestamp = 0.0;
  CanId id;
  std::uint8_t dlc = 0;  // byte count, 0-8; bytes past dlc are zero
  std::array<std::uint8_t, 8> data{};
  MessageFlag flag = MessageFlag::Normal;
};

// One CAN ID expanded to its 29 bits, MSB first: bits[0] holds 2^28,
// bits[28] holds 2^0.
struct BitRow {
  std::array<std::uint8_t, kIdBits> bits{};
};

// Parses 1-8 hex digits, case-insensitive, leading zeros accepted.
// Throws ParseError on non-hex input and RangeError for values >= 2^29.
CanId parse_hex_id(std::string_view text);

// Uppercase hex, zero-padded to at least `min_width` digits.
std::string format_hex_id(CanId id, int min_width = 4);

BitRow encode_id_bits(CanId id);
CanId decode_id_bits(const BitRow& row);

}  // namespace canids::can
