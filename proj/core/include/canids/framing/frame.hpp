#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "canids/can/message.hpp"
#include "canids/nn/tensor.hpp"

namespace canids::framing {

inline constexpr std::size_t kFrameSide = 29;
inline constexpr std::size_t kPaddedSide = 32;

enum class FrameLabel : std::uint8_t { Normal = 0, Abnormal = 1 };

// Attack provenance carried alongside each frame. `None` marks normal
// frames; the rest tag which injection campaign produced the window.
enum class AttackKind : std::uint8_t {
  None = 0,
  Dos = 1,
  Fuzzy = 2,
  Gear = 3,
  Rpm = 4,
  SpoofA = 5,
  SpoofB = 6,
  Synthetic = 7,
};

const char* attack_kind_name(AttackKind kind);
AttackKind attack_kind_from_name(const std::string& name);

// 29x29 binary matrix of stacked CAN-ID bits. Row r stores the r-th
// message ID of the window; bit c of row r is the ID's 2^(28-c) bit
// (MSB first), so a row's integer value is the ID itself.
struct Frame {
  std::array<std::uint32_t, kFrameSide> row_ids{};
  FrameLabel label = FrameLabel::Normal;
  AttackKind kind = AttackKind::None;
  std::uint64_t window_index = 0;

  std::uint8_t bit(std::size_t row, std::size_t col) const {
    return static_cast<std::uint8_t>(
        (row_ids[row] >> (can::kIdBits - 1 - col)) & 1u);
  }

  friend bool operator==(const Frame& a, const Frame& b) = default;
};

// Stacks windows of 29 consecutive messages at the given stride
// (29 = non-overlapping). A window is Abnormal iff it contains at least one
// Injected message; abnormal windows are tagged `kind`. The trailing
// remainder shorter than 29 messages is dropped. Throws InsufficientDataError
// for streams shorter than one window.
std::vector<Frame> build_frames(const std::vector<can::CanMessage>& messages,
                                std::size_t stride = kFrameSide,
                                AttackKind kind = AttackKind::Synthetic);

// 29x29 bits to a 32x32 float matrix: three zero rows appended at the
// bottom, three zero columns at the right, bits cast to {0.0, 1.0}.
template <typename T>
nn::Tensor<T> pad_frame(const Frame& frame) {
  nn::Tensor<T> out({kPaddedSide, kPaddedSide});
  for (std::size_t r = 0; r < kFrameSide; ++r) {
    for (std::size_t c = 0; c < kFrameSide; ++c) {
      out.at(r, c) = static_cast<T>(frame.bit(r, c));
    }
  }
  return out;
}

// Exact inverse of pad_frame on the 29x29 region (values thresholded
// at 0.5). Label/kind/window_index are not recoverable and default.
template <typename T>
Frame crop_frame(const nn::Tensor<T>& padded) {
  require_shape(padded, {kPaddedSide, kPaddedSide}, "crop_frame");
  Frame frame;
  for (std::size_t r = 0; r < kFrameSide; ++r) {
    std::uint32_t row = 0;
    for (std::size_t c = 0; c < kFrameSide; ++c) {
      row = (row << 1) | (padded.at(r, c) > T(0.5) ? 1u : 0u);
    }
    frame.row_ids[r] = row;
  }
  return frame;
}

// Packs a batch of frames into an [N,1,32,32] model input tensor.
template <typename T>
nn::Tensor<T> frames_to_batch(const std::vector<Frame>& frames) {
  if (frames.empty()) throw ShapeError("empty frame batch");
  nn::Tensor<T> out({frames.size(), 1, kPaddedSide, kPaddedSide});
  T* dst = out.data();
  for (const Frame& f : frames) {
    for (std::size_t r = 0; r < kPaddedSide; ++r) {
      for (std::size_t c = 0; c < kPaddedSide; ++c) {
        *dst++ = (r < kFrameSide && c < kFrameSide)
                     ? static_cast<T>(f.bit(r, c))
                     : T(0);
      }
    }
  }
  return out;
}

}  // namespace canids::framing
