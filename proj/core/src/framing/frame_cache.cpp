#include "canids/framing/frame_cache.hpp"

#include <array>
#include <cstring>
#include <fstream>

#include "canids/errors.hpp"

namespace canids::framing {

namespace {

constexpr char kMagic[4] = {'C', 'F', 'R', 'M'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kBitBytes = (kFrameSide * kFrameSide + 7) / 8;  // 106
constexpr std::size_t kRecordBytes = kBitBytes + 2;

void put_u32(std::ofstream& out, std::uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), b.size());
}

void put_u64(std::ofstream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(b.data(), b.size());
}

std::uint32_t get_u32(std::ifstream& in) {
  std::array<unsigned char, 4> b;
  in.read(reinterpret_cast<char*>(b.data()), b.size());
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::uint64_t get_u64(std::ifstream& in) {
  std::array<unsigned char, 8> b;
  in.read(reinterpret_cast<char*>(b.data()), b.size());
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

std::array<std::uint8_t, kRecordBytes> encode_record(const Frame& frame) {
  std::array<std::uint8_t, kRecordBytes> rec{};
  for (std::size_t r = 0; r < kFrameSide; ++r) {
    for (std::size_t c = 0; c < kFrameSide; ++c) {
      if (frame.bit(r, c)) {
        const std::size_t k = r * kFrameSide + c;
        rec[k >> 3] |= static_cast<std::uint8_t>(1u << (k & 7));
      }
    }
  }
  rec[kBitBytes] = static_cast<std::uint8_t>(frame.label);
  rec[kBitBytes + 1] = static_cast<std::uint8_t>(frame.kind);
  return rec;
}

Frame decode_record(const std::array<std::uint8_t, kRecordBytes>& rec) {
  Frame frame;
  for (std::size_t r = 0; r < kFrameSide; ++r) {
    std::uint32_t row = 0;
    for (std::size_t c = 0; c < kFrameSide; ++c) {
      const std::size_t k = r * kFrameSide + c;
      const std::uint32_t bit = (rec[k >> 3] >> (k & 7)) & 1u;
      row = (row << 1) | bit;
    }
    frame.row_ids[r] = row;
  }
  if (rec[kBitBytes] > 1) {
    throw FormatError("frame cache: invalid label byte");
  }
  frame.label = static_cast<FrameLabel>(rec[kBitBytes]);
  if (rec[kBitBytes + 1] > static_cast<std::uint8_t>(AttackKind::Synthetic)) {
    throw FormatError("frame cache: invalid attack kind byte");
  }
  frame.kind = static_cast<AttackKind>(rec[kBitBytes + 1]);
  return frame;
}

void write_records(std::ofstream& out, const std::vector<Frame>& frames) {
  for (const Frame& frame : frames) {
    const auto rec = encode_record(frame);
    out.write(reinterpret_cast<const char*>(rec.data()), rec.size());
  }
}

}  // namespace

void save_frames(const std::filesystem::path& path,
                 const std::vector<Frame>& frames) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof(kMagic));
  put_u32(out, kVersion);
  put_u64(out, frames.size());
  write_records(out, frames);
  if (!out) throw IoError("write failed for " + path.string());
}

std::vector<Frame> load_frames(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open frame cache " + path.string());

  char magic[4];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("frame cache: bad magic in " + path.string());
  }
  const std::uint32_t version = get_u32(in);
  if (!in || version != kVersion) {
    throw FormatError("frame cache: unsupported version " +
                      std::to_string(version));
  }
  const std::uint64_t count = get_u64(in);
  if (!in) throw FormatError("frame cache: truncated header");

  std::vector<Frame> frames;
  frames.reserve(count);
  std::array<std::uint8_t, kRecordBytes> rec;
  for (std::uint64_t i = 0; i < count; ++i) {
    in.read(reinterpret_cast<char*>(rec.data()), rec.size());
    if (in.gcount() != static_cast<std::streamsize>(rec.size())) {
      throw FormatError("frame cache: truncated at record " +
                        std::to_string(i));
    }
    Frame frame = decode_record(rec);
    frame.window_index = i;
    frames.push_back(frame);
  }
  return frames;
}

void append_frames(const std::filesystem::path& path,
                   const std::vector<Frame>& frames) {
  if (!std::filesystem::exists(path)) {
    save_frames(path, frames);
    return;
  }
  auto existing = load_frames(path);
  existing.insert(existing.end(), frames.begin(), frames.end());
  for (std::size_t i = 0; i < existing.size(); ++i) {
    existing[i].window_index = i;
  }
  save_frames(path, existing);
}

}  // namespace canids::framing
