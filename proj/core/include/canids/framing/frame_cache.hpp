#pragma once

#include <filesystem>
#include <vector>

#include "canids/framing/frame.hpp"

namespace canids::framing {

// Flat binary frame cache.
//
//   magic   "CFRM"                     4 bytes
//   version u32 little-endian          currently 1
//   count   u64 little-endian
//   count records of 108 bytes each:
//     106 bytes  29x29 bits packed row-major, bit k = row*29+col,
//                stored LSB-first within each byte
//     1 byte     label (0 normal, 1 abnormal)
//     1 byte     attack kind (AttackKind enum value)
//
// window_index is assigned from file order on load.
void save_frames(const std::filesystem::path& path,
                 const std::vector<Frame>& frames);
std::vector<Frame> load_frames(const std::filesystem::path& path);

// Appends to an existing cache file (or creates it), keeping one header.
void append_frames(const std::filesystem::path& path,
                   const std::vector<Frame>& frames);

}  // namespace canids::framing
