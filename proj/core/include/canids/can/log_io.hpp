#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "canids/can/message.hpp"

namespace canids::can {

// HCRL car-hacking CSV record:
//   timestamp,ID_hex,DLC,byte...,flag      flag R = normal, T = injected
// Hex fields are case-insensitive; the byte count must equal DLC.
CanMessage parse_hcrl_record(std::string_view line);

std::string format_hcrl_record(const CanMessage& msg);

enum class ReadMode {
  Strict,   // first malformed line aborts with FormatError
  Lenient,  // malformed lines are skipped and counted
};

struct LogReadResult {
  std::vector<CanMessage> messages;
  std::size_t skipped = 0;
  std::vector<std::string> errors;  // "line N: reason", capped
};

// Reads a log file, one record per line; blank lines are ignored.
// Preserves file order. Throws IoError if the file cannot be opened.
LogReadResult read_log(const std::filesystem::path& path,
                       ReadMode mode = ReadMode::Strict);
LogReadResult read_log(std::istream& in, ReadMode mode = ReadMode::Strict);

void write_log(const std::filesystem::path& path,
               const std::vector<CanMessage>& messages);
void write_log(std::ostream& out, const std::vector<CanMessage>& messages);

}  // namespace canids::can
