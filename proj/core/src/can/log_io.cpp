#include "canids/can/log_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace canids::can {

namespace {

constexpr std::size_t kMaxReportedErrors = 20;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::uint8_t parse_byte(std::string_view text) {
  if (text.empty() || text.size() > 2) {
    throw FormatError("data byte must be 1-2 hex digits, got \"" +
                      std::string(text) + "\"");
  }
  unsigned value = 0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw FormatError("invalid hex byte \"" + std::string(text) + "\"");
  }
  return static_cast<std::uint8_t>(value);
}

}  // namespace

CanMessage parse_hcrl_record(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const auto fields = split_fields(line);
  if (fields.size() < 4) {
    throw FormatError("record has " + std::to_string(fields.size()) +
                      " fields, need at least 4");
  }

  CanMessage msg;
  {
    const auto ts = fields[0];
    const auto [ptr, ec] =
        std::from_chars(ts.data(), ts.data() + ts.size(), msg.timestamp);
    if (ec != std::errc{} || ptr != ts.data() + ts.size()) {
      throw FormatError("invalid timestamp \"" + std::string(ts) + "\"");
    }
  }
  msg.id = parse_hex_id(fields[1]);

  unsigned dlc = 0;
  {
    const auto d = fields[2];
    const auto [ptr, ec] = std::from_chars(d.data(), d.data() + d.size(), dlc);
    if (ec != std::errc{} || ptr != d.data() + d.size() || dlc > 8) {
      throw FormatError("invalid DLC \"" + std::string(d) + "\"");
    }
  }
  msg.dlc = static_cast<std::uint8_t>(dlc);

  if (fields.size() != dlc + 4) {
    throw FormatError("DLC " + std::to_string(dlc) + " requires " +
                      std::to_string(dlc + 4) + " fields, got " +
                      std::to_string(fields.size()));
  }
  for (unsigned i = 0; i < dlc; ++i) {
    msg.data[i] = parse_byte(fields[3 + i]);
  }

  const auto flag = fields.back();
  if (flag == "R") {
    msg.flag = MessageFlag::Normal;
  } else if (flag == "T") {
    msg.flag = MessageFlag::Injected;
  } else {
    throw FormatError("unknown flag \"" + std::string(flag) + "\"");
  }
  return msg;
}

std::string format_hcrl_record(const CanMessage& msg) {
  char ts[40];
  std::snprintf(ts, sizeof(ts), "%.6f", msg.timestamp);
  std::string out = ts;
  out += ',';
  out += format_hex_id(msg.id);
  out += ',';
  out += std::to_string(msg.dlc);
  static constexpr char digits[] = "0123456789ABCDEF";
  for (unsigned i = 0; i < msg.dlc; ++i) {
    out += ',';
    out += digits[msg.data[i] >> 4];
    out += digits[msg.data[i] & 0xF];
  }
  out += ',';
  out += msg.flag == MessageFlag::Injected ? 'T' : 'R';
  return out;
}

LogReadResult read_log(std::istream& in, ReadMode mode) {
  LogReadResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    try {
      result.messages.push_back(parse_hcrl_record(line));
    } catch (const Error& e) {
      const std::string what =
          "line " + std::to_string(line_no) + ": " + e.what();
      if (mode == ReadMode::Strict) throw FormatError(what);
      ++result.skipped;
      if (result.errors.size() < kMaxReportedErrors) {
        result.errors.push_back(what);
      }
    }
  }
  return result;
}

LogReadResult read_log(const std::filesystem::path& path, ReadMode mode) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open log file " + path.string());
  }
  return read_log(in, mode);
}

void write_log(std::ostream& out, const std::vector<CanMessage>& messages) {
  for (const auto& msg : messages) {
    out << format_hcrl_record(msg) << '\n';
  }
}

void write_log(const std::filesystem::path& path,
               const std::vector<CanMessage>& messages) {
  std::ofstream out(path);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  write_log(out, messages);
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

}  // namespace canids::can
