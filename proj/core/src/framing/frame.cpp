#include "canids/framing/frame.hpp"

#include "canids/errors.hpp"

namespace canids::framing {

const char* attack_kind_name(AttackKind kind) {
  switch (kind) {
    case AttackKind::None: return "none";
    case AttackKind::Dos: return "dos";
    case AttackKind::Fuzzy: return "fuzzy";
    case AttackKind::Gear: return "gear";
    case AttackKind::Rpm: return "rpm";
    case AttackKind::SpoofA: return "spoof-a";
    case AttackKind::SpoofB: return "spoof-b";
    case AttackKind::Synthetic: return "synthetic";
  }
  return "unknown";
}

AttackKind attack_kind_from_name(const std::string& name) {
  for (const auto kind :
       {AttackKind::None, AttackKind::Dos, AttackKind::Fuzzy, AttackKind::Gear,
        AttackKind::Rpm, AttackKind::SpoofA, AttackKind::SpoofB,
        AttackKind::Synthetic}) {
    if (name == attack_kind_name(kind)) return kind;
  }
  throw ConfigError("unknown attack kind \"" + name + "\"");
}

std::vector<Frame> build_frames(const std::vector<can::CanMessage>& messages,
                                std::size_t stride, AttackKind kind) {
  if (stride == 0) throw ConfigError("stride must be positive");
  if (messages.size() < kFrameSide) {
    throw InsufficientDataError(
        "need at least " + std::to_string(kFrameSide) + " messages, got " +
        std::to_string(messages.size()));
  }
  std::vector<Frame> frames;
  frames.reserve((messages.size() - kFrameSide) / stride + 1);
  std::uint64_t index = 0;
  for (std::size_t start = 0; start + kFrameSide <= messages.size();
       start += stride) {
    Frame frame;
    bool injected = false;
    for (std::size_t r = 0; r < kFrameSide; ++r) {
      const auto& msg = messages[start + r];
      frame.row_ids[r] = msg.id.value();
      injected |= msg.flag == can::MessageFlag::Injected;
    }
    frame.label = injected ? FrameLabel::Abnormal : FrameLabel::Normal;
    frame.kind = injected ? kind : AttackKind::None;
    frame.window_index = index++;
    frames.push_back(frame);
  }
  return frames;
}

}  // namespace canids::framing
