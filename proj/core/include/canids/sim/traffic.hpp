#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "canids/can/message.hpp"

namespace canids::sim {

// Periodic broadcast schedule for one CAN ID: a message every `period`
// seconds, each emission shifted by up to +-jitter*period.
struct IdSchedule {
  can::CanId id;
  double period = 0.1;  // seconds, > 0
  double jitter = 0.0;  // fraction of period, [0, 1)
};

struct NormalProfile {
  std::vector<IdSchedule> id_set;
  double duration = 10.0;  // seconds
  std::uint64_t seed = 0;
};

enum class AttackType { DoS, Fuzzy, Spoof };

struct AttackSpec {
  AttackType kind = AttackType::DoS;
  double rate = 100.0;  // injected messages per second inside the window
  std::optional<can::CanId> target_id;  // Spoof only
  double window_start = 0.0;
  double window_end = 0.0;
  std::uint64_t seed = 0;
  std::uint32_t fuzzy_id_bits = 29;  // 29 for full space, 11 for CAN 2.0A
};

// Generates jittered periodic traffic, merged across IDs in timestamp
// order. Deterministic for a fixed profile; per-ID streams get independent
// seeds so adding an ID does not perturb the others.
std::vector<can::CanMessage> gen_normal(const NormalProfile& profile);

// Injectors insert flag=Injected messages at uniform-random arrivals inside
// [window_start, window_end) at the requested mean rate, then merge with the
// input stream by timestamp (ties: Normal before Injected, then ID). Input
// messages are never mutated or dropped. A zero-length window is an identity;
// a window that misses the stream span entirely is a ConfigError.
std::vector<can::CanMessage> inject_dos(std::vector<can::CanMessage> stream,
                                        const AttackSpec& spec);
std::vector<can::CanMessage> inject_fuzzy(std::vector<can::CanMessage> stream,
                                          const AttackSpec& spec);
std::vector<can::CanMessage> inject_spoof(std::vector<can::CanMessage> stream,
                                          const AttackSpec& spec);

// Dispatch on spec.kind.
std::vector<can::CanMessage> inject(std::vector<can::CanMessage> stream,
                                    const AttackSpec& spec);

// A ready-made multi-ID profile for desk experiments: `n_ids` IDs with
// periods spread over [min_period, max_period].
NormalProfile default_profile(std::size_t n_ids, double duration,
                              std::uint64_t seed, double jitter = 0.1,
                              double min_period = 0.01,
                              double max_period = 0.1);

}  // namespace canids::sim
