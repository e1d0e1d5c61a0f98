#include "canids/sim/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "canids/errors.hpp"
#include "canids/nn/rng.hpp"

namespace canids::sim {

using can::CanId;
using can::CanMessage;
using can::MessageFlag;
using nn::Rng;

namespace {

// Merge order: timestamp, then Normal before Injected, then ID ascending.
bool message_less(const CanMessage& a, const CanMessage& b) {
  if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
  if (a.flag != b.flag) return a.flag < b.flag;
  return a.id < b.id;
}

void fill_random_payload(CanMessage& msg, Rng& rng) {
  msg.dlc = 8;
  for (auto& b : msg.data) {
    b = static_cast<std::uint8_t>(rng.uniform_index(256));
  }
}

void validate_window(const std::vector<CanMessage>& stream,
                     const AttackSpec& spec) {
  if (spec.window_end < spec.window_start) {
    throw ConfigError("attack window end precedes start");
  }
  if (stream.empty()) {
    throw ConfigError("cannot inject into an empty stream");
  }
  if (spec.window_end < stream.front().timestamp ||
      spec.window_start > stream.back().timestamp) {
    throw ConfigError("attack window [" + std::to_string(spec.window_start) +
                      ", " + std::to_string(spec.window_end) +
                      ") lies outside the stream span");
  }
}

// Uniform arrival times at the requested mean rate, sorted.
std::vector<double> arrival_times(const AttackSpec& spec, Rng& rng) {
  const double span = spec.window_end - spec.window_start;
  const auto count = static_cast<std::size_t>(std::llround(spec.rate * span));
  std::vector<double> times(count);
  for (auto& t : times) {
    t = rng.uniform(spec.window_start, spec.window_end);
  }
  std::sort(times.begin(), times.end());
  return times;
}

std::vector<CanMessage> merge_injected(std::vector<CanMessage> stream,
                                       std::vector<CanMessage> injected) {
  std::vector<CanMessage> out;
  out.reserve(stream.size() + injected.size());
  std::merge(stream.begin(), stream.end(), injected.begin(), injected.end(),
             std::back_inserter(out), message_less);
  return out;
}

std::vector<CanMessage> run_injection(std::vector<CanMessage> stream,
                                      const AttackSpec& spec,
                                      AttackType expected) {
  if (spec.kind != expected) {
    throw ConfigError("attack spec kind does not match injector");
  }
  if (spec.rate <= 0.0) {
    throw ConfigError("attack rate must be positive");
  }
  validate_window(stream, spec);
  if (spec.window_end == spec.window_start) return stream;

  Rng rng(nn::mix_seed(spec.seed, static_cast<std::uint64_t>(spec.kind)));
  std::vector<CanMessage> injected;
  for (const double t : arrival_times(spec, rng)) {
    CanMessage msg;
    msg.timestamp = t;
    msg.flag = MessageFlag::Injected;
    switch (spec.kind) {
      case AttackType::DoS:
        msg.id = CanId(0);  // highest-priority all-zero ID
        msg.dlc = 8;
        break;
      case AttackType::Fuzzy: {
        const std::uint64_t space = 1ull << spec.fuzzy_id_bits;
        msg.id = CanId(static_cast<std::uint32_t>(rng.uniform_index(space)));
        fill_random_payload(msg, rng);
        break;
      }
      case AttackType::Spoof:
        msg.id = *spec.target_id;
        msg.dlc = 8;
        msg.data = {0x00, 0x00, 0x00, 0xFF, 0x00, 0x00, 0x00, 0x00};
        break;
    }
    injected.push_back(msg);
  }
  std::stable_sort(injected.begin(), injected.end(), message_less);
  return merge_injected(std::move(stream), std::move(injected));
}

}  // namespace

std::vector<CanMessage> gen_normal(const NormalProfile& profile) {
  if (profile.id_set.empty()) {
    throw ConfigError("normal profile needs at least one ID");
  }
  if (profile.duration <= 0.0) {
    throw ConfigError("simulation duration must be positive");
  }
  std::set<std::uint32_t> seen;
  for (const auto& sched : profile.id_set) {
    if (sched.period <= 0.0) {
      throw ConfigError("schedule period must be positive");
    }
    if (sched.jitter < 0.0 || sched.jitter >= 1.0) {
      throw ConfigError("jitter must be in [0, 1)");
    }
    if (!seen.insert(sched.id.value()).second) {
      throw ConfigError("duplicate ID in normal profile: " +
                        can::format_hex_id(sched.id));
    }
  }

  std::vector<CanMessage> out;
  for (const auto& sched : profile.id_set) {
    Rng rng(nn::mix_seed(profile.seed, sched.id.value()));
    const auto emissions = static_cast<std::uint64_t>(
        std::floor(profile.duration / sched.period + 1e-9));
    for (std::uint64_t k = 1; k <= emissions; ++k) {
      const double offset =
          sched.jitter > 0.0
              ? rng.uniform(-sched.jitter, sched.jitter) * sched.period
              : 0.0;
      const double t = static_cast<double>(k) * sched.period + offset;
      if (t <= 0.0 || t > profile.duration) continue;
      CanMessage msg;
      msg.timestamp = t;
      msg.id = sched.id;
      msg.flag = MessageFlag::Normal;
      fill_random_payload(msg, rng);
      out.push_back(msg);
    }
  }
  std::stable_sort(out.begin(), out.end(), message_less);
  return out;
}

std::vector<CanMessage> inject_dos(std::vector<CanMessage> stream,
                                   const AttackSpec& spec) {
  return run_injection(std::move(stream), spec, AttackType::DoS);
}

std::vector<CanMessage> inject_fuzzy(std::vector<CanMessage> stream,
                                     const AttackSpec& spec) {
  if (spec.fuzzy_id_bits != 11 && spec.fuzzy_id_bits != 29) {
    throw ConfigError("fuzzy ID space must be 11 or 29 bits");
  }
  return run_injection(std::move(stream), spec, AttackType::Fuzzy);
}

std::vector<CanMessage> inject_spoof(std::vector<CanMessage> stream,
                                     const AttackSpec& spec) {
  if (!spec.target_id) {
    throw ConfigError("spoof attack requires a target ID");
  }
  return run_injection(std::move(stream), spec, AttackType::Spoof);
}

std::vector<CanMessage> inject(std::vector<CanMessage> stream,
                               const AttackSpec& spec) {
  switch (spec.kind) {
    case AttackType::DoS:
      return inject_dos(std::move(stream), spec);
    case AttackType::Fuzzy:
      return inject_fuzzy(std::move(stream), spec);
    case AttackType::Spoof:
      return inject_spoof(std::move(stream), spec);
  }
  throw ConfigError("unknown attack kind");
}

NormalProfile default_profile(std::size_t n_ids, double duration,
                              std::uint64_t seed, double jitter,
                              double min_period, double max_period) {
  if (n_ids == 0) {
    throw ConfigError("profile needs at least one ID");
  }
  NormalProfile profile;
  profile.duration = duration;
  profile.seed = seed;
  Rng rng(nn::mix_seed(seed, 0xD0F11Eull));
  std::set<std::uint32_t> used;
  for (std::size_t i = 0; i < n_ids; ++i) {
    IdSchedule sched;
    // 11-bit IDs well away from 0x000 so DoS floods stay distinguishable.
    std::uint32_t id;
    do {
      id = 0x100 + static_cast<std::uint32_t>(rng.uniform_index(0x600));
    } while (!used.insert(id).second);
    sched.id = CanId(id);
    const double f = n_ids > 1 ? static_cast<double>(i) / (n_ids - 1) : 0.0;
    sched.period = min_period + f * (max_period - min_period);
    sched.jitter = jitter;
    profile.id_set.push_back(sched);
  }
  return profile;
}

}  // namespace canids::sim
