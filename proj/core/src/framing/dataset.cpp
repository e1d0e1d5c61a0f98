#include "canids/framing/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "canids/errors.hpp"
#include "canids/nn/rng.hpp"

namespace canids::framing {

namespace {

void validate(const SplitConfig& c) {
  const double sum = c.train_frac + c.val_frac + c.test_frac;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split fractions must sum to 1");
  }
  for (const double f : {c.train_frac, c.val_frac, c.test_frac}) {
    if (f <= 0.0 || f >= 1.0) {
      throw ConfigError("split fractions must lie in (0, 1)");
    }
  }
  if (c.train_ratio <= 0.0 || c.train_ratio > 1.0) {
    throw ConfigError("train_ratio must lie in (0, 1]");
  }
  if (c.label_ratio <= 0.0 || c.label_ratio > 1.0) {
    throw ConfigError("label_ratio must lie in (0, 1]");
  }
}

std::size_t scaled_count(double ratio, std::size_t n) {
  const auto k = static_cast<std::size_t>(std::llround(ratio * n));
  return std::min(k, n);
}

void take_labeled_prefix(const std::vector<Frame>& train_pool, double ratio,
                         const char* class_name, std::vector<Frame>& labeled) {
  if (train_pool.empty()) return;
  const std::size_t k = scaled_count(ratio, train_pool.size());
  if (k == 0) {
    throw ConfigError(std::string("label_ratio selects zero frames for class ") +
                      class_name);
  }
  labeled.insert(labeled.end(), train_pool.begin(), train_pool.begin() + k);
}

}  // namespace

DataBundle split_dataset(const std::vector<Frame>& frames,
                         const SplitConfig& config) {
  validate(config);

  std::vector<Frame> normal;
  std::map<AttackKind, std::vector<Frame>> attacks;
  for (const Frame& f : frames) {
    if (f.label == FrameLabel::Normal) {
      normal.push_back(f);
    } else {
      attacks[f.kind].push_back(f);
    }
  }

  DataBundle bundle;
  nn::Rng rng(nn::mix_seed(config.seed, 0x5B717ull));

  // Normal frames: shuffle once, then slice train/val/test.
  rng.shuffle(normal);
  const std::size_t n_train = scaled_count(config.train_frac, normal.size());
  const std::size_t n_val = std::min(scaled_count(config.val_frac, normal.size()),
                                     normal.size() - n_train);
  std::vector<Frame> normal_train(normal.begin(), normal.begin() + n_train);
  bundle.val.assign(normal.begin() + n_train, normal.begin() + n_train + n_val);
  bundle.test.assign(normal.begin() + n_train + n_val, normal.end());

  take_labeled_prefix(normal_train, config.label_ratio, "normal",
                      bundle.labeled);
  bundle.unlabeled = normal_train;

  // Attack frames per kind (map iteration = enum order, deterministic).
  const double val_share =
      config.val_frac / (config.val_frac + config.test_frac);
  for (auto& [kind, pool] : attacks) {
    rng.shuffle(pool);
    const std::size_t k_train = scaled_count(config.train_ratio, pool.size());
    std::vector<Frame> train(pool.begin(), pool.begin() + k_train);
    const std::size_t rest = pool.size() - k_train;
    const std::size_t k_val = scaled_count(val_share, rest);
    bundle.val.insert(bundle.val.end(), pool.begin() + k_train,
                      pool.begin() + k_train + k_val);
    bundle.test.insert(bundle.test.end(), pool.begin() + k_train + k_val,
                       pool.end());

    take_labeled_prefix(train, config.label_ratio, attack_kind_name(kind),
                        bundle.labeled);
    bundle.unlabeled.insert(bundle.unlabeled.end(), train.begin(), train.end());
  }

  return bundle;
}

LeaveOneOutResult leave_one_out(const DataBundle& bundle, AttackKind kind) {
  LeaveOneOutResult result;
  result.bundle = bundle;
  result.bundle.labeled.clear();
  for (const Frame& f : bundle.labeled) {
    if (f.label == FrameLabel::Abnormal && f.kind == kind) {
      result.removed.push_back(f);
    } else {
      result.bundle.labeled.push_back(f);
    }
  }
  if (result.removed.empty()) {
    throw ConfigError(std::string("no labeled frames of kind ") +
                      attack_kind_name(kind) + " to leave out");
  }
  return result;
}

}  // namespace canids::framing
