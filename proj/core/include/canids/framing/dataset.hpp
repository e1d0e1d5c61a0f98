#pragma once

#include <cstdint>
#include <vector>

#include "canids/framing/frame.hpp"

namespace canids::framing {

struct SplitConfig {
  double train_frac = 0.70;  // normal-frame split, must sum to 1
  double val_frac = 0.15;
  double test_frac = 0.15;
  double train_ratio = 0.7;  // fraction of attack frames used for training
  double label_ratio = 0.1;  // fraction of training frames that keep labels
  std::uint64_t seed = 0;
};

// labeled is a subset of the training pool; unlabeled carries every training
// frame (labeled ones included, used without their labels).
struct DataBundle {
  std::vector<Frame> labeled;
  std::vector<Frame> unlabeled;
  std::vector<Frame> val;
  std::vector<Frame> test;
};

// Normal frames split train/val/test by the configured fractions. Attack
// frames (per kind) contribute a train_ratio prefix to training; the
// remainder is divided between val and test in proportion to their
// fractions. The labeled subset takes a label_ratio prefix per class, so
// labeled sets grow monotonically with label_ratio under a fixed seed.
DataBundle split_dataset(const std::vector<Frame>& frames,
                         const SplitConfig& config);

struct LeaveOneOutResult {
  DataBundle bundle;           // labels of `kind` removed from labeled set
  std::vector<Frame> removed;  // exactly the labeled frames taken out
};

// Models an unknown attack: the kind's labeled frames are dropped from the
// labeled pool while their bit-frames stay in the unlabeled pool. Throws
// ConfigError if the kind has no labeled frames.
LeaveOneOutResult leave_one_out(const DataBundle& bundle, AttackKind kind);

}  // namespace canids::framing
