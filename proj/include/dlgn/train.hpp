#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "dlgn/adam.hpp"
#include "dlgn/backprop.hpp"
#include "dlgn/params.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

struct EpochStats;

struct TrainConfig {
  int epochs = 100;
  int batch_size = 0;  // 0 = full batch
  GateMode mode = GateMode::soft();
  LossKind loss = LossKind::Mse;
  AdamConfig adam;
  std::uint64_t seed = 0;  // drives batch shuffling
  std::vector<int> snapshot_epochs;  // epoch 0 is always included
  bool record_steps = false;
  /// Invoked after every epoch with the updated parameters.
  std::function<void(int, const ModelParams&, const EpochStats&)> on_epoch;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;      // the optimised objective
  double mse = 0.0;       // plain mean squared error (Mse runs)
  double accuracy = 0.0;  // argmax accuracy (SoftmaxCe runs)
};

struct TrainResult {
  ModelParams params;
  std::vector<EpochStats> history;         // entry per epoch, 1-based
  std::vector<double> step_losses;         // when record_steps
  std::map<int, ModelParams> snapshots;    // epoch -> params after that epoch
};

/// Adam over shuffled mini-batches (full batch when batch_size == 0).
/// Frozen groups are never touched, so they stay bit-identical. Throws
/// std::runtime_error naming the epoch if the loss turns non-finite.
TrainResult train(const Architecture& arch, ModelParams params,
                  const Batch& data, const TrainConfig& config);

}  // namespace dlgn
