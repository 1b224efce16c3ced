#include "dlgn/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dlgn/forward.hpp"

namespace dlgn {

namespace {

Batch take_columns(const Batch& data, const std::vector<int>& order,
                   std::size_t begin, std::size_t end, LossKind kind) {
  Batch batch;
  const Index count = static_cast<Index>(end - begin);
  batch.X.resize(data.X.rows(), count);
  if (kind == LossKind::Mse) batch.Y.resize(data.Y.rows(), count);
  for (Index j = 0; j < count; ++j) {
    const int src = order[begin + static_cast<std::size_t>(j)];
    batch.X.col(j) = data.X.col(src);
    if (kind == LossKind::Mse)
      batch.Y.col(j) = data.Y.col(src);
    else
      batch.labels.push_back(data.labels[static_cast<std::size_t>(src)]);
  }
  return batch;
}

struct GroupOptimizer {
  std::vector<AdamState<Matrix>> W, U;
  std::vector<AdamState<Vector>> b, c;
};

}  // namespace

TrainResult train(const Architecture& arch, ModelParams params,
                  const Batch& data, const TrainConfig& config) {
  check_shapes(arch, params);
  if (config.epochs < 0) throw std::invalid_argument("train: epochs < 0");
  const Index n = data.X.cols();
  if (n == 0) throw std::invalid_argument("train: empty dataset");
  const std::size_t batch_size = config.batch_size <= 0
                                     ? static_cast<std::size_t>(n)
                                     : static_cast<std::size_t>(config.batch_size);

  TrainResult result;
  result.snapshots.emplace(0, params);

  GroupOptimizer opt;
  opt.W.resize(params.W.size());
  opt.b.resize(params.b.size());
  opt.U.resize(params.U.size());
  opt.c.resize(params.c.size());

  const bool gates_on = !params.freeze.gates_frozen;
  const bool values_on = !params.freeze.values_frozen;

  Rng shuffle_rng = Rng(config.seed).split(17);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    if (batch_size < static_cast<std::size_t>(n)) shuffle_rng.shuffle(order);
    for (std::size_t begin = 0; begin < order.size(); begin += batch_size) {
      const std::size_t end = std::min(begin + batch_size, order.size());
      const Batch batch = take_columns(data, order, begin, end, config.loss);
      auto [loss, grads] =
          loss_and_grads(arch, params, batch, config.mode, config.loss);
      if (!std::isfinite(loss))
        throw std::runtime_error("train: loss diverged at epoch " +
                                 std::to_string(epoch));
      if (config.record_steps) result.step_losses.push_back(loss);
      if (gates_on) {
        for (std::size_t i = 0; i < params.W.size(); ++i)
          adam_step(params.W[i], grads.W[i], opt.W[i], config.adam);
        for (std::size_t i = 0; i < params.b.size(); ++i)
          adam_step(params.b[i], grads.b[i], opt.b[i], config.adam);
      }
      if (values_on) {
        for (std::size_t i = 0; i < params.U.size(); ++i)
          adam_step(params.U[i], grads.U[i], opt.U[i], config.adam);
        for (std::size_t i = 0; i < params.c.size(); ++i)
          adam_step(params.c[i], grads.c[i], opt.c[i], config.adam);
      }
    }

    // Full-data stats on the updated parameters.
    EpochStats stats;
    stats.epoch = epoch;
    const ForwardTrace trace = forward(arch, params, data.X, config.mode);
    stats.loss = output_loss(trace.output, data, config.loss);
    if (!std::isfinite(stats.loss))
      throw std::runtime_error("train: loss diverged at epoch " +
                               std::to_string(epoch));
    if (config.loss == LossKind::Mse)
      stats.mse = mean_squared_error(trace.output, data.Y);
    else
      stats.accuracy = accuracy(trace.output, data.labels);
    result.history.push_back(stats);

    if (std::find(config.snapshot_epochs.begin(), config.snapshot_epochs.end(),
                  epoch) != config.snapshot_epochs.end())
      result.snapshots.emplace(epoch, params);
    if (config.on_epoch) config.on_epoch(epoch, params, stats);
  }

  result.params = std::move(params);
  return result;
}

}  // namespace dlgn
