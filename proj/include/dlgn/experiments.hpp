#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dlgn/architecture.hpp"
#include "dlgn/config.hpp"
#include "dlgn/train.hpp"
#include "dlgn/types.hpp"

namespace dlgn {

enum class ExperimentKind { Circle, Fmnist, OracleSuite };
enum class FreezeChoice { None, Gates, Values };

std::string to_string(FreezeChoice freeze);
FreezeChoice freeze_from_string(const std::string& name);

/// One experiment run, resolved from defaults, a config file, and CLI
/// overrides (in that order of increasing precedence).
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Circle;
  ModelKind arch = ModelKind::Dlgn;
  double beta = 10.0;              // soft-gate temperature during training
  FreezeChoice freeze = FreezeChoice::None;
  int epochs = 500;
  double lr = 3e-3;
  int batch_size = 64;
  std::uint64_t seed = 1;
  std::vector<int> snapshot_epochs;  // empty = {0, 3, final}
  std::string out_dir = "out";

  // circle
  int circle_points = 500;
  int hidden_layers = 5;
  int width = 16;
  bool use_bias = true;

  // fmnist
  std::string train_images, train_labels, test_images, test_labels;
  int subsample_train = 5000;   // 0 = full data
  int subsample_test = 1000;    // 0 = full data
  int kernel_points_per_class = 50;

  // oracle suite
  int oracle_nets_per_config = 20;
  int oracle_inputs_per_net = 10;
  std::size_t path_cap = 1'000'000;
  double forward_perturbation = 0.0;  // harness-sanity hook, not on the CLI

  static ExperimentConfig circle_defaults();
  static ExperimentConfig fmnist_defaults();
  static ExperimentConfig oracle_defaults();

  /// Applies every recognised key of `cfg` on top of this config.
  void apply(const Config& cfg);
  /// Fully resolved key=value view (what the manifest records).
  Config resolved() const;

  /// Snapshot list with epoch 0 forced in and `final` clamped to epochs.
  std::vector<int> resolved_snapshots() const;
  Architecture architecture(Index input_dim, Index output_dim) const;
};

struct ArtifactEntry {
  int epoch = 0;        // -1 for run-wide artifacts
  std::string kind;
  std::string path;     // relative to out_dir
};

struct RunManifest {
  Config resolved_config;
  std::vector<EpochStats> history;
  std::vector<ArtifactEntry> artifacts;
  std::string manifest_path;
};

/// Trains on the circle task and emits, per snapshot epoch: predictions,
/// raw + trace-normalised overlap kernel and NTK (CSV + PGM), per-layer
/// kernels, hyperplane tables (DLGN variants), region statistics, and a
/// parameter checkpoint; plus run-wide loss curves, the dataset, and the
/// manifest.
RunManifest run_circle(const ExperimentConfig& config);

/// Trains on the modified-label FMNIST task and emits per-epoch region
/// metrics (mean active paths, NTK diagonal, test accuracy) and per-snapshot
/// class-averaged kernels.
RunManifest run_fmnist(const ExperimentConfig& config);

struct OracleReport {
  double max_moe_error = 0.0;
  std::size_t max_overlap_discrepancy = 0;
  int configurations = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Sweeps random small nets over {RELU, DLGN, DLGN_PWC, DLN} x {d <= 3,
/// m <= 4, L <= 4}, checking forward-vs-MoE-sum agreement and
/// product-formula-vs-bruteforce overlap equality.
OracleReport run_oracle_suite(const ExperimentConfig& config);

}  // namespace dlgn
