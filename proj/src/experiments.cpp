#include "dlgn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dlgn/circle.hpp"
#include "dlgn/export.hpp"
#include "dlgn/fmnist.hpp"
#include "dlgn/forward.hpp"
#include "dlgn/gates.hpp"
#include "dlgn/hyperplanes.hpp"
#include "dlgn/kernels.hpp"
#include "dlgn/paths.hpp"

namespace dlgn {

namespace fs = std::filesystem;

std::string to_string(FreezeChoice freeze) {
  switch (freeze) {
    case FreezeChoice::None: return "none";
    case FreezeChoice::Gates: return "gates";
    case FreezeChoice::Values: return "values";
  }
  return "none";
}

FreezeChoice freeze_from_string(const std::string& name) {
  if (name == "none") return FreezeChoice::None;
  if (name == "gates") return FreezeChoice::Gates;
  if (name == "values") return FreezeChoice::Values;
  throw std::invalid_argument("unknown freeze choice '" + name +
                              "'; expected gates|values|none");
}

ExperimentConfig ExperimentConfig::circle_defaults() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Circle;
  return cfg;
}

ExperimentConfig ExperimentConfig::fmnist_defaults() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::Fmnist;
  cfg.arch = ModelKind::DlgnPwc;
  cfg.epochs = 30;
  cfg.lr = 2e-4;
  cfg.batch_size = 128;
  cfg.width = 128;
  return cfg;
}

ExperimentConfig ExperimentConfig::oracle_defaults() {
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::OracleSuite;
  return cfg;
}

void ExperimentConfig::apply(const Config& c) {
  if (c.has("arch")) arch = model_kind_from_string(c.get_string("arch", ""));
  if (c.has("freeze")) freeze = freeze_from_string(c.get_string("freeze", ""));
  beta = c.get_double("beta", beta);
  epochs = c.get_int("epochs", epochs);
  lr = c.get_double("lr", lr);
  batch_size = c.get_int("batch_size", batch_size);
  seed = c.get_u64("seed", seed);
  snapshot_epochs = c.get_int_list("snapshots", snapshot_epochs);
  out_dir = c.get_string("out_dir", out_dir);
  circle_points = c.get_int("circle_points", circle_points);
  hidden_layers = c.get_int("hidden_layers", hidden_layers);
  width = c.get_int("width", width);
  use_bias = c.get_bool("use_bias", use_bias);
  train_images = c.get_string("train_images", train_images);
  train_labels = c.get_string("train_labels", train_labels);
  test_images = c.get_string("test_images", test_images);
  test_labels = c.get_string("test_labels", test_labels);
  subsample_train = c.get_int("subsample_train", subsample_train);
  subsample_test = c.get_int("subsample_test", subsample_test);
  kernel_points_per_class =
      c.get_int("kernel_points_per_class", kernel_points_per_class);
  oracle_nets_per_config =
      c.get_int("oracle_nets_per_config", oracle_nets_per_config);
  oracle_inputs_per_net =
      c.get_int("oracle_inputs_per_net", oracle_inputs_per_net);
  path_cap = static_cast<std::size_t>(
      c.get_u64("path_cap", static_cast<std::uint64_t>(path_cap)));
}

Config ExperimentConfig::resolved() const {
  Config c;
  const char* kind_name = kind == ExperimentKind::Circle ? "circle"
                          : kind == ExperimentKind::Fmnist ? "fmnist"
                                                           : "oracle";
  c.set("experiment", kind_name);
  c.set("arch", to_string(arch));
  c.set("freeze", to_string(freeze));
  c.set("beta", format_double(beta));
  c.set("epochs", std::to_string(epochs));
  c.set("lr", format_double(lr));
  c.set("batch_size", std::to_string(batch_size));
  c.set("seed", std::to_string(seed));
  std::string snaps;
  for (int e : resolved_snapshots()) snaps += (snaps.empty() ? "" : ",") + std::to_string(e);
  c.set("snapshots", snaps);
  c.set("out_dir", out_dir);
  if (kind == ExperimentKind::Circle) {
    c.set("circle_points", std::to_string(circle_points));
  }
  if (kind != ExperimentKind::OracleSuite) {
    c.set("hidden_layers", std::to_string(hidden_layers));
    c.set("width", std::to_string(width));
    c.set("use_bias", use_bias ? "true" : "false");
  }
  if (kind == ExperimentKind::Fmnist) {
    c.set("train_images", train_images);
    c.set("train_labels", train_labels);
    c.set("test_images", test_images);
    c.set("test_labels", test_labels);
    c.set("subsample_train", std::to_string(subsample_train));
    c.set("subsample_test", std::to_string(subsample_test));
    c.set("kernel_points_per_class", std::to_string(kernel_points_per_class));
  }
  if (kind == ExperimentKind::OracleSuite) {
    c.set("oracle_nets_per_config", std::to_string(oracle_nets_per_config));
    c.set("oracle_inputs_per_net", std::to_string(oracle_inputs_per_net));
    c.set("path_cap", std::to_string(path_cap));
  }
  return c;
}

std::vector<int> ExperimentConfig::resolved_snapshots() const {
  std::set<int> snaps;
  if (snapshot_epochs.empty()) {
    snaps.insert(0);
    if (epochs >= 3) snaps.insert(3);
    snaps.insert(epochs);
  } else {
    snaps.insert(0);
    for (int e : snapshot_epochs) {
      if (e < 0 || e > epochs)
        throw std::invalid_argument("snapshot epoch " + std::to_string(e) +
                                    " outside [0, " + std::to_string(epochs) +
                                    "]");
      snaps.insert(e);
    }
  }
  return {snaps.begin(), snaps.end()};
}

Architecture ExperimentConfig::architecture(Index input_dim,
                                            Index output_dim) const {
  Architecture arch_out;
  arch_out.kind = arch;
  arch_out.input_dim = input_dim;
  arch_out.hidden_width = width;
  arch_out.num_layers = hidden_layers + 1;
  arch_out.output_dim = output_dim;
  arch_out.use_bias = use_bias;
  arch_out.validate();
  return arch_out;
}

namespace {

/// Gate mode used for optimisation and for the NTK: hard for ReLU/DLN (the
/// ReLU subgradient trains as usual) and for fixed-gate DLGN runs; the
/// sigmoid surrogate when DLGN gates are trainable.
GateMode training_mode(const ExperimentConfig& cfg, const Architecture& arch) {
  if (!arch.has_value_net()) return GateMode::hard();
  if (cfg.freeze == FreezeChoice::Gates) return GateMode::hard();
  return GateMode::soft(cfg.beta);
}

FreezeFlags freeze_flags(FreezeChoice choice) {
  FreezeFlags flags;
  flags.gates_frozen = choice == FreezeChoice::Gates;
  flags.values_frozen = choice == FreezeChoice::Values;
  return flags;
}

class ArtifactWriter {
 public:
  explicit ArtifactWriter(std::string out_dir) : out_dir_(std::move(out_dir)) {
    fs::create_directories(out_dir_);
  }

  std::string full_path(const std::string& rel) const {
    return (fs::path(out_dir_) / rel).string();
  }

  void record(int epoch, const std::string& kind, const std::string& rel) {
    artifacts_.push_back({epoch, kind, rel});
  }

  void matrix(int epoch, const std::string& kind, const std::string& rel,
              const Matrix& m) {
    write_csv_matrix(m, full_path(rel));
    record(epoch, kind, rel);
  }

  void heatmap(int epoch, const std::string& kind, const std::string& rel,
               const Matrix& m, const ExperimentConfig& cfg, bool normalized) {
    HeatmapMeta meta;
    meta.extra = {{"epoch", std::to_string(epoch)},
                  {"seed", std::to_string(cfg.seed)},
                  {"trace_normalized", normalized ? "true" : "false"}};
    write_pgm_heatmap(m, full_path(rel), meta);
    record(epoch, kind, rel);
    record(epoch, kind + "_meta", rel + ".meta");
  }

  RunManifest finish(const ExperimentConfig& cfg,
                     std::vector<EpochStats> history) {
    RunManifest manifest;
    manifest.resolved_config = cfg.resolved();
    manifest.history = std::move(history);
    manifest.artifacts = artifacts_;
    for (const ArtifactEntry& a : manifest.artifacts)
      if (!fs::exists(full_path(a.path)))
        throw std::runtime_error("manifest: missing artifact " + a.path);

    const std::string rel = "manifest.txt";
    std::ofstream out(full_path(rel));
    if (!out) throw std::runtime_error("manifest: cannot open " + rel);
    out << "# resolved config\n" << manifest.resolved_config.serialize();
    out << "# artifacts (epoch kind path)\n";
    for (const ArtifactEntry& a : manifest.artifacts)
      out << a.epoch << ' ' << a.kind << ' ' << a.path << '\n';
    manifest.manifest_path = full_path(rel);
    return manifest;
  }

 private:
  std::string out_dir_;
  std::vector<ArtifactEntry> artifacts_;
};

std::string epoch_tag(int epoch) {
  char buffer[16];
  std::snprintf(buffer, sizeof(buffer), "%04d", epoch);
  return buffer;
}

void write_loss_curves(ArtifactWriter& writer, const TrainResult& result,
                       LossKind loss) {
  std::vector<std::vector<std::string>> rows;
  for (const EpochStats& s : result.history) {
    if (loss == LossKind::Mse)
      rows.push_back({std::to_string(s.epoch), format_double(s.loss),
                      format_double(s.mse)});
    else
      rows.push_back({std::to_string(s.epoch), format_double(s.loss),
                      format_double(s.accuracy)});
  }
  const char* third = loss == LossKind::Mse ? "mse" : "accuracy";
  write_csv_table({"epoch", "loss", third}, rows, writer.full_path("loss.csv"));
  writer.record(-1, "loss_curve", "loss.csv");

  std::vector<std::vector<std::string>> steps;
  for (std::size_t i = 0; i < result.step_losses.size(); ++i)
    steps.push_back({std::to_string(i), format_double(result.step_losses[i])});
  write_csv_table({"step", "loss"}, steps, writer.full_path("steps.csv"));
  writer.record(-1, "step_losses", "steps.csv");
}

}  // namespace

RunManifest run_circle(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::Circle)
    throw std::invalid_argument("run_circle: wrong experiment kind");
  const CircleDataset data = gen_circle(cfg.circle_points);
  const Architecture arch = cfg.architecture(2, 1);
  const GateMode mode = training_mode(cfg, arch);

  ModelParams params = init_params(arch, Rng(cfg.seed));
  params.freeze = freeze_flags(cfg.freeze);

  Batch batch;
  batch.X = data.X;
  batch.Y = data.y.transpose();

  TrainConfig tc;
  tc.epochs = cfg.epochs;
  tc.batch_size = cfg.batch_size;
  tc.mode = mode;
  tc.loss = LossKind::Mse;
  tc.adam.lr = cfg.lr;
  tc.seed = cfg.seed;
  tc.snapshot_epochs = cfg.resolved_snapshots();
  tc.record_steps = true;

  const TrainResult result = train(arch, params, batch, tc);

  ArtifactWriter writer(cfg.out_dir);
  write_circle_csv(data, writer.full_path("dataset.csv"));
  writer.record(-1, "dataset", "dataset.csv");
  write_loss_curves(writer, result, LossKind::Mse);

  std::vector<std::vector<std::string>> region_rows;
  std::vector<std::vector<std::string>> pattern_rows;

  for (const auto& [epoch, snap] : result.snapshots) {
    const std::string tag = epoch_tag(epoch);

    // Predictions under the training mode and under the hard-gate model.
    const ForwardTrace soft_trace = forward(arch, snap, data.X, mode);
    const ForwardTrace hard_trace = forward(arch, snap, data.X, GateMode::hard());
    std::vector<std::vector<std::string>> pred_rows;
    for (Index a = 0; a < data.X.cols(); ++a)
      pred_rows.push_back({format_double(data.angles[static_cast<std::size_t>(a)]),
                           format_double(data.y[a]),
                           format_double(soft_trace.output(0, a)),
                           format_double(hard_trace.output(0, a))});
    const std::string pred_rel = "predictions_epoch" + tag + ".csv";
    write_csv_table({"angle", "y", "yhat", "yhat_hard"}, pred_rows,
                    writer.full_path(pred_rel));
    writer.record(epoch, "predictions", pred_rel);

    save_checkpoint(arch, snap, writer.full_path("params_epoch" + tag + ".ckpt"));
    writer.record(epoch, "checkpoint", "params_epoch" + tag + ".ckpt");

    if (arch.has_gates()) {
      const GateTensor gates = gate_tensor(arch, snap, data.X);
      for (int l = 1; l <= arch.hidden_layers(); ++l) {
        const KernelMatrix kl = layer_kernel(gates, l);
        writer.matrix(epoch, "kernel_layer" + std::to_string(l),
                      "kernel_layer" + std::to_string(l) + "_epoch" + tag + ".csv",
                      kl.values);
      }
      const KernelMatrix overlap = overlap_kernel(gates);
      const KernelMatrix overlap_norm = trace_normalize(overlap);
      writer.matrix(epoch, "kernel_overlap_raw",
                    "kernel_overlap_raw_epoch" + tag + ".csv", overlap.values);
      writer.matrix(epoch, "kernel_overlap_norm",
                    "kernel_overlap_norm_epoch" + tag + ".csv",
                    overlap_norm.values);
      writer.heatmap(epoch, "heatmap_overlap",
                     "kernel_overlap_norm_epoch" + tag + ".pgm",
                     overlap_norm.values, cfg, true);

      const RegionStats stats = region_stats(overlap, data.regions);
      region_rows.push_back(
          {std::to_string(epoch), "overlap", format_double(stats.mean_diag_simple),
           format_double(stats.mean_diag_complex), format_double(stats.mean_block_ss),
           format_double(stats.mean_block_cc), format_double(stats.mean_block_sc)});

      pattern_rows.push_back(
          {std::to_string(epoch),
           std::to_string(count_distinct_patterns(arch, snap, data.X))});
    }

    const KernelMatrix ntk = empirical_ntk(arch, snap, data.X, mode);
    const KernelMatrix ntk_norm = trace_normalize(ntk);
    writer.matrix(epoch, "ntk_raw", "ntk_raw_epoch" + tag + ".csv", ntk.values);
    writer.matrix(epoch, "ntk_norm", "ntk_norm_epoch" + tag + ".csv",
                  ntk_norm.values);
    writer.heatmap(epoch, "heatmap_ntk", "ntk_norm_epoch" + tag + ".pgm",
                   ntk_norm.values, cfg, true);
    const RegionStats ntk_stats = region_stats(ntk, data.regions);
    region_rows.push_back(
        {std::to_string(epoch), "ntk", format_double(ntk_stats.mean_diag_simple),
         format_double(ntk_stats.mean_diag_complex),
         format_double(ntk_stats.mean_block_ss),
         format_double(ntk_stats.mean_block_cc),
         format_double(ntk_stats.mean_block_sc)});

    if (arch.has_value_net()) {
      const std::vector<Hyperplane> planes = dlgn_hyperplanes(arch, snap);
      std::vector<std::vector<std::string>> plane_rows;
      for (const Hyperplane& p : planes) {
        std::vector<std::string> row{std::to_string(p.layer),
                                     std::to_string(p.neuron)};
        for (Index i = 0; i < p.normal.size(); ++i)
          row.push_back(format_double(p.normal[i]));
        row.push_back(format_double(p.offset));
        plane_rows.push_back(std::move(row));
      }
      std::vector<std::string> header{"layer", "neuron"};
      for (Index i = 0; i < arch.input_dim; ++i)
        header.push_back("a" + std::to_string(i + 1));
      header.push_back("c");
      const std::string rel = "hyperplanes_epoch" + tag + ".csv";
      write_csv_table(header, plane_rows, writer.full_path(rel));
      writer.record(epoch, "hyperplanes", rel);
    }
  }

  write_csv_table({"epoch", "kernel", "mean_diag_low", "mean_diag_high",
                   "mean_block_ll", "mean_block_hh", "mean_block_lh"},
                  region_rows, writer.full_path("region_stats.csv"));
  writer.record(-1, "region_stats", "region_stats.csv");
  if (!pattern_rows.empty()) {
    write_csv_table({"epoch", "distinct_activation_patterns"}, pattern_rows,
                    writer.full_path("activation_patterns.csv"));
    writer.record(-1, "activation_patterns", "activation_patterns.csv");
  }

  return writer.finish(cfg, result.history);
}

RunManifest run_fmnist(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::Fmnist)
    throw std::invalid_argument("run_fmnist: wrong experiment kind");
  if (cfg.train_images.empty() || cfg.train_labels.empty() ||
      cfg.test_images.empty() || cfg.test_labels.empty())
    throw std::invalid_argument(
        "run_fmnist: train/test IDX paths must be provided");

  LabeledImageDataset train_raw = load_idx(cfg.train_images, cfg.train_labels);
  LabeledImageDataset test_raw = load_idx(cfg.test_images, cfg.test_labels);
  if (cfg.subsample_train > 0)
    train_raw = subsample_per_class(train_raw, cfg.subsample_train / 10);
  if (cfg.subsample_test > 0)
    test_raw = subsample_per_class(test_raw, cfg.subsample_test / 10);

  Rng rng(cfg.seed);
  Rng modify_rng = rng.split(7);
  const ModifiedFmnist modified =
      modify_fmnist_labels(train_raw, test_raw, modify_rng);

  const Architecture arch = cfg.architecture(modified.train.X.rows(), 10);
  const GateMode mode = training_mode(cfg, arch);
  ModelParams params = init_params(arch, rng);
  params.freeze = freeze_flags(cfg.freeze);

  Batch batch;
  batch.X = modified.train.X;
  for (int label : modified.train.labels) batch.labels.push_back(label - 1);

  // Kernel diagnostics on a fixed per-class subsample of the training data.
  const LabeledImageDataset kernel_set =
      subsample_per_class(modified.train, cfg.kernel_points_per_class);

  Batch test_batch;
  test_batch.X = modified.test.X;
  for (int label : modified.test.labels) test_batch.labels.push_back(label - 1);

  ArtifactWriter writer(cfg.out_dir);
  std::vector<std::vector<std::string>> metric_rows;

  const auto active_path_means = [&](const ModelParams& p) {
    // Diagonal of the overlap kernel without the full Gram: |A(x)| is the
    // product of per-layer active-gate counts.
    const GateTensor gates = gate_tensor(arch, p, kernel_set.X);
    double sum_s = 0.0, sum_c = 0.0;
    std::size_t n_s = 0, n_c = 0;
    for (Index a = 0; a < kernel_set.X.cols(); ++a) {
      double paths = 1.0;
      for (const Matrix& g : gates.layers) paths *= g.row(a).sum();
      if (kernel_set.regions[static_cast<std::size_t>(a)] == Region::Simple) {
        sum_s += paths;
        ++n_s;
      } else {
        sum_c += paths;
        ++n_c;
      }
    }
    return std::pair<double, double>{sum_s / static_cast<double>(n_s),
                                     sum_c / static_cast<double>(n_c)};
  };

  const auto region_accuracy = [&](const ModelParams& p) {
    const ForwardTrace trace = forward(arch, p, test_batch.X, mode);
    Index correct_s = 0, n_s = 0, correct_c = 0, n_c = 0;
    for (Index a = 0; a < trace.output.cols(); ++a) {
      Index best = 0;
      trace.output.col(a).maxCoeff(&best);
      const bool ok =
          best == test_batch.labels[static_cast<std::size_t>(a)];
      if (modified.test.regions[static_cast<std::size_t>(a)] == Region::Simple) {
        ++n_s;
        if (ok) ++correct_s;
      } else {
        ++n_c;
        if (ok) ++correct_c;
      }
    }
    return std::pair<double, double>{
        static_cast<double>(correct_s) / static_cast<double>(std::max<Index>(n_s, 1)),
        static_cast<double>(correct_c) / static_cast<double>(std::max<Index>(n_c, 1))};
  };

  const auto ntk_diag_means = [&](const ModelParams& p) {
    const Vector diag = empirical_ntk_diag(arch, p, kernel_set.X, mode);
    double sum_s = 0.0, sum_c = 0.0;
    std::size_t n_s = 0, n_c = 0;
    for (Index a = 0; a < diag.size(); ++a) {
      if (kernel_set.regions[static_cast<std::size_t>(a)] == Region::Simple) {
        sum_s += diag[a];
        ++n_s;
      } else {
        sum_c += diag[a];
        ++n_c;
      }
    }
    return std::pair<double, double>{sum_s / static_cast<double>(n_s),
                                     sum_c / static_cast<double>(n_c)};
  };

  const auto record_metrics = [&](int epoch, const ModelParams& p,
                                  double train_loss, double train_acc) {
    const auto [paths_s, paths_c] = active_path_means(p);
    const auto [ntk_s, ntk_c] = ntk_diag_means(p);
    const auto [acc_s, acc_c] = region_accuracy(p);
    metric_rows.push_back(
        {std::to_string(epoch), format_double(train_loss),
         format_double(train_acc), format_double(paths_s),
         format_double(paths_c), format_double(ntk_s), format_double(ntk_c),
         format_double(acc_s), format_double(acc_c)});
  };

  const auto snapshot_kernels = [&](int epoch, const ModelParams& p) {
    const std::string tag = epoch_tag(epoch);
    const GateTensor gates = gate_tensor(arch, p, kernel_set.X);
    const KernelMatrix overlap_norm = trace_normalize(overlap_kernel(gates));
    const Matrix overlap_classes =
        class_averaged_kernel(overlap_norm, kernel_set.labels, 10);
    writer.matrix(epoch, "class_overlap",
                  "class_overlap_epoch" + tag + ".csv", overlap_classes);
    writer.heatmap(epoch, "heatmap_class_overlap",
                   "class_overlap_epoch" + tag + ".pgm", overlap_classes, cfg,
                   true);
    const KernelMatrix ntk_norm =
        trace_normalize(empirical_ntk(arch, p, kernel_set.X, mode));
    const Matrix ntk_classes =
        class_averaged_kernel(ntk_norm, kernel_set.labels, 10);
    writer.matrix(epoch, "class_ntk", "class_ntk_epoch" + tag + ".csv",
                  ntk_classes);
    writer.heatmap(epoch, "heatmap_class_ntk", "class_ntk_epoch" + tag + ".pgm",
                   ntk_classes, cfg, true);
  };

  const std::vector<int> snaps = cfg.resolved_snapshots();
  {
    const ForwardTrace init_trace = forward(arch, params, batch.X, mode);
    record_metrics(0, params, output_loss(init_trace.output, batch, LossKind::SoftmaxCe),
                   accuracy(init_trace.output, batch.labels));
  }
  snapshot_kernels(0, params);
  save_checkpoint(arch, params, writer.full_path("params_epoch0000.ckpt"));
  writer.record(0, "checkpoint", "params_epoch0000.ckpt");

  TrainConfig tc;
  tc.epochs = cfg.epochs;
  tc.batch_size = cfg.batch_size;
  tc.mode = mode;
  tc.loss = LossKind::SoftmaxCe;
  tc.adam.lr = cfg.lr;
  tc.seed = cfg.seed;
  tc.snapshot_epochs = snaps;
  tc.on_epoch = [&](int epoch, const ModelParams& p, const EpochStats& stats) {
    record_metrics(epoch, p, stats.loss, stats.accuracy);
    if (std::find(snaps.begin(), snaps.end(), epoch) != snaps.end() &&
        epoch != 0) {
      snapshot_kernels(epoch, p);
      const std::string tag = epoch_tag(epoch);
      save_checkpoint(arch, p, writer.full_path("params_epoch" + tag + ".ckpt"));
      writer.record(epoch, "checkpoint", "params_epoch" + tag + ".ckpt");
    }
  };

  const TrainResult result = train(arch, params, batch, tc);
  write_loss_curves(writer, result, LossKind::SoftmaxCe);
  write_csv_table({"epoch", "train_loss", "train_acc", "mean_paths_simple",
                   "mean_paths_complex", "ntk_diag_simple", "ntk_diag_complex",
                   "test_acc_simple", "test_acc_complex"},
                  metric_rows, writer.full_path("region_metrics.csv"));
  writer.record(-1, "region_metrics", "region_metrics.csv");

  return writer.finish(cfg, result.history);
}

OracleReport run_oracle_suite(const ExperimentConfig& cfg) {
  if (cfg.kind != ExperimentKind::OracleSuite)
    throw std::invalid_argument("run_oracle_suite: wrong experiment kind");
  OracleReport report;

  const ModelKind kinds[] = {ModelKind::Relu, ModelKind::Dlgn,
                             ModelKind::DlgnPwc, ModelKind::Dln};
  Rng root(cfg.seed);
  std::uint64_t stream = 0;

  for (ModelKind kind : kinds) {
    for (Index d = 1; d <= 3; ++d) {
      for (Index m = 2; m <= 4; ++m) {
        for (int L = 2; L <= 4; ++L) {
          for (int net = 0; net < cfg.oracle_nets_per_config; ++net) {
            ++report.configurations;
            Architecture arch;
            arch.kind = kind;
            arch.input_dim = d;
            arch.hidden_width = m;
            arch.num_layers = L;
            arch.output_dim = 1;
            arch.use_bias = false;

            Rng net_rng = root.split(stream++);
            const ModelParams params = init_params(arch, net_rng);
            Rng input_rng = net_rng.split(999);

            Matrix X(d, cfg.oracle_inputs_per_net);
            for (Index j = 0; j < X.cols(); ++j)
              for (Index i = 0; i < d; ++i) X(i, j) = input_rng.gaussian();

            const auto describe = [&](const char* what) {
              return std::string(what) + " at " + to_string(kind) +
                     " d=" + std::to_string(d) + " m=" + std::to_string(m) +
                     " L=" + std::to_string(L) + " net=" + std::to_string(net);
            };

            // Theorem check: fast forward vs brute-force MoE sum.
            const ForwardTrace trace =
                forward(arch, params, X, GateMode::hard());
            for (Index j = 0; j < X.cols(); ++j) {
              const Vector moe = moe_sum(arch, params, X.col(j), cfg.path_cap);
              const double fwd =
                  trace.output(0, j) + cfg.forward_perturbation;
              const double err =
                  std::abs(fwd - moe[0]) / (1.0 + std::abs(fwd));
              report.max_moe_error = std::max(report.max_moe_error, err);
              if (err > 1e-9) {
                report.violations.push_back(describe("moe mismatch") +
                                            " input=" + std::to_string(j) +
                                            " err=" + format_double(err));
              }
            }

            // Overlap check: product formula vs brute-force intersection.
            if (arch.has_gates()) {
              const GateTensor gates = gate_tensor(arch, params, X);
              const KernelMatrix overlap = overlap_kernel(gates);
              for (Index a = 0; a < X.cols(); ++a)
                for (Index b = a; b < X.cols(); ++b) {
                  const std::size_t brute = overlap_bruteforce(
                      arch, params, X.col(a), X.col(b), cfg.path_cap);
                  const auto fast = static_cast<std::size_t>(
                      std::llround(overlap.values(a, b)));
                  const std::size_t diff =
                      brute > fast ? brute - fast : fast - brute;
                  report.max_overlap_discrepancy =
                      std::max(report.max_overlap_discrepancy, diff);
                  if (diff != 0)
                    report.violations.push_back(
                        describe("overlap mismatch") + " pair=(" +
                        std::to_string(a) + "," + std::to_string(b) + ")");
                }
            }
          }
        }
      }
    }
  }

  if (!cfg.out_dir.empty()) {
    ArtifactWriter writer(cfg.out_dir);
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"max_moe_error", format_double(report.max_moe_error)});
    rows.push_back({"max_overlap_discrepancy",
                    std::to_string(report.max_overlap_discrepancy)});
    rows.push_back({"configurations", std::to_string(report.configurations)});
    rows.push_back({"violations", std::to_string(report.violations.size())});
    write_csv_table({"metric", "value"}, rows,
                    writer.full_path("oracle_report.csv"));
    writer.record(-1, "oracle_report", "oracle_report.csv");
    writer.finish(cfg, {});
  }
  return report;
}

}  // namespace dlgn
