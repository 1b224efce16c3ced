// Command-line front-end: circle / fmnist / oracle experiment runners and a
// CSV-to-PGM heatmap export utility. Exit code 0 on success; failures print
// a single "error: ..." line on stderr.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dlgn/config.hpp"
#include "dlgn/experiments.hpp"
#include "dlgn/export.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::string arch;
  std::string freeze;
  std::string snapshots;
  std::uint64_t seed = 0;
  int epochs = -1;
  double lr = -1.0;
  double beta = -1.0;
  int batch_size = -1;
  bool seed_set = false;
};

void add_common_options(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "flat key=value config file")
      ->envname("DLGN_CONFIG");
  cmd->add_option("--seed", args.seed, "master RNG seed")
      ->envname("DLGN_SEED");
  cmd->add_option("--out", args.out_dir, "output directory")
      ->envname("DLGN_OUT");
  cmd->add_option("--arch", args.arch, "relu|dlgn|dlgn-pwc|dln")
      ->envname("DLGN_ARCH");
  cmd->add_option("--freeze", args.freeze, "gates|values|none")
      ->envname("DLGN_FREEZE");
  cmd->add_option("--epochs", args.epochs, "training epochs")
      ->envname("DLGN_EPOCHS");
  cmd->add_option("--lr", args.lr, "Adam learning rate")->envname("DLGN_LR");
  cmd->add_option("--beta", args.beta, "soft-gate temperature")
      ->envname("DLGN_BETA");
  cmd->add_option("--batch-size", args.batch_size, "minibatch size (0 = full)")
      ->envname("DLGN_BATCH_SIZE");
  cmd->add_option("--snapshots", args.snapshots,
                  "comma-separated snapshot epochs")
      ->envname("DLGN_SNAPSHOTS");
}

dlgn::ExperimentConfig resolve(const CLI::App* cmd, const CommonArgs& args,
                               dlgn::ExperimentConfig cfg) {
  if (!args.config_path.empty())
    cfg.apply(dlgn::Config::from_file(args.config_path));
  // CLI flags win over config-file keys.
  dlgn::Config overrides;
  if (cmd->count("--seed")) overrides.set("seed", std::to_string(args.seed));
  if (cmd->count("--out") || !args.out_dir.empty())
    overrides.set("out_dir", args.out_dir);
  if (!args.arch.empty()) overrides.set("arch", args.arch);
  if (!args.freeze.empty()) overrides.set("freeze", args.freeze);
  if (args.epochs >= 0) overrides.set("epochs", std::to_string(args.epochs));
  if (args.lr >= 0.0) overrides.set("lr", dlgn::format_double(args.lr));
  if (args.beta >= 0.0) overrides.set("beta", dlgn::format_double(args.beta));
  if (args.batch_size >= 0)
    overrides.set("batch_size", std::to_string(args.batch_size));
  if (!args.snapshots.empty()) overrides.set("snapshots", args.snapshots);
  cfg.apply(overrides);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mixture-of-simple-experts laboratory"};
  app.require_subcommand(1);

  CommonArgs circle_args, fmnist_args, oracle_args;

  CLI::App* circle = app.add_subcommand("circle", "circle regression run");
  add_common_options(circle, circle_args);
  int circle_points = -1;
  circle->add_option("--points", circle_points, "number of circle points");

  CLI::App* fmnist = app.add_subcommand("fmnist", "modified FMNIST run");
  add_common_options(fmnist, fmnist_args);
  std::string train_images, train_labels, test_images, test_labels;
  int subsample_train = -1, subsample_test = -1;
  fmnist->add_option("--train-images", train_images, "IDX train images path")
      ->envname("DLGN_TRAIN_IMAGES");
  fmnist->add_option("--train-labels", train_labels, "IDX train labels path")
      ->envname("DLGN_TRAIN_LABELS");
  fmnist->add_option("--test-images", test_images, "IDX test images path")
      ->envname("DLGN_TEST_IMAGES");
  fmnist->add_option("--test-labels", test_labels, "IDX test labels path")
      ->envname("DLGN_TEST_LABELS");
  fmnist->add_option("--subsample-train", subsample_train,
                     "training points kept (0 = all)");
  fmnist->add_option("--subsample-test", subsample_test,
                     "test points kept (0 = all)");

  CLI::App* oracle = app.add_subcommand(
      "oracle", "path-enumeration verification sweep");
  add_common_options(oracle, oracle_args);

  CLI::App* export_cmd =
      app.add_subcommand("export", "render a kernel CSV as a PGM heatmap");
  std::string export_in, export_out;
  export_cmd->add_option("--in", export_in, "input matrix CSV")->required();
  export_cmd->add_option("--out", export_out, "output PGM path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (circle->parsed()) {
      auto cfg = resolve(circle, circle_args,
                         dlgn::ExperimentConfig::circle_defaults());
      if (circle_points > 0) cfg.circle_points = circle_points;
      const dlgn::RunManifest manifest = dlgn::run_circle(cfg);
      std::cout << "wrote " << manifest.artifacts.size() << " artifacts; manifest at "
                << manifest.manifest_path << "\n";
    } else if (fmnist->parsed()) {
      auto cfg = resolve(fmnist, fmnist_args,
                         dlgn::ExperimentConfig::fmnist_defaults());
      if (!train_images.empty()) cfg.train_images = train_images;
      if (!train_labels.empty()) cfg.train_labels = train_labels;
      if (!test_images.empty()) cfg.test_images = test_images;
      if (!test_labels.empty()) cfg.test_labels = test_labels;
      if (subsample_train >= 0) cfg.subsample_train = subsample_train;
      if (subsample_test >= 0) cfg.subsample_test = subsample_test;
      const dlgn::RunManifest manifest = dlgn::run_fmnist(cfg);
      std::cout << "wrote " << manifest.artifacts.size() << " artifacts; manifest at "
                << manifest.manifest_path << "\n";
    } else if (oracle->parsed()) {
      auto cfg = resolve(oracle, oracle_args,
                         dlgn::ExperimentConfig::oracle_defaults());
      const dlgn::OracleReport report = dlgn::run_oracle_suite(cfg);
      std::cout << "configurations: " << report.configurations
                << "\nmax moe error: " << dlgn::format_double(report.max_moe_error)
                << "\nmax overlap discrepancy: " << report.max_overlap_discrepancy
                << "\n";
      if (!report.ok()) {
        for (const std::string& v : report.violations)
          std::cerr << "error: " << v << "\n";
        return 2;
      }
    } else if (export_cmd->parsed()) {
      const dlgn::Matrix m = dlgn::read_csv_matrix(export_in);
      dlgn::write_pgm_heatmap(m, export_out, {});
      std::cout << "wrote " << export_out << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
