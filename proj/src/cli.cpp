// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <optional>

#include "mae/commands.hpp"

namespace mae::cli {

namespace fs = std::filesystem;

namespace {

struct Common {
  std::string config;
  std::string profile;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string workspace = ".";

  RunConfig resolve() const {
    ConfigSources s;
    s.profile = profile;
    s.file = config;
    s.overrides = overrides;
    s.seed = seed;
    return resolve_config(s);
  }
  Workspace ws() const { return Workspace{workspace}; }
};

void add_common(CLI::App* cmd, Common& c, bool with_workspace = true) {
  cmd->add_option("--config", c.config, "JSON run configuration");
  cmd->add_option("--profile", c.profile, "Default profile")->check(CLI::IsMember({"paper", "desk"}));
  cmd->add_option("--set", c.overrides, "Override one field, e.g. --set train.epochs=3")->take_all();
  cmd->add_option("--seed", c.seed, "Run seed");
  if (with_workspace) cmd->add_option("-w,--workspace", c.workspace, "Artifact directory")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multimodal attribute extraction toolkit", "mae"};
  app.require_subcommand(1);

  Common common;
  std::string out_path, input, split = "test", product, attribute, grid_file;
  std::vector<std::string> sources, reports;
  std::size_t n = 5;
  bool breakdown = false;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  add_common(synth, common, false);
  synth->add_option("--out", out_path, "Corpus file to write")->required();

  auto* preprocess = app.add_subcommand("preprocess", "Normalize, filter, split and index a corpus");
  add_common(preprocess, common);
  preprocess->add_option("--input,input", input, "Corpus JSONL file")->required();

  auto* train = app.add_subcommand("train", "Train one model variant");
  add_common(train, common);
  train->add_option("--out", out_path, "Checkpoint directory (default checkpoints/<variant>)");

  auto* baseline = app.add_subcommand("baseline", "Fit the most-common value baseline");
  add_common(baseline, common);
  baseline->add_option("--out", out_path, "Baseline directory (default checkpoints/most-common)");

  auto* eval = app.add_subcommand("eval", "Evaluate checkpoints and baselines on a split");
  add_common(eval, common);
  eval->add_option("checkpoints", sources, "Checkpoint or baseline directories")->required();
  eval->add_option("--split", split, "Split to evaluate")
      ->check(CLI::IsMember({"train", "validation", "test"}))
      ->capture_default_str();
  eval->add_option("--out", out_path, "Report file (default reports/eval-<split>.json)");
  eval->add_flag("--breakdown", breakdown, "Also print per-attribute tables");

  auto* predict = app.add_subcommand("predict", "Top-n values for one product and attribute");
  add_common(predict, common);
  predict->add_option("--checkpoint", out_path, "Checkpoint directory (default checkpoints/<variant>)");
  predict->add_option("--product", product, "Product id")->required();
  predict->add_option("--attribute", attribute, "Queried attribute")->required();
  predict->add_option("-n", n, "Number of predictions")->capture_default_str()->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "Combine saved reports into one table");
  report->add_option("reports", reports, "Report JSON files")->required();

  auto* grid = app.add_subcommand("grid", "Train and compare a list of configurations");
  add_common(grid, common);
  grid->add_option("--grid", grid_file, "Grid file with a \"runs\" list")->required();
  grid->add_option("--out", out_path, "Report file (default reports/grid.json)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth) {
      commands::synth(common.resolve(), out_path, out);
    } else if (*preprocess) {
      commands::preprocess(common.resolve(), input, common.ws(), out);
    } else if (*train) {
      commands::train(common.resolve(), common.ws(), out_path, out);
    } else if (*baseline) {
      commands::baseline(common.resolve(), common.ws(), out_path, out);
    } else if (*eval) {
      std::vector<fs::path> paths(sources.begin(), sources.end());
      commands::eval(common.resolve(), common.ws(), paths, split, out_path, breakdown, out);
    } else if (*predict) {
      const auto config = common.resolve();
      const fs::path checkpoint = out_path.empty() ? commands::default_checkpoint(config, common.ws()) : fs::path(out_path);
      commands::predict(config, common.ws(), checkpoint, product, attribute, n, out);
    } else if (*report) {
      std::vector<fs::path> paths(reports.begin(), reports.end());
      if (commands::report(paths, out, err) > 0) return kExitReportProblems;
    } else if (*grid) {
      commands::grid(common.resolve(), common.ws(), grid_file, out_path, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return 0;
}

}  // namespace mae::cli
