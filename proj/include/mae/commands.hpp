// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "mae/artifacts.hpp"
#include "mae/config.hpp"
#include "mae/corpus.hpp"
#include "mae/report.hpp"

// The `mae` subcommands as plain functions. Each writes its artifacts plus a
// reproducibility manifest and reports progress on `log`.
namespace mae::commands {

namespace fs = std::filesystem;

/// Writes a synthetic corpus to `out` and `<out>.manifest.json`.
void synth(const RunConfig& config, const fs::path& out, std::ostream& log);

struct PreprocessSummary {
  data::CorpusStats input;
  data::CorpusStats output;
  std::size_t train = 0, validation = 0, test = 0;
};
/// normalize → filter → select top attributes → split → catalogs.
PreprocessSummary preprocess(const RunConfig& config, const fs::path& input, const Workspace& ws, std::ostream& log);

/// Default checkpoint directory for a run: checkpoints/<variant>.
fs::path default_checkpoint(const RunConfig& config, const Workspace& ws);
fs::path train(const RunConfig& config, const Workspace& ws, fs::path out, std::ostream& log);

inline constexpr const char* kMostCommonFile = "most_common.json";
fs::path baseline(const RunConfig& config, const Workspace& ws, fs::path out, std::ostream& log);

/// Evaluates trained models and baselines on one split, renders the table,
/// and writes the JSON report to `out` (default reports/eval-<split>.json).
harness::MetricsReport eval(const RunConfig& config, const Workspace& ws, const std::vector<fs::path>& sources,
                            const std::string& split, fs::path out, bool breakdown, std::ostream& log);

void predict(const RunConfig& config, const Workspace& ws, const fs::path& checkpoint, const std::string& product,
             const std::string& attribute, std::size_t n, std::ostream& out);

/// Combines saved reports into one table; returns the number of problems found.
std::size_t report(const std::vector<fs::path>& reports, std::ostream& out, std::ostream& err);

/// Trains one model per grid entry and compares them on the validation split.
/// Grid file: {"runs": [{"name": "...", "set": {"dotted.key": value, ...}}, ...]}.
harness::MetricsReport grid(const RunConfig& config, const Workspace& ws, const fs::path& grid_file, fs::path out,
                            std::ostream& log);

}  // namespace mae::commands
