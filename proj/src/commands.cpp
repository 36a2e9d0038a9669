// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/commands.hpp"

#include <chrono>
#include <cstdio>

#include "mae/embeddings.hpp"
#include "mae/errors.hpp"
#include "mae/evaluation.hpp"
#include "mae/synthetic.hpp"
#include "mae/training.hpp"
#include "mae/util.hpp"

namespace mae::commands {
using json = nlohmann::json;

namespace {

json stats_json(const data::CorpusStats& s) {
  return {{"products", s.products},
          {"images", s.images},
          {"attribute-value pairs", s.pairs},
          {"unique attributes", s.unique_attributes},
          {"unique values", s.unique_values},
          {"flagged products", s.flagged}};
}

std::string stats_table(const PreprocessSummary& s) {
  const std::pair<const char*, std::pair<std::size_t, std::size_t>> rows[] = {
      {"products", {s.input.products, s.output.products}},
      {"images", {s.input.images, s.output.images}},
      {"attribute-value pairs", {s.input.pairs, s.output.pairs}},
      {"unique attributes", {s.input.unique_attributes, s.output.unique_attributes}},
      {"unique values", {s.input.unique_values, s.output.unique_values}},
      {"flagged products", {s.input.flagged, s.output.flagged}},
  };
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%-22s %12s %12s\n", "", "input", "output");
  out += buf;
  for (const auto& [name, v] : rows) {
    std::snprintf(buf, sizeof buf, "%-22s %12zu %12zu\n", name, v.first, v.second);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "split (train/validation/test): %zu/%zu/%zu\n", s.train, s.validation, s.test);
  out += buf;
  return out;
}

std::span<const data::ProductRecord> split_records(const PreparedData& d, const std::string& split) {
  if (split == "train") return d.parts.train;
  if (split == "validation") return d.parts.validation;
  if (split == "test") return d.parts.test;
  throw ConfigError("unknown split '" + split + "' (expected train, validation or test)");
}

harness::ReportRow evaluate_source(const RunConfig& config, const PreparedData& d, const fs::path& source,
                                   std::span<const data::ProductRecord> records) {
  if (fs::exists(source / kMostCommonFile)) {
    const auto mc = harness::MostCommonModel::load(source / kMostCommonFile);
    return {harness::kMostCommonLabel, source.string(), harness::evaluate(mc, records)};
  }
  const auto loaded = load_model(source);
  return {harness::row_label(loaded.model.spec().variant), source.string(),
          harness::evaluate(loaded.model, d.catalogs, records, config.eval, loaded.config.text.max_tokens)};
}

}  // namespace

void synth(const RunConfig& config, const fs::path& out, std::ostream& log) {
  const auto s = data::generate_synthetic(config.synth, config.seed);
  data::write_corpus(s.corpus, out);
  const std::string hash = hex64(hash_file(out));
  write_json(fs::path(out.string() + ".manifest.json"), run_manifest("synth", config, hash));
  log << "wrote " << s.corpus.records.size() << " synthetic products to " << out.string() << "\n";
}

PreprocessSummary preprocess(const RunConfig& config, const fs::path& input, const Workspace& ws, std::ostream& log) {
  if (!fs::exists(input)) throw CorpusError("corpus file " + input.string() + " does not exist");
  const auto corpus = data::read_corpus(input);
  PreprocessSummary summary;
  summary.input = data::corpus_stats(corpus.records);

  data::NormalizationRules rules;
  if (!config.preprocess.rules.empty()) rules = data::NormalizationRules::load(config.preprocess.rules);
  auto records = data::normalize_attributes(corpus.records, rules);
  records = data::filter_pairs(std::move(records), config.preprocess.filter);
  records = data::select_top_attributes(std::move(records), config.preprocess.top_attributes);
  summary.output = data::corpus_stats(records);

  const auto split = data::split_dataset(records, config.preprocess.split, config.seed);
  const auto parts = data::apply_split(records, split);
  const auto catalogs = data::build_catalogs(parts.train);
  summary.train = split.train.size();
  summary.validation = split.validation.size();
  summary.test = split.test.size();

  data::write_corpus({records, corpus.image_dim}, ws.corpus());
  data::export_catalogs(catalogs, ws.catalogs());
  data::write_split(split, ws.splits());
  data::export_histograms(catalogs, ws.reports());
  write_json(ws.reports() / "summary.json",
             {{"input", stats_json(summary.input)},
              {"output", stats_json(summary.output)},
              {"split", {{"train", summary.train}, {"validation", summary.validation}, {"test", summary.test}}},
              {"catalogs",
               {{"attributes", catalogs.attributes.size()},
                {"values", catalogs.values.size()},
                {"tokens", catalogs.tokens.size()}}}});
  const std::string table = stats_table(summary);
  write_text_file(ws.reports() / "summary.txt", table);
  write_json(ws.manifests() / "preprocess.json", run_manifest("preprocess", config, hex64(hash_file(input))));
  log << table;
  return summary;
}

fs::path default_checkpoint(const RunConfig& config, const Workspace& ws) {
  return ws.checkpoints() / model::to_string(config.variant);
}

fs::path train(const RunConfig& config, const Workspace& ws, fs::path out, std::ostream& log) {
  if (out.empty()) out = default_checkpoint(config, ws);
  const auto d = load_prepared(ws);

  Tensor pretrained;
  if (!config.text.embeddings.empty()) {
    const auto emb = data::load_word_embeddings(config.text.embeddings);
    if (emb.dim() != config.text.token_dim) {
      throw ConfigError("text.token_dim is " + std::to_string(config.text.token_dim) + " but " +
                        config.text.embeddings + " holds " + std::to_string(emb.dim()) + "-d vectors");
    }
    pretrained = data::align_embeddings(emb, d.catalogs.tokens);
  }

  json history = json::array();
  auto result = harness::train(config, d.catalogs, d.parts.train, d.parts.validation, d.corpus.image_dim,
                               pretrained.empty() ? nullptr : &pretrained, [&](const harness::EpochStats& s) {
                                 char buf[128];
                                 std::snprintf(buf, sizeof buf, "epoch %3zu  loss %.5f", s.epoch, s.mean_loss);
                                 log << buf;
                                 if (s.validation_hits1) {
                                   std::snprintf(buf, sizeof buf, "  validation hits@1 %.4f", *s.validation_hits1);
                                   log << buf;
                                 }
                                 log << "\n";
                                 json e{{"epoch", s.epoch}, {"mean_loss", s.mean_loss}};
                                 if (s.validation_hits1) e["validation_hits1"] = *s.validation_hits1;
                                 history.push_back(e);
                               });
  save_model(out, result.model, config);
  write_json(out / "history.json", {{"best_epoch", result.best_epoch}, {"steps", result.steps}, {"epochs", history}});
  write_json(out / "run.json", run_manifest("train", config, d.corpus_hash));
  log << "kept epoch " << result.best_epoch << "; checkpoint written to " << out.string() << "\n";
  return out;
}

fs::path baseline(const RunConfig& config, const Workspace& ws, fs::path out, std::ostream& log) {
  if (out.empty()) out = ws.checkpoints() / "most-common";
  const auto d = load_prepared(ws);
  const auto mc = harness::MostCommonModel::fit(d.parts.train);
  mc.save(out / kMostCommonFile);
  write_json(out / "run.json", run_manifest("baseline", config, d.corpus_hash));
  log << "most-common baseline over " << mc.per_attribute().size() << " attributes written to " << out.string() << "\n";
  return out;
}

harness::MetricsReport eval(const RunConfig& config, const Workspace& ws, const std::vector<fs::path>& sources,
                            const std::string& split, fs::path out, bool breakdown, std::ostream& log) {
  if (sources.empty()) throw ConfigError("eval needs at least one checkpoint or baseline directory");
  const auto start = std::chrono::steady_clock::now();
  const auto d = load_prepared(ws);
  const auto records = split_records(d, split);
  harness::MetricsReport report;
  for (const auto& s : sources) report.rows.push_back(evaluate_source(config, d, s, records));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.metadata = {{"split", split},
                     {"config_hash", config_hash(config)},
                     {"seed", config.seed},
                     {"corpus_hash", d.corpus_hash},
                     {"candidates", to_json(config)["eval"]["candidates"]},
                     {"wall_time_seconds", seconds}};
  if (out.empty()) out = ws.reports() / ("eval-" + split + ".json");
  harness::save_report(report, out);
  log << harness::render_table(report);
  if (breakdown) {
    for (const auto& row : report.rows) log << "\n" << row.label << "\n" << harness::render_breakdown(row);
  }
  return report;
}

void predict(const RunConfig& config, const Workspace& ws, const fs::path& checkpoint, const std::string& product,
             const std::string& attribute, std::size_t n, std::ostream& out) {
  const auto d = load_prepared(ws);
  const auto loaded = load_model(checkpoint);
  const auto it = std::find_if(d.corpus.records.begin(), d.corpus.records.end(),
                               [&](const data::ProductRecord& r) { return r.id == product; });
  if (it == d.corpus.records.end()) throw CorpusError("no product with id '" + product + "' in " + ws.corpus().string());
  const auto preds = harness::predict_topn(loaded.model, d.catalogs, *it, attribute, n, config.eval.candidates,
                                           loaded.config.text.max_tokens);
  out << harness::format_predictions(preds);
}

std::size_t report(const std::vector<fs::path>& reports, std::ostream& out, std::ostream& err) {
  if (reports.empty()) throw ConfigError("report needs at least one report file");
  harness::MetricsReport combined;
  for (const auto& p : reports) {
    if (!fs::exists(p)) throw MissingArtifactError(p.string(), "eval");
    for (auto& row : harness::load_report(p).rows) combined.rows.push_back(std::move(row));
  }
  out << harness::render_table(combined);
  const auto problems = harness::check_report(combined);
  for (const auto& p : problems) err << "report problem: " << p << "\n";
  return problems.size();
}

harness::MetricsReport grid(const RunConfig& config, const Workspace& ws, const fs::path& grid_file, fs::path out,
                            std::ostream& log) {
  const json spec = read_json(grid_file);
  if (!spec.contains("runs") || !spec["runs"].is_array() || spec["runs"].empty()) {
    throw ConfigError(grid_file.string() + " must hold a non-empty \"runs\" array");
  }
  const auto d = load_prepared(ws);
  harness::MetricsReport report;
  for (const auto& run : spec["runs"]) {
    const auto name = run.value("name", std::string());
    if (name.empty()) throw ConfigError("every grid run needs a name");
    json merged = to_json(config);
    const json overrides = run.value("set", json::object());
    for (const auto& [key, value] : overrides.items()) apply_override(merged, key + "=" + value.dump());
    const RunConfig cfg = config_from_json(merged);
    log << "== " << name << "\n";
    const auto dir = train(cfg, ws, ws.checkpoints() / "grid" / name, log);
    auto row = evaluate_source(cfg, d, dir, d.parts.validation);
    row.label = name;
    report.rows.push_back(std::move(row));
  }
  report.metadata = {{"split", "validation"}, {"grid", grid_file.string()}, {"config_hash", config_hash(config)}};
  if (out.empty()) out = ws.reports() / "grid.json";
  harness::save_report(report, out);
  log << harness::render_table(report);
  return report;
}

}  // namespace mae::commands
