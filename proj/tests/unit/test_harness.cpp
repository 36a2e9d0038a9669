// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "mae/artifacts.hpp"
#include "mae/checkpoint.hpp"
#include "mae/config.hpp"
#include "mae/errors.hpp"
#include "mae/evaluation.hpp"
#include "mae/preprocess.hpp"
#include "mae/report.hpp"
#include "mae/synthetic.hpp"
#include "mae/training.hpp"
#include "mae/util.hpp"
#include "support/temp_dir.hpp"

using namespace mae;
using namespace mae::harness;
using data::ProductRecord;

namespace {

ProductRecord product(std::string id, std::string description, std::vector<data::AttributeValue> pairs) {
  ProductRecord r;
  r.id = std::move(id);
  r.description = std::move(description);
  r.pairs = std::move(pairs);
  return r;
}

// Small text-signal corpus, already split.
struct Prepared {
  data::SplitRecords parts;
  data::Catalogs catalogs;
  std::size_t image_dim = 0;
};

Prepared small_corpus(std::size_t n, double text_rate, double image_rate, std::uint64_t seed = 3) {
  data::SyntheticConfig s;
  s.n_products = n;
  s.n_attributes = 4;
  s.values_per_attribute = 5;
  s.text_signal_rate = text_rate;
  s.image_signal_rate = image_rate;
  s.image_dim = 8;
  s.description_length = 6;
  s.vocab_noise = 30;
  const auto syn = data::generate_synthetic(s, seed);
  Prepared p;
  p.parts = data::apply_split(syn.corpus.records, data::split_dataset(syn.corpus.records, {}, seed));
  p.catalogs = data::build_catalogs(p.parts.train);
  p.image_dim = syn.corpus.image_dim;
  return p;
}

RunConfig small_config(model::FusionVariant variant) {
  RunConfig c = profile_defaults(Profile::desk);
  c.embedding_dim = 16;
  c.text.filters = 16;
  c.text.token_dim = 8;
  c.image.feature_dim = 8;
  c.variant = variant;
  c.train.batch_size = 16;
  c.optimizer.learning_rate = 3e-3;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config resolution") {
  SUBCASE("paper profile") {
    const auto c = profile_defaults(Profile::paper);
    CHECK(c.embedding_dim == 1024);
    CHECK(c.text.window == 5);
    CHECK(c.text.filters == 600);
    CHECK(c.preprocess.filter.min_attribute_count == 500);
    CHECK(c.preprocess.filter.min_value_count == 50);
    CHECK(c.preprocess.filter.dominance == doctest::Approx(0.8));
  }
  SUBCASE("desk profile and synthetic rates") {
    const auto c = profile_defaults(Profile::desk);
    CHECK(c.embedding_dim == 64);
    CHECK(c.text.window == 3);
    CHECK(c.text.filters == 64);
    CHECK(c.synth.text_signal_rate == doctest::Approx(0.70));
    CHECK(c.synth.image_signal_rate == doctest::Approx(0.35));
    CHECK(c.eval.candidates == CandidateMode::all);
  }
  SUBCASE("json round trip") {
    auto c = profile_defaults(Profile::paper);
    c.seed = 99;
    c.variant = model::FusionVariant::gmu;
    c.eval.candidates = CandidateMode::attribute;
    CHECK(to_json(config_from_json(to_json(c))) == to_json(c));
  }
  SUBCASE("precedence: profile, file, overrides, seed") {
    mae::testing::TempDir dir;
    const auto file = dir.path() / "run.json";
    write_json(file, {{"profile", "paper"}, {"train", {{"epochs", 7}}}, {"seed", 5}});
    ConfigSources s;
    s.file = file;
    auto c = resolve_config(s);
    CHECK(c.profile == Profile::paper);
    CHECK(c.embedding_dim == 1024);
    CHECK(c.train.epochs == 7);
    CHECK(c.seed == 5);

    s.overrides = {"train.epochs=2", "fusion.variant=text", "model.embedding_dim=32"};
    s.seed = 11;
    c = resolve_config(s);
    CHECK(c.train.epochs == 2);
    CHECK(c.variant == model::FusionVariant::text);
    CHECK(c.embedding_dim == 32);
    CHECK(c.seed == 11);
  }
  SUBCASE("errors") {
    ConfigSources s;
    s.overrides = {"train.epoch=3"};
    CHECK_THROWS_WITH_AS(resolve_config(s), doctest::Contains("train.epoch"), ConfigError);
    s.overrides = {"model.embedding_dim=0"};
    CHECK_THROWS_AS(resolve_config(s), ConfigError);
    s.overrides = {"train.batch_size=\"many\""};
    CHECK_THROWS_AS(resolve_config(s), ConfigError);
    s.overrides = {"no-equals-sign"};
    CHECK_THROWS_AS(resolve_config(s), ConfigError);
    s.overrides = {};
    s.profile = "huge";
    CHECK_THROWS_AS(resolve_config(s), ConfigError);
  }
  SUBCASE("hash") {
    auto a = profile_defaults(Profile::desk);
    auto b = a;
    CHECK(config_hash(a) == config_hash(b));
    b.train.epochs += 1;
    CHECK(config_hash(a) != config_hash(b));
  }
}

TEST_CASE("most-common baseline") {
  SUBCASE("examples") {
    std::vector<ProductRecord> train{
        product("1", "", {{"color", "red"}}), product("2", "", {{"color", "red"}}),
        product("3", "", {{"color", "red"}}), product("4", "", {{"color", "blue"}}),
        product("5", "", {{"size", "small"}}),
    };
    const auto m = MostCommonModel::fit(train);
    CHECK(m.predict("color") == "red");
    CHECK(m.ranking("color") == std::vector<std::string>{"red", "blue"});
    // Unseen attributes fall back to the global ranking.
    CHECK(m.predict("material") == "red");
    CHECK(m.global() == std::vector<std::string>{"red", "blue", "small"});

    std::vector<ProductRecord> tie{product("1", "", {{"color", "red"}}), product("2", "", {{"color", "blue"}}),
                                   product("3", "", {{"color", "red"}}), product("4", "", {{"color", "blue"}})};
    CHECK(MostCommonModel::fit(tie).predict("color") == "blue");
    CHECK_THROWS_AS(MostCommonModel::fit(std::vector<ProductRecord>{}), InsufficientDataError);
  }

  SUBCASE("matches a counting oracle on random corpora") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<ProductRecord> train;
      const std::size_t n = 1 + rng() % 50;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<data::AttributeValue> pairs;
        const std::size_t k = 1 + rng() % 3;
        for (std::size_t j = 0; j < k; ++j)
          pairs.push_back({"a" + std::to_string(rng() % 4), "v" + std::to_string(rng() % 6)});
        train.push_back(product(std::to_string(i), "", pairs));
      }
      std::map<std::string, std::map<std::string, int>> counts;
      for (const auto& r : train)
        for (const auto& p : r.pairs) ++counts[p.attribute][p.value];
      const auto m = MostCommonModel::fit(train);
      for (const auto& [attr, values] : counts) {
        // Oracle: scan for the maximum count, first in lexicographic order.
        std::string best;
        int best_count = -1;
        for (const auto& [v, c] : values) {
          if (c > best_count) best = v, best_count = c;
        }
        CHECK(m.predict(attr) == best);
        const auto& ranking = m.ranking(attr);
        CHECK(ranking.size() == values.size());
        for (std::size_t i = 1; i < ranking.size(); ++i) {
          const int prev = values.at(ranking[i - 1]), cur = values.at(ranking[i]);
          CHECK((prev > cur || (prev == cur && ranking[i - 1] < ranking[i])));
        }
      }
      // Shuffling record order leaves the model unchanged.
      auto shuffled = train;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      CHECK(MostCommonModel::fit(shuffled) == m);
    }
  }

  SUBCASE("save and load") {
    mae::testing::TempDir dir;
    std::vector<ProductRecord> train{product("1", "", {{"color", "red"}, {"size", "xl"}})};
    const auto m = MostCommonModel::fit(train);
    m.save(dir.path() / "mc.json");
    CHECK(MostCommonModel::load(dir.path() / "mc.json") == m);
  }

  SUBCASE("evaluation") {
    std::vector<ProductRecord> train{product("1", "", {{"color", "red"}}), product("2", "", {{"color", "red"}}),
                                     product("3", "", {{"color", "blue"}})};
    std::vector<ProductRecord> test{product("4", "", {{"color", "red"}}), product("5", "", {{"color", "blue"}}),
                                    product("6", "", {{"color", "green"}})};
    const auto r = evaluate(MostCommonModel::fit(train), test);
    CHECK(r.overall.queries == 3);
    CHECK(r.overall.hits.at(1) == 1);
    CHECK(r.overall.hits.at(5) == 2);
    CHECK(r.overall.hits.at(20) == 2);
  }
}

TEST_CASE("hit tallies") {
  HitTally a, b;
  a.add(0);
  a.add(4);
  b.add(std::nullopt);
  b.add(12);
  auto ab = a, ba = b;
  ab.merge(b);
  ba.merge(a);
  CHECK(ab.queries == 4);
  CHECK(ab.hits == ba.hits);
  const auto rates = ab.rates();
  CHECK(rates.at(1) == doctest::Approx(0.25));
  CHECK(rates.at(5) == doctest::Approx(0.5));
  CHECK(rates.at(10) == doctest::Approx(0.5));
  CHECK(rates.at(20) == doctest::Approx(0.75));

  Tensor values({3, 2}, {1, 0, 1, 0, 0, 1});
  const std::vector<double> c{1, 0};
  const std::vector<std::size_t> all{0, 1, 2};
  CHECK(gold_rank(c, values, all, 0) == 0u);
  CHECK(gold_rank(c, values, all, 1) == 1u);  // tie with 0 goes to the lower index
  CHECK(gold_rank(c, values, all, 2) == 2u);
  const std::vector<std::size_t> some{1, 2};
  CHECK(gold_rank(c, values, some, 1) == 0u);
  CHECK_FALSE(gold_rank(c, values, some, 0).has_value());
}

TEST_CASE("training") {
  const auto data = small_corpus(300, 1.0, 0.0);
  auto config = small_config(model::FusionVariant::text);

  SUBCASE("zero epochs keep the initialization") {
    config.train.epochs = 0;
    const auto r = train(config, data.catalogs, data.parts.train, data.parts.validation, data.image_dim);
    const auto init = model::Model::initialize(model_spec(config, data.catalogs, data.image_dim),
                                               derive_seed(config.seed, "init"));
    CHECK(r.model.parameters().same_values(init.parameters()));
    CHECK(r.best_epoch == 0);
    CHECK(r.steps == 0);
  }

  SUBCASE("loss halves within five epochs") {
    config.train.epochs = 5;
    config.train.patience = 0;
    const auto r = train(config, data.catalogs, data.parts.train, data.parts.validation, data.image_dim);
    REQUIRE(r.history.size() == 6);
    const double initial = r.history.front().mean_loss;
    const double best = std::min_element(r.history.begin() + 1, r.history.end(), [](auto& a, auto& b) {
                          return a.mean_loss < b.mean_loss;
                        })->mean_loss;
    CHECK(best <= 0.5 * initial);
  }

  SUBCASE("reruns are bit-identical") {
    config.train.epochs = 2;
    mae::testing::TempDir dir;
    for (const char* name : {"a", "b"}) {
      const auto r = train(config, data.catalogs, data.parts.train, data.parts.validation, data.image_dim);
      save_checkpoint(r.model.parameters(), dir.path() / name);
    }
    CHECK(slurp(dir.path() / "a" / kPayloadFile) == slurp(dir.path() / "b" / kPayloadFile));
    CHECK(slurp(dir.path() / "a" / kManifestFile) == slurp(dir.path() / "b" / kManifestFile));
  }

  SUBCASE("early stopping keeps the best validation epoch") {
    config.train.epochs = 6;
    config.train.patience = 1;
    const auto r = train(config, data.catalogs, data.parts.train, data.parts.validation, data.image_dim);
    double best = -1;
    std::size_t best_epoch = 0;
    for (const auto& s : r.history) {
      if (*s.validation_hits1 > best) best = *s.validation_hits1, best_epoch = s.epoch;
    }
    CHECK(r.best_epoch == best_epoch);
    const auto kept = evaluate(r.model, data.catalogs, data.parts.validation, config.eval);
    CHECK(kept.overall.rates().at(1) == doctest::Approx(best));
  }

  SUBCASE("empty training split") {
    CHECK_THROWS_AS(train(config, data.catalogs, {}, data.parts.validation, data.image_dim), InsufficientDataError);
  }
}

TEST_CASE("a five-pair toy is memorized") {
  std::vector<ProductRecord> records;
  const char* words[] = {"crimson", "navy", "olive", "ivory", "amber"};
  for (int i = 0; i < 5; ++i) {
    records.push_back(product("p" + std::to_string(i), std::string("a shirt in ") + words[i],
                              {{"color", std::string("c") + words[i]}}));
  }
  const auto catalogs = data::build_catalogs(records);
  auto config = small_config(model::FusionVariant::text);
  config.text.dropout = 0.0;
  config.train.epochs = 300;
  config.train.patience = 0;
  config.train.batch_size = 5;
  config.optimizer.learning_rate = 1e-2;
  const auto r = train(config, catalogs, records, {}, 0);
  CHECK(r.history.back().mean_loss < 0.05);
  const auto eval = evaluate(r.model, catalogs, records, config.eval);
  CHECK(eval.overall.rates().at(1) == 1.0);
}

TEST_CASE("an untrained model performs at chance") {
  constexpr std::size_t kValues = 40, kQueries = 4000;
  std::mt19937_64 rng(23);
  std::vector<ProductRecord> records;
  for (std::size_t i = 0; i < kQueries; ++i) {
    std::string text;
    for (int w = 0; w < 6; ++w) text += "w" + std::to_string(rng() % 50) + " ";
    records.push_back(product(std::to_string(i), text, {{"kind", "v" + std::to_string(rng() % kValues)}}));
  }
  const auto catalogs = data::build_catalogs(records);
  REQUIRE(catalogs.values.size() == kValues);
  auto config = small_config(model::FusionVariant::text);
  const auto m = model::Model::initialize(model_spec(config, catalogs, 0), 5);
  const double rate = evaluate(m, catalogs, records, config.eval).overall.rates().at(1);
  const double p = 1.0 / kValues;
  const double sigma = std::sqrt(p * (1 - p) / kQueries);
  CHECK(std::abs(rate - p) < 4 * sigma);
}

TEST_CASE("evaluation") {
  const auto data = small_corpus(300, 0.7, 0.35);
  auto config = small_config(model::FusionVariant::gmu);
  config.train.epochs = 2;
  const auto r = train(config, data.catalogs, data.parts.train, data.parts.validation, data.image_dim);

  SUBCASE("idempotent and independent of the worker count") {
    const auto once = evaluate(r.model, data.catalogs, data.parts.test, config.eval);
    const auto twice = evaluate(r.model, data.catalogs, data.parts.test, config.eval);
    CHECK(once.overall.hits == twice.overall.hits);
    for (std::size_t workers : {2, 3, 7}) {
      auto e = config.eval;
      e.workers = workers;
      const auto fanned = evaluate(r.model, data.catalogs, data.parts.test, e);
      CHECK(fanned.overall.queries == once.overall.queries);
      CHECK(fanned.overall.hits == once.overall.hits);
      for (const auto& [attr, tally] : once.per_attribute) CHECK(fanned.per_attribute.at(attr).hits == tally.hits);
    }
  }

  SUBCASE("attribute-restricted candidates never do worse") {
    auto e = config.eval;
    e.candidates = CandidateMode::attribute;
    const auto all = evaluate(r.model, data.catalogs, data.parts.test, config.eval).overall.rates();
    const auto restricted = evaluate(r.model, data.catalogs, data.parts.test, e).overall.rates();
    for (auto k : model::kReportKs) CHECK(restricted.at(k) >= all.at(k));
  }

  SUBCASE("unseen attributes and values count as misses") {
    auto record = data.parts.test.front();
    record.pairs = {{"never-seen", "whatever"}, {data.parts.train.front().pairs.front().attribute, "unheard-of"}};
    const std::vector<ProductRecord> one{record};
    const auto e = evaluate(r.model, data.catalogs, one, config.eval);
    CHECK(e.overall.queries == 2);
    CHECK(e.overall.hits.at(20) == 0);
  }

  SUBCASE("predict_topn") {
    const auto& rec = data.parts.test.front();
    const auto& attr = rec.pairs.front().attribute;
    const auto preds = predict_topn(r.model, data.catalogs, rec, attr, 1000);
    CHECK(preds.size() == data.catalogs.values.size());
    for (std::size_t i = 1; i < preds.size(); ++i) CHECK(preds[i - 1].score >= preds[i].score);

    // Scores agree with decoding the context directly.
    const auto enc = model::encode_record(rec, data.catalogs, data.image_dim);
    const std::vector<std::size_t> attrs{data.catalogs.attributes.index(attr)};
    const auto c = r.model.contexts(enc, attrs).front();
    std::vector<std::size_t> all(data.catalogs.values.size());
    std::iota(all.begin(), all.end(), 0);
    const auto ranked = model::decode_value(c.data(), r.model.value_table(), all);
    for (std::size_t i = 0; i < preds.size(); ++i) {
      CHECK(preds[i].value == data.catalogs.values.entry(ranked.entries[i].value));
      CHECK(preds[i].score == ranked.entries[i].score);
    }

    const auto top5 = predict_topn(r.model, data.catalogs, rec, attr, 5);
    const auto listing = format_predictions(top5);
    std::istringstream lines(listing);
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line)) {
      const auto space = line.rfind(' ');
      REQUIRE(space != std::string::npos);
      CHECK(line.substr(0, space) == top5[count].value);
      char expected[32];
      std::snprintf(expected, sizeof expected, "%.2f", top5[count].score);
      CHECK(line.substr(space + 1) == expected);
      ++count;
    }
    CHECK(count == 5);

    CHECK_THROWS_WITH_AS(predict_topn(r.model, data.catalogs, rec, "attr0", 5), doctest::Contains("attr00"),
                         CatalogError);
  }
}

TEST_CASE("text-only models ignore images end to end") {
  const auto data = small_corpus(200, 0.7, 0.35);
  auto config = small_config(model::FusionVariant::text);
  config.train.epochs = 2;
  const auto r = train(config, data.catalogs, data.parts.train, data.parts.validation, data.image_dim);

  auto perturbed = data.parts.test;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss(0.0, 5.0);
  for (auto& rec : perturbed) {
    for (auto& img : rec.images)
      for (double& x : img) x = gauss(rng);
    rec.images.resize(1 + rng() % 3, rec.images.front());
  }
  const auto a = evaluate(r.model, data.catalogs, data.parts.test, config.eval);
  const auto b = evaluate(r.model, data.catalogs, perturbed, config.eval);
  CHECK(a.overall.hits == b.overall.hits);
  for (std::size_t i = 0; i < perturbed.size(); ++i) {
    const auto& attr = perturbed[i].pairs.empty() ? std::string() : perturbed[i].pairs.front().attribute;
    if (attr.empty() || !data.catalogs.attributes.find(attr)) continue;
    const auto pa = predict_topn(r.model, data.catalogs, data.parts.test[i], attr, 3);
    const auto pb = predict_topn(r.model, data.catalogs, perturbed[i], attr, 3);
    for (std::size_t j = 0; j < pa.size(); ++j) CHECK(pa[j].score == pb[j].score);
  }
}

TEST_CASE("metrics reports") {
  MetricsReport report;
  EvaluationResult e;
  e.overall.add(0);
  e.overall.add(7);
  e.overall.add(std::nullopt);
  e.per_attribute["color"].add(0);
  e.per_attribute["size"].add(7);
  e.per_attribute["size"].add(std::nullopt);
  report.rows.push_back({row_label(model::FusionVariant::text), "checkpoints/text", e});
  report.rows.push_back({kMostCommonLabel, "checkpoints/most-common", e});
  report.metadata = {{"seed", 3}, {"split", "test"}};

  SUBCASE("json round trip") {
    mae::testing::TempDir dir;
    save_report(report, dir.path() / "r.json");
    const auto back = load_report(dir.path() / "r.json");
    CHECK(to_json(back) == to_json(report));
    CHECK(check_report(back).empty());
  }
  SUBCASE("table layout") {
    const auto table = render_table(report);
    std::istringstream in(table);
    std::string header;
    std::getline(in, header);
    std::istringstream cols(header);
    std::vector<std::string> words{std::istream_iterator<std::string>(cols), {}};
    CHECK(words == std::vector<std::string>{"Model", "Hits@1", "Hits@5", "Hits@10", "Hits@20"});
    CHECK(table.find("Text Baseline") != std::string::npos);
    CHECK(table.find("Most-Common Value") != std::string::npos);
    CHECK(table.find("33.33") != std::string::npos);
    CHECK(table.find("66.67") != std::string::npos);
  }
  SUBCASE("row labels") {
    CHECK(row_label(model::FusionVariant::image) == "Image Baseline");
    CHECK(row_label(model::FusionVariant::concat) == "Multimodal Baseline - Concat");
    CHECK(row_label(model::FusionVariant::gmu) == "Multimodal Baseline - GMU");
  }
  SUBCASE("checks catch broken rows") {
    auto j = to_json(report);
    j["rows"][0]["hit_counts"]["5"] = 0;
    CHECK_FALSE(check_report(report_from_json(j)).empty());
    j = to_json(report);
    j["rows"][1]["hit_counts"]["20"] = 10;
    CHECK_FALSE(check_report(report_from_json(j)).empty());
  }
}
