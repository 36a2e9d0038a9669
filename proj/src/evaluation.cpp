// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <thread>

#include <nlohmann/json.hpp>

#include "mae/errors.hpp"
#include "mae/ops.hpp"
#include "mae/util.hpp"

namespace mae::harness {
using json = nlohmann::json;

void HitTally::add(std::optional<std::size_t> rank, std::span<const std::size_t> ks) {
  ++queries;
  for (auto k : ks) {
    auto& slot = hits[k];
    if (rank && *rank < k) ++slot;
  }
}

void HitTally::merge(const HitTally& other) {
  queries += other.queries;
  for (const auto& [k, n] : other.hits) hits[k] += n;
}

model::HitsAtK HitTally::rates() const {
  model::HitsAtK out;
  for (const auto& [k, n] : hits) out[k] = queries == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(queries);
  return out;
}

void EvaluationResult::merge(const EvaluationResult& other) {
  overall.merge(other.overall);
  for (const auto& [a, t] : other.per_attribute) per_attribute[a].merge(t);
}

std::optional<std::size_t> gold_rank(std::span<const double> context, const Tensor& values,
                                     std::span<const std::size_t> candidates, std::size_t gold) {
  if (std::find(candidates.begin(), candidates.end(), gold) == candidates.end()) return std::nullopt;
  const double target = cosine(context, values.row(gold));
  std::size_t rank = 0;
  for (auto v : candidates) {
    if (v == gold) continue;
    const double s = cosine(context, values.row(v));
    if (s > target || (s == target && v < gold)) ++rank;
  }
  return rank;
}

namespace {

std::vector<std::size_t> all_values(const data::Catalogs& catalogs) {
  std::vector<std::size_t> out(catalogs.values.size());
  std::iota(out.begin(), out.end(), 0);
  return out;
}

// Splits [0, n) into contiguous chunks, runs `work` on each (in threads when
// workers > 1) and merges in chunk order.
template <typename Work>
EvaluationResult fan_out(std::size_t n, std::size_t workers, const Work& work) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  std::vector<EvaluationResult> parts(workers);
  auto run = [&](std::size_t w) {
    const std::size_t begin = n * w / workers, end = n * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) work(i, parts[w]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto& t : threads) t.join();
  }
  EvaluationResult out;
  for (const auto& p : parts) out.merge(p);
  return out;
}

}  // namespace

EvaluationResult evaluate(const model::Model& m, const data::Catalogs& catalogs,
                          std::span<const data::ProductRecord> records, const EvalConfig& options, std::size_t max_tokens) {
  const auto everything = all_values(catalogs);
  std::vector<std::vector<std::size_t>> restricted;
  if (options.candidates == CandidateMode::attribute) {
    for (std::size_t a = 0; a < catalogs.attributes.size(); ++a) restricted.push_back(catalogs.values_for(a));
  }
  const Tensor& values = m.value_table();

  return fan_out(records.size(), options.workers, [&](std::size_t i, EvaluationResult& out) {
    const auto& record = records[i];
    if (record.pairs.empty()) return;
    std::vector<std::size_t> attrs;
    for (const auto& p : record.pairs) {
      if (auto a = catalogs.attributes.find(p.attribute)) attrs.push_back(*a);
    }
    std::sort(attrs.begin(), attrs.end());
    attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
    std::vector<Tensor> contexts;
    if (!attrs.empty()) {
      contexts = m.contexts(model::encode_record(record, catalogs, m.spec().image_dim, max_tokens), attrs);
    }
    for (const auto& p : record.pairs) {
      std::optional<std::size_t> rank;
      const auto a = catalogs.attributes.find(p.attribute);
      const auto v = catalogs.values.find(p.value);
      if (a && v) {
        const auto slot = static_cast<std::size_t>(std::lower_bound(attrs.begin(), attrs.end(), *a) - attrs.begin());
        const auto& cands = options.candidates == CandidateMode::attribute ? restricted[*a] : everything;
        rank = gold_rank(contexts[slot].data(), values, cands, *v);
      }
      out.overall.add(rank);
      out.per_attribute[p.attribute].add(rank);
    }
  });
}

namespace {

std::vector<std::string> rank_counts(const std::map<std::string, std::size_t>& counts) {
  std::vector<std::pair<std::string, std::size_t>> items(counts.begin(), counts.end());
  // std::map iterates in ascending string order, so a stable sort on count
  // leaves equal counts lexicographic.
  std::stable_sort(items.begin(), items.end(), [](const auto& x, const auto& y) { return x.second > y.second; });
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& [s, n] : items) out.push_back(std::move(s));
  return out;
}

}  // namespace

MostCommonModel MostCommonModel::fit(std::span<const data::ProductRecord> train) {
  std::map<std::string, std::map<std::string, std::size_t>> joint;
  std::map<std::string, std::size_t> global;
  for (const auto& r : train)
    for (const auto& p : r.pairs) {
      ++joint[p.attribute][p.value];
      ++global[p.value];
    }
  if (global.empty()) throw InsufficientDataError("most-common baseline needs at least one training pair");
  MostCommonModel m;
  for (const auto& [a, counts] : joint) m.per_attribute_[a] = rank_counts(counts);
  m.global_ = rank_counts(global);
  return m;
}

const std::vector<std::string>& MostCommonModel::ranking(const std::string& attribute) const {
  const auto it = per_attribute_.find(attribute);
  return it == per_attribute_.end() ? global_ : it->second;
}

void MostCommonModel::save(const std::filesystem::path& path) const {
  const json j{{"per_attribute", per_attribute_}, {"global", global_}};
  write_text_file(path, j.dump(2) + "\n");
}

MostCommonModel MostCommonModel::load(const std::filesystem::path& path) {
  const json j = json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded() || !j.contains("per_attribute") || !j.contains("global")) {
    throw FormatError(path.string(), 0, "not a most-common baseline file");
  }
  MostCommonModel m;
  m.per_attribute_ = j["per_attribute"].get<std::map<std::string, std::vector<std::string>>>();
  m.global_ = j["global"].get<std::vector<std::string>>();
  return m;
}

EvaluationResult evaluate(const MostCommonModel& model, std::span<const data::ProductRecord> records) {
  EvaluationResult out;
  for (const auto& r : records)
    for (const auto& p : r.pairs) {
      const auto& ranked = model.ranking(p.attribute);
      const auto it = std::find(ranked.begin(), ranked.end(), p.value);
      const std::optional<std::size_t> rank =
          it == ranked.end() ? std::nullopt : std::optional<std::size_t>(static_cast<std::size_t>(it - ranked.begin()));
      out.overall.add(rank);
      out.per_attribute[p.attribute].add(rank);
    }
  return out;
}

std::vector<std::string> nearest_strings(const std::string& query, std::span<const std::string> known, std::size_t n) {
  auto distance = [](const std::string& a, const std::string& b) {
    std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
    std::iota(prev.begin(), prev.end(), 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
      cur[0] = i;
      for (std::size_t j = 1; j <= b.size(); ++j) {
        cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
      }
      std::swap(prev, cur);
    }
    return prev[b.size()];
  };
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const auto& k : known) scored.emplace_back(distance(query, k), k);
  std::sort(scored.begin(), scored.end());
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(n, scored.size()); ++i) out.push_back(scored[i].second);
  return out;
}

std::vector<Prediction> predict_topn(const model::Model& m, const data::Catalogs& catalogs,
                                     const data::ProductRecord& product, const std::string& attribute, std::size_t n,
                                     CandidateMode candidates, std::size_t max_tokens) {
  const auto a = catalogs.attributes.find(attribute);
  if (!a) {
    std::string hint;
    for (const auto& s : nearest_strings(attribute, catalogs.attributes.entries())) hint += (hint.empty() ? "" : ", ") + s;
    throw CatalogError("unknown attribute '" + attribute + "'" + (hint.empty() ? "" : "; nearest known: " + hint));
  }
  const std::vector<std::size_t> attrs{*a};
  const auto context = m.contexts(model::encode_record(product, catalogs, m.spec().image_dim, max_tokens), attrs).front();
  const auto cands = candidates == CandidateMode::attribute ? catalogs.values_for(*a) : all_values(catalogs);
  const auto ranked = model::decode_value(context.data(), m.value_table(), cands).top(n);
  std::vector<Prediction> out;
  for (const auto& e : ranked.entries) out.push_back({catalogs.values.entry(e.value), e.score});
  return out;
}

std::string format_predictions(std::span<const Prediction> predictions) {
  std::string out;
  for (const auto& p : predictions) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", p.score);
    out += p.value + " " + buf + "\n";
  }
  return out;
}

}  // namespace mae::harness
