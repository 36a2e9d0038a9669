// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "mae/encoders.hpp"
#include "mae/errors.hpp"
#include "mae/fusion.hpp"
#include "mae/model.hpp"
#include "mae/objective.hpp"
#include "mae/ops.hpp"
#include "support/gradcheck.hpp"
#include "support/toy_model.hpp"

using namespace mae;
using namespace mae::model;
using mae::testing::random_tensor;

namespace {

Tensor block_selector(std::size_t blocks, std::size_t pick, std::size_t k) {
  Tensor w({blocks * k, k});
  for (std::size_t i = 0; i < k; ++i) w.at(pick * k + i, i) = 1.0;
  return w;
}

std::vector<double> matvec(const std::vector<double>& x, const Tensor& w, const Tensor& b) {
  std::vector<double> out(w.cols());
  for (std::size_t j = 0; j < w.cols(); ++j) {
    out[j] = b[j];
    for (std::size_t i = 0; i < x.size(); ++i) out[j] += x[i] * w.at(i, j);
  }
  return out;
}

std::vector<double> joined(std::initializer_list<const Tensor*> parts) {
  std::vector<double> out;
  for (const Tensor* p : parts) out.insert(out.end(), p->values().begin(), p->values().end());
  return out;
}

TextEncoder text_encoder(Tape& tape, const Tensor& table, const Tensor& filters, const Tensor& fb, const Tensor& proj,
                         const Tensor& pb, std::size_t window, double dropout = 0.0) {
  return {tape.constant_ref(table), tape.constant_ref(filters), tape.constant_ref(fb), tape.constant_ref(proj),
          tape.constant_ref(pb),    window,                       dropout};
}

}  // namespace

TEST_CASE("embedding lookups") {
  ParameterStore store;
  std::mt19937_64 rng(1);
  store.add("attr", random_tensor({4, 3}, rng));
  Tape tape;
  Var table = tape.parameter(store, "attr");
  CHECK(embed_attribute(table, 0).value().values() ==
        std::vector<double>(store.value("attr").row(0).begin(), store.value("attr").row(0).end()));
  CHECK_FALSE(embed_attribute(table, 0).value() == embed_attribute(table, 1).value());
  CHECK_THROWS_AS(embed_value(table, 4), CatalogError);

  SUBCASE("gradients reach only rows used by the loss") {
    Tape t;
    Var tab = t.parameter(store, "attr");
    t.backward(mae::ops::cosine_similarity(embed_value(tab, 1), embed_value(tab, 3)));
    const Tensor& g = store.get("attr").grad;
    for (std::size_t r : {0, 2})
      for (std::size_t c = 0; c < 3; ++c) CHECK(g.at(r, c) == 0.0);
    CHECK(g.norm() > 0.0);
  }
  SUBCASE("a training step moves the used row") {
    const Tensor before = store.value("attr");
    Tape t;
    Var tab = t.parameter(store, "attr");
    t.backward(model::contrastive_loss(embed_attribute(tab, 0), embed_value(tab, 1), embed_value(tab, 2)));
    optimizer_step(store, {});
    const Tensor& after = store.value("attr");
    CHECK_FALSE(std::equal(before.row(0).begin(), before.row(0).end(), after.row(0).begin()));
  }
}

TEST_CASE("encode_text") {
  std::mt19937_64 rng(2);
  const std::size_t V = 10, d = 3, w = 3, F = 6, k = 4;
  Tensor table = random_tensor({V, d}, rng);
  Tensor filters = random_tensor({w * d, F}, rng), fb = random_tensor({F}, rng, 0.1);
  Tensor proj = random_tensor({F, k}, rng), pb = random_tensor({k}, rng, 0.1);
  Tape tape;
  const TextEncoder enc = text_encoder(tape, table, filters, fb, proj, pb, w);
  Rng drop(0);

  SUBCASE("output has length k for every input length") {
    for (std::size_t len = 0; len < 12; ++len) {
      std::vector<std::size_t> tokens(len);
      for (auto& t : tokens) t = 2 + rng() % (V - 2);
      CHECK(encode_text(tokens, enc, Mode::eval, drop).shape() == Shape{k});
    }
  }
  SUBCASE("paper profile defaults yield a 1024-vector") {
    Tensor big_table = random_tensor({8, 300}, rng, 0.1), big_filters = random_tensor({1500, 600}, rng, 0.01);
    Tensor big_fb({600}), big_proj = random_tensor({600, 1024}, rng, 0.01), big_pb({1024});
    Tape t;
    const TextEncoder big = text_encoder(t, big_table, big_filters, big_fb, big_proj, big_pb, 5, 0.5);
    const std::vector<std::size_t> tokens{2, 3, 4, 5, 6, 7, 2};
    CHECK(encode_text(tokens, big, Mode::train, drop).shape() == Shape{1024});
  }
  SUBCASE("empty description equals the all-padding window") {
    const std::vector<std::size_t> none, pads(w, data::kPaddingToken);
    CHECK(encode_text(none, enc, Mode::eval, drop).value() == encode_text(pads, enc, Mode::eval, drop).value());
  }
  SUBCASE("matches an explicit window, pool and projection oracle") {
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::size_t> tokens(w + rng() % 8);
      for (auto& t : tokens) t = rng() % V;
      std::vector<double> pooled(F, -INFINITY);
      for (std::size_t t = 0; t + w <= tokens.size(); ++t)
        for (std::size_t j = 0; j < F; ++j) {
          double acc = fb[j];
          for (std::size_t o = 0; o < w; ++o)
            for (std::size_t c = 0; c < d; ++c) acc += table.at(tokens[t + o], c) * filters.at(o * d + c, j);
          pooled[j] = std::max(pooled[j], std::max(acc, 0.0));
        }
      const auto want = matvec(pooled, proj, pb);
      const Tensor got = encode_text(tokens, enc, Mode::eval, drop).value();
      for (std::size_t j = 0; j < k; ++j) CHECK(got[j] == doctest::Approx(want[j]).epsilon(1e-12));
    }
  }
  SUBCASE("repeating windows that are already present leaves the output unchanged") {
    // A periodic sequence already contains every window its extension would add.
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<std::size_t> period(1 + rng() % 4);
      for (auto& t : period) t = rng() % V;
      std::vector<std::size_t> tokens;
      while (tokens.size() < w + period.size()) tokens.insert(tokens.end(), period.begin(), period.end());
      const Tensor base = encode_text(tokens, enc, Mode::eval, drop).value();
      for (int extra = 0; extra < 3; ++extra) {
        tokens.insert(tokens.end(), period.begin(), period.end());
        CHECK(encode_text(tokens, enc, Mode::eval, drop).value() == base);
      }
    }
  }
  SUBCASE("reordering tokens can change the output") {
    std::vector<std::size_t> tokens{2, 3, 4, 5, 6, 7, 8, 9};
    const Tensor base = encode_text(tokens, enc, Mode::eval, drop).value();
    std::reverse(tokens.begin(), tokens.end());
    CHECK_FALSE(encode_text(tokens, enc, Mode::eval, drop).value() == base);
  }
  SUBCASE("eval mode is deterministic even with dropout configured") {
    const TextEncoder noisy = text_encoder(tape, table, filters, fb, proj, pb, w, 0.5);
    const std::vector<std::size_t> tokens{2, 5, 7, 3};
    Rng r1(1), r2(2);
    CHECK(encode_text(tokens, noisy, Mode::eval, r1).value() == encode_text(tokens, noisy, Mode::eval, r2).value());
  }
}

TEST_CASE("encode_images") {
  std::mt19937_64 rng(3);
  const std::size_t D = 5, k = 4;
  Tensor proj = random_tensor({D, k}, rng), pb = random_tensor({k}, rng, 0.1), empty = random_tensor({k}, rng);
  Tape tape;
  const ImageEncoder enc{tape.constant_ref(proj), tape.constant_ref(pb), tape.constant_ref(empty), 0.0};
  Rng drop(0);

  const Tensor one = random_tensor({1, D}, rng);
  const std::vector<double> x(one.values());
  std::vector<double> expect = matvec(x, proj, pb);
  for (double& v : expect) v = std::max(v, 0.0);
  CHECK(encode_images(one, enc, Mode::eval, drop).value().values() == expect);
  CHECK(encode_images(Tensor(), enc, Mode::eval, drop).value() == empty);

  SUBCASE("invariant to permutation and duplication") {
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t m = 1 + rng() % 5;
      std::vector<std::vector<double>> images;
      for (std::size_t i = 0; i < m; ++i) images.push_back(random_tensor({D}, rng).values());
      const Tensor base = encode_images(stack_features(images, D), enc, Mode::eval, drop).value();
      auto shuffled = images;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      shuffled.push_back(shuffled[rng() % shuffled.size()]);
      CHECK(encode_images(stack_features(shuffled, D), enc, Mode::eval, drop).value() == base);
    }
  }
  SUBCASE("dimension mismatch") {
    const std::vector<std::vector<double>> bad{{1.0, 2.0}};
    CHECK_THROWS_AS(stack_features(bad, D), CorpusError);
    CHECK_THROWS_AS(encode_images(random_tensor({2, D + 1}, rng), enc, Mode::eval, drop), CorpusError);
  }
  SUBCASE("max_pool over no rows") {
    CHECK_THROWS_AS(max_pool(std::span<const Var>{}), EmptyPoolError);
  }
}

TEST_CASE("fuse_concat") {
  const std::size_t k = 3;
  std::mt19937_64 rng(4);
  Tensor ca = random_tensor({k}, rng), cd = random_tensor({k}, rng), ci = random_tensor({k}, rng);
  Tape tape;
  Var a = tape.constant_ref(ca), t = tape.constant_ref(cd), i = tape.constant_ref(ci);

  Tensor zw({3 * k, k}), zb({k});
  CHECK(fuse_concat(a, t, i, {tape.constant_ref(zw), tape.constant_ref(zb)}).value() == Tensor({k}));

  Tensor sel = block_selector(3, 0, k);
  CHECK(fuse_concat(a, t, i, {tape.constant_ref(sel), tape.constant_ref(zb)}).value() == ca);

  for (int trial = 0; trial < 20; ++trial) {
    Tensor w = random_tensor({3 * k, k}, rng), b = random_tensor({k}, rng);
    const auto want = matvec(joined({&ca, &cd, &ci}), w, b);
    const auto got = fuse_concat(a, t, i, {tape.constant_ref(w), tape.constant_ref(b)}).value();
    for (std::size_t j = 0; j < k; ++j) CHECK(got[j] == doctest::Approx(want[j]).epsilon(1e-12));
  }
  Tensor short_vec = random_tensor({k - 1}, rng);
  CHECK_THROWS_AS(fuse_concat(a, tape.constant_ref(short_vec), i, {tape.constant_ref(sel), tape.constant_ref(zb)}),
                  DimensionError);
}

TEST_CASE("fuse_gmu") {
  const std::size_t k = 4;
  std::mt19937_64 rng(5);
  Tape tape;
  auto c = [&](const Tensor& x) { return tape.constant_ref(x); };
  Tensor ca = random_tensor({k}, rng), cd = random_tensor({k}, rng), ci = random_tensor({k}, rng);
  Tensor wd = random_tensor({2 * k, k}, rng), bd = random_tensor({k}, rng);
  Tensor wi = random_tensor({2 * k, k}, rng), bi = random_tensor({k}, rng);

  SUBCASE("zero gate averages the modalities") {
    Tensor wz({2 * k, k}), bz({k});
    const auto out = fuse_gmu(c(ca), c(cd), c(ci), {c(wd), c(bd)}, {c(wi), c(bi)}, {c(wz), c(bz)});
    for (std::size_t j = 0; j < k; ++j) {
      CHECK(out.gate.value()[j] == 0.5);
      CHECK(out.fused.value()[j] ==
            doctest::Approx(0.5 * (out.text_fused.value()[j] + out.image_fused.value()[j])).epsilon(1e-15));
    }
  }
  SUBCASE("saturated gate selects the text side") {
    Tensor wz({2 * k, k}), bz = Tensor::filled({k}, 60.0);
    const auto out = fuse_gmu(c(ca), c(cd), c(ci), {c(wd), c(bd)}, {c(wi), c(bi)}, {c(wz), c(bz)});
    for (std::size_t j = 0; j < k; ++j)
      CHECK(out.fused.value()[j] == doctest::Approx(out.text_fused.value()[j]).epsilon(1e-12));
  }
  SUBCASE("random cases match a step-by-step oracle and stay between the two sides") {
    for (int trial = 0; trial < 50; ++trial) {
      Tensor wz = random_tensor({2 * k, k}, rng), bz = random_tensor({k}, rng);
      const auto out = fuse_gmu(c(ca), c(cd), c(ci), {c(wd), c(bd)}, {c(wi), c(bi)}, {c(wz), c(bz)});
      const auto hd = matvec(joined({&ca, &cd}), wd, bd);
      const auto hi = matvec(joined({&ca, &ci}), wi, bi);
      std::vector<double> both(hd);
      both.insert(both.end(), hi.begin(), hi.end());
      const auto logits = matvec(both, wz, bz);
      for (std::size_t j = 0; j < k; ++j) {
        const double z = 1.0 / (1.0 + std::exp(-logits[j]));
        const double want = z * hd[j] + (1 - z) * hi[j];
        CHECK(out.fused.value()[j] == doctest::Approx(want).epsilon(1e-12));
        CHECK(out.fused.value()[j] >= std::min(hd[j], hi[j]) - 1e-12);
        CHECK(out.fused.value()[j] <= std::max(hd[j], hi[j]) + 1e-12);
      }
    }
  }
}

TEST_CASE("fuse_unimodal") {
  const std::size_t k = 3;
  std::mt19937_64 rng(6);
  Tape tape;
  Tensor ca = random_tensor({k}, rng), cm = random_tensor({k}, rng);
  Tensor sel = block_selector(2, 1, k), zb({k});
  CHECK(fuse_unimodal(tape.constant_ref(ca), tape.constant_ref(cm), {tape.constant_ref(sel), tape.constant_ref(zb)})
            .value() == cm);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor w = random_tensor({2 * k, k}, rng), b = random_tensor({k}, rng);
    const auto want = matvec(joined({&ca, &cm}), w, b);
    const auto got =
        fuse_unimodal(tape.constant_ref(ca), tape.constant_ref(cm), {tape.constant_ref(w), tape.constant_ref(b)}).value();
    for (std::size_t j = 0; j < k; ++j) CHECK(got[j] == doctest::Approx(want[j]).epsilon(1e-12));
  }
  CHECK(parse_fusion_variant("gmu") == FusionVariant::gmu);
  CHECK(to_string(FusionVariant::image) == "image");
  CHECK_THROWS_AS(parse_fusion_variant("attention"), ConfigError);
}

TEST_CASE("unimodal models ignore the other modality") {
  std::mt19937_64 rng(7);
  for (auto variant : {FusionVariant::text, FusionVariant::image}) {
    const auto spec = mae::testing::toy_spec(variant);
    const Model m = Model::initialize(spec, 11);
    for (int trial = 0; trial < 10; ++trial) {
      auto rec = mae::testing::toy_record(rng, spec, 2);
      auto other = rec;
      if (variant == FusionVariant::text) {
        other.images = random_tensor({1 + rng() % 3, spec.image_dim}, rng, 10.0);
      } else {
        other.tokens.assign(1 + rng() % 9, 2 + rng() % 7);
      }
      const std::vector<std::size_t> attrs{0, 1, 2};
      const auto a = m.contexts(rec, attrs), b = m.contexts(other, attrs);
      for (std::size_t i = 0; i < attrs.size(); ++i) CHECK(a[i] == b[i]);
    }
  }
}

TEST_CASE("contrastive_loss") {
  Tape tape;
  auto L = [&](Tensor c, Tensor p, Tensor n) {
    return contrastive_loss(tape.constant(std::move(c)), tape.constant(std::move(p)), tape.constant(std::move(n)))
        .value()[0];
  };
  CHECK(L(Tensor::vector({1, 2}), Tensor::vector({2, 4}), Tensor::vector({-2, 1})) == doctest::Approx(0.0));
  CHECK(L(Tensor::vector({1, 0}), Tensor::vector({0, 1}), Tensor::vector({1, 0})) == 2.0);
  // g(c, c⁻) = −0.3 exactly contributes nothing; only L⁺ = (1 − 1)² remains.
  CHECK(L(Tensor::vector({1, 0}), Tensor::vector({1, 0}), Tensor::vector({-0.3, std::sqrt(1 - 0.09)})) == 0.0);
  CHECK_THROWS_AS(L(Tensor::vector({0, 0}), Tensor::vector({1, 0}), Tensor::vector({1, 0})), DegenerateVectorError);

  SUBCASE("closed form on random vectors") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
      Tensor c = random_tensor({5}, rng), p = random_tensor({5}, rng), n = random_tensor({5}, rng);
      const double gp = cosine(c.data(), p.data()), gn = cosine(c.data(), n.data());
      const double want = (1 - gp) * (1 - gp) + (gn >= 0 ? gn * gn : 0.0);
      const double got = L(c, p, n);
      CHECK(std::abs(got - want) <= 1e-12);
      CHECK(got >= 0.0);
    }
  }
  SUBCASE("gradient matches finite differences away from the hinge") {
    std::mt19937_64 rng(9);
    int checked = 0;
    while (checked < 100) {
      ParameterStore store;
      store.add("c", random_tensor({5}, rng));
      store.add("p", random_tensor({5}, rng));
      store.add("n", random_tensor({5}, rng));
      if (std::abs(cosine(store.value("c").data(), store.value("n").data())) <= 1e-3) continue;
      auto loss = [&](Tape& t) {
        return contrastive_loss(t.parameter(store, "c"), t.parameter(store, "p"), t.parameter(store, "n"));
      };
      const auto r = mae::testing::check_gradients(store, loss);
      CHECK(r.max_relative_error <= 1e-4);
      ++checked;
    }
  }
  SUBCASE("the zero branch gradient is used at the hinge") {
    ParameterStore store;
    store.add("c", Tensor::vector({1, 0}));
    store.add("n", Tensor::vector({0, 1}));
    Tape t;
    t.backward(contrastive_loss(t.parameter(store, "c"), t.constant(Tensor::vector({1, 0})), t.parameter(store, "n")));
    CHECK(store.get("n").grad.norm() == 0.0);
    CHECK(store.get("c").grad.norm() == 0.0);
  }
}

TEST_CASE("decode_value") {
  Tensor values = Tensor::matrix({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, -1}});
  const std::vector<std::size_t> all{0, 1, 2, 3};
  const std::vector<double> c{0, 1, 0};
  const auto ranked = decode_value(c, values, all);
  CHECK(ranked.entries.front() == ScoredValue{1, 1.0});
  // Remaining three tie at 0 except index 3 at 0 as well; ties by index.
  CHECK(ranked.entries[1].value == 0);
  CHECK(ranked.entries[2].value == 2);
  CHECK(ranked.rank_of(3) == 3);
  const std::vector<std::size_t> single{2};
  CHECK(decode_value(c, values, single).size() == 1);
  CHECK_THROWS_AS(decode_value(c, values, std::span<const std::size_t>{}), ContractError);
  CHECK(ranked.top(2).size() == 2);

  SUBCASE("random tables match a brute-force sort, also after rescaling c") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 50; ++trial) {
      Tensor table = random_tensor({50, 8}, rng);
      std::vector<std::size_t> cand(50);
      std::iota(cand.begin(), cand.end(), 0);
      const Tensor ctx = random_tensor({8}, rng);
      std::vector<std::pair<double, std::size_t>> oracle;
      for (std::size_t v = 0; v < 50; ++v) {
        double dot = 0, nu = 0, nv = 0;
        for (std::size_t j = 0; j < 8; ++j) {
          dot += ctx[j] * table.at(v, j);
          nu += ctx[j] * ctx[j];
          nv += table.at(v, j) * table.at(v, j);
        }
        oracle.emplace_back(-dot / std::sqrt(nu * nv), v);
      }
      std::sort(oracle.begin(), oracle.end());
      const auto got = decode_value(ctx.data(), table, cand);
      for (std::size_t i = 0; i < 50; ++i) CHECK(got.entries[i].value == oracle[i].second);
      Tensor scaled = ctx;
      for (double& x : scaled.data()) x *= 37.5;
      const auto again = decode_value(scaled.data(), table, cand);
      for (std::size_t i = 0; i < 50; ++i) CHECK(again.entries[i].value == got.entries[i].value);
    }
  }
}

TEST_CASE("hits_at_k") {
  auto ranking = [](std::vector<std::size_t> order) {
    RankedPrediction r;
    for (auto v : order) r.entries.push_back({v, 0.0});
    return r;
  };
  std::vector<RankedPrediction> preds{ranking({0, 1, 2, 3, 4, 5}), ranking({4, 2, 1, 0, 3, 5})};
  auto h = hits_at_k(preds, std::vector<std::size_t>{0, 4});
  CHECK(h[1] == 1.0);
  CHECK(h[5] == 1.0);
  h = hits_at_k(preds, std::vector<std::size_t>{2, 4});
  CHECK(h[1] == 0.5);
  CHECK(h[5] == 1.0);
  CHECK_THROWS_AS(hits_at_k(preds, std::vector<std::size_t>{1}), ContractError);

  SUBCASE("random rankings agree with a membership count") {
    std::mt19937_64 rng(11);
    std::vector<RankedPrediction> rs;
    std::vector<std::size_t> gold;
    for (int i = 0; i < 200; ++i) {
      std::vector<std::size_t> order(30);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      rs.push_back(ranking(order));
      gold.push_back(rng() % 30);
    }
    const std::vector<std::size_t> ks{1, 5, 10, 20, 30};
    const auto got = hits_at_k(rs, gold, ks);
    double prev = 0.0;
    for (auto k : ks) {
      std::size_t n = 0;
      for (std::size_t i = 0; i < rs.size(); ++i)
        n += std::find(rs[i].entries.begin(), rs[i].entries.begin() + k, ScoredValue{gold[i], 0.0}) !=
             rs[i].entries.begin() + k;
      CHECK(got.at(k) == static_cast<double>(n) / 200.0);
      CHECK(got.at(k) >= prev);
      prev = got.at(k);
    }
    CHECK(got.at(30) == 1.0);
  }
}

TEST_CASE("model gradients match finite differences for every fusion variant") {
  for (auto variant : {FusionVariant::concat, FusionVariant::gmu, FusionVariant::text, FusionVariant::image}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      std::mt19937_64 rng(seed);
      auto m = Model::initialize(mae::testing::toy_spec(variant), seed);
      const auto rec = mae::testing::toy_record(rng, m.spec(), seed % 3);
      const auto r = mae::testing::check_gradients(m.parameters(),
                                                   mae::testing::toy_loss(m, rec, seed % 3, 1, 4, rng()));
      INFO(to_string(variant) << " seed " << seed << " worst " << r.worst_parameter);
      CHECK(r.max_relative_error <= 1e-4);
      for (const auto& p : m.parameters()) CHECK(p.grad.all_finite());
    }
  }
}

TEST_CASE("model layout") {
  const auto spec = mae::testing::toy_spec(FusionVariant::gmu);
  const Model m = Model::initialize(spec, 3);
  CHECK(m.parameters().contains("fusion.gate.weights"));
  CHECK_FALSE(m.parameters().contains("fusion.concat.weights"));
  CHECK(m.parameters().value("fusion.gate.bias") == Tensor({spec.embedding_dim}));
  const Tensor& tok = m.parameters().value("text.token_embeddings");
  for (std::size_t c = 0; c < spec.token_dim; ++c) {
    CHECK(tok.at(data::kUnknownToken, c) == 0.0);
    CHECK(tok.at(data::kPaddingToken, c) == 0.0);
  }
  CHECK(Model(spec, m.parameters()).parameters().same_values(m.parameters()));
  auto other = mae::testing::toy_spec(FusionVariant::concat);
  CHECK_THROWS_AS(Model(other, m.parameters()), CheckpointError);
  CHECK(Model::initialize(spec, 3).parameters().same_values(m.parameters()));
  CHECK_FALSE(Model::initialize(spec, 4).parameters().same_values(m.parameters()));

  auto frozen = spec;
  frozen.train_token_embeddings = false;
  CHECK_FALSE(Model::initialize(frozen, 3).parameters().get("text.token_embeddings").trainable);
}
