// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/ops.hpp"

#include <algorithm>
#include <cmath>

#include "mae/errors.hpp"

namespace mae {
namespace ops {
namespace {

Tape& tape_of(const Var& a) {
  if (!a.valid()) throw ContractError("operation on an unbound Var");
  return *a.tape();
}

void require_same_shape(const char* op, const Var& a, const Var& b) {
  if (a.shape() != b.shape()) {
    throw DimensionError(std::string(op) + ": shapes " + a.value().shape_string() + " and " +
                         b.value().shape_string() + " differ");
  }
}

void require_vector(const char* op, const Var& a) {
  if (a.value().rank() != 1) {
    throw DimensionError(std::string(op) + ": expected a vector, got " + a.value().shape_string());
  }
}

}  // namespace

Var affine(Var x, Var weights, Var bias) {
  Tape& tape = tape_of(x);
  const Tensor& xv = x.value();
  const Tensor& w = weights.value();
  const Tensor& b = bias.value();
  if (w.rank() != 2 || xv.rank() > 2 || xv.cols() != w.rows()) {
    throw DimensionError("affine: input " + xv.shape_string() + " does not match weights " + w.shape_string());
  }
  const std::size_t n = xv.rows();
  const std::size_t p = w.rows();
  const std::size_t q = w.cols();
  if (b.size() != q) {
    throw DimensionError("affine: bias " + b.shape_string() + " does not match weights " + w.shape_string());
  }

  Tensor out(xv.rank() == 1 ? Shape{q} : Shape{n, q});
  auto o = out.data();
  const auto xd = xv.data();
  const auto wd = w.data();
  const auto bd = b.data();
  for (std::size_t i = 0; i < n; ++i) {
    double* orow = o.data() + i * q;
    std::copy(bd.begin(), bd.end(), orow);
    for (std::size_t k = 0; k < p; ++k) {
      const double xk = xd[i * p + k];
      if (xk == 0.0) continue;
      const double* wrow = wd.data() + k * q;
      for (std::size_t j = 0; j < q; ++j) orow[j] += xk * wrow[j];
    }
  }

  const std::size_t xi = x.id(), wi = weights.id(), bi = bias.id();
  return tape.record(std::move(out), {x, weights, bias}, [xi, wi, bi, n, p, q](Tape& t, std::size_t self) {
    const auto g = t.grad(self).data();
    const auto xd = t.value(xi).data();
    const auto wd = t.value(wi).data();
    if (Tensor* gb = t.grad_sink(bi)) {
      auto gbd = gb->data();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < q; ++j) gbd[j] += g[i * q + j];
    }
    if (Tensor* gw = t.grad_sink(wi)) {
      auto gwd = gw->data();
      for (std::size_t i = 0; i < n; ++i) {
        const double* grow = g.data() + i * q;
        for (std::size_t k = 0; k < p; ++k) {
          const double xk = xd[i * p + k];
          if (xk == 0.0) continue;
          double* gwrow = gwd.data() + k * q;
          for (std::size_t j = 0; j < q; ++j) gwrow[j] += xk * grow[j];
        }
      }
    }
    if (Tensor* gx = t.grad_sink(xi)) {
      auto gxd = gx->data();
      for (std::size_t i = 0; i < n; ++i) {
        const double* grow = g.data() + i * q;
        for (std::size_t k = 0; k < p; ++k) {
          const double* wrow = wd.data() + k * q;
          double acc = 0.0;
          for (std::size_t j = 0; j < q; ++j) acc += wrow[j] * grow[j];
          gxd[i * p + k] += acc;
        }
      }
    }
  });
}

Var conv1d_window(Var seq, Var filters, Var bias, std::size_t window) {
  Tape& tape = tape_of(seq);
  const Tensor& s = seq.value();
  const Tensor& f = filters.value();
  const Tensor& b = bias.value();
  if (window == 0) throw DimensionError("conv1d_window: window must be at least 1");
  if (s.rank() != 2) throw DimensionError("conv1d_window: sequence must be T×d, got " + s.shape_string());
  const std::size_t steps = s.rows();
  const std::size_t d = s.cols();
  if (steps < window) {
    throw SequenceTooShortError("conv1d_window: sequence of length " + std::to_string(steps) +
                                " is shorter than window " + std::to_string(window));
  }
  const std::size_t span = window * d;
  if (f.rank() != 2 || f.rows() != span) {
    throw DimensionError("conv1d_window: filters " + f.shape_string() + " do not match window " +
                         std::to_string(window) + " over sequence " + s.shape_string());
  }
  const std::size_t nf = f.cols();
  if (b.size() != nf) throw DimensionError("conv1d_window: bias " + b.shape_string() + " vs filters " + f.shape_string());

  const std::size_t out_rows = steps - window + 1;
  Tensor out({out_rows, nf});
  auto o = out.data();
  const auto sd = s.data();
  const auto fd = f.data();
  const auto bd = b.data();
  for (std::size_t t = 0; t < out_rows; ++t) {
    double* orow = o.data() + t * nf;
    std::copy(bd.begin(), bd.end(), orow);
    const double* win = sd.data() + t * d;  // window rows are contiguous
    for (std::size_t r = 0; r < span; ++r) {
      const double xr = win[r];
      if (xr == 0.0) continue;
      const double* frow = fd.data() + r * nf;
      for (std::size_t j = 0; j < nf; ++j) orow[j] += xr * frow[j];
    }
  }

  const std::size_t si = seq.id(), fi = filters.id(), bi = bias.id();
  return tape.record(std::move(out), {seq, filters, bias},
                     [si, fi, bi, out_rows, span, nf, d](Tape& t, std::size_t self) {
                       const auto g = t.grad(self).data();
                       const auto sd = t.value(si).data();
                       const auto fd = t.value(fi).data();
                       if (Tensor* gb = t.grad_sink(bi)) {
                         auto gbd = gb->data();
                         for (std::size_t r = 0; r < out_rows; ++r)
                           for (std::size_t j = 0; j < nf; ++j) gbd[j] += g[r * nf + j];
                       }
                       if (Tensor* gf = t.grad_sink(fi)) {
                         auto gfd = gf->data();
                         for (std::size_t r = 0; r < out_rows; ++r) {
                           const double* win = sd.data() + r * d;
                           const double* grow = g.data() + r * nf;
                           for (std::size_t k = 0; k < span; ++k) {
                             const double xk = win[k];
                             if (xk == 0.0) continue;
                             double* gfrow = gfd.data() + k * nf;
                             for (std::size_t j = 0; j < nf; ++j) gfrow[j] += xk * grow[j];
                           }
                         }
                       }
                       if (Tensor* gs = t.grad_sink(si)) {
                         auto gsd = gs->data();
                         for (std::size_t r = 0; r < out_rows; ++r) {
                           const double* grow = g.data() + r * nf;
                           double* gwin = gsd.data() + r * d;
                           for (std::size_t k = 0; k < span; ++k) {
                             const double* frow = fd.data() + k * nf;
                             double acc = 0.0;
                             for (std::size_t j = 0; j < nf; ++j) acc += frow[j] * grow[j];
                             gwin[k] += acc;
                           }
                         }
                       }
                     });
}

Var max_pool_rows(Var x) {
  Tape& tape = tape_of(x);
  const Tensor& xv = x.value();
  if (xv.rank() != 2) throw DimensionError("max_pool_rows: expected a matrix, got " + xv.shape_string());
  const std::size_t m = xv.rows();
  const std::size_t k = xv.cols();
  Tensor out({k});
  std::vector<std::size_t> argmax(k, 0);
  for (std::size_t j = 0; j < k; ++j) out[j] = xv.at(0, j);
  for (std::size_t i = 1; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double v = xv.at(i, j);
      if (v > out[j]) {  // strict: ties keep the first row
        out[j] = v;
        argmax[j] = i;
      }
    }
  }
  const std::size_t xi = x.id();
  return tape.record(std::move(out), {x}, [xi, k, argmax = std::move(argmax)](Tape& t, std::size_t self) {
    Tensor* gx = t.grad_sink(xi);
    if (gx == nullptr) return;
    const auto g = t.grad(self).data();
    for (std::size_t j = 0; j < k; ++j) gx->at(argmax[j], j) += g[j];
  });
}

Var activation(Var x, Activation kind) {
  Tape& tape = tape_of(x);
  Tensor out = x.value();
  for (double& v : out.data()) {
    v = kind == Activation::relu ? std::max(v, 0.0) : 1.0 / (1.0 + std::exp(-v));
  }
  const std::size_t xi = x.id();
  const std::size_t n = out.size();
  return tape.record(std::move(out), {x}, [xi, n, kind](Tape& t, std::size_t self) {
    Tensor* gx = t.grad_sink(xi);
    if (gx == nullptr) return;
    const auto g = t.grad(self).data();
    const auto y = t.value(self).data();
    auto gd = gx->data();
    for (std::size_t i = 0; i < n; ++i) {
      const double local = kind == Activation::relu ? (y[i] > 0.0 ? 1.0 : 0.0) : y[i] * (1.0 - y[i]);
      gd[i] += g[i] * local;
    }
  });
}

Var dropout(Var x, double rate, Mode mode, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) throw ConfigError("dropout rate must lie in [0, 1), got " + std::to_string(rate));
  if (mode == Mode::eval || rate == 0.0) return x;
  Tape& tape = tape_of(x);
  const double keep_scale = 1.0 / (1.0 - rate);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Tensor mask(x.shape());
  for (double& m : mask.data()) m = uniform(rng) < rate ? 0.0 : keep_scale;
  Tensor out = x.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= mask[i];
  const std::size_t xi = x.id();
  return tape.record(std::move(out), {x}, [xi, mask = std::move(mask)](Tape& t, std::size_t self) {
    Tensor* gx = t.grad_sink(xi);
    if (gx == nullptr) return;
    const auto g = t.grad(self).data();
    for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i] * mask[i];
  });
}

Var cosine_similarity(Var u, Var v) {
  Tape& tape = tape_of(u);
  require_same_shape("cosine_similarity", u, v);
  const auto ud = u.value().data();
  const auto vd = v.value().data();
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < ud.size(); ++i) {
    uv += ud[i] * vd[i];
    uu += ud[i] * ud[i];
    vv += vd[i] * vd[i];
  }
  const double nu = std::sqrt(uu);
  const double nv = std::sqrt(vv);
  if (!(nu > 0.0) || !(nv > 0.0)) throw DegenerateVectorError("cosine_similarity: zero-norm input");
  const double g = uv / (nu * nv);
  const std::size_t ui = u.id(), vi = v.id();
  return tape.record(Tensor::scalar(g), {u, v}, [ui, vi, nu, nv, g](Tape& t, std::size_t self) {
    const double go = t.grad(self)[0];
    const auto ud = t.value(ui).data();
    const auto vd = t.value(vi).data();
    // ∂g/∂u = v/(‖u‖‖v‖) − g·u/‖u‖², symmetric in v.
    if (Tensor* gu = t.grad_sink(ui)) {
      for (std::size_t i = 0; i < ud.size(); ++i) (*gu)[i] += go * (vd[i] / (nu * nv) - g * ud[i] / (nu * nu));
    }
    if (Tensor* gv = t.grad_sink(vi)) {
      for (std::size_t i = 0; i < vd.size(); ++i) (*gv)[i] += go * (ud[i] / (nu * nv) - g * vd[i] / (nv * nv));
    }
  });
}

Var concat(std::span<const Var> parts) {
  if (parts.empty()) throw ContractError("concat: no inputs");
  Tape& tape = tape_of(parts.front());
  std::vector<double> data;
  std::vector<std::size_t> ids;
  std::vector<std::size_t> offsets;
  for (const Var& p : parts) {
    require_vector("concat", p);
    offsets.push_back(data.size());
    ids.push_back(p.id());
    const auto d = p.value().data();
    data.insert(data.end(), d.begin(), d.end());
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return tape.record(Tensor::vector(std::move(data)), inputs,
                     [ids = std::move(ids), offsets = std::move(offsets)](Tape& t, std::size_t self) {
                       const auto g = t.grad(self).data();
                       for (std::size_t p = 0; p < ids.size(); ++p) {
                         Tensor* gp = t.grad_sink(ids[p]);
                         if (gp == nullptr) continue;
                         for (std::size_t i = 0; i < gp->size(); ++i) (*gp)[i] += g[offsets[p] + i];
                       }
                     });
}

Var concat(std::initializer_list<Var> parts) { return concat(std::span<const Var>(parts.begin(), parts.size())); }

Var reshape(Var x, Shape shape) {
  Tape& tape = tape_of(x);
  if (shape_size(shape) != x.size()) {
    throw DimensionError("reshape: cannot view " + x.value().shape_string() + " as " + shape_string(shape));
  }
  Tensor out(std::move(shape), x.value().values());
  const std::size_t xi = x.id();
  return tape.record(std::move(out), {x}, [xi](Tape& t, std::size_t self) {
    Tensor* gx = t.grad_sink(xi);
    if (gx == nullptr) return;
    const auto g = t.grad(self).data();
    for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i];
  });
}

Var gather_rows(Var table, std::span<const std::size_t> indices) {
  Tape& tape = tape_of(table);
  const Tensor& tv = table.value();
  if (tv.rank() != 2) throw DimensionError("gather_rows: expected a table, got " + tv.shape_string());
  if (indices.empty()) throw ContractError("gather_rows: no rows requested");
  const std::size_t d = tv.cols();
  Tensor out({indices.size(), d});
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= tv.rows()) {
      throw CatalogError("row index " + std::to_string(indices[r]) + " out of range for table of " +
                         std::to_string(tv.rows()) + " rows");
    }
    std::ranges::copy(tv.row(indices[r]), out.row(r).begin());
  }
  const std::size_t ti = table.id();
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return tape.record(std::move(out), {table}, [ti, d, idx = std::move(idx)](Tape& t, std::size_t self) {
    Tensor* gt = t.grad_sink(ti);
    if (gt == nullptr) return;
    const auto g = t.grad(self).data();
    for (std::size_t r = 0; r < idx.size(); ++r) {
      auto dst = gt->row(idx[r]);
      for (std::size_t j = 0; j < d; ++j) dst[j] += g[r * d + j];
    }
  });
}

Var row(Var table, std::size_t index) {
  Tape& tape = tape_of(table);
  const Tensor& tv = table.value();
  if (tv.rank() != 2) throw DimensionError("row: expected a table, got " + tv.shape_string());
  if (index >= tv.rows()) {
    throw CatalogError("row index " + std::to_string(index) + " out of range for table of " +
                       std::to_string(tv.rows()) + " rows");
  }
  const auto src = tv.row(index);
  const std::size_t ti = table.id();
  return tape.record(Tensor::vector(std::vector<double>(src.begin(), src.end())), {table},
                     [ti, index](Tape& t, std::size_t self) {
                       Tensor* gt = t.grad_sink(ti);
                       if (gt == nullptr) return;
                       const auto g = t.grad(self).data();
                       auto dst = gt->row(index);
                       for (std::size_t j = 0; j < g.size(); ++j) dst[j] += g[j];
                     });
}

namespace {

template <typename Forward, typename Backward>
Var binary_elementwise(const char* name, Var a, Var b, Forward fwd, Backward bwd) {
  Tape& tape = tape_of(a);
  require_same_shape(name, a, b);
  Tensor out(a.shape());
  const auto ad = a.value().data();
  const auto bd = b.value().data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(ad[i], bd[i]);
  const std::size_t ai = a.id(), bi = b.id();
  return tape.record(std::move(out), {a, b}, [ai, bi, bwd](Tape& t, std::size_t self) {
    const auto g = t.grad(self).data();
    const auto ad = t.value(ai).data();
    const auto bd = t.value(bi).data();
    Tensor* ga = t.grad_sink(ai);
    Tensor* gb = t.grad_sink(bi);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto [da, db] = bwd(ad[i], bd[i]);
      if (ga != nullptr) (*ga)[i] += g[i] * da;
      if (gb != nullptr) (*gb)[i] += g[i] * db;
    }
  });
}

}  // namespace

Var add(Var a, Var b) {
  return binary_elementwise(
      "add", a, b, [](double x, double y) { return x + y; },
      [](double, double) { return std::pair{1.0, 1.0}; });
}

Var sub(Var a, Var b) {
  return binary_elementwise(
      "sub", a, b, [](double x, double y) { return x - y; },
      [](double, double) { return std::pair{1.0, -1.0}; });
}

Var mul(Var a, Var b) {
  return binary_elementwise(
      "mul", a, b, [](double x, double y) { return x * y; },
      [](double x, double y) { return std::pair{y, x}; });
}

Var scale_shift(Var x, double scale, double shift) {
  Tape& tape = tape_of(x);
  Tensor out = x.value();
  for (double& v : out.data()) v = scale * v + shift;
  const std::size_t xi = x.id();
  return tape.record(std::move(out), {x}, [xi, scale](Tape& t, std::size_t self) {
    Tensor* gx = t.grad_sink(xi);
    if (gx == nullptr) return;
    const auto g = t.grad(self).data();
    for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += scale * g[i];
  });
}

Var square(Var x) {
  Tape& tape = tape_of(x);
  Tensor out = x.value();
  for (double& v : out.data()) v = v * v;
  const std::size_t xi = x.id();
  return tape.record(std::move(out), {x}, [xi](Tape& t, std::size_t self) {
    Tensor* gx = t.grad_sink(xi);
    if (gx == nullptr) return;
    const auto g = t.grad(self).data();
    const auto xd = t.value(xi).data();
    for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += 2.0 * xd[i] * g[i];
  });
}

Var gate_mix(Var z, Var a, Var b) {
  Tape& tape = tape_of(z);
  require_same_shape("gate_mix", z, a);
  require_same_shape("gate_mix", a, b);
  Tensor out(z.shape());
  const auto zd = z.value().data();
  const auto ad = a.value().data();
  const auto bd = b.value().data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = zd[i] * ad[i] + (1.0 - zd[i]) * bd[i];
  const std::size_t zi = z.id(), ai = a.id(), bi = b.id();
  return tape.record(std::move(out), {z, a, b}, [zi, ai, bi](Tape& t, std::size_t self) {
    const auto g = t.grad(self).data();
    const auto zd = t.value(zi).data();
    const auto ad = t.value(ai).data();
    const auto bd = t.value(bi).data();
    Tensor* gz = t.grad_sink(zi);
    Tensor* ga = t.grad_sink(ai);
    Tensor* gb = t.grad_sink(bi);
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (gz != nullptr) (*gz)[i] += g[i] * (ad[i] - bd[i]);
      if (ga != nullptr) (*ga)[i] += g[i] * zd[i];
      if (gb != nullptr) (*gb)[i] += g[i] * (1.0 - zd[i]);
    }
  });
}

Var dot(Var a, Var b) {
  Tape& tape = tape_of(a);
  if (a.size() != b.size()) {
    throw DimensionError("dot: sizes " + a.value().shape_string() + " and " + b.value().shape_string() + " differ");
  }
  const auto ad = a.value().data();
  const auto bd = b.value().data();
  double s = 0.0;
  for (std::size_t i = 0; i < ad.size(); ++i) s += ad[i] * bd[i];
  const std::size_t ai = a.id(), bi = b.id();
  return tape.record(Tensor::scalar(s), {a, b}, [ai, bi](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    const auto ad = t.value(ai).data();
    const auto bd = t.value(bi).data();
    if (Tensor* ga = t.grad_sink(ai))
      for (std::size_t i = 0; i < ad.size(); ++i) (*ga)[i] += g * bd[i];
    if (Tensor* gb = t.grad_sink(bi))
      for (std::size_t i = 0; i < bd.size(); ++i) (*gb)[i] += g * ad[i];
  });
}

Var sum(std::span<const Var> terms) {
  if (terms.empty()) throw ContractError("sum: no terms");
  Tape& tape = tape_of(terms.front());
  Tensor out(terms.front().shape());
  std::vector<std::size_t> ids;
  for (const Var& v : terms) {
    require_same_shape("sum", terms.front(), v);
    const auto d = v.value().data();
    for (std::size_t i = 0; i < d.size(); ++i) out[i] += d[i];
    ids.push_back(v.id());
  }
  std::vector<Var> inputs(terms.begin(), terms.end());
  return tape.record(std::move(out), inputs, [ids = std::move(ids)](Tape& t, std::size_t self) {
    const auto g = t.grad(self).data();
    for (std::size_t id : ids) {
      Tensor* gi = t.grad_sink(id);
      if (gi == nullptr) continue;
      for (std::size_t i = 0; i < g.size(); ++i) (*gi)[i] += g[i];
    }
  });
}

Var mean(std::span<const Var> terms) {
  return scale_shift(sum(terms), 1.0 / static_cast<double>(terms.size()), 0.0);
}

}  // namespace ops

double cosine(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw DimensionError("cosine: length mismatch");
  double uv = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    uv += u[i] * v[i];
    uu += u[i] * u[i];
    vv += v[i] * v[i];
  }
  if (!(uu > 0.0) || !(vv > 0.0)) throw DegenerateVectorError("cosine: zero-norm input");
  return uv / (std::sqrt(uu) * std::sqrt(vv));
}

}  // namespace mae
