// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "mae/tape.hpp"
#include "mae/tensor.hpp"

namespace mae {

enum class Mode { train, eval };

enum class Activation { relu, sigmoid };

using Rng = std::mt19937_64;

namespace ops {

/// x[n×p]·W[p×q] + b[q]. A rank-1 x of length p yields a rank-1 result of length q.
Var affine(Var x, Var weights, Var bias);

/// Valid 1-D convolution: row t of the result is the affine map of the
/// flattened window seq[t .. t+window-1]. filters is (window·d)×F.
Var conv1d_window(Var seq, Var filters, Var bias, std::size_t window);

/// Column-wise maximum over rows; the gradient goes to the first maximal row.
Var max_pool_rows(Var x);

Var activation(Var x, Activation kind);
inline Var relu(Var x) { return activation(x, Activation::relu); }
inline Var sigmoid(Var x) { return activation(x, Activation::sigmoid); }

/// Inverted dropout. Identity in eval mode or at rate 0.
Var dropout(Var x, double rate, Mode mode, Rng& rng);

/// u·v / (‖u‖‖v‖) as a scalar; throws DegenerateVectorError on a zero-norm input.
Var cosine_similarity(Var u, Var v);

/// Joins rank-1 vectors end to end.
Var concat(std::span<const Var> parts);
Var concat(std::initializer_list<Var> parts);

/// Same data under a new shape of equal size.
Var reshape(Var x, Shape shape);

/// Selects rows of a table. The gradient scatters back into the selected rows only.
Var gather_rows(Var table, std::span<const std::size_t> indices);
/// Single row as a rank-1 vector.
Var row(Var table, std::size_t index);

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
/// scale·x + shift, elementwise.
Var scale_shift(Var x, double scale, double shift);
Var square(Var x);
/// z⊙a + (1−z)⊙b.
Var gate_mix(Var z, Var a, Var b);
/// Flattened inner product; a scalar.
Var dot(Var a, Var b);
/// Elementwise sum of equally shaped values.
Var sum(std::span<const Var> terms);
Var mean(std::span<const Var> terms);

}  // namespace ops

/// Plain cosine similarity for decoding; no tape involved.
double cosine(std::span<const double> u, std::span<const double> v);

}  // namespace mae
