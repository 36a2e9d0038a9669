// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mae::data {

/// Lowercases ASCII letters, splits on whitespace, and emits every ASCII
/// punctuation character as its own token. Bytes outside ASCII pass through
/// unchanged, so UTF-8 words stay intact.
std::vector<std::string> tokenize(std::string_view text);

std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace mae::data
