// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace mae {

/// 64-bit FNV-1a. Stable across platforms; used for manifest hashes.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);
std::uint64_t hash_file(const std::filesystem::path& path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Escapes tab, newline, carriage return and backslash for TSV cells.
std::string escape_tsv(std::string_view text);
std::string unescape_tsv(std::string_view text);

/// Derives an independent stream seed for a named purpose.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace mae
