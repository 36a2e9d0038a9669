// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 The mae Authors

#include "mae/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mae/errors.hpp"

namespace mae {
namespace fs = std::filesystem;

namespace {

void put_le(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
  out.write(bytes, 8);
}

double get_le(const unsigned char* bytes) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

Shape parse_shape(const std::string& text, const std::string& source, std::size_t line) {
  Shape shape;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    try {
      std::size_t used = 0;
      const auto e = std::stoull(part, &used);
      if (used != part.size() || e == 0) throw std::invalid_argument(part);
      shape.push_back(e);
    } catch (const std::exception&) {
      throw FormatError(source, line, "bad shape '" + text + "'");
    }
  }
  if (shape.empty()) throw FormatError(source, line, "empty shape");
  return shape;
}

struct Entry {
  std::string name;
  Shape shape;
  std::size_t offset = 0;
  bool trainable = true;
};

std::vector<Entry> read_manifest(const fs::path& dir) {
  const fs::path path = dir / kManifestFile;
  std::ifstream in(path);
  if (!in) throw CheckpointError("cannot open checkpoint manifest " + path.string());
  const std::string source = path.string();

  std::string line;
  std::size_t lineno = 0;
  std::size_t count = 0;
  bool have_count = false;
  std::vector<Entry> entries;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.find('=') == std::string::npos) {
      std::istringstream hs(line);
      std::string key, value;
      hs >> key >> value;
      if (key == "mae-checkpoint" && value != "1") throw FormatError(source, lineno, "unsupported version " + value);
      if (key == "byte-order" && value != "little-endian") throw FormatError(source, lineno, "unsupported byte order");
      if (key == "dtype" && value != "float64") throw FormatError(source, lineno, "unsupported dtype");
      if (key == "count") {
        count = std::stoull(value);
        have_count = true;
      }
      continue;
    }
    Entry e;
    bool has_name = false, has_shape = false, has_offset = false;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, '\t')) {
      const auto eq = field.find('=');
      if (eq == std::string::npos) throw FormatError(source, lineno, "field without '=': " + field);
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "name") {
        e.name = value;
        has_name = true;
      } else if (key == "shape") {
        e.shape = parse_shape(value, source, lineno);
        has_shape = true;
      } else if (key == "offset") {
        e.offset = std::stoull(value);
        has_offset = true;
      } else if (key == "trainable") {
        e.trainable = value == "1";
      }
    }
    if (!has_name || !has_shape || !has_offset) throw FormatError(source, lineno, "parameter line needs name, shape and offset");
    entries.push_back(std::move(e));
  }
  if (!have_count || count != entries.size()) {
    throw CheckpointError("manifest " + source + " declares " + std::to_string(count) + " parameters but lists " +
                          std::to_string(entries.size()));
  }
  return entries;
}

std::vector<unsigned char> read_payload(const fs::path& dir) {
  const fs::path path = dir / kPayloadFile;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint payload " + path.string());
  return std::vector<unsigned char>(std::istreambuf_iterator<char>(in), {});
}

Tensor slice_tensor(const Entry& e, const std::vector<unsigned char>& payload) {
  const std::size_t n = shape_size(e.shape);
  if (e.offset % 8 != 0 || e.offset + 8 * n > payload.size()) {
    throw CheckpointError("parameter '" + e.name + "' lies outside the payload");
  }
  std::vector<double> data(n);
  for (std::size_t i = 0; i < n; ++i) data[i] = get_le(payload.data() + e.offset + 8 * i);
  return Tensor(e.shape, std::move(data));
}

}  // namespace

void save_checkpoint(const ParameterStore& store, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream manifest(dir / kManifestFile, std::ios::trunc);
  std::ofstream payload(dir / kPayloadFile, std::ios::binary | std::ios::trunc);
  if (!manifest || !payload) throw CheckpointError("cannot write checkpoint into " + dir.string());

  manifest << "mae-checkpoint 1\n"
           << "payload " << kPayloadFile << "\n"
           << "byte-order little-endian\n"
           << "dtype float64\n"
           << "count " << store.size() << "\n";
  std::size_t offset = 0;
  for (const auto& p : store) {
    manifest << "name=" << p.name << "\tshape=";
    for (std::size_t i = 0; i < p.value.rank(); ++i) manifest << (i ? "x" : "") << p.value.shape()[i];
    manifest << "\toffset=" << offset << "\ttrainable=" << (p.trainable ? 1 : 0) << "\n";
    for (double v : p.value.data()) put_le(payload, v);
    offset += 8 * p.value.size();
  }
  if (!manifest || !payload) throw CheckpointError("failed writing checkpoint into " + dir.string());
}

ParameterStore load_checkpoint(const fs::path& dir) {
  const auto entries = read_manifest(dir);
  const auto payload = read_payload(dir);
  ParameterStore store;
  for (const auto& e : entries) store.add(e.name, slice_tensor(e, payload), e.trainable);
  return store;
}

void restore_checkpoint(ParameterStore& store, const fs::path& dir) {
  const auto entries = read_manifest(dir);
  const auto payload = read_payload(dir);
  if (entries.size() != store.size()) {
    throw CheckpointError("checkpoint holds " + std::to_string(entries.size()) + " parameters, model expects " +
                          std::to_string(store.size()));
  }
  for (const auto& e : entries) {
    if (!store.contains(e.name)) throw CheckpointError("checkpoint parameter '" + e.name + "' is not part of the model");
    Parameter& p = store.get(e.name);
    if (p.value.shape() != e.shape) {
      throw CheckpointError("parameter '" + e.name + "' has shape " + shape_string(e.shape) + " in checkpoint but " +
                            p.value.shape_string() + " in model");
    }
    p.value = slice_tensor(e, payload);
  }
}

}  // namespace mae
