/*
 * Copyright 2026 The TCoN Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "tcon/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <unordered_map>

#include "tcon/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint serialization assumes a little-endian host");

namespace tcon {

namespace {

constexpr char kMagic[4] = {'T', 'C', 'O', 'N'};
constexpr uint16_t kVersion = 1;

template <typename T>
void put(std::ofstream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::ifstream& in, const std::string& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in)
    throw truncation_error("checkpoint " + path + " truncated while reading " +
                           std::to_string(sizeof(T)) + " bytes");
  return v;
}

}  // namespace

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

nlohmann::ordered_json CheckpointMeta::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "tcon-checkpoint";
  j["version"] = kVersion;
  j["d"] = d;
  j["num_classes"] = num_classes;
  j["k_s"] = ks;
  j["k_t"] = kt;
  j["projector_enabled"] = projector_enabled;
  j["mlp_specs"] = {
      {"attention_hidden", widths.attention},
      {"classifier_hidden", widths.classifier},
      {"disc_segment_hidden", widths.disc_segment},
      {"disc_video_hidden", widths.disc_video},
  };
  j["attention_mode"] = attention_mode;
  j["l2_normalize_features"] = l2_normalize_features;
  j["config_hash"] = config_hash;
  j["train_config"] = train_config;
  return j;
}

CheckpointMeta CheckpointMeta::from_json(const nlohmann::ordered_json& j) {
  if (!j.contains("format") || j["format"] != "tcon-checkpoint")
    throw format_error("checkpoint sidecar: missing or wrong format tag");
  CheckpointMeta m;
  m.d = j.at("d").get<size_t>();
  m.num_classes = j.at("num_classes").get<size_t>();
  m.ks = j.at("k_s").get<size_t>();
  m.kt = j.at("k_t").get<size_t>();
  m.projector_enabled = j.at("projector_enabled").get<bool>();
  const auto& specs = j.at("mlp_specs");
  m.widths.attention = specs.at("attention_hidden").get<size_t>();
  m.widths.classifier = specs.at("classifier_hidden").get<size_t>();
  m.widths.disc_segment = specs.at("disc_segment_hidden").get<size_t>();
  m.widths.disc_video = specs.at("disc_video_hidden").get<size_t>();
  m.attention_mode = j.at("attention_mode").get<std::string>();
  m.l2_normalize_features = j.at("l2_normalize_features").get<bool>();
  m.config_hash = j.value("config_hash", std::string());
  if (j.contains("train_config")) m.train_config = j.at("train_config");
  return m;
}

void save_checkpoint(const std::string& path, NetworkSet& nets,
                     const CheckpointMeta& meta) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw format_error("cannot open checkpoint for writing: " + path);
  out.write(kMagic, 4);
  put<uint16_t>(out, kVersion);
  for (Parameter* p : nets.all_params()) {
    put<uint16_t>(out, static_cast<uint16_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    put<uint8_t>(out, 2);
    put<uint32_t>(out, static_cast<uint32_t>(p->value.rows()));
    put<uint32_t>(out, static_cast<uint32_t>(p->value.cols()));
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(double)));
  }
  if (!out) throw format_error("short write to checkpoint: " + path);
  out.close();

  std::ofstream side(path + ".json", std::ios::trunc);
  if (!side) throw format_error("cannot open sidecar for writing: " + path + ".json");
  side << meta.to_json().dump(2) << "\n";
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream side(path + ".json");
  if (!side) throw format_error("checkpoint sidecar missing: " + path + ".json");
  nlohmann::ordered_json j;
  side >> j;

  LoadedCheckpoint loaded;
  loaded.meta = CheckpointMeta::from_json(j);
  const CheckpointMeta& m = loaded.meta;
  loaded.nets = NetworkSet::make(m.d, m.num_classes, m.ks, m.kt,
                                 m.projector_enabled, m.widths, /*seed=*/0);

  std::unordered_map<std::string, Parameter*> by_name;
  for (Parameter* p : loaded.nets.all_params()) by_name[p->name] = p;

  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open checkpoint: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw format_error("checkpoint " + path + ": bad magic");
  uint16_t version = get<uint16_t>(in, path);
  if (version != kVersion)
    throw format_error("checkpoint " + path + ": unsupported version " +
                       std::to_string(version));

  size_t filled = 0;
  while (true) {
    in.peek();
    if (in.eof()) break;
    uint16_t name_len = get<uint16_t>(in, path);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in) throw truncation_error("checkpoint " + path + ": truncated name");
    uint8_t rank = get<uint8_t>(in, path);
    if (rank != 2)
      throw format_error("checkpoint " + path + ": parameter " + name +
                         " has rank " + std::to_string(rank) + ", expected 2");
    uint32_t rows = get<uint32_t>(in, path);
    uint32_t cols = get<uint32_t>(in, path);
    auto it = by_name.find(name);
    if (it == by_name.end())
      throw format_error("checkpoint " + path + ": unknown parameter " + name);
    Parameter* p = it->second;
    if (p->value.rows() != rows || p->value.cols() != cols)
      throw dimension_error("checkpoint " + path + ": parameter " + name +
                            " shape [" + std::to_string(rows) + "x" +
                            std::to_string(cols) + "] does not match [" +
                            std::to_string(p->value.rows()) + "x" +
                            std::to_string(p->value.cols()) + "]");
    in.read(reinterpret_cast<char*>(p->value.data()),
            static_cast<std::streamsize>(p->value.size() * sizeof(double)));
    if (!in)
      throw truncation_error("checkpoint " + path + ": truncated values for " + name);
    ++filled;
  }
  if (filled != by_name.size())
    throw format_error("checkpoint " + path + ": has " + std::to_string(filled) +
                       " parameters, networks need " +
                       std::to_string(by_name.size()));
  return loaded;
}

}  // namespace tcon
