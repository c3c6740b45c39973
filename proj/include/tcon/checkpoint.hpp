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

#ifndef TCON_CHECKPOINT_HPP
#define TCON_CHECKPOINT_HPP

#include <string>

#include "json.hpp"
#include "tcon/networks.hpp"

namespace tcon {

/// What evaluation and dump tooling need to rebuild the networks and drive
/// them the way training did.  Stored as a JSON sidecar next to the binary
/// parameter file (path + ".json").
struct CheckpointMeta {
  size_t d = 0;
  size_t num_classes = 0;
  size_t ks = 0, kt = 0;
  bool projector_enabled = true;
  NetworkSet::Widths widths;
  std::string attention_mode = "predicted";  // predicted | self | uniform
  bool l2_normalize_features = false;
  std::string config_hash;                   // fnv1a of the config dump, hex
  nlohmann::ordered_json train_config;       // full config for provenance

  nlohmann::ordered_json to_json() const;
  static CheckpointMeta from_json(const nlohmann::ordered_json& j);
};

struct LoadedCheckpoint {
  NetworkSet nets;
  CheckpointMeta meta;
};

/// Binary layout: magic "TCON", version u16, then one record per parameter:
/// name length u16, UTF-8 name, rank u8, dims u32 each, f64 little-endian
/// values.  Records run to end of file.
void save_checkpoint(const std::string& path, NetworkSet& nets,
                     const CheckpointMeta& meta);

LoadedCheckpoint load_checkpoint(const std::string& path);

uint64_t fnv1a(const std::string& s);

}  // namespace tcon

#endif  // TCON_CHECKPOINT_HPP
