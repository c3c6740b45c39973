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

#include "tcon/data.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "tcon/errors.hpp"
#include "tcon/kernels.hpp"
#include "tcon/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "feature file serialization assumes a little-endian host");

namespace tcon {

namespace {

// Gram-Schmidt over the rows of an n x d gaussian draw.
std::vector<double> orthonormal_rows(Rng& rng, size_t n, size_t d) {
  std::vector<double> rows(n * d);
  for (size_t i = 0; i < n; ++i) {
    while (true) {
      for (size_t c = 0; c < d; ++c) rows[i * d + c] = rng.normal();
      for (size_t p = 0; p < i; ++p) {
        double dot = 0.0;
        for (size_t c = 0; c < d; ++c) dot += rows[i * d + c] * rows[p * d + c];
        for (size_t c = 0; c < d; ++c) rows[i * d + c] -= dot * rows[p * d + c];
      }
      double n2 = 0.0;
      for (size_t c = 0; c < d; ++c) n2 += rows[i * d + c] * rows[i * d + c];
      if (n2 > 1e-12) {
        double inv = 1.0 / std::sqrt(n2);
        for (size_t c = 0; c < d; ++c) rows[i * d + c] *= inv;
        break;
      }
      // Degenerate draw; redraw this row.
    }
  }
  return rows;
}

int map_offset(double u, int lo, int hi) {
  int span = hi - lo + 1;
  int step = static_cast<int>(u * span);
  if (step >= span) step = span - 1;
  return lo + step;
}

void check_offsets(size_t k, size_t stages, int lo, int hi, const char* which) {
  if (lo > hi) throw config_error(std::string(which) + " offset range inverted");
  int base = static_cast<int>((k - stages) / 2);
  if (base + lo < 0 || base + hi + static_cast<int>(stages) > static_cast<int>(k))
    throw config_error(std::string(which) +
                       " offsets push action stages outside the video");
}

}  // namespace

void SyntheticSpec::validate() const {
  if (num_classes < 2) throw config_error("num_classes must be >= 2");
  if (feature_dim < 1) throw config_error("feature_dim must be >= 1");
  if (stages < 1) throw config_error("stages must be >= 1");
  if (stages > ks || stages > kt)
    throw config_error("stages must be <= min(k_s, k_t)");
  if (stages > feature_dim)
    throw config_error("stages must be <= feature_dim (orthonormal prototypes)");
  if (videos_per_class < 1) throw config_error("videos_per_class must be >= 1");
  if (noise_stddev < 0.0) throw config_error("noise_stddev must be >= 0");
  if (background_prob < 0.0 || background_prob > 1.0)
    throw config_error("background_prob must be in [0, 1]");
  check_offsets(ks, stages, source_offset_min, source_offset_max, "source");
  check_offsets(kt, stages, target_offset_min, target_offset_max, "target");
  if (affine.kind == AffineSpec::Kind::kScaledRotation &&
      (affine.blend < 0.0 || affine.blend > 1.0))
    throw config_error("affine blend must be in [0, 1]");
  if (affine.kind == AffineSpec::Kind::kMatrix) {
    if (affine.matrix.size() != feature_dim * feature_dim)
      throw config_error("affine matrix must be d*d");
    if (affine.bias.size() != feature_dim)
      throw config_error("affine bias must be length d");
  }
}

SyntheticSpec SyntheticSpec::from_json(const nlohmann::ordered_json& j) {
  SyntheticSpec s;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key == "num_classes") s.num_classes = it->get<size_t>();
    else if (key == "feature_dim") s.feature_dim = it->get<size_t>();
    else if (key == "k_s") s.ks = it->get<size_t>();
    else if (key == "k_t") s.kt = it->get<size_t>();
    else if (key == "stages") s.stages = it->get<size_t>();
    else if (key == "videos_per_class") s.videos_per_class = it->get<size_t>();
    else if (key == "seed") s.seed = it->get<uint64_t>();
    else if (key == "source_offset") {
      s.source_offset_min = it->at(0).get<int>();
      s.source_offset_max = it->at(1).get<int>();
    } else if (key == "target_offset") {
      s.target_offset_min = it->at(0).get<int>();
      s.target_offset_max = it->at(1).get<int>();
    } else if (key == "noise_stddev") s.noise_stddev = it->get<double>();
    else if (key == "background_prob") s.background_prob = it->get<double>();
    else if (key == "affine") {
      const auto& a = *it;
      std::string kind = a.at("kind").get<std::string>();
      if (kind == "identity") {
        s.affine.kind = AffineSpec::Kind::kIdentity;
      } else if (kind == "scaled_rotation") {
        s.affine.kind = AffineSpec::Kind::kScaledRotation;
        s.affine.blend = a.value("blend", 0.3);
        s.affine.bias_scale = a.value("bias_scale", 0.25);
      } else if (kind == "matrix") {
        s.affine.kind = AffineSpec::Kind::kMatrix;
        for (const auto& row : a.at("matrix"))
          for (const auto& v : row) s.affine.matrix.push_back(v.get<double>());
        for (const auto& v : a.at("bias")) s.affine.bias.push_back(v.get<double>());
      } else {
        throw config_error("unknown affine kind: " + kind);
      }
    } else {
      throw config_error("unknown synthetic spec key: " + key);
    }
  }
  s.validate();
  return s;
}

nlohmann::ordered_json SyntheticSpec::to_json() const {
  nlohmann::ordered_json j;
  j["num_classes"] = num_classes;
  j["feature_dim"] = feature_dim;
  j["k_s"] = ks;
  j["k_t"] = kt;
  j["stages"] = stages;
  j["videos_per_class"] = videos_per_class;
  j["seed"] = seed;
  j["source_offset"] = {source_offset_min, source_offset_max};
  j["target_offset"] = {target_offset_min, target_offset_max};
  j["noise_stddev"] = noise_stddev;
  j["background_prob"] = background_prob;
  switch (affine.kind) {
    case AffineSpec::Kind::kIdentity:
      j["affine"] = {{"kind", "identity"}};
      break;
    case AffineSpec::Kind::kScaledRotation:
      j["affine"] = {{"kind", "scaled_rotation"},
                     {"blend", affine.blend},
                     {"bias_scale", affine.bias_scale}};
      break;
    case AffineSpec::Kind::kMatrix: {
      nlohmann::ordered_json a;
      a["kind"] = "matrix";
      size_t d = feature_dim;
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (size_t r = 0; r < d; ++r) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (size_t c = 0; c < d; ++c) row.push_back(affine.matrix[r * d + c]);
        rows.push_back(row);
      }
      a["matrix"] = rows;
      a["bias"] = affine.bias;
      j["affine"] = a;
      break;
    }
  }
  return j;
}

void AffineTransform::apply(double* x, size_t d) const {
  std::vector<double> out(d, 0.0);
  kernels::serial::gemm(matrix.data(), x, out.data(), d, d, 1, false);
  for (size_t i = 0; i < d; ++i) x[i] = out[i] + bias[i];
}

AffineTransform make_affine(const AffineSpec& spec, size_t d, uint64_t seed) {
  AffineTransform t;
  t.matrix.assign(d * d, 0.0);
  t.bias.assign(d, 0.0);
  switch (spec.kind) {
    case AffineSpec::Kind::kIdentity:
      for (size_t i = 0; i < d; ++i) t.matrix[i * d + i] = 1.0;
      break;
    case AffineSpec::Kind::kScaledRotation: {
      Rng rng(derive_seed(seed, "affine"));
      std::vector<double> q = orthonormal_rows(rng, d, d);
      for (size_t r = 0; r < d; ++r)
        for (size_t c = 0; c < d; ++c)
          t.matrix[r * d + c] =
              spec.blend * q[r * d + c] + (r == c ? 1.0 - spec.blend : 0.0);
      for (size_t i = 0; i < d; ++i) t.bias[i] = spec.bias_scale * rng.normal();
      break;
    }
    case AffineSpec::Kind::kMatrix:
      t.matrix = spec.matrix;
      t.bias = spec.bias;
      break;
  }
  return t;
}

std::vector<std::vector<double>> make_prototypes(size_t num_classes,
                                                 size_t stages, size_t d,
                                                 uint64_t seed) {
  Rng rng(derive_seed(seed, "prototypes"));
  std::vector<std::vector<double>> protos(num_classes);
  for (size_t c = 0; c < num_classes; ++c)
    protos[c] = orthonormal_rows(rng, stages, d);
  // Distinct-class sanity: no two classes may share an identical prototype.
  for (size_t a = 0; a < num_classes; ++a)
    for (size_t b = a + 1; b < num_classes; ++b)
      if (protos[a] == protos[b])
        throw config_error("degenerate prototype draw: identical classes");
  return protos;
}

int draw_offset(uint64_t seed, Domain domain, size_t index, int lo, int hi) {
  std::string tag = std::string("video/") +
                    (domain == Domain::kSource ? "s/" : "t/") + std::to_string(index);
  Rng rng(derive_seed(seed, tag));
  return map_offset(rng.uniform(), lo, hi);
}

std::pair<Dataset, Dataset> generate(const SyntheticSpec& spec) {
  spec.validate();
  auto protos = make_prototypes(spec.num_classes, spec.stages, spec.feature_dim,
                                spec.seed);
  AffineTransform affine = make_affine(spec.affine, spec.feature_dim, spec.seed);

  auto build_domain = [&](Domain domain) {
    size_t k = domain == Domain::kSource ? spec.ks : spec.kt;
    int lo = domain == Domain::kSource ? spec.source_offset_min : spec.target_offset_min;
    int hi = domain == Domain::kSource ? spec.source_offset_max : spec.target_offset_max;
    int base = static_cast<int>((k - spec.stages) / 2);
    Dataset out;
    out.reserve(spec.num_classes * spec.videos_per_class);
    for (size_t c = 0; c < spec.num_classes; ++c) {
      for (size_t v = 0; v < spec.videos_per_class; ++v) {
        size_t index = c * spec.videos_per_class + v;
        std::string tag = std::string("video/") +
                          (domain == Domain::kSource ? "s/" : "t/") +
                          std::to_string(index);
        Rng rng(derive_seed(spec.seed, tag));
        int start = base + map_offset(rng.uniform(), lo, hi);

        // Static scene direction shared by this video's background segments.
        // Videos draw it independently, so backgrounds correlate within a
        // video (scenes are static) but not across videos or domains.
        std::vector<double> scene(spec.feature_dim);
        double scene_norm2 = 0.0;
        for (double& x : scene) {
          x = rng.normal();
          scene_norm2 += x * x;
        }
        if (scene_norm2 > 0.0) {
          const double inv = 1.0 / std::sqrt(scene_norm2);
          for (double& x : scene) x *= inv;
        }

        FeatureSequence seq;
        seq.id = static_cast<uint32_t>(index);
        seq.domain = domain;
        seq.label = static_cast<int32_t>(c);
        seq.feats = Tensor(k, spec.feature_dim);
        for (size_t j = 0; j < k; ++j) {
          int stage = static_cast<int>(j) - start;
          if (stage >= 0 && stage < static_cast<int>(spec.stages)) {
            const double* p = protos[c].data() + static_cast<size_t>(stage) * spec.feature_dim;
            for (size_t i = 0; i < spec.feature_dim; ++i)
              seq.feats.at(j, i) =
                  p[i] + (spec.noise_stddev > 0.0 ? spec.noise_stddev * rng.normal() : 0.0);
          } else {
            double b = rng.uniform();
            if (b < spec.background_prob && spec.noise_stddev > 0.0)
              for (size_t i = 0; i < spec.feature_dim; ++i)
                seq.feats.at(j, i) =
                    spec.noise_stddev *
                    (kBackgroundGain * scene[i] + rng.normal());
          }
        }
        if (domain == Domain::kTarget)
          for (size_t j = 0; j < k; ++j)
            affine.apply(&seq.feats.at(j, 0), spec.feature_dim);
        out.push_back(std::move(seq));
      }
    }
    return out;
  };

  return {build_domain(Domain::kSource), build_domain(Domain::kTarget)};
}

// -- FeatureFile --------------------------------------------------------------

namespace {

template <typename T>
void append(std::string& buf, T v) {
  buf.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(const std::string& buf, size_t& cursor, const std::string& path,
       size_t total) {
  if (cursor + sizeof(T) > buf.size())
    throw truncation_error("feature file " + path + " truncated: need " +
                           std::to_string(cursor + sizeof(T)) +
                           " bytes, have " + std::to_string(total));
  T v;
  std::memcpy(&v, buf.data() + cursor, sizeof(T));
  cursor += sizeof(T);
  return v;
}

}  // namespace

size_t feature_file_size(const Dataset& sequences) {
  size_t n = 10;
  for (const FeatureSequence& s : sequences) n += 13 + 4 * s.k() * s.d();
  return n;
}

void write_features(const std::string& path, const Dataset& sequences) {
  if (!sequences.empty()) {
    size_t d = sequences.front().d();
    for (const FeatureSequence& s : sequences) {
      if (s.d() != d)
        throw dimension_error("write_features: mixed feature dims " +
                              std::to_string(d) + " and " + std::to_string(s.d()));
      if (s.k() == 0 || s.k() > 65535 || s.d() > 65535)
        throw config_error("write_features: K/d out of u16 range");
    }
  }
  std::string buf;
  buf.reserve(feature_file_size(sequences));
  buf.append("FSEQ", 4);
  append<uint16_t>(buf, 1);
  append<uint32_t>(buf, static_cast<uint32_t>(sequences.size()));
  for (const FeatureSequence& s : sequences) {
    append<uint32_t>(buf, s.id);
    append<uint8_t>(buf, static_cast<uint8_t>(s.domain));
    append<int32_t>(buf, s.label);
    append<uint16_t>(buf, static_cast<uint16_t>(s.k()));
    append<uint16_t>(buf, static_cast<uint16_t>(s.d()));
    for (size_t i = 0; i < s.feats.size(); ++i)
      append<float>(buf, static_cast<float>(s.feats[i]));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw format_error("cannot open feature file for writing: " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw format_error("short write to feature file: " + path);
}

Dataset read_features(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw format_error("cannot open feature file: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  size_t total = buf.size();
  size_t cursor = 0;
  if (total < 4 || buf.compare(0, 4, "FSEQ") != 0)
    throw format_error("feature file " + path + ": bad magic");
  cursor = 4;
  uint16_t version = take<uint16_t>(buf, cursor, path, total);
  if (version != 1)
    throw format_error("feature file " + path + ": unsupported version " +
                       std::to_string(version));
  uint32_t count = take<uint32_t>(buf, cursor, path, total);
  Dataset out;
  out.reserve(count);
  size_t d_file = 0;
  for (uint32_t n = 0; n < count; ++n) {
    FeatureSequence s;
    s.id = take<uint32_t>(buf, cursor, path, total);
    uint8_t domain = take<uint8_t>(buf, cursor, path, total);
    if (domain > 1)
      throw format_error("feature file " + path + ": bad domain tag " +
                         std::to_string(domain));
    s.domain = static_cast<Domain>(domain);
    s.label = take<int32_t>(buf, cursor, path, total);
    uint16_t k = take<uint16_t>(buf, cursor, path, total);
    uint16_t d = take<uint16_t>(buf, cursor, path, total);
    if (k == 0 || d == 0)
      throw format_error("feature file " + path + ": zero K or d");
    if (d_file == 0) d_file = d;
    if (d != d_file)
      throw dimension_error("feature file " + path + ": dim " + std::to_string(d) +
                            " conflicts with " + std::to_string(d_file));
    s.feats = Tensor(k, d);
    for (size_t i = 0; i < s.feats.size(); ++i)
      s.feats[i] = static_cast<double>(take<float>(buf, cursor, path, total));
    out.push_back(std::move(s));
  }
  return out;
}

FeatureSequence partition_segments(const Tensor& raw, size_t k) {
  size_t t = raw.rows();
  if (k == 0 || t < k)
    throw config_error("partition_segments: need T >= K >= 1, got T=" +
                       std::to_string(t) + " K=" + std::to_string(k));
  FeatureSequence out;
  out.feats = Tensor(k, raw.cols());
  size_t base = t / k, rem = t % k;
  size_t row = 0;
  for (size_t chunk = 0; chunk < k; ++chunk) {
    size_t len = base + (chunk < rem ? 1 : 0);
    for (size_t r = 0; r < len; ++r)
      for (size_t c = 0; c < raw.cols(); ++c)
        out.feats.at(chunk, c) += raw.at(row + r, c);
    double inv = 1.0 / static_cast<double>(len);
    for (size_t c = 0; c < raw.cols(); ++c) out.feats.at(chunk, c) *= inv;
    row += len;
  }
  return out;
}

double temporal_misalignment_statistic(const Dataset& source,
                                       const Dataset& target) {
  double total = 0.0;
  size_t pairs = 0;
  for (const FeatureSequence& s : source) {
    // Band rows = segments with nonzero features (action stages on clean specs).
    std::vector<size_t> band;
    for (size_t j = 0; j < s.k(); ++j) {
      double n2 = 0.0;
      for (size_t c = 0; c < s.d(); ++c) n2 += s.feats.at(j, c) * s.feats.at(j, c);
      if (n2 > 1e-18) band.push_back(j);
    }
    if (band.empty()) continue;
    for (const FeatureSequence& t : target) {
      if (t.label != s.label) continue;
      std::vector<double> a_st = cross_similarity(s, t);
      double acc = 0.0;
      for (size_t j : band) {
        size_t best = 0;
        for (size_t j2 = 1; j2 < t.k(); ++j2)
          if (a_st[j * t.k() + j2] > a_st[j * t.k() + best]) best = j2;
        acc += std::abs(static_cast<double>(best) - static_cast<double>(j));
      }
      total += acc / static_cast<double>(band.size());
      ++pairs;
    }
  }
  return pairs == 0 ? 0.0 : total / static_cast<double>(pairs);
}

}  // namespace tcon
