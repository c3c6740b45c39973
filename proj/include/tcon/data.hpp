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

#ifndef TCON_DATA_HPP
#define TCON_DATA_HPP

#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "tcon/coattention.hpp"

namespace tcon {

using Dataset = std::vector<FeatureSequence>;

/// Amplitude of the per-video static scene direction inside background
/// segments, in units of noise_stddev.  At the default noise level this puts
/// background segments at roughly the same energy as action-stage segments,
/// so intra-video similarity favors the (class-irrelevant) background while
/// cross-video similarity still favors matching action stages.
constexpr double kBackgroundGain = 10.0;

/// Domain affine transform applied to target features only.
struct AffineSpec {
  enum class Kind : uint8_t { kIdentity, kScaledRotation, kMatrix };
  Kind kind = Kind::kScaledRotation;
  // kScaledRotation: W = (1-blend)*I + blend*Q with Q a seeded random
  // orthogonal matrix; bias entries ~ N(0, bias_scale^2).
  double blend = 0.3;
  double bias_scale = 0.25;
  // kMatrix: explicit values.
  std::vector<double> matrix;  // d*d row-major
  std::vector<double> bias;    // d
};

/// Synthetic two-domain generator: each video is K segments; S consecutive
/// "action stage" segments carry the class's stage prototypes (plus noise) at
/// a per-video temporal offset; the remaining segments are background noise
/// correlated within the video through a per-video scene direction.
/// Target videos additionally pass through the domain affine transform.
/// noise_stddev = 0 silences backgrounds entirely (zero vectors).
struct SyntheticSpec {
  size_t num_classes = 4;
  size_t feature_dim = 16;
  size_t ks = 8;
  size_t kt = 8;
  size_t stages = 4;
  size_t videos_per_class = 100;
  uint64_t seed = 7;
  int source_offset_min = -1, source_offset_max = 1;
  int target_offset_min = -2, target_offset_max = 2;
  double noise_stddev = 0.1;
  double background_prob = 1.0;  // chance a background segment carries noise
  AffineSpec affine;

  void validate() const;
  static SyntheticSpec from_json(const nlohmann::ordered_json& j);
  nlohmann::ordered_json to_json() const;
};

/// Materialized target-domain transform, exposed for tests.
struct AffineTransform {
  std::vector<double> matrix;  // d*d
  std::vector<double> bias;    // d
  void apply(double* x, size_t d) const;
};

AffineTransform make_affine(const AffineSpec& spec, size_t d, uint64_t seed);

/// Orthonormal stage prototypes per class, [class][stage*d + i].
std::vector<std::vector<double>> make_prototypes(size_t num_classes,
                                                 size_t stages, size_t d,
                                                 uint64_t seed);

std::pair<Dataset, Dataset> generate(const SyntheticSpec& spec);

/// The per-video stage offset the generator would draw; exposed so tests can
/// verify coupling across offset-range changes.
int draw_offset(uint64_t seed, Domain domain, size_t index, int lo, int hi);

// -- FeatureFile binary container ---------------------------------------------
// magic "FSEQ", version u16, count u32, then per video: id u32, domain u8,
// label i32 (-1 = unlabeled), K u16, d u16, K*d f32 little-endian.

void write_features(const std::string& path, const Dataset& sequences);
Dataset read_features(const std::string& path);

/// Exact on-disk size of a dataset in bytes (10 + sum of 13 + 4*K*d).
size_t feature_file_size(const Dataset& sequences);

/// Splits T raw vectors into K contiguous chunks (remainder spread over the
/// earliest chunks) and averages each chunk.
FeatureSequence partition_segments(const Tensor& raw, size_t k);

/// Mean over same-class source/target pairs of the mean absolute distance
/// between each stage row's argmax column and the row index in A^st.
/// Meaningful on noise-free specs where the band structure is exact.
double temporal_misalignment_statistic(const Dataset& source,
                                       const Dataset& target);

}  // namespace tcon

#endif  // TCON_DATA_HPP
