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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "tcon/errors.hpp"
#include "tcon/pairing.hpp"

using namespace tcon;

namespace {

size_t sum(const std::vector<size_t>& v) {
  size_t s = 0;
  for (size_t x : v) s += x;
  return s;
}

}  // namespace

TEST_CASE("soft label similarity is clamped cosine") {
  CHECK(soft_label_similarity({0.2, 0.8}, {0.2, 0.8}) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(soft_label_similarity({1.0, 0.0}, {0.0, 1.0}) == 0.0);
  CHECK(soft_label_similarity({1.0, 0.0}, {1.0, 1.0}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  // Negative cosine clamps to zero.
  CHECK(soft_label_similarity({1.0, -1.0}, {-1.0, 1.0}) == 0.0);

  CHECK_THROWS_AS((void)soft_label_similarity({1.0}, {1.0, 0.0}), shape_error);
  CHECK_THROWS_AS((void)soft_label_similarity({0.0, 0.0}, {1.0, 0.0}),
                  config_error);
}

TEST_CASE("threshold zero admits the full bipartite set") {
  std::vector<std::vector<double>> src = {{1, 0}, {0, 1}, {0.5, 0.5}};
  std::vector<std::vector<double>> tgt = {{0.7, 0.3}, {0.1, 0.9}};
  PairSet ps = select_pairs(src, tgt, 0.0, 2, 17);
  CHECK(ps.batch_id == 17);
  CHECK(ps.size() == 6);
  for (const auto& p : ps.pairs) CHECK(!p.fallback);
  CHECK(ps.m_source == std::vector<size_t>{2, 2, 2});
  CHECK(ps.m_target == std::vector<size_t>{3, 3});
  CHECK(sum(ps.m_source) == ps.size());
  CHECK(sum(ps.m_target) == ps.size());

  // Ordered by (src, tgt).
  for (size_t k = 1; k < ps.pairs.size(); ++k) {
    const auto& a = ps.pairs[k - 1];
    const auto& b = ps.pairs[k];
    CHECK((a.src < b.src || (a.src == b.src && a.tgt < b.tgt)));
  }
}

TEST_CASE("impossible threshold leaves fallback-only pairs") {
  std::vector<std::vector<double>> src = {{1, 0}, {0.6, 0.4}, {0, 1}};
  std::vector<std::vector<double>> tgt = {{0.8, 0.2}, {0.3, 0.7}};
  PairSet ps = select_pairs(src, tgt, 1.01, 2, 0);
  CHECK(ps.size() == 4);  // each target gets exactly top_m = 2
  for (const auto& p : ps.pairs) CHECK(p.fallback);
  CHECK(ps.m_target == std::vector<size_t>{2, 2});

  // top_m larger than the source batch clamps.
  PairSet all = select_pairs(src, tgt, 1.01, 10, 0);
  CHECK(all.size() == 6);
  CHECK(all.m_target == std::vector<size_t>{3, 3});
}

TEST_CASE("two-by-two example pairs matching classes") {
  // cos(s0,t0) ~ 0.99, cos(s0,t1) ~ 0.24, cos(s1,t0) ~ 0.11, cos(s1,t1) ~ 0.97.
  std::vector<std::vector<double>> src = {{1, 0}, {0, 1}};
  std::vector<std::vector<double>> tgt = {{0.9, 0.1}, {0.2, 0.8}};
  PairSet ps = select_pairs(src, tgt, 0.5, 1, 0);
  REQUIRE(ps.size() == 2);
  CHECK(ps.pairs[0].src == 0);
  CHECK(ps.pairs[0].tgt == 0);
  CHECK(ps.pairs[1].src == 1);
  CHECK(ps.pairs[1].tgt == 1);
  CHECK(!ps.pairs[0].fallback);
  CHECK(!ps.pairs[1].fallback);
  CHECK(ps.pairs[0].similarity ==
        doctest::Approx(0.9 / std::sqrt(0.82)).epsilon(1e-12));
  CHECK(ps.m_source == std::vector<size_t>{1, 1});
  CHECK(ps.m_target == std::vector<size_t>{1, 1});
}

TEST_CASE("fallback ties break by ascending source index") {
  // Both sources equally similar to the unpaired target.
  std::vector<std::vector<double>> src = {{0.5, 0.5}, {0.5, 0.5}, {1, 0}};
  std::vector<std::vector<double>> tgt = {{0, 1}};
  // cos(s0,t0) = cos(s1,t0) ~ 0.707, cos(s2,t0) = 0; threshold keeps all out.
  PairSet one = select_pairs(src, tgt, 0.99, 1, 0);
  REQUIRE(one.size() == 1);
  CHECK(one.pairs[0].src == 0);
  CHECK(one.pairs[0].fallback);

  PairSet two = select_pairs(src, tgt, 0.99, 2, 0);
  REQUIRE(two.size() == 2);
  CHECK(two.pairs[0].src == 0);
  CHECK(two.pairs[1].src == 1);
}

TEST_CASE("pair selection is deterministic and validates inputs") {
  std::vector<std::vector<double>> src = {{0.7, 0.3}, {0.4, 0.6}};
  std::vector<std::vector<double>> tgt = {{0.5, 0.5}, {0.9, 0.1}};
  PairSet a = select_pairs(src, tgt, 0.8, 1, 3);
  PairSet b = select_pairs(src, tgt, 0.8, 1, 3);
  REQUIRE(a.size() == b.size());
  for (size_t k = 0; k < a.size(); ++k) {
    CHECK(a.pairs[k].src == b.pairs[k].src);
    CHECK(a.pairs[k].tgt == b.pairs[k].tgt);
    CHECK(a.pairs[k].similarity == b.pairs[k].similarity);
    CHECK(a.pairs[k].fallback == b.pairs[k].fallback);
  }
  CHECK(sum(a.m_source) == a.size());
  CHECK(sum(a.m_target) == a.size());

  CHECK_THROWS_AS((void)select_pairs({}, tgt, 0.5, 1, 0), config_error);
  CHECK_THROWS_AS((void)select_pairs(src, {}, 0.5, 1, 0), config_error);
  CHECK_THROWS_AS((void)select_pairs(src, tgt, 0.5, 0, 0), config_error);
}
