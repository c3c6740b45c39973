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

#ifndef TCON_ERRORS_HPP
#define TCON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace tcon {

/// Shape or dimension mismatch between operands.
class shape_error : public std::runtime_error {
 public:
  explicit shape_error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration value (out-of-range threshold, bad widths, ...).
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Container magic/version did not match.
class format_error : public std::runtime_error {
 public:
  explicit format_error(const std::string& what) : std::runtime_error(what) {}
};

/// File ended before the declared payload.
class truncation_error : public std::runtime_error {
 public:
  explicit truncation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Inconsistent feature dimensions within one container.
class dimension_error : public std::runtime_error {
 public:
  explicit dimension_error(const std::string& what) : std::runtime_error(what) {}
};

/// A video participates in no co-attention pair; caller should fall back to
/// uniform attention.
class no_pairs_error : public std::runtime_error {
 public:
  explicit no_pairs_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tcon

#endif  // TCON_ERRORS_HPP
