// Copyright 2026 The sbalab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON text formats.
//
// Valuation:   {"m": 4, "edges": [{"items": [0, 1], "weight": 1.0}, ...]}
//              {"m": 4, "parts": [{"edges": [...]}, ...]}       (max of parts)
// Profile:     {"agents": [<valuation>, ...]}
// Instance meta sidecar: name, params, expectations, tie rule, critical
// bids, shipped profiles and expected blocks.
//
// Doubles are written with 17 significant digits so values round-trip.

#ifndef SBALAB_VALUATION_IO_HPP_
#define SBALAB_VALUATION_IO_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "sbalab/approximation.hpp"
#include "sbalab/hierarchy.hpp"
#include "sbalab/instances.hpp"
#include "sbalab/valuation.hpp"

namespace sbalab {

std::string valuation_to_json(const Valuation& v);
// Throws ValidationError for malformed edges and ConfigError for malformed
// JSON, naming the offending field.
Valuation valuation_from_json(const std::string& text);

std::string profile_to_json(std::span<const Valuation> vals);
// Accepts a profile or a single valuation (a profile of one).
std::vector<Valuation> profile_from_json(const std::string& text);

std::string meta_to_json(const InstanceMeta& meta);
InstanceMeta meta_from_json(const std::string& text);

std::string classification_to_json(const ClassLabel& label);
std::string certificate_to_json(const ApproxCertificate& cert);

std::string read_text(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it into place.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace sbalab

#endif  // SBALAB_VALUATION_IO_HPP_
