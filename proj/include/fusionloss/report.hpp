/**
 * Copyright 2026 The fusionloss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include "fusionloss/sweep.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace fusionloss {

/// Written in place of a threshold value when none exists.
inline constexpr const char* kNoThreshold = "none";

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

/// One row per (result, axis): scheme, ancilla, p_succ, network, encoding,
/// axis, threshold_value, units.
void write_results_csv(std::ostream& out, const std::vector<ThresholdResult>& results);

/// Scheme, ancilla, width, photon count, element and layer counts per variant.
void write_schemes_csv(std::ostream& out, const std::vector<ThresholdResult>& results);

std::string results_to_json(const std::vector<ThresholdResult>& results, bool include_slices = true);
std::vector<ThresholdResult> results_from_json(const std::string& text);

void write_slice_csv(std::ostream& out, const SliceData& slice);

/// Boundary of the correctable region: for each x column the y midway between
/// the last correctable and the first uncorrectable sample (or the top edge if
/// the whole column is correctable). Columns with no correctable sample are
/// skipped.
std::vector<std::pair<double, double>> frontier(const SliceData& slice);

void write_slice_svg(std::ostream& out, const SliceData& slice, const std::string& title);

/// Base name used for slice files of one result.
std::string slice_stem(const ThresholdResult& result, const SliceData& slice);

/// Writes the requested formats ("csv", "json", "svg") into `directory` and
/// returns the written paths in order. Throws ContractError if the directory
/// cannot be created or written.
std::vector<std::string> write_report(const std::vector<ThresholdResult>& results,
                                      const std::string& directory,
                                      const std::vector<std::string>& formats);

}  // namespace fusionloss
