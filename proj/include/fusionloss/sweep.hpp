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

#include "fusionloss/bsm.hpp"
#include "fusionloss/fbqc.hpp"
#include "fusionloss/loss.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace fusionloss {

enum class Axis { p_eff, bs_loss_db, prop_loss_db_per_cm };
inline constexpr std::array<Axis, 3> kAxes{Axis::p_eff, Axis::bs_loss_db,
                                           Axis::prop_loss_db_per_cm};

std::string to_string(Axis axis);
std::string units(Axis axis);
std::optional<Axis> parse_axis(const std::string& name);

/// Value of `axis` at which that loss source is absent.
double ideal_value(Axis axis);
/// Ideal parameters with `axis` set to `value`.
LossParams params_on_axis(Axis axis, double value, double layer_length_um);

struct AxisRange {
  double min = 0.0;
  double max = 1.0;
  int points = 41;
  double at(int i) const;
};

struct SweepConfig {
  std::vector<std::string> schemes{"phi_plus"};
  std::vector<NetworkKind> networks{NetworkKind::six_ring};
  std::vector<EncodingMode> encodings{EncodingMode::shor_2_2};
  AxisRange p_eff{0.9, 1.0, 41};
  AxisRange bs_loss_db{0.0, 0.1, 41};
  AxisRange prop_loss_db_per_cm{0.0, 1.0, 41};
  double layer_length_um = 500.0;
  double bisection_tolerance = 1e-4;
  int worker_count = 1;
  std::string output_dir = "out";
  std::vector<std::string> formats{"csv", "json"};
  std::uint64_t seed = 0;

  const AxisRange& range(Axis axis) const;
  AxisRange& range(Axis axis);
  /// Throws ConfigError.
  void validate() const;
};

/// Parses the JSON run configuration; missing keys keep their defaults.
SweepConfig parse_config(const std::string& json_text);
SweepConfig load_config(const std::string& path);
std::string config_to_json(const SweepConfig& config);

/// Runs `task(i)` for i in [0, count) on `workers` threads. Each index is
/// handled exactly once; callers write results by index.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& task);

/// A catalog scheme with both failure-basis variants, its lossless p_succ and a
/// memo of static-bias p_loss values. Safe to share between threads.
class SchemeEvaluator {
 public:
  explicit SchemeEvaluator(const std::string& name,
                           std::optional<CircuitLayout> layout_override = std::nullopt);

  const std::string& name() const { return xx_.name; }
  const BsmScheme& xx_variant() const { return xx_; }
  const BsmScheme& zz_variant() const { return zz_; }
  double p_succ() const { return p_succ_; }

  /// Static-bias p_loss at `params`, memoized.
  double p_loss(const LossParams& params) const;

 private:
  BsmScheme xx_;
  BsmScheme zz_;
  double p_succ_;
  mutable std::mutex mutex_;
  mutable std::map<std::array<double, 5>, double> memo_;
};

/// Largest loss along `axis` (smallest p_eff) that is still correctable with
/// the other loss sources ideal. Empty when the scheme is not correctable even
/// without loss.
std::optional<double> marginal_threshold(const SchemeEvaluator& scheme, const FusionNetwork& net,
                                         EncodingMode encoding, Axis axis,
                                         double tolerance = 1e-4,
                                         double layer_length_um = 500.0);

struct SliceSample {
  double x;
  double y;
  double p_loss;
  double effective_erasure;
  bool correctable;
};

/// Grid over two axes with the third ideal; samples are row-major in x then y
/// (x index outer).
struct SliceData {
  Axis x_axis;
  Axis y_axis;
  AxisRange x_range;
  AxisRange y_range;
  std::vector<SliceSample> samples;

  const SliceSample& at(int ix, int iy) const;
};

struct SchemeSummary {
  std::string scheme;
  std::string ancilla;
  int modes;
  int photons;
  double p_succ;
  /// Element counts of the XX and ZZ variants.
  std::array<int, 2> beamsplitters;
  std::array<int, 2> swaps;
  std::array<int, 2> layers;
};

SchemeSummary summarize(const SchemeEvaluator& scheme);

struct ThresholdResult {
  SchemeSummary summary;
  NetworkKind network;
  EncodingMode encoding;
  /// Indexed like kAxes.
  std::array<std::optional<double>, 3> marginal;
  std::vector<SliceData> slices;
};

/// The three axis-pair slices for one scheme's p_loss grid, shared by every
/// (network, encoding) pair.
struct LossGrid {
  Axis x_axis;
  Axis y_axis;
  AxisRange x_range;
  AxisRange y_range;
  std::vector<double> p_loss;
};

std::vector<LossGrid> loss_grids(const SchemeEvaluator& scheme, const SweepConfig& config);

/// Full sweep: marginal thresholds and slices for every configured
/// (scheme, network, encoding).
std::vector<ThresholdResult> sweep_slices(const SweepConfig& config);

struct ValidationCheck {
  std::string name;
  double value;
  std::optional<double> expected;
  double tolerance;
  bool pass;
  std::string note;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_pass() const;
};

/// Lossless p_succ of every catalog scheme and the min_p_succ reproductions.
ValidationReport validate_catalog();

struct JointCheck {
  std::string scheme;
  NetworkKind network;
  EncodingMode encoding;
  LossParams params;
  double p_succ;
  double p_loss;
  ErasureAssessment assessment;
};

JointCheck joint_check(const SchemeEvaluator& scheme, const FusionNetwork& net,
                       EncodingMode encoding, const LossParams& params);

}  // namespace fusionloss
