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
#include "fusionloss/circuit.hpp"

#include <array>

namespace fusionloss {

/// 10^(-db/10). Throws ContractError for negative input.
double db_to_transmission(double db);

/// Hardware loss parameters. Efficiencies are probabilities; losses are in dB.
struct LossParams {
  double p_gen = 1.0;
  double p_det = 1.0;
  double bs_loss_db = 0.0;
  double prop_loss_db_per_cm = 0.0;
  double layer_length_um = 500.0;

  /// p_gen * p_det.
  double p_eff() const { return p_gen * p_det; }
  /// Transmission of one layer of waveguide.
  double eta_layer() const;
  /// Transmission of one beamsplitter output.
  double eta_bs() const;

  void validate() const;

  /// Parameters with the combined efficiency carried entirely by p_gen.
  static LossParams combined(double p_eff, double bs_loss_db, double prop_loss_db_per_cm,
                             double layer_length_um = 500.0);

  friend bool operator==(const LossParams&, const LossParams&) = default;
};

struct LossySchemeInstance {
  BsmScheme base;
  LossParams params;
  CircuitLayout instrumented_layout;
};

/// Inserts loss channels into the scheme's layout: p_eff on every mode before
/// the first layer, then after each layer eta_bs on both outputs of each
/// beamsplitter followed by eta_layer on every mode. Swaps are lossless and
/// channels with transmission exactly 1 are omitted.
LossySchemeInstance instrument(const BsmScheme& base, const LossParams& params);

/// 1 - survival probability of `qubits` (a two-qubit state on h1 v1 h2 v2)
/// tensored with the scheme ancilla, using the reduced-space matrix.
double compute_p_loss(const LossySchemeInstance& instance, const FockState& qubits);
/// Default input |+>|+>.
double compute_p_loss(const LossySchemeInstance& instance);

/// The same quantity from the extended-space unitary with explicit loss modes.
double compute_p_loss_extended(const LossySchemeInstance& instance, const FockState& qubits);

struct LossProfile {
  double default_input = 0.0;
  /// |00>, |01>, |10>, |11>.
  std::array<double, 4> computational{};
  /// Largest of the five; this is the value used downstream.
  double maximum = 0.0;
};

LossProfile p_loss_profile(const LossySchemeInstance& instance);

/// Static bias: both failure-basis variants of a scheme are run with equal
/// probability and share the larger of their two worst-case losses.
double static_bias_p_loss(const BsmScheme& xx_variant, const BsmScheme& zz_variant,
                          const LossParams& params);

}  // namespace fusionloss
