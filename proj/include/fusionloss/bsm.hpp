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

#include "fusionloss/circuit.hpp"
#include "fusionloss/fock.hpp"

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fusionloss {

enum class BellLabel { phi_plus, phi_minus, psi_plus, psi_minus };
inline constexpr std::array<BellLabel, 4> kBellLabels{BellLabel::phi_plus, BellLabel::phi_minus,
                                                      BellLabel::psi_plus, BellLabel::psi_minus};

std::string to_string(BellLabel label);
int xx_eigenvalue(BellLabel label);
int zz_eigenvalue(BellLabel label);

/// Bell state of two dual-rail qubits on modes (h1, v1, h2, v2); |0>_L is a
/// photon in the h rail.
FockState bell_state(BellLabel label);

/// Two-qubit product |a>|b> with a, b in {0, 1} on (h1, v1, h2, v2).
FockState logical_product(int a, int b);
/// |+>|+> on (h1, v1, h2, v2).
FockState plus_plus();

enum class AncillaKind { none, single_pair, two_pairs, phi_plus, a2, phi_plus_b2 };

struct AncillaState {
  AncillaKind kind;
  std::string label;
  /// State over the ancilla's own modes, in the order of BsmScheme::ancilla_modes.
  FockState state;
  int photon_count;
};

AncillaState make_ancilla(AncillaKind kind);
std::string to_string(AncillaKind kind);
std::optional<AncillaKind> parse_ancilla_kind(const std::string& name);

enum class Operator { XX, ZZ };
std::string to_string(Operator op);

struct BsmScheme {
  std::string name;
  CircuitLayout layout;
  AncillaState ancilla;
  /// Positions of h1, v1, h2, v2 in the layout.
  std::array<int, 4> qubit_modes;
  /// Positions of the ancilla modes, matching ancilla.state's mode order.
  std::vector<int> ancilla_modes;
  Operator failure_basis;
  /// Published lossless success probability, when the scheme has one.
  std::optional<double> catalog_p_succ;

  int mode_count() const { return layout.mode_count(); }
  int photon_count() const { return 2 + ancilla.photon_count; }

  /// Places a two-qubit state (4 modes) and the ancilla into the layout's modes.
  FockState embed(const FockState& qubits) const;
};

/// Two beamsplitters plus routing swaps on four modes.
BsmScheme build_regular_bsm(Operator failure_basis);

/// Ancilla-boosted circuit; ancilla must not be `none`.
BsmScheme build_boosted_bsm(AncillaKind ancilla, Operator failure_basis = Operator::XX);

/// The catalog stores failure-measures-XX circuits. The ZZ partner drops the
/// leading beamsplitters acting within each input qubit.
BsmScheme with_failure_basis(const BsmScheme& scheme, Operator failure_basis);

/// Catalog scheme names in a fixed order.
const std::vector<std::string>& catalog_names();
BsmScheme catalog_scheme(const std::string& name, Operator failure_basis = Operator::XX);

enum class OutcomeClass { success, failure, loss, unclassifiable };
std::string to_string(OutcomeClass cls);

struct PatternClass {
  FockPattern pattern;
  OutcomeClass cls;
  /// Identified Bell state on success.
  std::optional<BellLabel> bell;
  /// Measured eigenvalue of the failure operator on failure, 0 otherwise.
  int failure_outcome = 0;
  /// Probability of the pattern for each Bell input.
  std::array<double, 4> probabilities{};
};

struct Classification {
  std::vector<PatternClass> patterns;
  std::array<double, 4> success_per_bell{};
  std::array<double, 4> failure_per_bell{};
  double unclassified_mass = 0.0;

  /// Success probability averaged over the four Bell inputs.
  double p_succ() const;
  /// Class of any detection pattern, including short photon counts.
  OutcomeClass lookup(const FockPattern& pattern, int expected_photons) const;
};

/// Classifies every full-photon-count output pattern reachable from some Bell
/// input. Throws IntegrityError if any pattern is unclassifiable.
Classification classify_patterns(const BsmScheme& scheme);
/// Same, but reports unclassifiable patterns instead of throwing.
Classification classify_patterns_unchecked(const BsmScheme& scheme);

double success_probability(const BsmScheme& scheme);

/// Structured text: name, ancilla, widths, circuit records and classification table.
void export_scheme(std::ostream& out, const BsmScheme& scheme);

}  // namespace fusionloss
