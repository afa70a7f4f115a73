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

#include "fusionloss/fock.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fusionloss {

enum class ElementKind { beamsplitter, swap, loss };

/// One placed optical element. Beamsplitters embed (1/sqrt2)[[1,1],[1,-1]] with
/// mode_a as the first row, so the pair is ordered.
struct Element {
  ElementKind kind = ElementKind::swap;
  int mode_a = 0;
  int mode_b = -1;
  double eta = 1.0;

  static Element beamsplitter(int a, int b) { return {ElementKind::beamsplitter, a, b, 1.0}; }
  static Element swap(int a, int b) { return {ElementKind::swap, a, b, 1.0}; }
  static Element loss(int mode, double eta) { return {ElementKind::loss, mode, -1, eta}; }

  bool is_two_mode() const { return kind != ElementKind::loss; }
  friend bool operator==(const Element&, const Element&) = default;
};

using Layer = std::vector<Element>;

/// Layered circuit over a fixed number of modes; elements within a layer act on
/// disjoint modes.
class CircuitLayout {
 public:
  explicit CircuitLayout(int mode_count);
  CircuitLayout(int mode_count, std::vector<Layer> layers);

  int mode_count() const { return mode_count_; }
  int layer_count() const { return static_cast<int>(layers_.size()); }
  const std::vector<Layer>& layers() const { return layers_; }

  /// Appends a layer after validating indices, eta and disjointness.
  void add_layer(Layer layer);

  int count(ElementKind kind) const;

  friend bool operator==(const CircuitLayout&, const CircuitLayout&) = default;

 private:
  int mode_count_;
  std::vector<Layer> layers_;
};

enum class Space { extended, reduced };

/// Embeds one element into a width x width identity. In extended space a loss
/// element couples its mode to `loss_mode` through
/// [[sqrt(eta), sqrt(1-eta)], [sqrt(1-eta), -sqrt(eta)]].
TransferMatrix element_matrix(const Element& element, int width, Space space = Space::reduced,
                              int loss_mode = -1);

struct CompiledCircuit {
  int original_mode_count;
  int loss_mode_count;
  Space space;
  TransferMatrix matrix;
};

/// Ordered product of the layer matrices. Extended space appends one fresh loss
/// mode per loss element, numbered in layer order after the original modes.
CompiledCircuit compile(const CircuitLayout& layout, Space space);

/// Probability that no photon is lost, via the reduced-space subunitary matrix.
double survival_probability(const CircuitLayout& layout, const FockState& input);

/// Same quantity from the extended-space unitary: the input is padded with
/// vacuum loss modes and the probability of outcomes leaving every loss mode
/// empty is summed.
double extended_survival_probability(const CircuitLayout& layout, const FockState& input);

/// Distribution of the number of photons left in the original modes after
/// tracing out the loss modes. Entry r is P(r photons survive). Evolves the full
/// extended sector, so it is meant for small circuits.
std::vector<double> surviving_photon_distribution(const CircuitLayout& layout,
                                                  const FockState& input);

/// Text form: a `modes M` header, an optional `layers L` line, then one record
/// per element: `<bs|swap|loss> <layer> <mode> [mode] [eta]`. `#` starts a comment.
CircuitLayout parse_layout(std::istream& in);
CircuitLayout load_layout(const std::string& path);
void write_layout(std::ostream& out, const CircuitLayout& layout);
std::string to_text(const CircuitLayout& layout);

}  // namespace fusionloss
