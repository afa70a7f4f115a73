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

#include "fusionloss/circuit.hpp"

#include "fusionloss/errors.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fusionloss {

using detail::require;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_element(const Element& e, int width) {
  require(e.mode_a >= 0 && e.mode_a < width, "Element: mode index out of range");
  if (e.is_two_mode()) {
    require(e.mode_b >= 0 && e.mode_b < width, "Element: mode index out of range");
    require(e.mode_a != e.mode_b, "Element: two-mode element needs distinct modes");
  } else {
    require(e.eta >= 0.0 && e.eta <= 1.0, "Element: transmissivity must lie in [0, 1]");
  }
}

// Left-multiplies `u` by a 2x2 block acting on rows a and b.
void apply_rows(Matrix& u, int a, int b, double m00, double m01, double m10, double m11) {
  for (Eigen::Index c = 0; c < u.cols(); ++c) {
    const Complex x = u(a, c);
    const Complex y = u(b, c);
    u(a, c) = m00 * x + m01 * y;
    u(b, c) = m10 * x + m11 * y;
  }
}

const char* kind_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::beamsplitter: return "bs";
    case ElementKind::swap: return "swap";
    case ElementKind::loss: return "loss";
  }
  return "?";
}

FockState pad_with_vacuum(const FockState& input, int extra) {
  const FockPattern vac = FockPattern::vacuum(extra);
  FockState padded(input.mode_count() + extra);
  for (const auto& [pattern, value] : input) padded.add(pattern.concat(vac), value);
  return padded;
}

}  // namespace

CircuitLayout::CircuitLayout(int mode_count) : mode_count_(mode_count) {
  require(mode_count >= 1, "CircuitLayout: mode_count must be >= 1");
}

CircuitLayout::CircuitLayout(int mode_count, std::vector<Layer> layers)
    : CircuitLayout(mode_count) {
  for (auto& layer : layers) add_layer(std::move(layer));
}

void CircuitLayout::add_layer(Layer layer) {
  std::vector<bool> used(static_cast<std::size_t>(mode_count_), false);
  auto claim = [&](int mode) {
    require(!used[static_cast<std::size_t>(mode)],
            "CircuitLayout: mode " + std::to_string(mode) + " touched twice in one layer");
    used[static_cast<std::size_t>(mode)] = true;
  };
  for (const auto& e : layer) {
    check_element(e, mode_count_);
    claim(e.mode_a);
    if (e.is_two_mode()) claim(e.mode_b);
  }
  layers_.push_back(std::move(layer));
}

int CircuitLayout::count(ElementKind kind) const {
  int n = 0;
  for (const auto& layer : layers_)
    for (const auto& e : layer) n += e.kind == kind;
  return n;
}

TransferMatrix element_matrix(const Element& element, int width, Space space, int loss_mode) {
  check_element(element, width);
  Matrix u = Matrix::Identity(width, width);
  switch (element.kind) {
    case ElementKind::beamsplitter:
      apply_rows(u, element.mode_a, element.mode_b, kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2);
      return TransferMatrix(std::move(u), MatrixKind::unitary);
    case ElementKind::swap:
      apply_rows(u, element.mode_a, element.mode_b, 0.0, 1.0, 1.0, 0.0);
      return TransferMatrix(std::move(u), MatrixKind::unitary);
    case ElementKind::loss: {
      const double t = std::sqrt(element.eta);
      if (space == Space::reduced) {
        u.row(element.mode_a) *= t;
        return TransferMatrix(std::move(u), MatrixKind::subunitary);
      }
      require(loss_mode >= 0 && loss_mode < width && loss_mode != element.mode_a,
              "element_matrix: extended-space loss element needs its own loss mode");
      const double r = std::sqrt(1.0 - element.eta);
      apply_rows(u, element.mode_a, loss_mode, t, r, r, -t);
      return TransferMatrix(std::move(u), MatrixKind::unitary);
    }
  }
  throw ContractError("element_matrix: unknown element kind");
}

CompiledCircuit compile(const CircuitLayout& layout, Space space) {
  const int m = layout.mode_count();
  const int losses = space == Space::extended ? layout.count(ElementKind::loss) : 0;
  const int width = m + losses;
  Matrix u = Matrix::Identity(width, width);
  int next_loss = m;
  for (const auto& layer : layout.layers()) {
    for (const auto& e : layer) {
      switch (e.kind) {
        case ElementKind::beamsplitter:
          apply_rows(u, e.mode_a, e.mode_b, kInvSqrt2, kInvSqrt2, kInvSqrt2, -kInvSqrt2);
          break;
        case ElementKind::swap:
          u.row(e.mode_a).swap(u.row(e.mode_b));
          break;
        case ElementKind::loss: {
          const double t = std::sqrt(e.eta);
          if (space == Space::reduced) {
            u.row(e.mode_a) *= t;
          } else {
            const double r = std::sqrt(1.0 - e.eta);
            apply_rows(u, e.mode_a, next_loss++, t, r, r, -t);
          }
          break;
        }
      }
    }
  }
  const bool unitary = space == Space::extended || layout.count(ElementKind::loss) == 0;
  return CompiledCircuit{m, losses, space,
                         TransferMatrix(std::move(u), unitary ? MatrixKind::unitary
                                                              : MatrixKind::subunitary)};
}

double survival_probability(const CircuitLayout& layout, const FockState& input) {
  require(input.mode_count() == layout.mode_count(),
          "survival_probability: input width differs from layout");
  require(input.photon_number().has_value(),
          "survival_probability: input must have a definite photon number");
  return transmitted_norm(compile(layout, Space::reduced).matrix, input);
}

double extended_survival_probability(const CircuitLayout& layout, const FockState& input) {
  require(input.mode_count() == layout.mode_count(),
          "extended_survival_probability: input width differs from layout");
  const auto compiled = compile(layout, Space::extended);
  const FockState padded = pad_with_vacuum(input, compiled.loss_mode_count);
  const auto kept = evolve_sector(compiled.matrix, padded, compiled.original_mode_count);
  double total = 0.0;
  for (const auto& a : kept.amplitudes) total += std::norm(a);
  return total;
}

std::vector<double> surviving_photon_distribution(const CircuitLayout& layout,
                                                  const FockState& input) {
  require(input.mode_count() == layout.mode_count(),
          "surviving_photon_distribution: input width differs from layout");
  const auto photons = input.photon_number();
  require(photons.has_value(), "surviving_photon_distribution: mixed photon numbers");
  const auto compiled = compile(layout, Space::extended);
  const int m = compiled.original_mode_count;
  const FockState padded = pad_with_vacuum(input, compiled.loss_mode_count);
  const auto out = evolve_sector(compiled.matrix, padded);
  std::vector<double> dist(static_cast<std::size_t>(*photons) + 1, 0.0);
  for (std::size_t i = 0; i < out.basis.size(); ++i) {
    const auto& occ = out.basis[i].occupations();
    int kept = 0;
    for (int k = 0; k < m; ++k) kept += occ[static_cast<std::size_t>(k)];
    dist[static_cast<std::size_t>(kept)] += std::norm(out.amplitudes[i]);
  }
  return dist;
}

// ---------------------------------------------------------------------------
// Text format

CircuitLayout parse_layout(std::istream& in) {
  int modes = -1;
  int declared_layers = 0;
  std::vector<Layer> layers;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ContractError("circuit text line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind)) continue;
    if (kind == "modes") {
      if (!(fields >> modes) || modes < 1) fail("bad mode count");
      continue;
    }
    if (kind == "layers") {
      if (!(fields >> declared_layers) || declared_layers < 0) fail("bad layer count");
      continue;
    }
    if (modes < 0) fail("element before the 'modes' header");
    int layer = 0;
    Element e;
    if (!(fields >> layer) || layer < 0) fail("bad layer index");
    if (kind == "bs" || kind == "swap") {
      e.kind = kind == "bs" ? ElementKind::beamsplitter : ElementKind::swap;
      if (!(fields >> e.mode_a >> e.mode_b)) fail("two-mode element needs two modes");
    } else if (kind == "loss") {
      e.kind = ElementKind::loss;
      if (!(fields >> e.mode_a >> e.eta)) fail("loss element needs a mode and eta");
    } else {
      fail("unknown element kind '" + kind + "'");
    }
    std::string extra;
    if (fields >> extra) fail("trailing field '" + extra + "'");
    if (static_cast<std::size_t>(layer) >= layers.size()) layers.resize(static_cast<std::size_t>(layer) + 1);
    layers[static_cast<std::size_t>(layer)].push_back(e);
  }
  if (modes < 0) throw ContractError("circuit text: missing 'modes' header");
  if (static_cast<std::size_t>(declared_layers) > layers.size()) layers.resize(static_cast<std::size_t>(declared_layers));
  return CircuitLayout(modes, std::move(layers));
}

CircuitLayout load_layout(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open circuit file " + path);
  return parse_layout(in);
}

void write_layout(std::ostream& out, const CircuitLayout& layout) {
  out << "modes " << layout.mode_count() << '\n';
  out << "layers " << layout.layer_count() << '\n';
  for (int l = 0; l < layout.layer_count(); ++l) {
    for (const auto& e : layout.layers()[static_cast<std::size_t>(l)]) {
      out << kind_name(e.kind) << ' ' << l << ' ' << e.mode_a;
      if (e.is_two_mode()) {
        out << ' ' << e.mode_b;
      } else {
        out << ' ' << std::setprecision(17) << e.eta;
      }
      out << '\n';
    }
  }
}

std::string to_text(const CircuitLayout& layout) {
  std::ostringstream out;
  write_layout(out, layout);
  return out.str();
}

}  // namespace fusionloss
