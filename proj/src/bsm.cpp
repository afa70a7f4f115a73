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

#include "fusionloss/bsm.hpp"

#include "fusionloss/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace fusionloss {

using detail::require;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kClassTolerance = 1e-10;

using E = Element;

// Two-term "cat" state a|p> + b|q>, normalized.
FockState cat(const FockPattern& p, const FockPattern& q, double sign = 1.0) {
  FockState s(p.mode_count());
  s.add(p, kInvSqrt2);
  s.add(q, sign * kInvSqrt2);
  return s;
}

std::size_t bell_index(BellLabel label) { return static_cast<std::size_t>(label); }

}  // namespace

std::string to_string(BellLabel label) {
  switch (label) {
    case BellLabel::phi_plus: return "Phi+";
    case BellLabel::phi_minus: return "Phi-";
    case BellLabel::psi_plus: return "Psi+";
    case BellLabel::psi_minus: return "Psi-";
  }
  return "?";
}

int xx_eigenvalue(BellLabel label) {
  return (label == BellLabel::phi_plus || label == BellLabel::psi_plus) ? 1 : -1;
}

int zz_eigenvalue(BellLabel label) {
  return (label == BellLabel::phi_plus || label == BellLabel::phi_minus) ? 1 : -1;
}

FockState bell_state(BellLabel label) {
  switch (label) {
    case BellLabel::phi_plus: return cat({1, 0, 1, 0}, {0, 1, 0, 1});
    case BellLabel::phi_minus: return cat({1, 0, 1, 0}, {0, 1, 0, 1}, -1.0);
    case BellLabel::psi_plus: return cat({1, 0, 0, 1}, {0, 1, 1, 0});
    case BellLabel::psi_minus: return cat({1, 0, 0, 1}, {0, 1, 1, 0}, -1.0);
  }
  throw ContractError("bell_state: unknown label");
}

FockState logical_product(int a, int b) {
  require((a == 0 || a == 1) && (b == 0 || b == 1), "logical_product: bits must be 0 or 1");
  return FockState::basis(FockPattern{1 - a, a, 1 - b, b});
}

FockState plus_plus() {
  const FockState plus = cat({1, 0}, {0, 1});
  return plus.tensor(plus);
}

// ---------------------------------------------------------------------------
// Ancillas

std::string to_string(AncillaKind kind) {
  switch (kind) {
    case AncillaKind::none: return "none";
    case AncillaKind::single_pair: return "|11>";
    case AncillaKind::two_pairs: return "2x|11>";
    case AncillaKind::phi_plus: return "|Phi+>";
    case AncillaKind::a2: return "|A2>";
    case AncillaKind::phi_plus_b2: return "|Phi+>|B2>";
  }
  return "?";
}

std::optional<AncillaKind> parse_ancilla_kind(const std::string& name) {
  for (auto kind : {AncillaKind::none, AncillaKind::single_pair, AncillaKind::two_pairs,
                    AncillaKind::phi_plus, AncillaKind::a2, AncillaKind::phi_plus_b2}) {
    if (name == to_string(kind)) return kind;
  }
  return std::nullopt;
}

AncillaState make_ancilla(AncillaKind kind) {
  switch (kind) {
    case AncillaKind::none:
      return {kind, to_string(kind), FockState::basis(FockPattern{}), 0};
    case AncillaKind::single_pair:
      return {kind, to_string(kind), FockState::basis({1, 1}), 2};
    case AncillaKind::two_pairs:
      return {kind, to_string(kind), FockState::basis({1, 1, 1, 1}), 4};
    case AncillaKind::phi_plus:
      return {kind, to_string(kind), cat({1, 0, 1, 0}, {0, 1, 0, 1}), 2};
    case AncillaKind::a2:
      return {kind, to_string(kind), cat({2, 0, 2, 0}, {0, 2, 0, 2}), 4};
    case AncillaKind::phi_plus_b2: {
      const FockState b2 = cat({1, 0, 1, 0, 1, 0, 1, 0}, {0, 1, 0, 1, 0, 1, 0, 1});
      return {kind, to_string(kind), cat({1, 0, 1, 0}, {0, 1, 0, 1}).tensor(b2), 6};
    }
  }
  throw ContractError("make_ancilla: unknown kind");
}

std::string to_string(Operator op) { return op == Operator::XX ? "XX" : "ZZ"; }

FockState BsmScheme::embed(const FockState& qubits) const {
  require(qubits.mode_count() == 4, "BsmScheme::embed: expected a two-qubit state on 4 modes");
  FockState out(mode_count());
  std::vector<int> occ(static_cast<std::size_t>(mode_count()));
  for (const auto& [q, a] : qubits) {
    for (const auto& [p, b] : ancilla.state) {
      std::fill(occ.begin(), occ.end(), 0);
      for (int i = 0; i < 4; ++i) occ[static_cast<std::size_t>(qubit_modes[i])] = q[i];
      for (std::size_t i = 0; i < ancilla_modes.size(); ++i)
        occ[static_cast<std::size_t>(ancilla_modes[i])] = p[static_cast<int>(i)];
      out.add(FockPattern(occ), a * b);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Circuits. Spatial mode s carries rails h = 2s and v = 2s + 1 unless a layout
// says otherwise.

BsmScheme build_regular_bsm(Operator failure_basis) {
  CircuitLayout layout(4, {{E::beamsplitter(0, 1), E::beamsplitter(2, 3)},
                           {E::swap(1, 2)},
                           {E::beamsplitter(0, 1), E::beamsplitter(2, 3)},
                           {E::swap(1, 2)}});
  BsmScheme scheme{"regular", std::move(layout), make_ancilla(AncillaKind::none),
                   {0, 1, 2, 3}, {}, Operator::XX, 0.5};
  return with_failure_basis(scheme, failure_basis);
}

BsmScheme build_boosted_bsm(AncillaKind kind, Operator failure_basis) {
  require(kind != AncillaKind::none, "build_boosted_bsm: ancilla must not be none");
  AncillaState ancilla = make_ancilla(kind);
  BsmScheme scheme{"", CircuitLayout(1), ancilla, {0, 1, 2, 3}, {}, Operator::XX, std::nullopt};

  switch (kind) {
    case AncillaKind::phi_plus:
      // Planar layout: only neighbouring waveguides are coupled. Waveguide order
      // is h3 h4 h1 v1 h2 v2 v3 v4.
      scheme.name = "phi_plus";
      scheme.qubit_modes = {2, 3, 4, 5};
      scheme.ancilla_modes = {0, 6, 1, 7};
      scheme.catalog_p_succ = 0.75;
      scheme.layout = CircuitLayout(
          8, {{E::beamsplitter(0, 1), E::beamsplitter(2, 3), E::beamsplitter(4, 5),
               E::beamsplitter(6, 7)},
              {E::swap(3, 4)},
              {E::beamsplitter(2, 3), E::beamsplitter(4, 5)},
              {E::swap(1, 2), E::swap(5, 6)},
              {E::beamsplitter(1, 0), E::beamsplitter(3, 2), E::beamsplitter(4, 5),
               E::beamsplitter(6, 7)}});
      break;
    case AncillaKind::single_pair:
      scheme.name = "single_pair";
      scheme.ancilla_modes = {4, 5};
      scheme.layout = CircuitLayout(
          6, {{E::beamsplitter(0, 1), E::beamsplitter(2, 3), E::beamsplitter(4, 5)},
              {E::beamsplitter(0, 2), E::beamsplitter(1, 3)},
              {E::beamsplitter(0, 4), E::beamsplitter(1, 5)}});
      break;
    case AncillaKind::two_pairs:
      scheme.name = "two_pairs";
      scheme.ancilla_modes = {4, 5, 6, 7};
      scheme.catalog_p_succ = 0.75;
      scheme.layout = CircuitLayout(
          8, {{E::beamsplitter(0, 1), E::beamsplitter(2, 3), E::beamsplitter(4, 5),
               E::beamsplitter(6, 7)},
              {E::beamsplitter(0, 2), E::beamsplitter(1, 3)},
              {E::beamsplitter(0, 4), E::beamsplitter(1, 5), E::beamsplitter(2, 6),
               E::beamsplitter(3, 7)}});
      break;
    case AncillaKind::a2:
      scheme.name = "a2";
      scheme.ancilla_modes = {4, 5, 6, 7};
      scheme.layout = CircuitLayout(
          8, {{E::beamsplitter(0, 1), E::beamsplitter(2, 3), E::beamsplitter(6, 7)},
              {E::beamsplitter(0, 2), E::beamsplitter(1, 3)},
              {E::beamsplitter(0, 4), E::beamsplitter(1, 5)}});
      break;
    case AncillaKind::phi_plus_b2: {
      // Hadamard over the three bits of the spatial index, per polarization.
      scheme.name = "phi_plus_b2";
      scheme.ancilla_modes = {4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
      scheme.catalog_p_succ = 0.875;
      std::vector<Layer> layers{{E::beamsplitter(0, 1), E::beamsplitter(2, 3)}};
      for (int bit : {1, 2, 4}) {
        Layer layer;
        for (int s = 0; s < 8; ++s) {
          if (s & bit) continue;
          layer.push_back(E::beamsplitter(2 * s, 2 * (s | bit)));
          layer.push_back(E::beamsplitter(2 * s + 1, 2 * (s | bit) + 1));
        }
        layers.push_back(std::move(layer));
      }
      scheme.layout = CircuitLayout(16, std::move(layers));
      break;
    }
    case AncillaKind::none:
      break;
  }
  return with_failure_basis(scheme, failure_basis);
}

BsmScheme with_failure_basis(const BsmScheme& scheme, Operator failure_basis) {
  if (failure_basis == scheme.failure_basis) return scheme;
  require(scheme.failure_basis == Operator::XX,
          "with_failure_basis: only XX-failure circuits can be transformed");
  const auto& q = scheme.qubit_modes;
  auto is_qubit_rotation = [&](const Element& e) {
    if (e.kind != ElementKind::beamsplitter) return false;
    const std::pair<int, int> pair{e.mode_a, e.mode_b};
    return pair == std::pair{q[0], q[1]} || pair == std::pair{q[2], q[3]};
  };
  std::vector<Layer> layers;
  int removed = 0;
  bool first = true;
  for (const auto& layer : scheme.layout.layers()) {
    Layer kept;
    for (const auto& e : layer) {
      if (first && is_qubit_rotation(e)) {
        ++removed;
      } else {
        kept.push_back(e);
      }
    }
    first = false;
    if (!kept.empty()) layers.push_back(std::move(kept));
  }
  if (removed != 2) throw IntegrityError("with_failure_basis: leading qubit rotations not found in " + scheme.name);
  BsmScheme out = scheme;
  out.layout = CircuitLayout(scheme.mode_count(), std::move(layers));
  out.failure_basis = failure_basis;
  return out;
}

const std::vector<std::string>& catalog_names() {
  static const std::vector<std::string> names{"regular",   "single_pair", "two_pairs",
                                              "phi_plus",  "a2",          "phi_plus_b2"};
  return names;
}

BsmScheme catalog_scheme(const std::string& name, Operator failure_basis) {
  if (name == "regular") return build_regular_bsm(failure_basis);
  if (name == "single_pair") return build_boosted_bsm(AncillaKind::single_pair, failure_basis);
  if (name == "two_pairs") return build_boosted_bsm(AncillaKind::two_pairs, failure_basis);
  if (name == "phi_plus") return build_boosted_bsm(AncillaKind::phi_plus, failure_basis);
  if (name == "a2") return build_boosted_bsm(AncillaKind::a2, failure_basis);
  if (name == "phi_plus_b2") return build_boosted_bsm(AncillaKind::phi_plus_b2, failure_basis);
  throw ContractError("unknown scheme '" + name + "'");
}

// ---------------------------------------------------------------------------
// Classification

std::string to_string(OutcomeClass cls) {
  switch (cls) {
    case OutcomeClass::success: return "success";
    case OutcomeClass::failure: return "failure";
    case OutcomeClass::loss: return "loss";
    case OutcomeClass::unclassifiable: return "unclassifiable";
  }
  return "?";
}

double Classification::p_succ() const {
  double sum = 0.0;
  for (double p : success_per_bell) sum += p;
  return sum / 4.0;
}

OutcomeClass Classification::lookup(const FockPattern& pattern, int expected_photons) const {
  if (pattern.total_photons() < expected_photons) return OutcomeClass::loss;
  auto it = std::lower_bound(patterns.begin(), patterns.end(), pattern,
                             [](const PatternClass& pc, const FockPattern& p) { return pc.pattern < p; });
  // Patterns with zero probability for every Bell input never occur.
  if (it == patterns.end() || !(it->pattern == pattern)) return OutcomeClass::unclassifiable;
  return it->cls;
}

Classification classify_patterns_unchecked(const BsmScheme& scheme) {
  const auto compiled = compile(scheme.layout, Space::reduced);
  std::array<std::vector<double>, 4> probs;
  std::optional<FockBasis> basis;
  for (auto label : kBellLabels) {
    auto sector = evolve_sector(compiled.matrix, scheme.embed(bell_state(label)));
    auto& p = probs[bell_index(label)];
    p.resize(sector.amplitudes.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(sector.amplitudes[i]);
    if (!basis) basis.emplace(std::move(sector.basis));
  }

  Classification result;
  for (std::size_t i = 0; i < basis->size(); ++i) {
    PatternClass pc{(*basis)[i], OutcomeClass::unclassifiable, std::nullopt, 0, {}};
    std::vector<BellLabel> present;
    for (auto label : kBellLabels) {
      const double p = probs[bell_index(label)][i];
      pc.probabilities[bell_index(label)] = p;
      if (p > kClassTolerance) present.push_back(label);
    }
    if (present.empty()) continue;
    if (present.size() == 1) {
      pc.cls = OutcomeClass::success;
      pc.bell = present[0];
    } else if (present.size() == 2) {
      auto eig = scheme.failure_basis == Operator::XX ? xx_eigenvalue : zz_eigenvalue;
      if (eig(present[0]) == eig(present[1])) {
        pc.cls = OutcomeClass::failure;
        pc.failure_outcome = eig(present[0]);
      }
    }
    for (auto label : kBellLabels) {
      const double p = pc.probabilities[bell_index(label)];
      if (pc.cls == OutcomeClass::success) result.success_per_bell[bell_index(label)] += p;
      if (pc.cls == OutcomeClass::failure) result.failure_per_bell[bell_index(label)] += p;
      if (pc.cls == OutcomeClass::unclassifiable) result.unclassified_mass += p / 4.0;
    }
    result.patterns.push_back(std::move(pc));
  }
  std::sort(result.patterns.begin(), result.patterns.end(),
            [](const PatternClass& a, const PatternClass& b) { return a.pattern < b.pattern; });
  return result;
}

Classification classify_patterns(const BsmScheme& scheme) {
  Classification result = classify_patterns_unchecked(scheme);
  for (const auto& pc : result.patterns) {
    if (pc.cls == OutcomeClass::unclassifiable) {
      throw IntegrityError("scheme " + scheme.name + ": pattern " + pc.pattern.to_string() +
                           " is neither success nor failure");
    }
  }
  return result;
}

double success_probability(const BsmScheme& scheme) { return classify_patterns(scheme).p_succ(); }

void export_scheme(std::ostream& out, const BsmScheme& scheme) {
  const auto table = classify_patterns(scheme);
  out << "scheme " << scheme.name << '\n';
  out << "ancilla " << scheme.ancilla.label << '\n';
  out << "failure_basis " << to_string(scheme.failure_basis) << '\n';
  out << "qubit_modes";
  for (int m : scheme.qubit_modes) out << ' ' << m;
  out << "\nancilla_modes";
  for (int m : scheme.ancilla_modes) out << ' ' << m;
  out << "\nphotons " << scheme.photon_count() << '\n';
  out << "beamsplitters " << scheme.layout.count(ElementKind::beamsplitter) << '\n';
  write_layout(out, scheme.layout);
  out << std::fixed << std::setprecision(12);
  out << "p_succ " << table.p_succ() << '\n';
  out << "patterns " << table.patterns.size() << '\n';
  for (const auto& pc : table.patterns) {
    out << pc.pattern.to_string() << ' ' << to_string(pc.cls);
    if (pc.bell) out << ' ' << to_string(*pc.bell);
    if (pc.cls == OutcomeClass::failure) out << ' ' << to_string(scheme.failure_basis) << '=' << std::showpos << pc.failure_outcome << std::noshowpos;
    for (double p : pc.probabilities) out << ' ' << p;
    out << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace fusionloss
