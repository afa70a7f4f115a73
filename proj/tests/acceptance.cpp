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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include "fusionloss/bsm.hpp"
#include "fusionloss/circuit.hpp"
#include "fusionloss/fbqc.hpp"
#include "fusionloss/fock.hpp"
#include "fusionloss/loss.hpp"
#include "fusionloss/report.hpp"
#include "fusionloss/sweep.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace fusionloss;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

bool run(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s criterion %d: %s [%.2fs]%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              o.detail.empty() ? "" : " -- ", o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

Outcome lossless_success() {
  Outcome o;
  const std::pair<const char*, double> cases[] = {
      {"regular", 0.5}, {"phi_plus", 0.75}, {"two_pairs", 0.75}, {"phi_plus_b2", 0.875}};
  for (const auto& [name, expected] : cases) {
    for (auto op : {Operator::XX, Operator::ZZ}) {
      const auto table = classify_patterns(catalog_scheme(name, op));
      const double p = table.p_succ();
      std::printf("  %-12s failure %s: p_succ %.12f, unclassified mass %.1e\n", name, to_string(op).c_str(), p,
                  table.unclassified_mass);
      o.check(std::abs(p - expected) <= 1e-9, std::string(name) + " " + to_string(op) + " = " + fmt(p, 12));
    }
  }
  return o;
}

Outcome hong_ou_mandel() {
  Outcome o;
  const auto bs = compile(CircuitLayout(2, {{Element::beamsplitter(0, 1)}}), Space::reduced);
  const auto out = evolve_state(bs.matrix, FockState::basis({1, 1}));
  const double coincidence = std::abs(out.amplitude({1, 1}));
  const double p20 = std::norm(out.amplitude({2, 0}));
  const double p02 = std::norm(out.amplitude({0, 2}));
  std::printf("  |<1,1|out>| = %.3e, P(2,0) = %.15f, P(0,2) = %.15f\n", coincidence, p20, p02);
  o.check(coincidence <= 1e-12, "coincidence amplitude " + fmt(coincidence));
  o.check(std::abs(p20 - 0.5) <= 1e-12, "P(2,0) = " + fmt(p20, 15));
  o.check(std::abs(p02 - 0.5) <= 1e-12, "P(0,2) = " + fmt(p02, 15));
  return o;
}

Outcome binomial_law() {
  Outcome o;
  double worst = 0.0;
  for (double eta : {0.3, 0.5, 0.9}) {
    for (int n = 0; n <= 4; ++n) {
      const CircuitLayout channel(1, {{Element::loss(0, eta)}});
      const auto dist = surviving_photon_distribution(channel, FockState::basis(FockPattern{n}));
      for (int r = 0; r <= n; ++r) {
        const double expected = oracle::factorial(n) / (oracle::factorial(r) * oracle::factorial(n - r)) *
                                std::pow(eta, r) * std::pow(1 - eta, n - r);
        worst = std::max(worst, std::abs(dist[static_cast<std::size_t>(r)] - expected));
      }
    }
  }
  std::printf("  max |P(r) - binomial| = %.3e over n <= 4, eta in {0.3, 0.5, 0.9}\n", worst);
  o.check(worst <= 1e-10, "deviation " + fmt(worst));
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::mt19937_64 rng(20260101);
  std::uniform_real_distribution<double> eff(0.85, 1.0), bs(0.0, 0.2), prop(0.0, 1.5);
  double worst = 0.0;
  for (const auto& name : catalog_names()) {
    const auto scheme = catalog_scheme(name);
    for (int k = 0; k < 3; ++k) {
      const LossParams p = LossParams::combined(eff(rng), bs(rng), prop(rng));
      const auto inst = instrument(scheme, p);
      std::vector<FockState> inputs{plus_plus()};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) inputs.push_back(logical_product(a, b));
      for (const auto& q : inputs) {
        const double d = std::abs(compute_p_loss(inst, q) - compute_p_loss_extended(inst, q));
        worst = std::max(worst, d);
      }
    }
    std::printf("  %-12s checked at 3 loss points x 5 inputs\n", name.c_str());
  }
  std::printf("  max |reduced - extended| = %.3e\n", worst);
  o.check(worst <= 1e-9, "deviation " + fmt(worst));
  return o;
}

Outcome minimal_success() {
  Outcome o;
  const std::tuple<NetworkKind, EncodingMode, double> cases[] = {
      {NetworkKind::six_ring, EncodingMode::bare, 0.76},
      {NetworkKind::six_ring, EncodingMode::shor_2_2, 0.57},
      {NetworkKind::four_star, EncodingMode::bare, 0.86},
      {NetworkKind::four_star, EncodingMode::shor_2_2, 0.67}};
  for (const auto& [kind, enc, expected] : cases) {
    const auto net = network(kind);
    const double v = min_p_succ(net, enc);
    const bool ok = std::abs(v - expected) <= 0.005;
    std::printf("  %-9s %-8s min_p_succ %.5f (expected %.2f +/- 0.005) %s\n", net.name.c_str(),
                to_string(enc).c_str(), v, expected, ok ? "ok" : "OUT OF TOLERANCE");
    o.check(ok, net.name + " " + to_string(enc) + " = " + fmt(v, 5));
  }
  return o;
}

Outcome headline_p_eff() {
  Outcome o;
  SchemeEvaluator phi("phi_plus");
  const auto t = marginal_threshold(phi, network(NetworkKind::six_ring), EncodingMode::shor_2_2, Axis::p_eff, 1e-6);
  o.check(t.has_value(), "no threshold");
  if (t) {
    std::printf("  p_eff threshold %.6f\n", *t);
    o.check(std::abs(*t - 0.973) <= 0.002, "threshold " + fmt(*t));
  }
  return o;
}

Outcome layout_marginals() {
  Outcome o;
  SchemeEvaluator phi("phi_plus");
  const auto s = summarize(phi);
  std::printf("  circuit: %d modes, %d photons; failure XX: %d beamsplitters, %d swaps, %d layers; "
              "failure ZZ: %d beamsplitters, %d swaps, %d layers\n",
              s.modes, s.photons, s.beamsplitters[0], s.swaps[0], s.layers[0], s.beamsplitters[1], s.swaps[1],
              s.layers[1]);
  const auto net = network(NetworkKind::six_ring);
  const std::pair<Axis, double> cases[] = {{Axis::bs_loss_db, 0.048}, {Axis::prop_loss_db_per_cm, 0.48}};
  for (const auto& [axis, expected] : cases) {
    const auto t = marginal_threshold(phi, net, EncodingMode::shor_2_2, axis, 1e-6);
    if (!t) {
      o.check(false, to_string(axis) + ": no threshold");
      continue;
    }
    const double rel = std::abs(*t - expected) / expected;
    std::printf("  %-20s threshold %.5f %s (expected %.3f, off by %.1f%%)\n", to_string(axis).c_str(), *t,
                units(axis).c_str(), expected, 100 * rel);
    o.check(rel <= 0.15, to_string(axis) + " " + fmt(*t));
  }
  const auto joint = joint_check(phi, net, EncodingMode::shor_2_2, LossParams::combined(0.97, 0.048, 0.48));
  std::printf("  joint point (p_eff 0.97, 0.048 dB, 0.48 dB/cm): p_loss %.5f, p_enc %.5f, %s\n", joint.p_loss,
              joint.assessment.effective_erasure, joint.assessment.correctable ? "correctable" : "not correctable");
  return o;
}

Outcome property_suite() {
  Outcome o;
  std::mt19937_64 rng(8);

  // Permanent against the permutation sum.
  double perm_worst = 0.0;
  for (int n = 1; n <= 6; ++n)
    for (int rep = 0; rep < 10; ++rep) {
      const Matrix a = oracle::random_matrix(n, rng);
      perm_worst = std::max(perm_worst, std::abs(permanent(a) - oracle::naive_permanent(a)));
    }
  o.check(perm_worst <= 1e-10, "permanent deviation " + fmt(perm_worst));

  // Norm preservation under random unitaries.
  double norm_worst = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const int m = 2 + rep % 4;
    const int n = 1 + rep % 4;
    const auto u = TransferMatrix(oracle::random_unitary(m, rng), MatrixKind::unitary);
    norm_worst = std::max(norm_worst, std::abs(evolve_state(u, oracle::random_state(m, n, 3, rng)).norm_squared() - 1));
  }
  o.check(norm_worst <= 1e-10, "norm deviation " + fmt(norm_worst));

  // Loss on a mode commutes with elements acting elsewhere.
  double comm_worst = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    const auto psi = oracle::random_state(4, 2, 4, rng);
    const CircuitLayout early(4, {{Element::loss(3, 0.6)}, {Element::beamsplitter(0, 1)}, {Element::beamsplitter(1, 2)}});
    const CircuitLayout late(4, {{Element::beamsplitter(0, 1)}, {Element::beamsplitter(1, 2)}, {Element::loss(3, 0.6)}});
    comm_worst = std::max(comm_worst, std::abs(survival_probability(early, psi) - survival_probability(late, psi)));
  }
  o.check(comm_worst <= 1e-12, "commutation deviation " + fmt(comm_worst));

  // Monotone frontier, parallel-serial equivalence and reruns on a small sweep.
  SweepConfig c;
  c.schemes = {"phi_plus", "single_pair"};
  c.networks = {NetworkKind::six_ring, NetworkKind::four_star};
  c.encodings = {EncodingMode::shor_2_2};
  c.p_eff = {0.95, 1.0, 11};
  c.bs_loss_db = {0.0, 0.1, 11};
  c.prop_loss_db_per_cm = {0.0, 1.0, 11};
  const auto serial = sweep_slices(c);
  bool monotone = true;
  for (const auto& r : serial)
    for (const auto& s : r.slices)
      for (int ix = 0; ix < s.x_range.points; ++ix)
        for (int iy = 1; iy < s.y_range.points; ++iy)
          if (s.at(ix, iy).correctable && !s.at(ix, iy - 1).correctable) monotone = false;
  o.check(monotone, "correctable flags are not a prefix along a loss axis");
  const auto text = results_to_json(serial);
  o.check(text == results_to_json(sweep_slices(c)), "rerun differs");
  c.worker_count = 4;
  o.check(text == results_to_json(sweep_slices(c)), "parallel run differs");

  std::printf("  permanent %.1e, norm %.1e, commutation %.1e; %zu slices monotone=%s\n", perm_worst, norm_worst,
              comm_worst, serial.size() * 3, monotone ? "yes" : "no");
  return o;
}

}  // namespace

int main() {
  bool all = true;
  all &= run(1, "lossless success probabilities", lossless_success);
  all &= run(2, "Hong-Ou-Mandel dip", hong_ou_mandel);
  all &= run(3, "binomial loss law", binomial_law);
  all &= run(4, "reduced vs extended-space p_loss", oracle_equivalence);
  all &= run(5, "minimal success probabilities", minimal_success);
  all &= run(6, "marginal p_eff threshold", headline_p_eff);
  all &= run(7, "marginal beamsplitter and propagation thresholds", layout_marginals);
  all &= run(8, "property suite", property_suite);
  std::printf("%s\n", all ? "all criteria passed" : "some criteria failed");
  return all ? 0 : 1;
}
