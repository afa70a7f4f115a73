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

#include "fusionloss/loss.hpp"

#include "fusionloss/errors.hpp"

#include <algorithm>
#include <cmath>

namespace fusionloss {

using detail::require;

double db_to_transmission(double db) {
  require(db >= 0.0 && std::isfinite(db), "db_to_transmission: loss in dB must be >= 0");
  return std::pow(10.0, -db / 10.0);
}

double LossParams::eta_layer() const {
  // dB/cm times the layer length in cm.
  return db_to_transmission(prop_loss_db_per_cm * layer_length_um * 1e-4);
}

double LossParams::eta_bs() const { return db_to_transmission(bs_loss_db); }

void LossParams::validate() const {
  require(p_gen >= 0.0 && p_gen <= 1.0, "LossParams: p_gen must lie in [0, 1]");
  require(p_det >= 0.0 && p_det <= 1.0, "LossParams: p_det must lie in [0, 1]");
  require(bs_loss_db >= 0.0 && std::isfinite(bs_loss_db), "LossParams: bs_loss_db must be >= 0");
  require(prop_loss_db_per_cm >= 0.0 && std::isfinite(prop_loss_db_per_cm),
          "LossParams: prop_loss_db_per_cm must be >= 0");
  require(layer_length_um > 0.0 && std::isfinite(layer_length_um),
          "LossParams: layer_length_um must be > 0");
}

LossParams LossParams::combined(double p_eff, double bs_loss_db, double prop_loss_db_per_cm,
                                double layer_length_um) {
  LossParams p{p_eff, 1.0, bs_loss_db, prop_loss_db_per_cm, layer_length_um};
  p.validate();
  return p;
}

LossySchemeInstance instrument(const BsmScheme& base, const LossParams& params) {
  params.validate();
  const int m = base.mode_count();
  const double eta_front = params.p_eff();
  const double eta_bs = params.eta_bs();
  const double eta_layer = params.eta_layer();

  CircuitLayout out(m);
  auto uniform = [m](double eta) {
    Layer layer;
    for (int k = 0; k < m; ++k) layer.push_back(Element::loss(k, eta));
    return layer;
  };
  if (eta_front != 1.0) out.add_layer(uniform(eta_front));
  for (const auto& layer : base.layout.layers()) {
    out.add_layer(layer);
    if (eta_bs != 1.0) {
      Layer bs_losses;
      for (const auto& e : layer) {
        if (e.kind != ElementKind::beamsplitter) continue;
        bs_losses.push_back(Element::loss(e.mode_a, eta_bs));
        bs_losses.push_back(Element::loss(e.mode_b, eta_bs));
      }
      if (!bs_losses.empty()) out.add_layer(std::move(bs_losses));
    }
    if (eta_layer != 1.0) out.add_layer(uniform(eta_layer));
  }
  return LossySchemeInstance{base, params, std::move(out)};
}

double compute_p_loss(const LossySchemeInstance& instance, const FockState& qubits) {
  const double surv = survival_probability(instance.instrumented_layout, instance.base.embed(qubits));
  return std::clamp(1.0 - surv, 0.0, 1.0);
}

double compute_p_loss(const LossySchemeInstance& instance) {
  return compute_p_loss(instance, plus_plus());
}

double compute_p_loss_extended(const LossySchemeInstance& instance, const FockState& qubits) {
  const double surv =
      extended_survival_probability(instance.instrumented_layout, instance.base.embed(qubits));
  return std::clamp(1.0 - surv, 0.0, 1.0);
}

LossProfile p_loss_profile(const LossySchemeInstance& instance) {
  LossProfile profile;
  profile.default_input = compute_p_loss(instance);
  profile.maximum = profile.default_input;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const double p = compute_p_loss(instance, logical_product(a, b));
      profile.computational[static_cast<std::size_t>(2 * a + b)] = p;
      profile.maximum = std::max(profile.maximum, p);
    }
  }
  return profile;
}

double static_bias_p_loss(const BsmScheme& xx_variant, const BsmScheme& zz_variant,
                          const LossParams& params) {
  return std::max(p_loss_profile(instrument(xx_variant, params)).maximum,
                  p_loss_profile(instrument(zz_variant, params)).maximum);
}

}  // namespace fusionloss
