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

#include "fusionloss/fbqc.hpp"

#include "fusionloss/errors.hpp"

#include <cmath>

namespace fusionloss {

using detail::require;

namespace {

void require_probability(double p, const char* what) {
  require(p >= 0.0 && p <= 1.0, std::string(what) + " must lie in [0, 1]");
}

}  // namespace

FusionNetwork network(NetworkKind kind) {
  switch (kind) {
    case NetworkKind::six_ring: return {kind, "six_ring", 0.1198};
    case NetworkKind::four_star: return {kind, "four_star", 0.0690};
  }
  throw ContractError("network: unknown kind");
}

std::optional<NetworkKind> parse_network(const std::string& name) {
  if (name == "six_ring") return NetworkKind::six_ring;
  if (name == "four_star") return NetworkKind::four_star;
  return std::nullopt;
}

std::string to_string(EncodingMode mode) { return mode == EncodingMode::bare ? "bare" : "shor_2_2"; }

std::optional<EncodingMode> parse_encoding(const std::string& name) {
  if (name == "bare") return EncodingMode::bare;
  if (name == "shor_2_2") return EncodingMode::shor_2_2;
  return std::nullopt;
}

double erasure_p0(double p_succ, double p_loss) {
  require_probability(p_succ, "erasure_p0: p_succ");
  require_probability(p_loss, "erasure_p0: p_loss");
  return 1.0 - (1.0 - p_loss) * (1.0 - (1.0 - p_succ) / 2.0);
}

double erasure_shor(double p_0) {
  require_probability(p_0, "erasure_shor: p_0");
  const double a = 1.0 - (1.0 - p_0) * (1.0 - p_0);
  const double b = 1.0 - p_0 * p_0;
  return (a * a + 1.0 - b * b) / 2.0;
}

double effective_erasure(double p_succ, double p_loss, EncodingMode encoding) {
  const double p0 = erasure_p0(p_succ, p_loss);
  return encoding == EncodingMode::bare ? p0 : erasure_shor(p0);
}

double min_p_succ(const FusionNetwork& net, EncodingMode encoding) {
  // With no loss p_0 = (1 - p_succ) / 2, so p_succ = 1 - 2 p_0.
  double p0_max = net.threshold_p_er;
  if (encoding == EncodingMode::shor_2_2) {
    // erasure_shor is increasing on [0, 1]; find where it meets the threshold.
    double lo = 0.0;
    double hi = 0.5;
    while (hi - lo > 1e-9) {
      const double mid = 0.5 * (lo + hi);
      (erasure_shor(mid) < net.threshold_p_er ? lo : hi) = mid;
    }
    p0_max = lo;
  }
  return 1.0 - 2.0 * p0_max;
}

ErasureAssessment assess(double p_succ, double p_loss, const FusionNetwork& net,
                         EncodingMode encoding) {
  ErasureAssessment a{};
  a.p_0 = erasure_p0(p_succ, p_loss);
  if (encoding == EncodingMode::shor_2_2) a.p_enc = erasure_shor(a.p_0);
  a.effective_erasure = a.p_enc.value_or(a.p_0);
  a.correctable = a.effective_erasure < net.threshold_p_er;
  return a;
}

}  // namespace fusionloss
