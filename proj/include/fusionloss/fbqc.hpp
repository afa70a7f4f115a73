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

#include <optional>
#include <string>

namespace fusionloss {

enum class NetworkKind { six_ring, four_star };

struct FusionNetwork {
  NetworkKind kind;
  std::string name;
  /// Erasure threshold of the network's fusion outcomes.
  double threshold_p_er;
};

/// 6-ring: 11.98 %, 4-star: 6.90 %.
FusionNetwork network(NetworkKind kind);
std::optional<NetworkKind> parse_network(const std::string& name);

enum class EncodingMode { bare, shor_2_2 };
std::string to_string(EncodingMode mode);
std::optional<EncodingMode> parse_encoding(const std::string& name);

struct ErasureAssessment {
  double p_0;
  std::optional<double> p_enc;
  double effective_erasure;
  bool correctable;
};

/// Outcome erasure with failure bases chosen 50/50:
/// 1 - (1 - p_loss)(1 - (1 - p_succ)/2).
double erasure_p0(double p_succ, double p_loss);

/// Erasure after (2,2)-Shor encoding:
/// ((1 - (1 - p)^2)^2 + 1 - (1 - p^2)^2) / 2.
double erasure_shor(double p_0);

/// Effective erasure for the encoding.
double effective_erasure(double p_succ, double p_loss, EncodingMode encoding);

/// Smallest lossless p_succ whose effective erasure is below the threshold.
double min_p_succ(const FusionNetwork& network, EncodingMode encoding);

/// Strict comparison: a point exactly on the threshold is not correctable.
ErasureAssessment assess(double p_succ, double p_loss, const FusionNetwork& network,
                         EncodingMode encoding);

}  // namespace fusionloss
