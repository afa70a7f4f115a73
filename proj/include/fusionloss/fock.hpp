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

#include <Eigen/Dense>

#include <complex>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fusionloss {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Absolute tolerance used for complex equality and unitarity checks.
inline constexpr double kTolerance = 1e-10;

/// Occupation numbers n_1..n_M of a Fock basis state.
class FockPattern {
 public:
  FockPattern() = default;
  explicit FockPattern(std::vector<int> occupations);
  FockPattern(std::initializer_list<int> occupations);

  static FockPattern vacuum(int mode_count);

  int mode_count() const { return static_cast<int>(occupations_.size()); }
  int total_photons() const { return total_; }
  int operator[](int mode) const { return occupations_[static_cast<std::size_t>(mode)]; }
  const std::vector<int>& occupations() const { return occupations_; }

  /// Mode-wise concatenation: |n_1..n_M> (x) |k_1..k_K>.
  FockPattern concat(const FockPattern& other) const;
  /// Copy with one extra photon in `mode`.
  FockPattern with_added_photon(int mode) const;
  /// The first `count` modes.
  FockPattern prefix(int count) const;

  /// n_1! n_2! ... n_M!
  double factorial_product() const;

  std::string to_string() const;

  friend bool operator==(const FockPattern& a, const FockPattern& b) {
    return a.occupations_ == b.occupations_;
  }
  friend std::strong_ordering operator<=>(const FockPattern& a, const FockPattern& b) {
    return a.occupations_ <=> b.occupations_;
  }

 private:
  std::vector<int> occupations_;
  int total_ = 0;
};

/// Sparse superposition of Fock basis states over a fixed number of modes.
class FockState {
 public:
  using Terms = std::map<FockPattern, Complex>;

  explicit FockState(int mode_count = 0) : mode_count_(mode_count) {}
  FockState(int mode_count, std::initializer_list<std::pair<FockPattern, Complex>> terms);

  static FockState basis(const FockPattern& pattern);

  int mode_count() const { return mode_count_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  Terms::const_iterator begin() const { return terms_.begin(); }
  Terms::const_iterator end() const { return terms_.end(); }

  /// Accumulates `value` onto the amplitude of `pattern`.
  void add(const FockPattern& pattern, Complex value);
  Complex amplitude(const FockPattern& pattern) const;

  double norm_squared() const;
  FockState normalized() const;
  FockState scaled(Complex factor) const;

  /// Tensor product; the other state's modes are appended after ours.
  FockState tensor(const FockState& other) const;

  /// Total photon number shared by every term, if there is one.
  std::optional<int> photon_number() const;

  /// Drops terms whose magnitude is below `threshold`.
  FockState pruned(double threshold) const;

 private:
  int mode_count_;
  Terms terms_;
};

/// Number of weak compositions of `photons` into `modes` parts.
std::uint64_t sector_dimension(int modes, int photons);

/// Dense, ranked enumeration of all N-photon patterns over M modes.
///
/// Patterns are ordered lexicographically from (N,0,..,0) down to (0,..,0,N);
/// rank() is the inverse of operator[].
class FockBasis {
 public:
  FockBasis(int modes, int photons);

  int modes() const { return modes_; }
  int photons() const { return photons_; }
  std::size_t size() const { return patterns_.size(); }
  const FockPattern& operator[](std::size_t index) const { return patterns_[index]; }
  const std::vector<FockPattern>& patterns() const { return patterns_; }

  std::size_t rank(const FockPattern& pattern) const;
  std::size_t rank(const int* occupations) const;

 private:
  int modes_;
  int photons_;
  std::vector<FockPattern> patterns_;
  // skip_[(m * (photons_ + 1)) + t]: patterns skipped when the first of m + 1
  // remaining modes holds t fewer photons than the remaining total.
  std::vector<std::size_t> skip_;
};

std::vector<FockPattern> enumerate_patterns(int mode_count, int photon_count);

enum class MatrixKind { unitary, subunitary };

/// Single-photon transfer matrix U with a_k^dagger -> sum_j U_jk a_j^dagger.
class TransferMatrix {
 public:
  /// Validates the matrix against `kind`; throws ContractError otherwise.
  TransferMatrix(Matrix entries, MatrixKind kind);

  static TransferMatrix identity(int size);

  const Matrix& entries() const { return entries_; }
  MatrixKind kind() const { return kind_; }
  int size() const { return static_cast<int>(entries_.rows()); }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  /// Top-left `size` x `size` block, flagged subunitary.
  TransferMatrix leading_block(int size) const;

  /// this * other (other is applied first).
  TransferMatrix then_after(const TransferMatrix& other) const;

 private:
  Matrix entries_;
  MatrixKind kind_;
};

bool is_unitary(const Matrix& m, double tolerance = kTolerance);
double spectral_norm(const Matrix& m);

/// Matrix permanent by Gray-code Ryser inclusion-exclusion, O(2^n n).
Complex permanent(const Matrix& square);

/// U_{psi,phi}: column k of U repeated input[k] times, row j repeated output[j] times.
Matrix build_submatrix(const TransferMatrix& transfer, const FockPattern& input,
                       const FockPattern& output);

/// <output| U |input> = perm(U_{psi,phi}) / sqrt(prod n_k! prod m_j!).
Complex amplitude(const TransferMatrix& transfer, const FockPattern& input,
                  const FockPattern& output);

/// Dense amplitudes of one photon-number sector after evolution.
struct SectorAmplitudes {
  FockBasis basis;
  std::vector<Complex> amplitudes;
};

/// Evolves an N-photon state by expanding prod_k (sum_j U_jk a_j^dagger)^{n_k}
/// over the creation operators. When `output_modes` < U.size() only rows
/// [0, output_modes) are kept, which yields exactly the amplitudes of the
/// outcomes with no photon in the remaining modes.
SectorAmplitudes evolve_sector(const TransferMatrix& transfer, const FockState& input,
                               std::optional<int> output_modes = std::nullopt);

/// Full evolution of a (possibly multi-sector) state; terms with magnitude
/// below 1e-15 are not stored.
FockState evolve_state(const TransferMatrix& transfer, const FockState& input);

/// ||Gamma(L) psi||^2 for an N-photon input, computed from permanents of L^dagger L
/// so that no output sector is enumerated.
double transmitted_norm(const TransferMatrix& transfer, const FockState& input);

}  // namespace fusionloss
