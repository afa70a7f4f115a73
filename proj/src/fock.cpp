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

#include "fusionloss/fock.hpp"

#include "fusionloss/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fusionloss {

using detail::require;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Binomial table large enough for every sector we can realistically enumerate.
std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  }
  return result;
}

}  // namespace

// ---------------------------------------------------------------------------
// FockPattern

FockPattern::FockPattern(std::vector<int> occupations) : occupations_(std::move(occupations)) {
  for (int n : occupations_) {
    require(n >= 0, "FockPattern: occupation numbers must be non-negative");
    total_ += n;
  }
}

FockPattern::FockPattern(std::initializer_list<int> occupations)
    : FockPattern(std::vector<int>(occupations)) {}

FockPattern FockPattern::vacuum(int mode_count) {
  require(mode_count >= 0, "FockPattern: negative mode count");
  return FockPattern(std::vector<int>(static_cast<std::size_t>(mode_count), 0));
}

FockPattern FockPattern::concat(const FockPattern& other) const {
  std::vector<int> joined = occupations_;
  joined.insert(joined.end(), other.occupations_.begin(), other.occupations_.end());
  return FockPattern(std::move(joined));
}

FockPattern FockPattern::with_added_photon(int mode) const {
  require(mode >= 0 && mode < mode_count(), "FockPattern: mode out of range");
  FockPattern copy = *this;
  ++copy.occupations_[static_cast<std::size_t>(mode)];
  ++copy.total_;
  return copy;
}

FockPattern FockPattern::prefix(int count) const {
  require(count >= 0 && count <= mode_count(), "FockPattern: prefix longer than pattern");
  return FockPattern(std::vector<int>(occupations_.begin(), occupations_.begin() + count));
}

double FockPattern::factorial_product() const {
  double product = 1.0;
  for (int n : occupations_) product *= factorial(n);
  return product;
}

std::string FockPattern::to_string() const {
  std::ostringstream out;
  out << '|';
  for (std::size_t i = 0; i < occupations_.size(); ++i) {
    if (i) out << ',';
    out << occupations_[i];
  }
  out << '>';
  return out.str();
}

// ---------------------------------------------------------------------------
// FockState

FockState::FockState(int mode_count,
                     std::initializer_list<std::pair<FockPattern, Complex>> terms)
    : mode_count_(mode_count) {
  for (const auto& [pattern, value] : terms) add(pattern, value);
}

FockState FockState::basis(const FockPattern& pattern) {
  FockState state(pattern.mode_count());
  state.add(pattern, 1.0);
  return state;
}

void FockState::add(const FockPattern& pattern, Complex value) {
  require(pattern.mode_count() == mode_count_, "FockState: pattern has wrong mode count");
  terms_[pattern] += value;
}

Complex FockState::amplitude(const FockPattern& pattern) const {
  auto it = terms_.find(pattern);
  return it == terms_.end() ? Complex{} : it->second;
}

double FockState::norm_squared() const {
  double sum = 0.0;
  for (const auto& [pattern, value] : terms_) sum += std::norm(value);
  return sum;
}

FockState FockState::normalized() const {
  double norm = std::sqrt(norm_squared());
  require(norm > 0.0, "FockState: cannot normalize the zero vector");
  return scaled(1.0 / norm);
}

FockState FockState::scaled(Complex factor) const {
  FockState out(mode_count_);
  for (const auto& [pattern, value] : terms_) out.terms_.emplace(pattern, value * factor);
  return out;
}

FockState FockState::tensor(const FockState& other) const {
  FockState out(mode_count_ + other.mode_count_);
  for (const auto& [p, a] : terms_) {
    for (const auto& [q, b] : other.terms_) out.add(p.concat(q), a * b);
  }
  return out;
}

std::optional<int> FockState::photon_number() const {
  std::optional<int> n;
  for (const auto& [pattern, value] : terms_) {
    if (!n) {
      n = pattern.total_photons();
    } else if (*n != pattern.total_photons()) {
      return std::nullopt;
    }
  }
  return n;
}

FockState FockState::pruned(double threshold) const {
  FockState out(mode_count_);
  for (const auto& [pattern, value] : terms_) {
    if (std::abs(value) >= threshold) out.terms_.emplace(pattern, value);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sector enumeration

std::uint64_t sector_dimension(int modes, int photons) {
  if (modes <= 0) return photons == 0 ? 1 : 0;
  return binomial(photons + modes - 1, modes - 1);
}

FockBasis::FockBasis(int modes, int photons) : modes_(modes), photons_(photons) {
  require(modes >= 1, "FockBasis: mode_count must be >= 1");
  require(photons >= 0, "FockBasis: photon_count must be >= 0");
  patterns_.reserve(sector_dimension(modes, photons));
  std::vector<int> occ(static_cast<std::size_t>(modes), 0);
  // Depth-first walk emitting patterns in descending lexicographic order.
  auto emit = [&](auto&& self, int mode, int remaining) -> void {
    if (mode == modes - 1) {
      occ[static_cast<std::size_t>(mode)] = remaining;
      patterns_.emplace_back(occ);
      return;
    }
    for (int n = remaining; n >= 0; --n) {
      occ[static_cast<std::size_t>(mode)] = n;
      self(self, mode + 1, remaining - n);
    }
    occ[static_cast<std::size_t>(mode)] = 0;
  };
  emit(emit, 0, photons);

  skip_.assign(static_cast<std::size_t>(modes) * static_cast<std::size_t>(photons + 1), 0);
  for (int m = 0; m < modes; ++m) {
    std::size_t acc = 0;
    for (int t = 0; t <= photons; ++t) {
      skip_[static_cast<std::size_t>(m * (photons + 1) + t)] = acc;
      acc += sector_dimension(m, t);
    }
  }
}

std::size_t FockBasis::rank(const int* occ) const {
  std::size_t r = 0;
  int remaining = photons_;
  for (int i = 0; i + 1 < modes_; ++i) {
    const int n = occ[i];
    // Patterns that put more photons in mode i come first.
    r += skip_[static_cast<std::size_t>((modes_ - i - 1) * (photons_ + 1) + (remaining - n))];
    remaining -= n;
  }
  return r;
}

std::size_t FockBasis::rank(const FockPattern& pattern) const {
  require(pattern.mode_count() == modes_ && pattern.total_photons() == photons_,
          "FockBasis: pattern does not belong to this sector");
  return rank(pattern.occupations().data());
}

std::vector<FockPattern> enumerate_patterns(int mode_count, int photon_count) {
  return FockBasis(mode_count, photon_count).patterns();
}

// ---------------------------------------------------------------------------
// Transfer matrices

bool is_unitary(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  const Matrix gram = m.adjoint() * m;
  const Matrix diff = gram - Matrix::Identity(m.rows(), m.cols());
  return m.size() == 0 || diff.cwiseAbs().maxCoeff() <= tolerance;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

TransferMatrix::TransferMatrix(Matrix entries, MatrixKind kind)
    : entries_(std::move(entries)), kind_(kind) {
  require(entries_.rows() == entries_.cols(), "TransferMatrix: matrix must be square");
  if (kind_ == MatrixKind::unitary) {
    require(is_unitary(entries_), "TransferMatrix: matrix flagged unitary is not unitary");
  } else {
    require(spectral_norm(entries_) <= 1.0 + kTolerance,
            "TransferMatrix: subunitary matrix has a singular value above 1");
  }
}

TransferMatrix TransferMatrix::identity(int size) {
  return TransferMatrix(Matrix::Identity(size, size), MatrixKind::unitary);
}

TransferMatrix TransferMatrix::leading_block(int block) const {
  require(block >= 0 && block <= size(), "TransferMatrix: block larger than matrix");
  return TransferMatrix(entries_.topLeftCorner(block, block), MatrixKind::subunitary);
}

TransferMatrix TransferMatrix::then_after(const TransferMatrix& other) const {
  require(size() == other.size(), "TransferMatrix: dimension mismatch in product");
  const bool both_unitary = kind_ == MatrixKind::unitary && other.kind_ == MatrixKind::unitary;
  return TransferMatrix(entries_ * other.entries_,
                        both_unitary ? MatrixKind::unitary : MatrixKind::subunitary);
}

// ---------------------------------------------------------------------------
// Permanents and amplitudes

Complex permanent(const Matrix& a) {
  require(a.rows() == a.cols(), "permanent: matrix must be square");
  const int n = static_cast<int>(a.rows());
  require(n <= 40, "permanent: matrix too large for exact evaluation");
  if (n == 0) return {1.0, 0.0};
  if (n == 1) return a(0, 0);

  // perm(A) = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij, walking the
  // subsets S in Gray-code order so each step touches one column.
  std::vector<Complex> row_sums(static_cast<std::size_t>(n), Complex{});
  Complex total{};
  std::uint64_t gray = 0;
  const std::uint64_t limit = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < limit; ++k) {
    const int col = std::countr_zero(k);
    const std::uint64_t bit = std::uint64_t{1} << col;
    gray ^= bit;
    if (gray & bit) {
      for (int i = 0; i < n; ++i) row_sums[static_cast<std::size_t>(i)] += a(i, col);
    } else {
      for (int i = 0; i < n; ++i) row_sums[static_cast<std::size_t>(i)] -= a(i, col);
    }
    Complex product = row_sums[0];
    for (int i = 1; i < n; ++i) product *= row_sums[static_cast<std::size_t>(i)];
    if (std::popcount(gray) & 1) {
      total -= product;
    } else {
      total += product;
    }
  }
  return (n & 1) ? -total : total;
}

Matrix build_submatrix(const TransferMatrix& transfer, const FockPattern& input,
                       const FockPattern& output) {
  require(input.mode_count() == transfer.size() && output.mode_count() == transfer.size(),
          "build_submatrix: pattern mode count differs from transfer dimension");
  require(input.total_photons() == output.total_photons(),
          "build_submatrix: input and output photon numbers differ");
  const int n = input.total_photons();
  std::vector<int> rows, cols;
  rows.reserve(static_cast<std::size_t>(n));
  cols.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < output.mode_count(); ++j)
    for (int r = 0; r < output[j]; ++r) rows.push_back(j);
  for (int k = 0; k < input.mode_count(); ++k)
    for (int r = 0; r < input[k]; ++r) cols.push_back(k);

  Matrix sub(n, n);
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c)
      sub(i, c) = transfer(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(c)]);
  return sub;
}

Complex amplitude(const TransferMatrix& transfer, const FockPattern& input,
                  const FockPattern& output) {
  const Matrix sub = build_submatrix(transfer, input, output);
  return permanent(sub) / std::sqrt(input.factorial_product() * output.factorial_product());
}

// ---------------------------------------------------------------------------
// State evolution

namespace {

// succ[idx * modes + j] is the rank in sector n+1 of pattern idx (sector n) plus a
// photon in mode j.
std::vector<std::uint32_t> successor_table(const FockBasis& from, const FockBasis& to) {
  const int modes = from.modes();
  std::vector<std::uint32_t> succ(from.size() * static_cast<std::size_t>(modes));
  std::vector<int> occ(static_cast<std::size_t>(modes));
  for (std::size_t idx = 0; idx < from.size(); ++idx) {
    const auto& src = from[idx].occupations();
    std::copy(src.begin(), src.end(), occ.begin());
    for (int j = 0; j < modes; ++j) {
      ++occ[static_cast<std::size_t>(j)];
      succ[idx * static_cast<std::size_t>(modes) + static_cast<std::size_t>(j)] =
          static_cast<std::uint32_t>(to.rank(occ.data()));
      --occ[static_cast<std::size_t>(j)];
    }
  }
  return succ;
}

}  // namespace

SectorAmplitudes evolve_sector(const TransferMatrix& transfer, const FockState& input,
                               std::optional<int> output_modes) {
  require(input.mode_count() == transfer.size(),
          "evolve_sector: state mode count differs from transfer dimension");
  const auto photons = input.photon_number();
  require(photons.has_value(), "evolve_sector: input must have a definite photon number");
  const int kept = output_modes.value_or(transfer.size());
  require(kept >= 1 && kept <= transfer.size(), "evolve_sector: invalid output mode count");
  const int n = *photons;

  std::vector<FockBasis> sectors;
  sectors.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) sectors.emplace_back(kept, k);
  std::vector<std::vector<std::uint32_t>> succ;
  for (int k = 0; k < n; ++k) succ.push_back(successor_table(sectors[k], sectors[k + 1]));

  std::vector<Complex> result(sectors[static_cast<std::size_t>(n)].size(), Complex{});
  std::vector<Complex> poly, next;
  const auto& u = transfer.entries();

  for (const auto& [pattern, coefficient] : input) {
    if (coefficient == Complex{}) continue;
    poly.assign(1, coefficient / std::sqrt(pattern.factorial_product()));
    int degree = 0;
    for (int k = 0; k < pattern.mode_count(); ++k) {
      for (int rep = 0; rep < pattern[k]; ++rep) {
        const auto& table = succ[static_cast<std::size_t>(degree)];
        next.assign(sectors[static_cast<std::size_t>(degree) + 1].size(), Complex{});
        for (std::size_t idx = 0; idx < poly.size(); ++idx) {
          const Complex c = poly[idx];
          if (c == Complex{}) continue;
          const std::uint32_t* row = &table[idx * static_cast<std::size_t>(kept)];
          for (int j = 0; j < kept; ++j) {
            const Complex ujk = u(j, k);
            if (ujk != Complex{}) next[row[j]] += c * ujk;
          }
        }
        poly.swap(next);
        ++degree;
      }
    }
    for (std::size_t idx = 0; idx < poly.size(); ++idx) result[idx] += poly[idx];
  }

  auto& basis = sectors[static_cast<std::size_t>(n)];
  for (std::size_t idx = 0; idx < result.size(); ++idx) {
    if (result[idx] != Complex{}) result[idx] *= std::sqrt(basis[idx].factorial_product());
  }
  return SectorAmplitudes{std::move(basis), std::move(result)};
}

FockState evolve_state(const TransferMatrix& transfer, const FockState& input) {
  require(input.mode_count() == transfer.size(),
          "evolve_state: state mode count differs from transfer dimension");
  std::map<int, FockState> by_sector;
  for (const auto& [pattern, value] : input) {
    auto [it, inserted] = by_sector.try_emplace(pattern.total_photons(), input.mode_count());
    it->second.add(pattern, value);
  }
  FockState out(transfer.size());
  for (const auto& [photons, part] : by_sector) {
    const auto sector = evolve_sector(transfer, part);
    for (std::size_t i = 0; i < sector.basis.size(); ++i) {
      if (std::abs(sector.amplitudes[i]) >= 1e-15) out.add(sector.basis[i], sector.amplitudes[i]);
    }
  }
  return out;
}

double transmitted_norm(const TransferMatrix& transfer, const FockState& input) {
  require(input.mode_count() == transfer.size(),
          "transmitted_norm: state mode count differs from transfer dimension");
  require(input.photon_number().has_value(),
          "transmitted_norm: input must have a definite photon number");
  // Gamma is multiplicative on each sector, so
  // ||Gamma(L) psi||^2 = <psi| Gamma(L^dagger L) |psi>.
  const TransferMatrix gram(transfer.entries().adjoint() * transfer.entries(),
                            MatrixKind::subunitary);
  std::vector<std::pair<const FockPattern*, Complex>> terms;
  for (const auto& [pattern, value] : input) terms.emplace_back(&pattern, value);
  Complex total{};
  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = 0; b < terms.size(); ++b) {
      const Complex weight = std::conj(terms[a].second) * terms[b].second;
      if (weight == Complex{}) continue;
      total += weight * amplitude(gram, *terms[b].first, *terms[a].first);
    }
  }
  return total.real();
}

}  // namespace fusionloss
