// Copyright 2026 The mdp-interp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "simplex.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace mdp::internal {
namespace {

constexpr int kDegenerateStreakForBland = 50;
constexpr int kReinversionInterval = 400;
constexpr int kMaxRefreshesPerPhase = 8;
constexpr size_t kMaxReinversionRows = 1500;
constexpr double kZeroSnap = 1e-13;
constexpr double kMaxTrustedGrowth = 1e12;

// Dense tableau with its originating data kept aside so the basis can be
// re-inverted from scratch, which wipes out drift accumulated by pivoting.
class Tableau {
 public:
  explicit Tableau(StandardForm problem) : original_cols_(problem.a.cols()) {
    const size_t m = problem.a.rows();
    const size_t n = problem.a.cols();
    for (size_t i = 0; i < m; ++i) {
      if (problem.b[i] < 0.0) {
        for (double& v : problem.a.Row(i)) v = -v;
        problem.b[i] = -problem.b[i];
      }
    }
    // Seed the basis with columns that are positive multiples of unit vectors.
    std::vector<int> nnz(n, 0);
    std::vector<size_t> nz_row(n, 0);
    for (size_t i = 0; i < m; ++i) {
      for (size_t j = 0; j < n; ++j) {
        if (problem.a(i, j) != 0.0) {
          ++nnz[j];
          nz_row[j] = i;
        }
      }
    }
    basis_.assign(m, -1);
    for (size_t j = 0; j < n; ++j) {
      if (nnz[j] == 1 && basis_[nz_row[j]] < 0 &&
          problem.a(nz_row[j], j) > 0.0) {
        basis_[nz_row[j]] = static_cast<int>(j);
      }
    }
    size_t artificials = 0;
    for (int b : basis_) artificials += b < 0 ? 1 : 0;
    cols_ = n + artificials;
    stride_ = cols_ + 1;
    rows_ = m;
    t_.assign(rows_ * stride_, 0.0);
    artificial_row_.assign(artificials, 0);
    size_t next_art = n;
    for (size_t i = 0; i < m; ++i) {
      double* row = &t_[i * stride_];
      for (size_t j = 0; j < n; ++j) row[j] = problem.a(i, j);
      row[cols_] = problem.b[i];
      if (basis_[i] < 0) {
        artificial_row_[next_art - n] = i;
        basis_[i] = static_cast<int>(next_art);
        row[next_art++] = 1.0;
      }
    }
    // The unscaled rows are the reference data for re-inversion.
    original_ = t_;
    original_rows_.resize(m);
    for (size_t i = 0; i < m; ++i) original_rows_[i] = i;
    for (size_t i = 0; i < m; ++i) {
      double* row = &t_[i * stride_];
      const double scale = 1.0 / row[basis_[i]];
      if (scale != 1.0) {
        for (size_t j = 0; j <= cols_; ++j) row[j] *= scale;
      }
      row[basis_[i]] = 1.0;
    }
    cost_ = std::move(problem.c);
    allowed_.assign(cols_, 1);
    rhs_scale_ = 1.0;
    for (double v : problem.b) rhs_scale_ = std::max(rhs_scale_, std::abs(v));
  }

  bool has_artificials() const { return cols_ > original_cols_; }

  // Returns false when phase 1 cannot reach zero infeasibility.
  absl::StatusOr<bool> PhaseOne(int max_iterations) {
    phase_cost_.assign(cols_, 0.0);
    for (size_t j = original_cols_; j < cols_; ++j) phase_cost_[j] = 1.0;
    PriceOut();
    absl::StatusOr<LpStatus> s = Run(max_iterations);
    if (!s.ok()) return s.status();
    double infeasibility = 0.0;
    for (size_t i = 0; i < rows_; ++i) {
      if (IsArtificial(basis_[i])) infeasibility += std::abs(Rhs(i));
    }
    if (infeasibility > 1e-9 * rhs_scale_) {
      double growth = 0.0;
      for (double v : t_) growth = std::max(growth, std::abs(v));
      if (growth > kMaxTrustedGrowth) {
        return absl::InternalError(
            "simplex phase 1 stalled on an ill-conditioned basis");
      }
      return false;
    }
    DriveOutArtificials();
    for (size_t j = original_cols_; j < cols_; ++j) allowed_[j] = 0;
    return true;
  }

  absl::StatusOr<LpStatus> PhaseTwo(int max_iterations) {
    phase_cost_.assign(cols_, 0.0);
    std::copy(cost_.begin(), cost_.end(), phase_cost_.begin());
    PriceOut();
    return Run(max_iterations);
  }

  std::vector<double> Solution() const {
    std::vector<double> x(original_cols_, 0.0);
    for (size_t i = 0; i < rows_; ++i) {
      if (!IsArtificial(basis_[i])) x[basis_[i]] = std::max(0.0, Rhs(i));
    }
    return x;
  }

  std::vector<double> ReducedCosts() const {
    return std::vector<double>(d_.begin(), d_.begin() + original_cols_);
  }

  int iterations() const { return iterations_; }

 private:
  bool IsArtificial(int col) const {
    return static_cast<size_t>(col) >= original_cols_;
  }
  double& At(size_t i, size_t j) { return t_[i * stride_ + j]; }
  double Rhs(size_t i) const { return t_[i * stride_ + cols_]; }

  void PriceOut() {
    d_ = phase_cost_;
    for (size_t i = 0; i < rows_; ++i) {
      const double cb = phase_cost_[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &t_[i * stride_];
      for (size_t j = 0; j < cols_; ++j) d_[j] -= cb * row[j];
    }
    for (int b : basis_) d_[b] = 0.0;
  }

  // Rebuilds the tableau as B^{-1} [A | b] from the original rows. Skipped
  // for very tall tableaus or a numerically singular basis.
  bool Reinvert() {
    const size_t m = rows_;
    if (m == 0 || m > kMaxReinversionRows) return false;
    // Gauss-Jordan on [B | I] with partial pivoting.
    std::vector<double> inv(m * m, 0.0);
    std::vector<double> b(m * m, 0.0);
    for (size_t r = 0; r < m; ++r) {
      const double* orig = &original_[original_rows_[r] * stride_];
      for (size_t c = 0; c < m; ++c) b[r * m + c] = orig[basis_[c]];
      inv[r * m + r] = 1.0;
    }
    for (size_t c = 0; c < m; ++c) {
      size_t piv = c;
      for (size_t r = c + 1; r < m; ++r) {
        if (std::abs(b[r * m + c]) > std::abs(b[piv * m + c])) piv = r;
      }
      if (std::abs(b[piv * m + c]) < 1e-12) return false;
      if (piv != c) {
        std::swap_ranges(b.begin() + piv * m, b.begin() + (piv + 1) * m,
                         b.begin() + c * m);
        std::swap_ranges(inv.begin() + piv * m, inv.begin() + (piv + 1) * m,
                         inv.begin() + c * m);
      }
      const double p = 1.0 / b[c * m + c];
      for (size_t k = 0; k < m; ++k) {
        b[c * m + k] *= p;
        inv[c * m + k] *= p;
      }
      for (size_t r = 0; r < m; ++r) {
        if (r == c) continue;
        const double f = b[r * m + c];
        if (f == 0.0) continue;
        for (size_t k = 0; k < m; ++k) {
          b[r * m + k] -= f * b[c * m + k];
          inv[r * m + k] -= f * inv[c * m + k];
        }
      }
    }
    // Row c of inv now maps original rows to basis position c.
    std::fill(t_.begin(), t_.end(), 0.0);
    for (size_t src = 0; src < m; ++src) {
      const double* orig = &original_[original_rows_[src] * stride_];
      for (size_t j = 0; j <= cols_; ++j) {
        const double v = orig[j];
        if (v == 0.0) continue;
        for (size_t c = 0; c < m; ++c) {
          const double f = inv[c * m + src];
          if (f != 0.0) t_[c * stride_ + j] += f * v;
        }
      }
    }
    for (size_t c = 0; c < m; ++c) {
      double* row = &t_[c * stride_];
      for (size_t j = 0; j <= cols_; ++j) {
        if (std::abs(row[j]) < kZeroSnap) row[j] = 0.0;
      }
      for (size_t c2 = 0; c2 < m; ++c2) row[basis_[c2]] = c2 == c ? 1.0 : 0.0;
      if (row[cols_] < 0.0 && row[cols_] > -1e-9) row[cols_] = 0.0;
    }
    PriceOut();
    return true;
  }

  void Pivot(size_t r, size_t q) {
    double* prow = &t_[r * stride_];
    const double inv = 1.0 / prow[q];
    nz_.clear();
    for (size_t j = 0; j <= cols_; ++j) {
      if (prow[j] == 0.0) continue;
      prow[j] *= inv;
      if (std::abs(prow[j]) < kZeroSnap) {
        prow[j] = 0.0;
      } else {
        nz_.push_back(j);
      }
    }
    prow[q] = 1.0;
    for (size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * stride_];
      const double f = row[q];
      if (f == 0.0) continue;
      for (size_t j : nz_) {
        const double v = row[j] - f * prow[j];
        row[j] = std::abs(v) < kZeroSnap ? 0.0 : v;
      }
      row[q] = 0.0;
      if (row[cols_] < 0.0 && row[cols_] > -1e-11) row[cols_] = 0.0;
    }
    const double fd = d_[q];
    if (fd != 0.0) {
      for (size_t j : nz_) {
        if (j < cols_) d_[j] -= fd * prow[j];
      }
    }
    d_[q] = 0.0;
    basis_[r] = static_cast<int>(q);
    ++iterations_;
  }

  absl::StatusOr<LpStatus> Run(int max_iterations) {
    int degenerate_streak = 0;
    int refreshes = 0;
    int since_refresh = 0;
    while (true) {
      if (iterations_ >= max_iterations) {
        return absl::InternalError(
            absl::StrCat("simplex iteration limit ", max_iterations, " reached"));
      }
      if (since_refresh >= kReinversionInterval) {
        Reinvert();
        since_refresh = 0;
      }
      const bool bland = degenerate_streak > kDegenerateStreakForBland;
      int q = -1;
      double best = -kReducedCostTolerance;
      for (size_t j = 0; j < cols_; ++j) {
        if (!allowed_[j] || d_[j] >= best) continue;
        q = static_cast<int>(j);
        if (bland) break;
        best = d_[j];
      }
      if (q < 0) {
        // Confirm optimality on a freshly inverted basis.
        if (since_refresh > 0 && refreshes < kMaxRefreshesPerPhase) {
          if (!Reinvert()) PriceOut();
          ++refreshes;
          since_refresh = 0;
          continue;
        }
        return LpStatus::kOptimal;
      }

      // Two-pass ratio test: among rows within a small band of the minimum
      // ratio, take the largest pivot element (or the lowest basic index
      // while anti-cycling).
      double best_ratio = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < rows_; ++i) {
        const double a = t_[i * stride_ + q];
        if (a <= kPivotTolerance) continue;
        best_ratio = std::min(best_ratio, std::max(0.0, Rhs(i)) / a);
      }
      int r = -1;
      const double band = best_ratio + 1e-9 * (1.0 + best_ratio);
      for (size_t i = 0; i < rows_ && std::isfinite(best_ratio); ++i) {
        const double a = t_[i * stride_ + q];
        if (a <= kPivotTolerance || std::max(0.0, Rhs(i)) / a > band) continue;
        if (r < 0) {
          r = static_cast<int>(i);
          continue;
        }
        const double ar = t_[r * stride_ + q];
        const bool better = bland ? basis_[i] < basis_[r]
                                  : a > ar || (a == ar && basis_[i] < basis_[r]);
        if (better) r = static_cast<int>(i);
      }
      if (r < 0) return LpStatus::kUnbounded;
      degenerate_streak = best_ratio <= 1e-12 ? degenerate_streak + 1 : 0;
      Pivot(r, q);
      ++since_refresh;
    }
  }

  void DriveOutArtificials() {
    for (size_t i = 0; i < rows_;) {
      if (!IsArtificial(basis_[i])) {
        ++i;
        continue;
      }
      int q = -1;
      double best = kPivotTolerance;
      for (size_t j = 0; j < original_cols_; ++j) {
        const double a = std::abs(At(i, j));
        if (a > best) {
          best = a;
          q = static_cast<int>(j);
        }
      }
      if (q >= 0) {
        Pivot(i, q);
        ++i;
      } else {
        RemoveRow(i);
      }
    }
  }

  // Drops tableau row r, which holds an artificial that no structural column
  // can replace. The original row it stands for is the one whose artificial
  // is basic there; that row is redundant and leaves the reference data.
  void RemoveRow(size_t r) {
    const size_t art = basis_[r] - original_cols_;
    const size_t orig_row = artificial_row_[art];
    t_.erase(t_.begin() + r * stride_, t_.begin() + (r + 1) * stride_);
    basis_.erase(basis_.begin() + r);
    original_rows_.erase(
        std::find(original_rows_.begin(), original_rows_.end(), orig_row));
    --rows_;
  }

  size_t original_cols_;
  size_t cols_ = 0;
  size_t stride_ = 0;
  size_t rows_ = 0;
  std::vector<double> t_;
  std::vector<double> original_;
  std::vector<size_t> original_rows_;
  std::vector<size_t> artificial_row_;
  std::vector<int> basis_;
  std::vector<double> cost_;
  std::vector<double> phase_cost_;
  std::vector<double> d_;
  std::vector<char> allowed_;
  std::vector<size_t> nz_;
  double rhs_scale_ = 1.0;
  int iterations_ = 0;
};

}  // namespace

absl::StatusOr<SimplexResult> SolveStandardForm(StandardForm problem,
                                                int max_iterations) {
  if (problem.b.size() != problem.a.rows() ||
      problem.c.size() != problem.a.cols()) {
    return absl::InvalidArgumentError("standard form dimensions disagree");
  }
  Tableau tableau(std::move(problem));
  SimplexResult result;
  if (tableau.has_artificials()) {
    absl::StatusOr<bool> feasible = tableau.PhaseOne(max_iterations);
    if (!feasible.ok()) return feasible.status();
    if (!*feasible) {
      result.status = LpStatus::kInfeasible;
      result.iterations = tableau.iterations();
      return result;
    }
  }
  absl::StatusOr<LpStatus> status = tableau.PhaseTwo(max_iterations);
  if (!status.ok()) return status.status();
  result.status = *status;
  result.x = tableau.Solution();
  result.reduced_costs = tableau.ReducedCosts();
  result.iterations = tableau.iterations();
  return result;
}

}  // namespace mdp::internal
