// Copyright 2026 The strassen Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

/// \file lp.hpp
/// \brief Dense two-phase primal simplex with Bland's rule.
///
/// Every LP built elsewhere in the library (coupling feasibility, transport,
/// martingale transport) is small and dense, so the tableau is stored as a
/// plain row-major matrix. Pivot choice is Bland's lowest-index rule in both
/// phases, which makes the returned basis a deterministic function of the
/// input bytes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "strassen/error.hpp"

namespace strassen {

enum class RowSense { Eq, Ge, Le };

inline constexpr double kFeasTol = 1e-9;
/// Smallest column entry accepted as a pivot on the unit-scaled rows.
inline constexpr double kPivotTol = 1e-9;
/// Pivots below this are re-derived from a fresh factorization first.
inline constexpr double kRecheckPivot = 1e-5;

/// min c^T x  s.t.  A x (sense) b,  x >= 0.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> objective;  // num_vars
    std::vector<double> matrix;     // rows x num_vars, row-major
    std::vector<double> rhs;
    std::vector<RowSense> senses;

    std::size_t num_rows() const noexcept { return rhs.size(); }

    /// Appends a row and returns its index; coefficients are filled in by the caller.
    std::size_t add_row(RowSense sense, double b) {
        matrix.resize(matrix.size() + num_vars, 0.0);
        rhs.push_back(b);
        senses.push_back(sense);
        return rhs.size() - 1;
    }

    double& coeff(std::size_t row, std::size_t col) { return matrix[row * num_vars + col]; }
    double coeff(std::size_t row, std::size_t col) const { return matrix[row * num_vars + col]; }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "Optimal";
        case LpStatus::Infeasible: return "Infeasible";
        case LpStatus::Unbounded: return "Unbounded";
    }
    return "?";
}

struct LpOutcome {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> solution;  // set when Optimal
    double value = 0.0;            // set when Optimal
    double infeasibility_gap = 0.0;  // phase-one optimum on the scaled rows when Infeasible
    std::vector<double> duals;     // simplex multipliers per original row when Optimal
    std::size_t pivots = 0;
};

struct LpOptions {
    double feas_tol = kFeasTol;
    /// 0 selects the default of 50 * (n + m).
    std::size_t max_pivots = 0;
    /// When set, the tableau is dumped after every pivot.
    std::ostream* trace = nullptr;
};

namespace detail {

class Tableau {
public:
    Tableau(const LinearProgram& lp, const LpOptions& opts) : opts_(opts), n_(lp.num_vars), m_(lp.num_rows()) {
        for (auto s : lp.senses) {
            if (s != RowSense::Eq) ++slacks_;
        }
        cols_ = n_ + slacks_ + m_;
        width_ = cols_ + 1;
        data_.assign(m_ * width_, 0.0);
        scale_.assign(m_, 1.0);
        basis_.resize(m_);
        alive_.assign(m_, true);

        std::size_t slack = n_;
        for (std::size_t i = 0; i < m_; ++i) {
            double row_max = 0.0;
            for (std::size_t j = 0; j < n_; ++j) row_max = std::max(row_max, std::abs(lp.coeff(i, j)));
            double s = row_max > 0.0 ? 1.0 / row_max : 1.0;
            if (lp.rhs[i] * s < 0.0) s = -s;
            scale_[i] = s;
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = lp.coeff(i, j) * s;
            if (lp.senses[i] != RowSense::Eq) {
                const double sign = lp.senses[i] == RowSense::Le ? 1.0 : -1.0;
                at(i, slack++) = sign * (s < 0.0 ? -1.0 : 1.0);
            }
            at(i, artificial(i)) = 1.0;
            rhs(i) = lp.rhs[i] * s;
            basis_[i] = artificial(i);
        }
        max_pivots_ = opts.max_pivots ? opts.max_pivots : 50 * (lp.num_vars + lp.num_rows());
        orig_ = data_;
        refactor_every_ = std::max<std::size_t>(64, m_);
    }

    /// Phase one. Returns the minimized sum of artificials.
    double phase_one() {
        cost_.assign(cols_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) cost_[artificial(i)] = 1.0;
        run(/*allow_artificial=*/true);
        return objective();
    }

    /// Pivots remaining zero-level artificials out of the basis, dropping rows
    /// that turn out to be linear combinations of the others.
    void drive_out_artificials() {
        for (std::size_t i = 0; i < m_; ++i) {
            if (!alive_[i] || !is_artificial(basis_[i])) continue;
            std::size_t enter = cols_;
            double largest = 1e-9;
            for (std::size_t j = 0; j < n_ + slacks_; ++j) {
                if (std::abs(at(i, j)) > largest) {
                    largest = std::abs(at(i, j));
                    enter = j;
                }
            }
            if (enter == cols_) {
                alive_[i] = false;
                continue;
            }
            pivot(i, enter);
        }
    }

    /// Phase two. Returns false when the problem is unbounded.
    bool phase_two(std::span<const double> objective_coeffs) {
        cost_.assign(cols_, 0.0);
        std::copy(objective_coeffs.begin(), objective_coeffs.end(), cost_.begin());
        cost_scale_ = 1.0;
        for (double c : objective_coeffs) cost_scale_ = std::max(cost_scale_, std::abs(c));
        return run(/*allow_artificial=*/false);
    }

    std::vector<double> primal() const {
        std::vector<double> x(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (alive_[i] && basis_[i] < n_) x[basis_[i]] = rhs(i);
        }
        for (double& v : x) {
            if (v < 0.0 && v >= -opts_.feas_tol) v = 0.0;
        }
        return x;
    }

    /// y_i = sum_r c_{B_r} * (B^{-1})_{r,i}, mapped back through the row scaling.
    std::vector<double> duals() const {
        std::vector<double> y(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            double acc = 0.0;
            for (std::size_t r = 0; r < m_; ++r) {
                if (alive_[r]) acc += cost_[basis_[r]] * at(r, artificial(i));
            }
            y[i] = acc * scale_[i];
        }
        return y;
    }

    std::size_t pivots() const noexcept { return pivots_; }

private:
    double& at(std::size_t i, std::size_t j) { return data_[i * width_ + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * width_ + j]; }
    double& rhs(std::size_t i) { return data_[i * width_ + cols_]; }
    double rhs(std::size_t i) const { return data_[i * width_ + cols_]; }
    std::size_t artificial(std::size_t i) const { return n_ + slacks_ + i; }
    bool is_artificial(std::size_t j) const { return j >= n_ + slacks_; }

    double objective() const {
        double acc = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (alive_[i]) acc += cost_[basis_[i]] * rhs(i);
        }
        return acc;
    }

    double reduced_cost(std::size_t j) const {
        double acc = cost_[j];
        for (std::size_t i = 0; i < m_; ++i) {
            if (alive_[i]) acc -= cost_[basis_[i]] * at(i, j);
        }
        return acc;
    }

    bool run(bool allow_artificial) {
        const std::size_t limit = allow_artificial ? cols_ : n_ + slacks_;
        const double dj_tol = 1e-11 * cost_scale_;
        std::vector<bool> in_basis(cols_, false);
        while (true) {
            std::fill(in_basis.begin(), in_basis.end(), false);
            for (std::size_t i = 0; i < m_; ++i) {
                if (alive_[i]) in_basis[basis_[i]] = true;
            }
            // Bland: lowest-index improving column enters.
            std::size_t enter = cols_;
            for (std::size_t j = 0; j < limit; ++j) {
                if (in_basis[j]) continue;
                if (reduced_cost(j) < -dj_tol) {
                    enter = j;
                    break;
                }
            }
            if (enter == cols_) {
                // Confirm optimality on a freshly factored tableau.
                if (since_refactor_ == 0) return true;
                refactor();
                continue;
            }

            // Ratio test; ties go to the lowest-index basic variable.
            std::size_t leave = m_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                if (!alive_[i]) continue;
                const double a = at(i, enter);
                if (a <= kPivotTol) continue;
                const double ratio = std::max(rhs(i), 0.0) / a;
                const double tie = 1e-12 * (1.0 + std::abs(best));
                if (leave == m_ || ratio < best - tie) {
                    best = ratio;
                    leave = i;
                } else if (ratio <= best + tie && basis_[i] < basis_[leave]) {
                    best = std::min(best, ratio);
                    leave = i;
                }
            }
            if (leave == m_) return false;
            // A small pivot may be accumulated rounding; redo the choice on a
            // fresh factorization before trusting it.
            if (at(leave, enter) < kRecheckPivot && since_refactor_ > 0) {
                refactor();
                continue;
            }
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t row, std::size_t col) {
        if (++pivots_ > max_pivots_) {
            throw Error(ErrorCode::IterationLimit,
                        "simplex exceeded " + std::to_string(max_pivots_) + " pivots");
        }
        const double p = at(row, col);
        for (std::size_t j = 0; j < width_; ++j) at(row, j) /= p;
        at(row, col) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == row || !alive_[i]) continue;
            const double f = at(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) {
                double v = at(i, j) - f * at(row, j);
                if (std::abs(v) < 1e-14) v = 0.0;
                at(i, j) = v;
            }
            at(i, col) = 0.0;
        }
        basis_[row] = col;
        if (opts_.trace) dump(*opts_.trace, row, col);
        if (++since_refactor_ >= refactor_every_) refactor();
    }

    /// Rebuilds B^{-1} [A | b] from the original rows for the current basis,
    /// discarding the rounding error accumulated by successive pivots.
    void refactor() {
        since_refactor_ = 0;
        // Dropped rows keep their artificial in the basis, so the full m x m
        // basis stays nonsingular; their rows are simply never read again.
        std::vector<std::size_t> rows(m_);
        for (std::size_t i = 0; i < m_; ++i) rows[i] = i;
        const auto k = static_cast<Eigen::Index>(rows.size());
        const auto w = static_cast<Eigen::Index>(width_);
        Eigen::MatrixXd basis(k, k);
        Eigen::MatrixXd full(k, w);
        for (Eigen::Index r = 0; r < k; ++r) {
            const double* src = &orig_[rows[r] * width_];
            for (Eigen::Index c = 0; c < k; ++c) basis(r, c) = src[basis_[rows[c]]];
            for (Eigen::Index j = 0; j < w; ++j) full(r, j) = src[j];
        }
        const Eigen::MatrixXd x = basis.partialPivLu().solve(full);
        for (Eigen::Index r = 0; r < k; ++r) {
            for (Eigen::Index j = 0; j < w; ++j) {
                const double v = x(r, j);
                at(rows[r], static_cast<std::size_t>(j)) = std::abs(v) < 1e-14 ? 0.0 : v;
            }
        }
        for (Eigen::Index c = 0; c < k; ++c) {
            for (Eigen::Index r = 0; r < k; ++r) at(rows[r], basis_[rows[c]]) = r == c ? 1.0 : 0.0;
        }
    }

    void dump(std::ostream& os, std::size_t row, std::size_t col) const {
        os << "pivot " << pivots_ << ": row " << row << " col " << col << "\n";
        for (std::size_t i = 0; i < m_; ++i) {
            if (!alive_[i]) continue;
            os << "  x" << basis_[i] << " |";
            for (std::size_t j = 0; j < width_; ++j) os << ' ' << std::setw(10) << std::setprecision(4) << at(i, j);
            os << "\n";
        }
    }

    LpOptions opts_;
    std::size_t n_;
    std::size_t m_;
    std::size_t slacks_ = 0;
    std::size_t cols_ = 0;
    std::size_t width_ = 0;
    std::vector<double> data_;
    std::vector<double> orig_;
    std::vector<double> scale_;
    std::vector<double> cost_;
    double cost_scale_ = 1.0;
    std::vector<std::size_t> basis_;
    std::vector<bool> alive_;
    std::size_t pivots_ = 0;
    std::size_t max_pivots_ = 0;
    std::size_t since_refactor_ = 0;
    std::size_t refactor_every_ = 64;
};

inline void validate(const LinearProgram& lp) {
    const std::size_t m = lp.num_rows();
    if (lp.num_vars == 0 || m == 0) throw Error(ErrorCode::DimensionMismatch, "LP needs at least one row and column");
    if (lp.objective.size() != lp.num_vars || lp.matrix.size() != m * lp.num_vars || lp.senses.size() != m) {
        throw Error(ErrorCode::DimensionMismatch, "LP array sizes are inconsistent");
    }
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(lp.objective.begin(), lp.objective.end(), finite) ||
        !std::all_of(lp.matrix.begin(), lp.matrix.end(), finite) ||
        !std::all_of(lp.rhs.begin(), lp.rhs.end(), finite)) {
        throw Error(ErrorCode::NonFiniteInput, "LP has non-finite entries");
    }
}

}  // namespace detail

/// Solves the LP with the two-phase method.
///
/// Rows are scaled to unit max-norm before the feasibility tolerance is
/// applied. Optimal solutions are basic. Throws IterationLimit rather than
/// returning a doubtful answer.
inline LpOutcome solve(const LinearProgram& lp, const LpOptions& opts = {}) {
    detail::validate(lp);
    detail::Tableau tab(lp, opts);
    LpOutcome out;
    const double gap = tab.phase_one();
    if (gap > opts.feas_tol) {
        out.status = LpStatus::Infeasible;
        out.infeasibility_gap = gap;
        out.pivots = tab.pivots();
        return out;
    }
    tab.drive_out_artificials();
    if (!tab.phase_two(lp.objective)) {
        out.status = LpStatus::Unbounded;
        out.pivots = tab.pivots();
        return out;
    }
    out.status = LpStatus::Optimal;
    out.solution = tab.primal();
    out.duals = tab.duals();
    double value = 0.0;
    for (std::size_t j = 0; j < lp.num_vars; ++j) value += lp.objective[j] * out.solution[j];
    out.value = value;
    out.pivots = tab.pivots();
    return out;
}

/// Phase one only: any basic feasible point, or the infeasibility gap.
inline LpOutcome feasibility(std::size_t num_vars, std::span<const double> matrix, std::span<const double> rhs,
                             std::span<const RowSense> senses, const LpOptions& opts = {}) {
    LinearProgram lp;
    lp.num_vars = num_vars;
    lp.objective.assign(num_vars, 0.0);
    lp.matrix.assign(matrix.begin(), matrix.end());
    lp.rhs.assign(rhs.begin(), rhs.end());
    lp.senses.assign(senses.begin(), senses.end());
    return solve(lp, opts);
}

}  // namespace strassen
