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

/// \file mot.hpp
/// \brief Classical and martingale optimal transport between discrete measures.
///
/// Only minimization is offered; maximize by negating the cost. Costs must
/// be finite on every support pair touched, and each evaluation is audited
/// against the declared growth bound c(x, y) >= -C (1 + |x| + |y|).

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "strassen/coupling.hpp"
#include "strassen/error.hpp"
#include "strassen/kernels.hpp"
#include "strassen/lp.hpp"
#include "strassen/measure.hpp"
#include "strassen/wasserstein.hpp"

namespace strassen {

class CostSpec {
public:
    using Fn = std::function<double(PointView, PointView)>;

    CostSpec(std::string name, Fn fn, double lower_bound = 0.0)
            : name_(std::move(name)), fn_(std::move(fn)), lower_bound_(lower_bound) {}

    /// Explicit table of c(x_i, y_j) over the canonical supports, row-major.
    static CostSpec table(std::size_t rows, std::size_t cols, std::vector<double> values, double lower_bound = 0.0) {
        if (values.size() != rows * cols) throw Error(ErrorCode::DimensionMismatch, "cost table has the wrong size");
        CostSpec c("table", nullptr, lower_bound);
        c.rows_ = rows;
        c.cols_ = cols;
        c.table_ = std::move(values);
        return c;
    }

    static CostSpec abs() {
        return CostSpec("abs", [](PointView x, PointView y) { return distance(x, y); });
    }

    static CostSpec square() {
        return CostSpec("square", [](PointView x, PointView y) {
            const double d = distance(x, y);
            return d * d;
        });
    }

    /// sum_k (y_k - x_k)_+
    static CostSpec forward() {
        return CostSpec("forward", [](PointView x, PointView y) {
            double s = 0.0;
            for (std::size_t k = 0; k < x.size(); ++k) s += std::max(y[k] - x[k], 0.0);
            return s;
        });
    }

    static CostSpec constant(double v) {
        return CostSpec("constant", [v](PointView, PointView) { return v; }, std::max(0.0, -v));
    }

    static CostSpec by_name(const std::string& name) {
        if (name == "abs") return abs();
        if (name == "square") return square();
        if (name == "forward") return forward();
        throw Error(ErrorCode::KindMismatch, "unknown cost '" + name + "' (expected abs, square or forward)");
    }

    const std::string& name() const noexcept { return name_; }
    double lower_bound() const noexcept { return lower_bound_; }

    /// Cost matrix over the supports, with every entry audited.
    std::vector<double> matrix(const DiscreteMeasure& mu, const DiscreteMeasure& nu) const {
        const std::size_t n = mu.size();
        const std::size_t m = nu.size();
        if (table_ && (rows_ != n || cols_ != m)) {
            throw Error(ErrorCode::DimensionMismatch, "cost table is " + std::to_string(rows_) + "x" +
                                                              std::to_string(cols_) + " but the supports are " +
                                                              std::to_string(n) + "x" + std::to_string(m));
        }
        std::vector<double> out(n * m);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                const double c = table_ ? (*table_)[i * m + j] : fn_(mu.point(i), nu.point(j));
                if (!std::isfinite(c)) {
                    throw Error(ErrorCode::CostBoundViolation, "cost is not finite at pair (" + std::to_string(i) +
                                                                       ", " + std::to_string(j) + ")");
                }
                const double floor = -lower_bound_ * (1.0 + norm(mu.point(i)) + norm(nu.point(j))) - 1e-9;
                if (c < floor) {
                    throw Error(ErrorCode::CostBoundViolation, "cost " + std::to_string(c) + " at pair (" +
                                                                       std::to_string(i) + ", " + std::to_string(j) +
                                                                       ") is below the declared lower bound");
                }
                out[i * m + j] = c;
            }
        }
        return out;
    }

private:
    std::string name_;
    Fn fn_;
    double lower_bound_ = 0.0;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::optional<std::vector<double>> table_;
};

struct MotResult {
    std::optional<TransportResult> optimum;
    /// Phase-one gap when no martingale coupling exists.
    double gap = 0.0;

    explicit operator bool() const noexcept { return optimum.has_value(); }
};

/// Cheapest martingale coupling; empty with the gap when mu is not <=cx nu.
inline MotResult mot_solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostSpec& cost,
                           const LpOptions& opts = {}) {
    require_same_dim(mu, nu);
    auto lp = coupling_program(mu, nu, OrderKind::Cx);
    lp.objective = cost.matrix(mu, nu);
    const auto out = solve(lp, opts);
    MotResult res;
    if (out.status == LpStatus::Infeasible) {
        res.gap = out.infeasibility_gap;
        return res;
    }
    if (out.status != LpStatus::Optimal) throw Error(ErrorCode::IterationLimit, "martingale transport LP is unbounded");
    res.optimum = TransportResult{out.value, Coupling(mu, nu, out.solution)};
    return res;
}

inline TransportResult ot_solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const CostSpec& cost,
                                const LpOptions& opts = {}) {
    require_same_dim(mu, nu);
    return transport(mu, nu, cost.matrix(mu, nu), opts);
}

struct ParametricMotResult {
    std::map<Label, TransportResult> per_label;
    std::vector<LabelFailure> failures;

    explicit operator bool() const noexcept { return failures.empty(); }
};

/// mot_solve label by label; every failing label is reported.
inline ParametricMotResult mot_parametric(const FiniteKernel& p, const FiniteKernel& q, const CostSpec& cost,
                                          const LpOptions& opts = {}) {
    require_same_params(p, q);
    ParametricMotResult res;
    for (const auto& [label, mu] : p.measures()) {
        auto r = mot_solve(mu, q.at(label), cost, opts);
        if (!r) {
            res.failures.push_back({label, r.gap, 0});
            continue;
        }
        res.per_label.emplace(label, std::move(*r.optimum));
    }
    if (!res.failures.empty()) res.per_label.clear();
    return res;
}

}  // namespace strassen
