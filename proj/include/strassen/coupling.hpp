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

/// \file coupling.hpp
/// \brief Couplings of discrete measures, martingale and submartingale
/// couplings via LP feasibility, their verifiers, and Markov composition.
///
/// A coupling is stored as a dense n x m plan between the canonical supports
/// of its two marginals. The martingale condition E[Y | X] = X is imposed
/// atom by atom: on a finite support every event in sigma(X) is a finite
/// union of singletons, so the per-atom drift
///
///     sum_j plan[i][j] * (y_j - x_i) = 0   (>= 0 for submartingales)
///
/// is exactly the set-test characterisation restricted to singletons.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "strassen/error.hpp"
#include "strassen/lp.hpp"
#include "strassen/measure.hpp"

namespace strassen {

enum class OrderKind { Cx, Icx };

inline const char* to_string(OrderKind k) { return k == OrderKind::Cx ? "cx" : "icx"; }

inline OrderKind parse_order_kind(const std::string& s) {
    if (s == "cx") return OrderKind::Cx;
    if (s == "icx") return OrderKind::Icx;
    throw Error(ErrorCode::KindMismatch, "unknown order kind '" + s + "' (expected cx or icx)");
}

/// Marginal residuals of couplings are accepted within this bound.
inline constexpr double kCouplingTol = 1e-9;

class Coupling {
public:
    Coupling(DiscreteMeasure source, DiscreteMeasure target, std::vector<double> plan)
            : source_(std::move(source)), target_(std::move(target)), plan_(std::move(plan)) {
        if (plan_.size() != source_.size() * target_.size()) {
            throw Error(ErrorCode::CouplingInvalid, "plan has " + std::to_string(plan_.size()) + " entries, expected " +
                                                            std::to_string(source_.size() * target_.size()));
        }
        for (double v : plan_) {
            if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteInput, "plan entry is not finite");
        }
    }

    const DiscreteMeasure& source() const noexcept { return source_; }
    const DiscreteMeasure& target() const noexcept { return target_; }
    std::size_t rows() const noexcept { return source_.size(); }
    std::size_t cols() const noexcept { return target_.size(); }
    double at(std::size_t i, std::size_t j) const { return plan_[i * cols() + j]; }
    std::span<const double> plan() const noexcept { return plan_; }

    std::vector<double> row_sums() const {
        std::vector<double> out(rows(), 0.0);
        for (std::size_t i = 0; i < rows(); ++i) {
            for (std::size_t j = 0; j < cols(); ++j) out[i] += at(i, j);
        }
        return out;
    }

    std::vector<double> column_sums() const {
        std::vector<double> out(cols(), 0.0);
        for (std::size_t i = 0; i < rows(); ++i) {
            for (std::size_t j = 0; j < cols(); ++j) out[j] += at(i, j);
        }
        return out;
    }

    /// Max deviation of the plan's marginals from the declared measures.
    double marginal_residual() const {
        double r = 0.0;
        auto rs = row_sums();
        auto cs = column_sums();
        for (std::size_t i = 0; i < rows(); ++i) r = std::max(r, std::abs(rs[i] - source_.weight(i)));
        for (std::size_t j = 0; j < cols(); ++j) r = std::max(r, std::abs(cs[j] - target_.weight(j)));
        return r;
    }

    /// sum_j plan[i][j] * (y_j[k] - x_i[k]); the weighted conditional drift at atom i.
    double drift(std::size_t i, std::size_t k) const {
        double acc = 0.0;
        const double xi = source_.point(i)[k];
        for (std::size_t j = 0; j < cols(); ++j) acc += at(i, j) * (target_.point(j)[k] - xi);
        return acc;
    }

    friend bool operator==(const Coupling&, const Coupling&) = default;

private:
    DiscreteMeasure source_;
    DiscreteMeasure target_;
    std::vector<double> plan_;
};

struct VerificationReport {
    bool passes = false;
    double tol = 0.0;
    double marginal_residual = 0.0;
    /// max_{i,k} |drift(i,k)|
    double martingale_residual = 0.0;
    /// min_{i,k} drift(i,k); the submartingale test looks at this one.
    double min_drift = 0.0;
    /// most negative plan entry (0 when none).
    double negative_mass = 0.0;
};

inline VerificationReport drift_report(const Coupling& c, double tol) {
    VerificationReport rep;
    rep.tol = tol;
    rep.marginal_residual = c.marginal_residual();
    rep.min_drift = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t k = 0; k < c.source().dim(); ++k) {
            const double d = c.drift(i, k);
            rep.martingale_residual = std::max(rep.martingale_residual, std::abs(d));
            rep.min_drift = std::min(rep.min_drift, d);
        }
    }
    for (double v : c.plan()) rep.negative_mass = std::min(rep.negative_mass, v);
    return rep;
}

inline VerificationReport verify_martingale(const Coupling& c, double tol) {
    auto rep = drift_report(c, tol);
    rep.passes = rep.martingale_residual <= tol && rep.marginal_residual <= tol && rep.negative_mass >= -tol;
    return rep;
}

inline VerificationReport verify_submartingale(const Coupling& c, double tol) {
    auto rep = drift_report(c, tol);
    rep.passes = rep.min_drift >= -tol && rep.marginal_residual <= tol && rep.negative_mass >= -tol;
    return rep;
}

inline VerificationReport verify(const Coupling& c, OrderKind kind, double tol) {
    return kind == OrderKind::Cx ? verify_martingale(c, tol) : verify_submartingale(c, tol);
}

inline Coupling product_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    std::vector<double> plan(mu.size() * nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = 0; j < nu.size(); ++j) plan[i * nu.size() + j] = mu.weight(i) * nu.weight(j);
    }
    return Coupling(mu, nu, std::move(plan));
}

/// Coupling of a measure with itself supported on the diagonal.
inline Coupling identity_coupling(const DiscreteMeasure& mu) {
    std::vector<double> plan(mu.size() * mu.size(), 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i) plan[i * mu.size() + i] = mu.weight(i);
    return Coupling(mu, mu, std::move(plan));
}

/// Either a coupling or the phase-one gap that proves none exists.
struct CouplingResult {
    std::optional<Coupling> coupling;
    double gap = 0.0;

    explicit operator bool() const noexcept { return coupling.has_value(); }
};

/// Rows: source marginals, target marginals, then one drift row per (atom, coordinate).
inline LinearProgram coupling_program(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                      std::optional<OrderKind> drift) {
    const std::size_t n = mu.size();
    const std::size_t m = nu.size();
    LinearProgram lp;
    lp.num_vars = n * m;
    lp.objective.assign(n * m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = lp.add_row(RowSense::Eq, mu.weight(i));
        for (std::size_t j = 0; j < m; ++j) lp.coeff(r, i * m + j) = 1.0;
    }
    for (std::size_t j = 0; j < m; ++j) {
        const auto r = lp.add_row(RowSense::Eq, nu.weight(j));
        for (std::size_t i = 0; i < n; ++i) lp.coeff(r, i * m + j) = 1.0;
    }
    if (drift) {
        const RowSense sense = *drift == OrderKind::Cx ? RowSense::Eq : RowSense::Ge;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < mu.dim(); ++k) {
                const auto r = lp.add_row(sense, 0.0);
                const double xi = mu.point(i)[k];
                for (std::size_t j = 0; j < m; ++j) lp.coeff(r, i * m + j) = nu.point(j)[k] - xi;
            }
        }
    }
    return lp;
}

inline CouplingResult constrained_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu, OrderKind kind,
                                           const LpOptions& opts) {
    require_same_dim(mu, nu);
    const auto lp = coupling_program(mu, nu, kind);
    const auto out = solve(lp, opts);
    CouplingResult res;
    if (out.status != LpStatus::Optimal) {
        res.gap = out.infeasibility_gap;
        return res;
    }
    res.coupling.emplace(mu, nu, out.solution);
    return res;
}

/// Deterministic basic martingale coupling, or the gap when mu is not <=cx nu.
inline CouplingResult martingale_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                          const LpOptions& opts = {}) {
    return constrained_coupling(mu, nu, OrderKind::Cx, opts);
}

inline CouplingResult submartingale_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                             const LpOptions& opts = {}) {
    return constrained_coupling(mu, nu, OrderKind::Icx, opts);
}

inline CouplingResult ordered_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu, OrderKind kind,
                                       const LpOptions& opts = {}) {
    return constrained_coupling(mu, nu, kind, opts);
}

/// Row-normalized plan: the regular conditional law of Y given X = x_i.
struct ConditionalKernel {
    DiscreteMeasure source;
    DiscreteMeasure target;
    std::vector<double> rows;  // source.size() x target.size()

    double at(std::size_t i, std::size_t j) const { return rows[i * target.size() + j]; }

    /// E[Y | X = x_i] coordinate k.
    double conditional_mean(std::size_t i, std::size_t k) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < target.size(); ++j) acc += at(i, j) * target.point(j)[k];
        return acc;
    }

    friend bool operator==(const ConditionalKernel&, const ConditionalKernel&) = default;
};

inline ConditionalKernel conditional_kernel(const Coupling& c) {
    ConditionalKernel k{c.source(), c.target(), std::vector<double>(c.plan().begin(), c.plan().end())};
    for (std::size_t i = 0; i < c.rows(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < c.cols(); ++j) row += c.at(i, j);
        for (std::size_t j = 0; j < c.cols(); ++j) k.rows[i * c.cols() + j] = c.at(i, j) / row;
    }
    return k;
}

/// Law of a finite Markov path X_1, ..., X_k given as the initial law plus
/// one conditional kernel per step; the product tensor is never formed.
struct PathMeasure {
    DiscreteMeasure initial;
    std::vector<ConditionalKernel> kernels;

    std::size_t length() const noexcept { return kernels.size() + 1; }

    /// Weights of X_step (0-based) over the support of that step.
    std::vector<double> marginal_weights(std::size_t step) const {
        std::vector<double> w(initial.weights().begin(), initial.weights().end());
        for (std::size_t s = 0; s < step; ++s) {
            const auto& K = kernels[s];
            std::vector<double> next(K.target.size(), 0.0);
            for (std::size_t i = 0; i < K.source.size(); ++i) {
                for (std::size_t j = 0; j < K.target.size(); ++j) next[j] += w[i] * K.at(i, j);
            }
            w = std::move(next);
        }
        return w;
    }

    const DiscreteMeasure& support(std::size_t step) const {
        return step == 0 ? initial : kernels[step - 1].target;
    }

    /// max over steps of || marginal - declared measure ||_inf.
    double marginal_residual() const {
        double r = 0.0;
        for (std::size_t s = 0; s < length(); ++s) {
            const auto w = marginal_weights(s);
            const auto& m = support(s);
            for (std::size_t j = 0; j < m.size(); ++j) r = std::max(r, std::abs(w[j] - m.weight(j)));
        }
        return r;
    }

    /// Worst violation of E[X_{s+1} | X_1..X_s] = X_s (cx) or >= X_s (icx).
    /// By the Markov property the conditional mean given the whole prefix is
    /// the kernel row mean at the current atom.
    double conditional_mean_residual(OrderKind kind) const {
        double r = 0.0;
        for (const auto& K : kernels) {
            for (std::size_t i = 0; i < K.source.size(); ++i) {
                for (std::size_t k = 0; k < K.source.dim(); ++k) {
                    const double d = K.conditional_mean(i, k) - K.source.point(i)[k];
                    r = std::max(r, kind == OrderKind::Cx ? std::abs(d) : std::max(0.0, -d));
                }
            }
        }
        return r;
    }

    friend bool operator==(const PathMeasure&, const PathMeasure&) = default;
};

struct ChainResult {
    std::optional<PathMeasure> path;
    /// 1-based index of the measure that could not be reached (0 on success).
    std::size_t failed_step = 0;
    double gap = 0.0;

    explicit operator bool() const noexcept { return path.has_value(); }
};

/// Composes consecutive (sub)martingale couplings into one Markov path law.
inline ChainResult compose_chain(const std::vector<DiscreteMeasure>& measures, OrderKind kind,
                                 const LpOptions& opts = {}) {
    if (measures.size() < 2) throw Error(ErrorCode::DimensionMismatch, "a chain needs at least two measures");
    for (const auto& m : measures) require_same_dim(measures.front(), m);
    ChainResult res;
    PathMeasure path{measures.front(), {}};
    for (std::size_t s = 1; s < measures.size(); ++s) {
        auto step = ordered_coupling(measures[s - 1], measures[s], kind, opts);
        if (!step) {
            res.failed_step = s + 1;
            res.gap = step.gap;
            return res;
        }
        path.kernels.push_back(conditional_kernel(*step.coupling));
    }
    res.path = std::move(path);
    return res;
}

inline void to_json(nlohmann::json& j, const Coupling& c) {
    std::vector<std::vector<double>> plan(c.rows(), std::vector<double>(c.cols()));
    for (std::size_t i = 0; i < c.rows(); ++i) {
        for (std::size_t k = 0; k < c.cols(); ++k) plan[i][k] = c.at(i, k);
    }
    j = nlohmann::json{{"source", c.source()}, {"target", c.target()}, {"plan", plan}};
}

inline Coupling coupling_from_json(const nlohmann::json& j) {
    auto src = j.at("source").get<DiscreteMeasure>();
    auto tgt = j.at("target").get<DiscreteMeasure>();
    const auto plan = j.at("plan").get<std::vector<std::vector<double>>>();
    if (plan.size() != src.size()) throw Error(ErrorCode::CouplingInvalid, "plan row count differs from source size");
    std::vector<double> flat;
    for (const auto& row : plan) {
        if (row.size() != tgt.size()) {
            throw Error(ErrorCode::CouplingInvalid, "plan column count differs from target size");
        }
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return Coupling(std::move(src), std::move(tgt), std::move(flat));
}

inline void to_json(nlohmann::json& j, const VerificationReport& r) {
    j = nlohmann::json{{"passes", r.passes},
                       {"tol", r.tol},
                       {"marginal_residual", r.marginal_residual},
                       {"martingale_residual", r.martingale_residual},
                       {"min_drift", r.min_drift},
                       {"negative_mass", r.negative_mass}};
}

inline void to_json(nlohmann::json& j, const ConditionalKernel& k) {
    std::vector<std::vector<double>> rows(k.source.size(), std::vector<double>(k.target.size()));
    for (std::size_t i = 0; i < k.source.size(); ++i) {
        for (std::size_t t = 0; t < k.target.size(); ++t) rows[i][t] = k.at(i, t);
    }
    j = nlohmann::json{{"source_points", k.source.points()}, {"target", k.target}, {"rows", rows}};
}

inline void to_json(nlohmann::json& j, const PathMeasure& p) {
    j = nlohmann::json{{"initial", p.initial}, {"kernels", p.kernels}};
}

}  // namespace strassen
