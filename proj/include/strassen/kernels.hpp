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

/// \file kernels.hpp
/// \brief Measures indexed by a finite parameter set.
///
/// A parameter set is a finite collection of opaque labels. Measurability in
/// the parameter is vacuous here; what survives of it is determinism: every
/// per-label selection below is a pure function of that label's canonical
/// measures, and all containers are keyed and iterated in label order, so
/// the output never depends on the order in which labels were supplied.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "strassen/coupling.hpp"
#include "strassen/error.hpp"
#include "strassen/measure.hpp"
#include "strassen/orders.hpp"

namespace strassen {

using Label = std::string;

class FiniteKernel {
public:
    FiniteKernel(const std::vector<Label>& params, std::vector<DiscreteMeasure> measures) {
        if (params.empty() || params.size() != measures.size()) {
            throw Error(ErrorCode::ParamMismatch, "need one measure per parameter label");
        }
        for (std::size_t i = 0; i < params.size(); ++i) {
            if (!measures_.emplace(params[i], std::move(measures[i])).second) {
                throw Error(ErrorCode::ParamMismatch, "duplicate label '" + params[i] + "'");
            }
        }
        dim_ = measures_.begin()->second.dim();
        for (const auto& [label, m] : measures_) {
            if (m.dim() != dim_) throw Error(ErrorCode::DimensionError, "label '" + label + "' has a different dimension");
        }
    }

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return measures_.size(); }
    const std::map<Label, DiscreteMeasure>& measures() const noexcept { return measures_; }

    const DiscreteMeasure& at(const Label& label) const {
        auto it = measures_.find(label);
        if (it == measures_.end()) throw Error(ErrorCode::ParamMismatch, "unknown label '" + label + "'");
        return it->second;
    }

    std::vector<Label> params() const {
        std::vector<Label> out;
        for (const auto& kv : measures_) out.push_back(kv.first);
        return out;
    }

    friend bool operator==(const FiniteKernel&, const FiniteKernel&) = default;

private:
    std::size_t dim_ = 0;
    std::map<Label, DiscreteMeasure> measures_;
};

inline void require_same_params(const FiniteKernel& p, const FiniteKernel& q) {
    if (p.params() != q.params()) throw Error(ErrorCode::ParamMismatch, "kernels are indexed by different labels");
    if (p.dim() != q.dim()) throw Error(ErrorCode::DimensionError, "kernels have different dimensions");
}

/// Probability weights over labels; zero-weight labels are allowed and treated as vacuous.
using ThetaLaw = std::map<Label, double>;

struct PointwiseVerdict {
    bool holds = true;
    std::map<Label, OrderVerdict> per_label;
    /// Labels skipped because the parameter law gives them no mass.
    std::vector<Label> vacuous;
};

/// Runs the LP order test label by label. With a parameter law, labels of
/// zero weight are skipped (the almost-every-theta reading).
inline PointwiseVerdict check_pointwise(const FiniteKernel& p, const FiniteKernel& q, OrderKind kind,
                                       const std::optional<ThetaLaw>& law = std::nullopt, const LpOptions& opts = {}) {
    require_same_params(p, q);
    PointwiseVerdict out;
    for (const auto& [label, mu] : p.measures()) {
        if (law) {
            auto it = law->find(label);
            if (it == law->end()) throw Error(ErrorCode::ParamMismatch, "parameter law lacks label '" + label + "'");
            if (it->second == 0.0) {
                out.vacuous.push_back(label);
                continue;
            }
        }
        auto v = check_order(mu, q.at(label), kind, opts);
        out.holds = out.holds && v.holds;
        out.per_label.emplace(label, std::move(v));
    }
    return out;
}

class CouplingKernel {
public:
    CouplingKernel(std::optional<OrderKind> kind, std::map<Label, Coupling> couplings)
            : kind_(kind), couplings_(std::move(couplings)) {}

    std::optional<OrderKind> kind() const noexcept { return kind_; }
    const std::map<Label, Coupling>& couplings() const noexcept { return couplings_; }
    const Coupling& at(const Label& label) const {
        auto it = couplings_.find(label);
        if (it == couplings_.end()) throw Error(ErrorCode::ParamMismatch, "unknown label '" + label + "'");
        return it->second;
    }
    std::vector<Label> params() const {
        std::vector<Label> out;
        for (const auto& kv : couplings_) out.push_back(kv.first);
        return out;
    }

    friend bool operator==(const CouplingKernel&, const CouplingKernel&) = default;

private:
    std::optional<OrderKind> kind_;
    std::map<Label, Coupling> couplings_;
};

struct LabelFailure {
    Label label;
    double gap = 0.0;
    /// For chains: 1-based index of the unreachable measure; 0 otherwise.
    std::size_t step = 0;
};

struct PointwiseCouplingResult {
    std::optional<CouplingKernel> kernel;
    /// Every failing label, in label order.
    std::vector<LabelFailure> failures;

    explicit operator bool() const noexcept { return kernel.has_value(); }
};

/// One Bland-deterministic (sub)martingale coupling per label.
inline PointwiseCouplingResult pointwise_coupling(const FiniteKernel& p, const FiniteKernel& q, OrderKind kind,
                                                  const LpOptions& opts = {}) {
    require_same_params(p, q);
    PointwiseCouplingResult res;
    std::map<Label, Coupling> couplings;
    for (const auto& [label, mu] : p.measures()) {
        auto c = ordered_coupling(mu, q.at(label), kind, opts);
        if (!c) {
            res.failures.push_back({label, c.gap, 0});
            continue;
        }
        couplings.emplace(label, std::move(*c.coupling));
    }
    if (res.failures.empty()) res.kernel.emplace(kind, std::move(couplings));
    return res;
}

/// Joint law mu(dtheta) R_theta(dx, dy) of (X, Y, Z) on the product representation.
class ConditionalCoupling {
public:
    ConditionalCoupling(ThetaLaw law, CouplingKernel kernel) : law_(std::move(law)), kernel_(std::move(kernel)) {}

    const ThetaLaw& theta_law() const noexcept { return law_; }
    const CouplingKernel& kernel() const noexcept { return kernel_; }

    /// Law of X: mixture of the per-label sources.
    DiscreteMeasure x_marginal() const { return mix([](const Coupling& c) -> const DiscreteMeasure& { return c.source(); }); }
    DiscreteMeasure y_marginal() const { return mix([](const Coupling& c) -> const DiscreteMeasure& { return c.target(); }); }

    /// Joint (X, theta) weights read off the plan: label -> weights over the source support.
    std::map<Label, std::vector<double>> x_theta_law() const {
        std::map<Label, std::vector<double>> out;
        for (const auto& [label, c] : kernel_.couplings()) {
            auto rs = c.row_sums();
            for (double& v : rs) v *= law_.at(label);
            out.emplace(label, std::move(rs));
        }
        return out;
    }

    std::map<Label, std::vector<double>> y_theta_law() const {
        std::map<Label, std::vector<double>> out;
        for (const auto& [label, c] : kernel_.couplings()) {
            auto cs = c.column_sums();
            for (double& v : cs) v *= law_.at(label);
            out.emplace(label, std::move(cs));
        }
        return out;
    }

    /// max |(X, theta) law from the plan - law(theta) * P_theta| over labels and atoms,
    /// and the same for (Y, theta) against Q.
    double marginal_residual(const FiniteKernel& p, const FiniteKernel& q) const {
        double r = 0.0;
        const auto xs = x_theta_law();
        const auto ys = y_theta_law();
        for (const auto& [label, weight] : law_) {
            const auto& mu = p.at(label);
            const auto& nu = q.at(label);
            const auto& xw = xs.at(label);
            const auto& yw = ys.at(label);
            if (xw.size() != mu.size() || yw.size() != nu.size()) return INFINITY;
            for (std::size_t i = 0; i < mu.size(); ++i) r = std::max(r, std::abs(xw[i] - weight * mu.weight(i)));
            for (std::size_t j = 0; j < nu.size(); ++j) r = std::max(r, std::abs(yw[j] - weight * nu.weight(j)));
        }
        return r;
    }

    /// Worst violation of x = E[Y | X = x, Z = theta] (cx) or x <= E[...] (icx)
    /// over atoms and labels of positive mass.
    double conditional_mean_residual(OrderKind kind) const {
        double r = 0.0;
        for (const auto& [label, c] : kernel_.couplings()) {
            if (law_.at(label) == 0.0) continue;
            const auto k = conditional_kernel(c);
            for (std::size_t i = 0; i < c.rows(); ++i) {
                for (std::size_t d = 0; d < c.source().dim(); ++d) {
                    const double diff = k.conditional_mean(i, d) - c.source().point(i)[d];
                    r = std::max(r, kind == OrderKind::Cx ? std::abs(diff) : std::max(0.0, -diff));
                }
            }
        }
        return r;
    }

private:
    template <class Pick>
    DiscreteMeasure mix(Pick&& pick) const {
        std::vector<DiscreteMeasure> parts;
        std::vector<double> ws;
        for (const auto& [label, c] : kernel_.couplings()) {
            parts.push_back(pick(c));
            ws.push_back(law_.at(label));
        }
        return mixture(parts, ws);
    }

    ThetaLaw law_;
    CouplingKernel kernel_;
};

inline ThetaLaw validate_theta_law(ThetaLaw law) {
    double total = 0.0;
    for (const auto& [label, w] : law) {
        if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::NegativeWeight, "parameter law weight for '" + label + "'");
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightInputTol) {
        throw Error(ErrorCode::WeightSumError, "parameter law sums to " + std::to_string(total));
    }
    if (std::abs(total - 1.0) > static_cast<double>(law.size()) * 0x1.0p-50) {
        for (auto& kv : law) kv.second /= total;
    }
    return law;
}

inline ConditionalCoupling assemble_conditional(const ThetaLaw& law, const CouplingKernel& kernel) {
    std::vector<Label> labels;
    for (const auto& kv : law) labels.push_back(kv.first);
    if (labels != kernel.params()) {
        throw Error(ErrorCode::ParamMismatch, "parameter law and coupling kernel have different labels");
    }
    return ConditionalCoupling(validate_theta_law(law), kernel);
}

struct SequenceCouplingResult {
    std::map<Label, PathMeasure> paths;
    /// Each failing label with its first unreachable step, in label order.
    std::vector<LabelFailure> failures;

    explicit operator bool() const noexcept { return failures.empty(); }
};

/// Per-label Markov composition of (sub)martingale couplings along a sequence of kernels.
inline SequenceCouplingResult sequence_pointwise_coupling(const std::vector<FiniteKernel>& kernels, OrderKind kind,
                                                          const LpOptions& opts = {}) {
    if (kernels.size() < 2) throw Error(ErrorCode::DimensionMismatch, "a sequence needs at least two kernels");
    for (const auto& k : kernels) require_same_params(kernels.front(), k);
    SequenceCouplingResult res;
    for (const auto& label : kernels.front().params()) {
        std::vector<DiscreteMeasure> chain;
        for (const auto& k : kernels) chain.push_back(k.at(label));
        auto c = compose_chain(chain, kind, opts);
        if (!c) {
            res.failures.push_back({label, c.gap, c.failed_step});
            continue;
        }
        res.paths.emplace(label, std::move(*c.path));
    }
    if (!res.failures.empty()) res.paths.clear();
    return res;
}

inline void to_json(nlohmann::json& j, const FiniteKernel& k) {
    nlohmann::json ms = nlohmann::json::object();
    for (const auto& [label, m] : k.measures()) ms[label] = m;
    j = nlohmann::json{{"params", k.params()}, {"measures", ms}};
}

inline FiniteKernel kernel_from_json(const nlohmann::json& j) {
    const auto params = j.at("params").get<std::vector<Label>>();
    const auto& ms = j.at("measures");
    if (ms.size() != params.size()) throw Error(ErrorCode::ParamMismatch, "\"measures\" and \"params\" differ in size");
    std::vector<DiscreteMeasure> measures;
    for (const auto& label : params) {
        if (!ms.contains(label)) throw Error(ErrorCode::ParamMismatch, "no measure for label '" + label + "'");
        measures.push_back(ms.at(label).get<DiscreteMeasure>());
    }
    return FiniteKernel(params, std::move(measures));
}

inline void to_json(nlohmann::json& j, const CouplingKernel& k) {
    nlohmann::json cs = nlohmann::json::object();
    for (const auto& [label, c] : k.couplings()) cs[label] = c;
    j = nlohmann::json{{"params", k.params()}, {"couplings", cs}};
    if (k.kind()) j["kind"] = to_string(*k.kind());
}

inline void to_json(nlohmann::json& j, const LabelFailure& f) {
    j = nlohmann::json{{"label", f.label}, {"gap", f.gap}};
    if (f.step) j["step"] = f.step;
}

}  // namespace strassen
