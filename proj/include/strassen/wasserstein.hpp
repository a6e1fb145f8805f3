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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "strassen/coupling.hpp"
#include "strassen/lp.hpp"
#include "strassen/measure.hpp"
#include "strassen/orders.hpp"

namespace strassen {

struct TransportResult {
    double value = 0.0;
    Coupling plan;
};

/// Transportation LP over the canonical supports with the given n x m cost
/// matrix. Always feasible, never unbounded.
inline TransportResult transport(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const std::vector<double>& cost,
                                 const LpOptions& opts = {}) {
    auto lp = coupling_program(mu, nu, std::nullopt);
    lp.objective = cost;
    const auto out = solve(lp, opts);
    if (out.status != LpStatus::Optimal) {
        throw Error(ErrorCode::IterationLimit, std::string("transport LP ended ") + to_string(out.status));
    }
    return {out.value, Coupling(mu, nu, out.solution)};
}

/// Wasserstein-1 distance with Euclidean ground cost, and an optimal plan.
inline TransportResult w1_lp(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const LpOptions& opts = {}) {
    require_same_dim(mu, nu);
    std::vector<double> cost(mu.size() * nu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = 0; j < nu.size(); ++j) cost[i * nu.size() + j] = distance(mu.point(i), nu.point(j));
    }
    return transport(mu, nu, cost, opts);
}

/// Area between the two distribution functions, summed over the merged support.
inline double w1_univariate(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (mu.dim() != 1 || nu.dim() != 1) throw Error(ErrorCode::DimensionError, "w1_univariate needs d = 1");
    std::size_t i = 0;
    std::size_t j = 0;
    double cdf_mu = 0.0;
    double cdf_nu = 0.0;
    double total = 0.0;
    double prev = std::min(mu.point(0)[0], nu.point(0)[0]);
    while (i < mu.size() || j < nu.size()) {
        const double a = i < mu.size() ? mu.point(i)[0] : INFINITY;
        const double b = j < nu.size() ? nu.point(j)[0] : INFINITY;
        const double t = std::min(a, b);
        total += std::abs(cdf_mu - cdf_nu) * (t - prev);
        if (a == t) cdf_mu += mu.weight(i++);
        if (b == t) cdf_nu += nu.weight(j++);
        prev = t;
    }
    return total;
}

/// Family of min-of-cones functions with anchors in the bounding box of both
/// supports inflated by 1 and offsets in [0, diameter of that box].
inline TestFamily lipschitz_family(const DiscreteMeasure& mu, const DiscreteMeasure& nu, std::size_t count,
                                   std::size_t max_pieces, std::uint64_t seed) {
    require_same_dim(mu, nu);
    const std::size_t d = mu.dim();
    Box box{Point(d, INFINITY), Point(d, -INFINITY)};
    for (const auto* m : {&mu, &nu}) {
        for (std::size_t i = 0; i < m->size(); ++i) {
            for (std::size_t k = 0; k < d; ++k) {
                box.lo[k] = std::min(box.lo[k], m->point(i)[k]);
                box.hi[k] = std::max(box.hi[k], m->point(i)[k]);
            }
        }
    }
    double diam = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        box.lo[k] -= 1.0;
        box.hi[k] += 1.0;
        diam += (box.hi[k] - box.lo[k]) * (box.hi[k] - box.lo[k]);
    }
    return generate_family(FamilyKind::LipschitzMin, d, count, max_pieces, std::sqrt(diam), seed, box);
}

/// max over 1-Lipschitz members g of |E_mu g - E_nu g|; a lower bound on W1.
inline double dual_lower_bound(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const TestFamily& family) {
    require_same_dim(mu, nu);
    if (family.kind != FamilyKind::LipschitzMin) {
        throw Error(ErrorCode::KindMismatch, "dual bound needs a LipschitzMin family");
    }
    if (family.dim != mu.dim()) throw Error(ErrorCode::DimensionError, "family dimension differs from the measures");
    double best = 0.0;
    for (const auto& g : family.members) best = std::max(best, std::abs(expect(mu, g) - expect(nu, g)));
    return best;
}

}  // namespace strassen
