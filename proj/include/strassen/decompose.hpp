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

#include <optional>
#include <vector>

#include <json.hpp>

#include "strassen/coupling.hpp"
#include "strassen/measure.hpp"
#include "strassen/orders.hpp"

namespace strassen {

/// mu <=icx nu split as mu <= W (atomwise) and W <=cx nu, where W is the
/// law of E[Y | X] under a submartingale coupling.
struct IcxDecomposition {
    Coupling coupling;
    /// w_i = E[Y | X = x_i], one per atom of mu.
    std::vector<Point> conditional_means;
    /// w_i >= x_i coordinate-wise (within tolerance), one per atom of mu.
    std::vector<bool> dominance;
    DiscreteMeasure intermediate;

    bool dominated() const {
        for (bool d : dominance) {
            if (!d) return false;
        }
        return true;
    }
};

struct IcxDecompositionResult {
    std::optional<IcxDecomposition> decomposition;
    double gap = 0.0;

    explicit operator bool() const noexcept { return decomposition.has_value(); }
};

inline IcxDecompositionResult icx_decompose(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                            const LpOptions& opts = {}, double tol = kOrderTol) {
    auto sub = submartingale_coupling(mu, nu, opts);
    IcxDecompositionResult res;
    if (!sub) {
        res.gap = sub.gap;
        return res;
    }
    const auto kernel = conditional_kernel(*sub.coupling);
    std::vector<Point> ws;
    std::vector<bool> dom;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        Point w(mu.dim());
        bool ok = true;
        for (std::size_t k = 0; k < mu.dim(); ++k) {
            w[k] = kernel.conditional_mean(i, k);
            ok = ok && mu.point(i)[k] <= w[k] + tol;
        }
        ws.push_back(std::move(w));
        dom.push_back(ok);
    }
    std::vector<double> weights(mu.weights().begin(), mu.weights().end());
    auto intermediate = new_measure(ws, weights);
    res.decomposition = IcxDecomposition{std::move(*sub.coupling), std::move(ws), std::move(dom), std::move(intermediate)};
    return res;
}

inline void to_json(nlohmann::json& j, const IcxDecomposition& d) {
    j = nlohmann::json{{"intermediate", d.intermediate},
                       {"conditional_means", d.conditional_means},
                       {"dominance", d.dominance},
                       {"coupling", d.coupling}};
}

}  // namespace strassen
