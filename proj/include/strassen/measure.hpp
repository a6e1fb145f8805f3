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
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "strassen/error.hpp"

namespace strassen {

using Point = std::vector<double>;
using PointView = std::span<const double>;

/// Input weights may miss 1 by at most this much; anything further is a user error.
inline constexpr double kWeightInputTol = 1e-9;
/// Stored weights sum to 1 within this bound.
inline constexpr double kWeightStoredTol = 1e-12;

/// Finitely supported probability measure on R^d.
///
/// Always canonical: strictly positive weights, distinct points, points in
/// lexicographic order. Two equal measures therefore have identical
/// representations, which is what makes every downstream selection a pure
/// function of the mathematical measure rather than of input ordering.
class DiscreteMeasure {
public:
    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return weights_.size(); }

    PointView point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
    double weight(std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const double> coords() const noexcept { return coords_; }

    std::vector<Point> points() const {
        std::vector<Point> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) {
            auto p = point(i);
            out.emplace_back(p.begin(), p.end());
        }
        return out;
    }

    friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

private:
    friend DiscreteMeasure new_measure(const std::vector<Point>&, const std::vector<double>&);

    std::size_t dim_ = 0;
    std::vector<double> coords_;
    std::vector<double> weights_;
};

namespace detail {

inline bool lex_less(PointView a, PointView b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

inline bool same_point(PointView a, PointView b) { return std::equal(a.begin(), a.end(), b.begin(), b.end()); }

}  // namespace detail

/// Builds the canonical measure with the given atoms. Zero weights are
/// dropped and exactly-equal points merged; weights are renormalized only
/// when their sum is off by more than rounding noise, so a canonical measure
/// passes through unchanged bit for bit.
inline DiscreteMeasure new_measure(const std::vector<Point>& points, const std::vector<double>& weights) {
    if (points.empty() || points.size() != weights.size()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "points and weights must be nonempty and of equal length (got " +
                            std::to_string(points.size()) + " and " + std::to_string(weights.size()) + ")");
    }
    const std::size_t dim = points.front().size();
    if (dim == 0) throw Error(ErrorCode::DimensionMismatch, "points must have dimension >= 1");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != dim) {
            throw Error(ErrorCode::DimensionMismatch, "point " + std::to_string(i) + " has dimension " +
                                                              std::to_string(points[i].size()) + ", expected " +
                                                              std::to_string(dim));
        }
        for (double c : points[i]) {
            if (!std::isfinite(c)) throw Error(ErrorCode::NonFiniteInput, "point " + std::to_string(i));
        }
        if (!std::isfinite(weights[i])) throw Error(ErrorCode::NonFiniteInput, "weight " + std::to_string(i));
        if (weights[i] < 0.0) throw Error(ErrorCode::NegativeWeight, "weight " + std::to_string(i));
    }

    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (weights[i] > 0.0) order.push_back(i);
    }
    if (order.empty()) throw Error(ErrorCode::EmptySupport, "all weights are zero");

    double total = 0.0;
    for (double w : weights) total += w;
    if (std::abs(total - 1.0) > kWeightInputTol) {
        throw Error(ErrorCode::WeightSumError, "weights sum to " + std::to_string(total));
    }

    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return detail::lex_less(points[a], points[b]); });

    DiscreteMeasure m;
    m.dim_ = dim;
    for (std::size_t idx : order) {
        if (!m.weights_.empty() && detail::same_point(m.point(m.size() - 1), points[idx])) {
            m.weights_.back() += weights[idx];
            continue;
        }
        m.coords_.insert(m.coords_.end(), points[idx].begin(), points[idx].end());
        m.weights_.push_back(weights[idx]);
    }

    double sum = 0.0;
    for (double w : m.weights_) sum += w;
    const double noise = static_cast<double>(m.size()) * 0x1.0p-50;
    if (std::abs(sum - 1.0) > noise) {
        for (double& w : m.weights_) w /= sum;
    }
    return m;
}

/// Convenience for univariate measures.
inline DiscreteMeasure new_measure_1d(const std::vector<double>& points, const std::vector<double>& weights) {
    std::vector<Point> pts;
    pts.reserve(points.size());
    for (double p : points) pts.push_back({p});
    return new_measure(pts, weights);
}

inline DiscreteMeasure dirac(const Point& at) { return new_measure({at}, {1.0}); }

inline Point mean(const DiscreteMeasure& m) {
    Point out(m.dim(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i) {
        auto p = m.point(i);
        for (std::size_t k = 0; k < m.dim(); ++k) out[k] += m.weight(i) * p[k];
    }
    return out;
}

/// Integral of `f` against `m`, summed in canonical order.
template <class F>
double expect(const DiscreteMeasure& m, F&& f) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double value = f(m.point(i));
        if (!std::isfinite(value)) {
            throw Error(ErrorCode::NonFiniteValue, "integrand is not finite at support point " + std::to_string(i));
        }
        acc += m.weight(i) * value;
    }
    return acc;
}

inline double norm(PointView x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline double distance(PointView x, PointView y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
    return std::sqrt(s);
}

inline void require_same_dim(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionError,
                    "measures have dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    }
}

/// Weighted mixture sum_k mix[k] * parts[k], merged into canonical form.
inline DiscreteMeasure mixture(std::span<const DiscreteMeasure> parts, std::span<const double> mix) {
    std::vector<Point> pts;
    std::vector<double> ws;
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (mix[k] == 0.0) continue;
        for (std::size_t i = 0; i < parts[k].size(); ++i) {
            auto p = parts[k].point(i);
            pts.emplace_back(p.begin(), p.end());
            ws.push_back(mix[k] * parts[k].weight(i));
        }
    }
    return new_measure(pts, ws);
}

inline void to_json(nlohmann::json& j, const DiscreteMeasure& m) {
    j = nlohmann::json{{"dim", m.dim()}, {"points", m.points()},
                       {"weights", std::vector<double>(m.weights().begin(), m.weights().end())}};
}

inline void from_json(const nlohmann::json& j, DiscreteMeasure& m) {
    const auto pts = j.at("points").get<std::vector<Point>>();
    const auto ws = j.at("weights").get<std::vector<double>>();
    m = new_measure(pts, ws);
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != m.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "field \"dim\" disagrees with the points");
    }
}

}  // namespace strassen
