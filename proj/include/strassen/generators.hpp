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

/// \file generators.hpp
/// \brief Seeded random instances: ordered and non-ordered pairs, kernels,
/// measure chains and pseudo-marginal specs.
///
/// Coordinates live on the grid (1/8) Z and weights are ratios of small
/// integers, so the generated instances are exactly representable and
/// reproducible. Every ordered instance is re-checked before it is returned.

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "strassen/coupling.hpp"
#include "strassen/error.hpp"
#include "strassen/kernels.hpp"
#include "strassen/measure.hpp"
#include "strassen/orders.hpp"
#include "strassen/pm_mcmc.hpp"
#include "strassen/rng.hpp"

namespace strassen {

struct MeasurePair {
    DiscreteMeasure mu;
    DiscreteMeasure nu;
};

/// Measure with `atoms` points on the grid k/4, |k| <= 8, and integer weights 1..8.
inline DiscreteMeasure random_measure(Rng& rng, std::size_t atoms, std::size_t dim = 1) {
    if (atoms == 0 || dim == 0) throw Error(ErrorCode::EmptySupport, "need at least one atom and one dimension");
    std::vector<Point> pts;
    std::vector<double> w;
    double total = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) {
        Point p(dim);
        for (auto& c : p) c = static_cast<double>(rng.uniform_int(-8, 8)) / 4.0;
        pts.push_back(std::move(p));
        w.push_back(static_cast<double>(rng.uniform_int(1, 8)));
        total += w.back();
    }
    for (auto& x : w) x /= total;
    return new_measure(pts, w);
}

/// Replaces atoms x by x - d and x + d with half the mass each, where d has
/// coordinates k/8, 0 <= k <= 8, not all zero. At most `max_split` randomly
/// chosen atoms are split; the rest are kept.
inline DiscreteMeasure mean_preserving_spread(Rng& rng, const DiscreteMeasure& mu,
                                              std::size_t max_split = std::numeric_limits<std::size_t>::max()) {
    std::vector<bool> split(mu.size(), true);
    if (max_split < mu.size()) {
        std::vector<std::size_t> order(mu.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        for (std::size_t i = 0; i < max_split; ++i) {
            const auto r = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i),
                                                                    static_cast<std::int64_t>(order.size() - 1)));
            std::swap(order[i], order[r]);
        }
        std::fill(split.begin(), split.end(), false);
        for (std::size_t i = 0; i < max_split; ++i) split[order[i]] = true;
    }
    std::vector<Point> pts;
    std::vector<double> w;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        Point lo(mu.point(i).begin(), mu.point(i).end());
        if (!split[i]) {
            pts.push_back(std::move(lo));
            w.push_back(mu.weight(i));
            continue;
        }
        Point d(mu.dim());
        bool nonzero = false;
        while (!nonzero) {
            for (auto& c : d) {
                c = static_cast<double>(rng.uniform_int(0, 8)) / 8.0 * (rng.coin() ? 1.0 : -1.0);
                nonzero = nonzero || c != 0.0;
            }
        }
        Point hi = lo;
        for (std::size_t k = 0; k < mu.dim(); ++k) {
            lo[k] -= d[k];
            hi[k] += d[k];
        }
        pts.push_back(std::move(lo));
        pts.push_back(std::move(hi));
        w.push_back(mu.weight(i) / 2.0);
        w.push_back(mu.weight(i) / 2.0);
    }
    return new_measure(pts, w);
}

/// Moves every atom by `step` times a random multiple k/8, 0 <= k <= 4, in
/// every coordinate; at least one atom moves by a nonzero amount.
inline DiscreteMeasure shift_atoms(Rng& rng, const DiscreteMeasure& m, double step) {
    std::vector<Point> pts;
    std::vector<double> w;
    bool moved = false;
    for (std::size_t i = 0; i < m.size(); ++i) {
        Point p(m.point(i).begin(), m.point(i).end());
        for (auto& c : p) {
            std::int64_t k = rng.uniform_int(0, 4);
            if (i + 1 == m.size() && !moved && k == 0) k = 1;
            moved = moved || k != 0;
            c += step * static_cast<double>(k) / 8.0;
        }
        pts.push_back(std::move(p));
        w.push_back(m.weight(i));
    }
    return new_measure(pts, w);
}

/// mu <= nu in the requested order. cx: nu is a mean-preserving spread of mu.
/// icx: the spread is additionally shifted upward.
inline MeasurePair ordered_pair(Rng& rng, OrderKind kind, std::size_t atoms, std::size_t dim = 1) {
    for (;;) {
        MeasurePair p{random_measure(rng, atoms, dim), DiscreteMeasure{}};
        p.nu = mean_preserving_spread(rng, p.mu);
        if (kind == OrderKind::Icx) p.nu = shift_atoms(rng, p.nu, 1.0);
        if (check_order(p.mu, p.nu, kind).holds) return p;
    }
}

/// mu not <= nu in the requested order: either the ordered pair reversed or
/// the target shifted against the order (a mean change for cx, a downward
/// shift for icx).
inline MeasurePair broken_pair(Rng& rng, OrderKind kind, std::size_t atoms, std::size_t dim = 1) {
    for (;;) {
        MeasurePair p = ordered_pair(rng, kind, atoms, dim);
        if (rng.coin()) {
            std::swap(p.mu, p.nu);
        } else {
            const double dir = kind == OrderKind::Icx || rng.coin() ? -1.0 : 1.0;
            p.nu = shift_atoms(rng, p.nu, dir);
        }
        if (!check_order(p.mu, p.nu, kind).holds) return p;
    }
}

inline std::string label_name(std::size_t i, std::size_t count) {
    std::ostringstream os;
    os << "t" << std::setw(static_cast<int>(std::to_string(count > 0 ? count - 1 : 0).size())) << std::setfill('0') << i;
    return os.str();
}

struct KernelPair {
    FiniteKernel p;
    FiniteKernel q;
};

/// Kernels over labels t0..t{n-1} ordered label by label.
inline KernelPair ordered_kernels(Rng& rng, OrderKind kind, std::size_t labels, std::size_t atoms,
                                  std::size_t dim = 1) {
    std::vector<Label> names;
    std::vector<DiscreteMeasure> ps;
    std::vector<DiscreteMeasure> qs;
    for (std::size_t i = 0; i < labels; ++i) {
        names.push_back(label_name(i, labels));
        auto pair = ordered_pair(rng, kind, static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(atoms))), dim);
        ps.push_back(std::move(pair.mu));
        qs.push_back(std::move(pair.nu));
    }
    return {FiniteKernel(names, std::move(ps)), FiniteKernel(names, std::move(qs))};
}

/// Parameter law with integer weights 1..8 on every label.
inline ThetaLaw random_theta_law(Rng& rng, const std::vector<Label>& labels) {
    ThetaLaw law;
    double total = 0.0;
    for (const auto& l : labels) total += law[l] = static_cast<double>(rng.uniform_int(1, 8));
    for (auto& kv : law) kv.second /= total;
    return law;
}

/// m_0 <= m_1 <= ... <= m_length, each step a spread of one or two atoms
/// (cx), shifted up for icx. Supports grow by at most two atoms per step.
inline std::vector<DiscreteMeasure> ordered_chain(Rng& rng, OrderKind kind, std::size_t length, std::size_t atoms,
                                                  std::size_t dim = 1) {
    std::vector<DiscreteMeasure> out{random_measure(rng, atoms, dim)};
    for (std::size_t s = 0; s < length; ++s) {
        DiscreteMeasure next = mean_preserving_spread(rng, out.back(), 2);
        if (kind == OrderKind::Icx) next = shift_atoms(rng, next, 1.0);
        out.push_back(std::move(next));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pseudo-marginal specs

/// Mean-one weight law on (0, inf): `atoms` points in (0, 2] rescaled by their mean.
inline DiscreteMeasure random_weight_law(Rng& rng, std::size_t atoms) {
    std::vector<double> pts;
    std::vector<double> w;
    double total = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) {
        pts.push_back(static_cast<double>(rng.uniform_int(1, 16)) / 8.0);
        w.push_back(static_cast<double>(rng.uniform_int(1, 8)));
        total += w.back();
    }
    double m = 0.0;
    for (std::size_t i = 0; i < atoms; ++i) m += pts[i] * w[i] / total;
    for (std::size_t i = 0; i < atoms; ++i) {
        pts[i] /= m;
        w[i] /= total;
    }
    return new_measure_1d(pts, w);
}

/// Mean-preserving spread of a positive law that keeps every atom positive:
/// w goes to w (1 - f) and w (1 + f) with f in {1/8, ..., 7/8}.
inline DiscreteMeasure positive_spread(Rng& rng, const DiscreteMeasure& q) {
    std::vector<double> pts;
    std::vector<double> w;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double x = q.point(i)[0];
        if (rng.uniform_int(0, 3) == 0) {
            pts.push_back(x);
            w.push_back(q.weight(i));
            continue;
        }
        const double f = static_cast<double>(rng.uniform_int(1, 7)) / 8.0;
        pts.push_back(x - x * f);
        pts.push_back(x + x * f);
        w.push_back(q.weight(i) / 2.0);
        w.push_back(q.weight(i) / 2.0);
    }
    return new_measure_1d(pts, w);
}

struct PmSpecPair {
    PmChainSpec spec;
    PmChainSpec spec_prime;
};

/// Random target and strictly positive proposal on `states` states, weight
/// laws with up to `atoms` atoms (a point mass at 1 with probability 1/4),
/// and Q'_x a positive spread of Q_x.
inline PmSpecPair random_pm_pair(Rng& rng, std::size_t states, std::size_t atoms) {
    PmChainSpec s;
    double total = 0.0;
    for (std::size_t x = 0; x < states; ++x) {
        s.states.push_back("s" + std::to_string(x));
        total += s.target.emplace_back(static_cast<double>(rng.uniform_int(1, 8)));
    }
    for (auto& p : s.target) p /= total;
    for (std::size_t x = 0; x < states; ++x) {
        std::vector<double> row;
        double rs = 0.0;
        for (std::size_t y = 0; y < states; ++y) rs += row.emplace_back(static_cast<double>(rng.uniform_int(1, 8)));
        for (double v : row) s.proposal.push_back(v / rs);
    }
    for (std::size_t x = 0; x < states; ++x) {
        if (rng.uniform_int(0, 3) == 0) {
            s.weights.push_back(dirac({1.0}));
        } else {
            s.weights.push_back(random_weight_law(rng, static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(atoms)))));
        }
    }
    PmSpecPair out{s, s};
    for (std::size_t x = 0; x < states; ++x) out.spec_prime.weights[x] = positive_spread(rng, s.weights[x]);
    validate(out.spec);
    validate(out.spec_prime);
    return out;
}

/// Function on states with values k/4, |k| <= 8.
inline std::vector<double> random_state_function(Rng& rng, std::size_t states) {
    std::vector<double> f;
    for (std::size_t x = 0; x < states; ++x) f.push_back(static_cast<double>(rng.uniform_int(-8, 8)) / 4.0);
    return f;
}

}  // namespace strassen
