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

/// \file pm_mcmc.hpp
/// \brief Finite-state pseudo-marginal Metropolis-Hastings chains.
///
/// The target pi lives on a finite state list, the proposal q is a
/// row-stochastic matrix, and the weight law Q_x of every state is a finitely
/// supported measure on (0, inf) with mean one. The augmented chain on pairs
/// (x, w) is then an explicit finite matrix:
///
///     K(x,w; y,u) = q(x,y) Q_y(u) min{1, r(x,y) u / w}     (plus rejection)
///     r(x,y)      = pi(y) q(y,x) / (pi(x) q(x,y))          (0 when q(x,y) = 0)
///
/// reversible with respect to pi~(x,w) = pi(x) Q_x(w) w. Given per-state
/// martingale couplings R_x of Q_x and Q'_x, the three-coordinate chains
/// K^ and K^' on (x, w, v) share the invariant law pi^(x,w,v) = pi(x) R_x(w,v) v
/// and project onto K and K'.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "strassen/coupling.hpp"
#include "strassen/error.hpp"
#include "strassen/measure.hpp"
#include "strassen/orders.hpp"
#include "strassen/rng.hpp"

namespace strassen {

struct PmChainSpec {
    std::vector<std::string> states;
    std::vector<double> target;
    std::vector<double> proposal;  // states x states, row-major
    std::vector<DiscreteMeasure> weights;

    std::size_t size() const noexcept { return states.size(); }
    double q(std::size_t x, std::size_t y) const { return proposal[x * size() + y]; }
};

inline void validate(const PmChainSpec& spec) {
    const std::size_t n = spec.size();
    auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidSpec, msg); };
    if (n == 0) fail("no states");
    if (spec.target.size() != n || spec.proposal.size() != n * n || spec.weights.size() != n) {
        fail("target, proposal and weights must match the state count");
    }
    double total = 0.0;
    for (double p : spec.target) {
        if (!(p > 0.0) || !std::isfinite(p)) fail("target probabilities must be positive");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) fail("target sums to " + std::to_string(total));
    for (std::size_t x = 0; x < n; ++x) {
        double row = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            const double v = spec.q(x, y);
            if (!(v >= 0.0) || !std::isfinite(v)) fail("proposal entries must be nonnegative");
            row += v;
        }
        if (std::abs(row - 1.0) > 1e-12) fail("proposal row " + std::to_string(x) + " sums to " + std::to_string(row));
        const auto& Q = spec.weights[x];
        if (Q.dim() != 1) fail("weight law of state " + spec.states[x] + " is not univariate");
        for (std::size_t i = 0; i < Q.size(); ++i) {
            if (!(Q.point(i)[0] > 0.0)) fail("weight law of state " + spec.states[x] + " has a nonpositive atom");
        }
        if (std::abs(mean(Q)[0] - 1.0) > 1e-9) fail("weight law of state " + spec.states[x] + " does not have mean 1");
    }
}

/// r(x, y), zero wherever the ratio is undefined.
inline double mh_ratio(const PmChainSpec& spec, std::size_t x, std::size_t y) {
    const double fwd = spec.target[x] * spec.q(x, y);
    if (fwd == 0.0) return 0.0;
    return spec.target[y] * spec.q(y, x) / fwd;
}

/// Augmented state: chain state index plus one (pair) or two (triple) weights.
struct AugmentedState {
    std::size_t state = 0;
    double w = 0.0;
    /// Second weight of breve triples; NaN for pairs.
    double v = std::numeric_limits<double>::quiet_NaN();
};

struct ChainMatrix {
    std::vector<AugmentedState> states;
    std::vector<double> transition;  // row-major, row-stochastic
    std::vector<double> law;

    std::size_t size() const noexcept { return states.size(); }
    double at(std::size_t a, std::size_t b) const { return transition[a * size() + b]; }
    double& at(std::size_t a, std::size_t b) { return transition[a * size() + b]; }
};

namespace detail {

/// Fills the diagonal with the rejection mass 1 - (accepted mass), which
/// already includes any accepted self-move.
inline void close_rows(ChainMatrix& cm) {
    const std::size_t n = cm.size();
    for (std::size_t a = 0; a < n; ++a) {
        double accepted = 0.0;
        for (std::size_t b = 0; b < n; ++b) accepted += cm.at(a, b);
        cm.at(a, a) += 1.0 - accepted;
    }
}

/// index_of[x][i] = position of (x, i-th atom of Q_x) in the pair chain.
inline std::vector<std::vector<std::size_t>> pair_index(const std::vector<DiscreteMeasure>& weights) {
    std::vector<std::vector<std::size_t>> idx(weights.size());
    std::size_t next = 0;
    for (std::size_t x = 0; x < weights.size(); ++x) {
        for (std::size_t i = 0; i < weights[x].size(); ++i) idx[x].push_back(next++);
    }
    return idx;
}

}  // namespace detail

/// Explicit pseudo-marginal kernel on the pairs (x, w), w in supp Q_x.
inline ChainMatrix build_pm_kernel(const PmChainSpec& spec) {
    validate(spec);
    const std::size_t n = spec.size();
    const auto idx = detail::pair_index(spec.weights);
    ChainMatrix cm;
    for (std::size_t x = 0; x < n; ++x) {
        const auto& Q = spec.weights[x];
        for (std::size_t i = 0; i < Q.size(); ++i) {
            const double w = Q.point(i)[0];
            cm.states.push_back({x, w});
            cm.law.push_back(spec.target[x] * Q.weight(i) * w);
        }
    }
    const std::size_t N = cm.size();
    cm.transition.assign(N * N, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t i = 0; i < spec.weights[x].size(); ++i) {
            const std::size_t a = idx[x][i];
            const double w = spec.weights[x].point(i)[0];
            for (std::size_t y = 0; y < n; ++y) {
                const double qxy = spec.q(x, y);
                if (qxy == 0.0) continue;
                const double r = mh_ratio(spec, x, y);
                const auto& Qy = spec.weights[y];
                for (std::size_t k = 0; k < Qy.size(); ++k) {
                    const double u = Qy.point(k)[0];
                    cm.at(a, idx[y][k]) += qxy * Qy.weight(k) * std::min(1.0, r * u / w);
                }
            }
        }
    }
    detail::close_rows(cm);
    return cm;
}

/// max_{a,b} |law(a) T(a,b) - law(b) T(b,a)|
inline double stationary_check(const ChainMatrix& cm) {
    double r = 0.0;
    for (std::size_t a = 0; a < cm.size(); ++a) {
        for (std::size_t b = a + 1; b < cm.size(); ++b) {
            r = std::max(r, std::abs(cm.law[a] * cm.at(a, b) - cm.law[b] * cm.at(b, a)));
        }
    }
    return r;
}

/// Largest deviation of a row sum from 1.
inline double row_sum_residual(const ChainMatrix& cm) {
    double r = 0.0;
    for (std::size_t a = 0; a < cm.size(); ++a) {
        double s = 0.0;
        for (std::size_t b = 0; b < cm.size(); ++b) s += cm.at(a, b);
        r = std::max(r, std::abs(s - 1.0));
    }
    return r;
}

/// True when every state of positive law reaches and is reached by every other.
inline bool irreducible(const ChainMatrix& cm) {
    const std::size_t n = cm.size();
    std::vector<std::size_t> live;
    for (std::size_t a = 0; a < n; ++a) {
        if (cm.law[a] > 0.0) live.push_back(a);
    }
    if (live.empty()) return false;
    auto sweep = [&](bool forward) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{live.front()};
        seen[live.front()] = true;
        while (!stack.empty()) {
            const auto a = stack.back();
            stack.pop_back();
            for (std::size_t b : live) {
                const double edge = forward ? cm.at(a, b) : cm.at(b, a);
                if (edge > 0.0 && !seen[b]) {
                    seen[b] = true;
                    stack.push_back(b);
                }
            }
        }
        return std::all_of(live.begin(), live.end(), [&](std::size_t a) { return seen[a]; });
    };
    return sweep(true) && sweep(false);
}

/// f(x, w) = f(x): lifts a function on the chain states to augmented states.
inline std::vector<double> lift(const ChainMatrix& cm, const std::vector<double>& f) {
    std::vector<double> out;
    out.reserve(cm.size());
    for (const auto& s : cm.states) out.push_back(f.at(s.state));
    return out;
}

/// Exact asymptotic variance of the stationary ergodic averages of f,
///
///     sigma^2 = <fbar, (2 Z - I) fbar>_law,   Z = (I - T + 1 law^T)^{-1},
///
/// restricted to the states of positive law.
inline double asymptotic_variance(const ChainMatrix& cm, const std::vector<double>& f) {
    if (f.size() != cm.size()) throw Error(ErrorCode::DimensionMismatch, "f must have one value per augmented state");
    if (!irreducible(cm)) throw Error(ErrorCode::Reducible, "chain is reducible on the support of its invariant law");
    std::vector<std::size_t> live;
    for (std::size_t a = 0; a < cm.size(); ++a) {
        if (cm.law[a] > 0.0) live.push_back(a);
    }
    const auto n = static_cast<Eigen::Index>(live.size());
    Eigen::VectorXd pi(n);
    Eigen::VectorXd fbar(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        pi(i) = cm.law[live[i]];
        fbar(i) = f[live[i]];
    }
    pi /= pi.sum();
    fbar.array() -= pi.dot(fbar);

    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) A(i, j) += pi(j) - cm.at(live[i], live[j]);
    }
    const Eigen::VectorXd g = A.partialPivLu().solve(fbar);
    const Eigen::VectorXd weighted = pi.cwiseProduct(fbar);
    return 2.0 * weighted.dot(g) - weighted.dot(fbar);
}

// ---------------------------------------------------------------------------
// Breve embedding

struct BreveResiduals {
    double reversibility = 0.0;        // K^ against pi^
    double reversibility_prime = 0.0;  // K^' against pi^
    double law_vs_pi_tilde = 0.0;       // sum_v pi^ - pi~
    double law_vs_pi_tilde_prime = 0.0; // sum_w pi^ - pi~'
    double kernel_vs_k = 0.0;           // sum_t K^ - K
    double kernel_vs_k_prime = 0.0;     // sum_u K^' - K'
};

struct BreveChains {
    ChainMatrix k;        // K^
    ChainMatrix k_prime;  // K^'
    BreveResiduals residuals;
};

inline void require_same_skeleton(const PmChainSpec& a, const PmChainSpec& b) {
    if (a.states != b.states || a.target != b.target || a.proposal != b.proposal) {
        throw Error(ErrorCode::SpecMismatch, "specs must share states, target and proposal");
    }
}

/// Builds K^ and K^' from per-state martingale couplings R_x of Q_x (source)
/// and Q'_x (target).
inline BreveChains build_breve_kernels(const PmChainSpec& spec, const PmChainSpec& spec_prime,
                                       const std::vector<Coupling>& couplings, double coupling_tol = 1e-8) {
    validate(spec);
    validate(spec_prime);
    require_same_skeleton(spec, spec_prime);
    const std::size_t n = spec.size();
    if (couplings.size() != n) throw Error(ErrorCode::CouplingInvalid, "need one coupling per state");
    for (std::size_t x = 0; x < n; ++x) {
        const auto& R = couplings[x];
        if (!(R.source() == spec.weights[x]) || !(R.target() == spec_prime.weights[x])) {
            throw Error(ErrorCode::CouplingInvalid, "coupling of state " + spec.states[x] + " has the wrong marginals");
        }
        if (!verify_martingale(R, coupling_tol).passes) {
            throw Error(ErrorCode::CouplingInvalid, "coupling of state " + spec.states[x] + " is not a martingale");
        }
    }

    // Triples (x, i, j) with R_x(i, j) > 0.
    struct Triple {
        std::size_t x, i, j;
    };
    std::vector<Triple> triples;
    std::vector<std::vector<std::size_t>> by_state(n);
    BreveChains out;
    for (std::size_t x = 0; x < n; ++x) {
        const auto& R = couplings[x];
        for (std::size_t i = 0; i < R.rows(); ++i) {
            for (std::size_t j = 0; j < R.cols(); ++j) {
                if (!(R.at(i, j) > 0.0)) continue;
                by_state[x].push_back(triples.size());
                triples.push_back({x, i, j});
                const double w = R.source().point(i)[0];
                const double v = R.target().point(j)[0];
                out.k.states.push_back({x, w, v});
                out.k.law.push_back(spec.target[x] * R.at(i, j) * v);
            }
        }
    }
    out.k_prime.states = out.k.states;
    out.k_prime.law = out.k.law;
    const std::size_t N = triples.size();
    out.k.transition.assign(N * N, 0.0);
    out.k_prime.transition.assign(N * N, 0.0);

    for (std::size_t a = 0; a < N; ++a) {
        const auto [x, i, j] = triples[a];
        const double w = couplings[x].source().point(i)[0];
        const double v = couplings[x].target().point(j)[0];
        for (std::size_t y = 0; y < n; ++y) {
            const double qxy = spec.q(x, y);
            if (qxy == 0.0) continue;
            const double r = mh_ratio(spec, x, y);
            const auto& Ry = couplings[y];
            for (std::size_t b : by_state[y]) {
                const auto& tb = triples[b];
                const double u = Ry.source().point(tb.i)[0];
                const double t = Ry.target().point(tb.j)[0];
                const double mass = qxy * Ry.at(tb.i, tb.j);
                out.k.at(a, b) += mass * (t / u) * std::min(1.0, r * u / w);
                out.k_prime.at(a, b) += mass * std::min(1.0, r * t / v);
            }
        }
    }
    detail::close_rows(out.k);
    detail::close_rows(out.k_prime);

    // Marginal coincidence against the pair chains.
    const auto K = build_pm_kernel(spec);
    const auto Kp = build_pm_kernel(spec_prime);
    const auto idx = detail::pair_index(spec.weights);
    const auto idx_p = detail::pair_index(spec_prime.weights);
    auto& res = out.residuals;
    res.reversibility = stationary_check(out.k);
    res.reversibility_prime = stationary_check(out.k_prime);

    std::vector<double> law_w(K.size(), 0.0);
    std::vector<double> law_v(Kp.size(), 0.0);
    for (std::size_t a = 0; a < N; ++a) {
        law_w[idx[triples[a].x][triples[a].i]] += out.k.law[a];
        law_v[idx_p[triples[a].x][triples[a].j]] += out.k.law[a];
    }
    for (std::size_t p = 0; p < K.size(); ++p) res.law_vs_pi_tilde = std::max(res.law_vs_pi_tilde, std::abs(law_w[p] - K.law[p]));
    for (std::size_t p = 0; p < Kp.size(); ++p) {
        res.law_vs_pi_tilde_prime = std::max(res.law_vs_pi_tilde_prime, std::abs(law_v[p] - Kp.law[p]));
    }

    for (std::size_t a = 0; a < N; ++a) {
        const auto& ta = triples[a];
        std::vector<double> proj(K.size(), 0.0);
        std::vector<double> proj_p(Kp.size(), 0.0);
        for (std::size_t b = 0; b < N; ++b) {
            proj[idx[triples[b].x][triples[b].i]] += out.k.at(a, b);
            proj_p[idx_p[triples[b].x][triples[b].j]] += out.k_prime.at(a, b);
        }
        const std::size_t pa = idx[ta.x][ta.i];
        const std::size_t pa_p = idx_p[ta.x][ta.j];
        for (std::size_t p = 0; p < K.size(); ++p) res.kernel_vs_k = std::max(res.kernel_vs_k, std::abs(proj[p] - K.at(pa, p)));
        for (std::size_t p = 0; p < Kp.size(); ++p) {
            res.kernel_vs_k_prime = std::max(res.kernel_vs_k_prime, std::abs(proj_p[p] - Kp.at(pa_p, p)));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Variance comparison

struct VarianceComparison {
    double sigma2 = 0.0;
    double sigma2_prime = 0.0;
    bool ordered = false;
    /// sigma2_prime - sigma2
    double gap = 0.0;
    double reversibility = 0.0;
    double reversibility_prime = 0.0;
    /// sigma^2 of the same f recomputed on K^ and K^'; they match sigma2 and sigma2_prime.
    double sigma2_breve = 0.0;
    double sigma2_breve_prime = 0.0;
    BreveResiduals breve;
};

/// Exact sigma^2(K, f) and sigma^2(K', f) for f depending on the state only.
/// Requires Q_x <=cx Q'_x for every state.
inline VarianceComparison compare_variances(const PmChainSpec& spec, const PmChainSpec& spec_prime,
                                            const std::vector<double>& f, double tol = 1e-8,
                                            const LpOptions& opts = {}) {
    validate(spec);
    validate(spec_prime);
    require_same_skeleton(spec, spec_prime);
    if (f.size() != spec.size()) throw Error(ErrorCode::DimensionMismatch, "f must have one value per state");
    std::vector<Coupling> couplings;
    for (std::size_t x = 0; x < spec.size(); ++x) {
        auto c = martingale_coupling(spec.weights[x], spec_prime.weights[x], opts);
        if (!c) {
            throw Error(ErrorCode::NotOrderedWeights,
                        "weight laws of state " + spec.states[x] + " are not in convex order (gap " + std::to_string(c.gap) + ")");
        }
        couplings.push_back(std::move(*c.coupling));
    }
    const auto K = build_pm_kernel(spec);
    const auto Kp = build_pm_kernel(spec_prime);
    VarianceComparison out;
    out.sigma2 = asymptotic_variance(K, lift(K, f));
    out.sigma2_prime = asymptotic_variance(Kp, lift(Kp, f));
    out.gap = out.sigma2_prime - out.sigma2;
    out.ordered = out.sigma2 <= out.sigma2_prime + tol;
    out.reversibility = stationary_check(K);
    out.reversibility_prime = stationary_check(Kp);
    const auto breve = build_breve_kernels(spec, spec_prime, couplings);
    out.breve = breve.residuals;
    out.sigma2_breve = asymptotic_variance(breve.k, lift(breve.k, f));
    out.sigma2_breve_prime = asymptotic_variance(breve.k_prime, lift(breve.k_prime, f));
    return out;
}

// ---------------------------------------------------------------------------
// Simulation

struct SimulationResult {
    std::size_t steps = 0;
    double average = 0.0;
    /// Batch-means estimate of sigma^2 (batch size floor(sqrt(steps))).
    double batch_means_variance = 0.0;
    std::size_t batches = 0;
};

/// Runs the chain from a draw of its invariant law. Deterministic given the seed.
inline SimulationResult simulate(const ChainMatrix& cm, const std::vector<double>& f, std::size_t steps,
                                 std::uint64_t seed) {
    if (f.size() != cm.size()) throw Error(ErrorCode::DimensionMismatch, "f must have one value per augmented state");
    if (!irreducible(cm)) throw Error(ErrorCode::Reducible, "chain is reducible on the support of its invariant law");
    const std::size_t n = cm.size();
    std::vector<double> cumulative(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        double s = 0.0;
        for (std::size_t b = 0; b < n; ++b) cumulative[a * n + b] = (s += cm.at(a, b));
    }
    auto draw = [](Rng& rng, std::span<const double> cum) {
        const double u = rng.uniform01() * cum.back();
        const auto it = std::upper_bound(cum.begin(), cum.end(), u);
        return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cum.begin(), static_cast<std::ptrdiff_t>(cum.size()) - 1));
    };

    Rng rng(seed);
    std::vector<double> law_cum(n);
    double s = 0.0;
    for (std::size_t a = 0; a < n; ++a) law_cum[a] = (s += cm.law[a]);
    std::size_t state = draw(rng, law_cum);

    SimulationResult out;
    out.steps = steps;
    const std::size_t batch = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(steps))));
    std::vector<double> batch_means;
    double batch_avg = 0.0;
    std::size_t in_batch = 0;
    for (std::size_t k = 1; k <= steps; ++k) {
        const double v = f[state];
        // Running means; a constant f leaves them exactly at that constant.
        out.average += (v - out.average) / static_cast<double>(k);
        batch_avg += (v - batch_avg) / static_cast<double>(++in_batch);
        if (in_batch == batch) {
            batch_means.push_back(batch_avg);
            batch_avg = 0.0;
            in_batch = 0;
        }
        state = draw(rng, std::span<const double>(cumulative.data() + state * n, n));
    }
    out.batches = batch_means.size();
    if (batch_means.size() >= 2) {
        double m = 0.0;
        for (std::size_t b = 0; b < batch_means.size(); ++b) m += (batch_means[b] - m) / static_cast<double>(b + 1);
        double ss = 0.0;
        for (double bm : batch_means) ss += (bm - m) * (bm - m);
        out.batch_means_variance = static_cast<double>(batch) * ss / static_cast<double>(batch_means.size() - 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON

inline void to_json(nlohmann::json& j, const PmChainSpec& s) {
    std::vector<std::vector<double>> q(s.size(), std::vector<double>(s.size()));
    for (std::size_t x = 0; x < s.size(); ++x) {
        for (std::size_t y = 0; y < s.size(); ++y) q[x][y] = s.q(x, y);
    }
    nlohmann::json ws = nlohmann::json::object();
    for (std::size_t x = 0; x < s.size(); ++x) ws[s.states[x]] = s.weights[x];
    j = nlohmann::json{{"states", s.states}, {"target", s.target}, {"proposal", q}, {"weights", ws}};
}

inline PmChainSpec pm_spec_from_json(const nlohmann::json& j) {
    PmChainSpec s;
    s.states = j.at("states").get<std::vector<std::string>>();
    s.target = j.at("target").get<std::vector<double>>();
    for (const auto& row : j.at("proposal").get<std::vector<std::vector<double>>>()) {
        if (row.size() != s.states.size()) throw Error(ErrorCode::InvalidSpec, "proposal rows must have one entry per state");
        s.proposal.insert(s.proposal.end(), row.begin(), row.end());
    }
    const auto& ws = j.at("weights");
    for (const auto& label : s.states) {
        if (!ws.contains(label)) throw Error(ErrorCode::InvalidSpec, "no weight law for state '" + label + "'");
        s.weights.push_back(ws.at(label).get<DiscreteMeasure>());
    }
    validate(s);
    return s;
}

inline void to_json(nlohmann::json& j, const ChainMatrix& cm) {
    nlohmann::json states = nlohmann::json::array();
    for (const auto& s : cm.states) {
        nlohmann::json e{{"state", s.state}, {"w", s.w}};
        if (!std::isnan(s.v)) e["v"] = s.v;
        states.push_back(e);
    }
    std::vector<std::vector<double>> T(cm.size(), std::vector<double>(cm.size()));
    for (std::size_t a = 0; a < cm.size(); ++a) {
        for (std::size_t b = 0; b < cm.size(); ++b) T[a][b] = cm.at(a, b);
    }
    j = nlohmann::json{{"states", states}, {"transition", T}, {"law", cm.law}};
}

inline void to_json(nlohmann::json& j, const BreveResiduals& r) {
    j = nlohmann::json{{"reversibility", r.reversibility},
                       {"reversibility_prime", r.reversibility_prime},
                       {"law_vs_pi_tilde", r.law_vs_pi_tilde},
                       {"law_vs_pi_tilde_prime", r.law_vs_pi_tilde_prime},
                       {"kernel_vs_k", r.kernel_vs_k},
                       {"kernel_vs_k_prime", r.kernel_vs_k_prime}};
}

inline void to_json(nlohmann::json& j, const VarianceComparison& c) {
    j = nlohmann::json{{"sigma2", c.sigma2},
                       {"sigma2_prime", c.sigma2_prime},
                       {"ordered", c.ordered},
                       {"gap", c.gap},
                       {"reversibility", c.reversibility},
                       {"reversibility_prime", c.reversibility_prime},
                       {"sigma2_breve", c.sigma2_breve},
                       {"sigma2_breve_prime", c.sigma2_breve_prime},
                       {"breve", c.breve}};
}

inline void to_json(nlohmann::json& j, const SimulationResult& r) {
    j = nlohmann::json{{"steps", r.steps},
                       {"average", r.average},
                       {"batch_means_variance", r.batch_means_variance},
                       {"batches", r.batches}};
}

}  // namespace strassen
