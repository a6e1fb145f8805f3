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

/// \file orders.hpp
/// \brief Deciding mu <=cx nu and mu <=icx nu.
///
/// Three procedures are offered:
///  - exact univariate tests on the breakpoints of t -> E|X - t| and
///    t -> E(X - t)_+, both piecewise linear with kinks only at atoms;
///  - the general test, which asks the LP for a (sub)martingale coupling;
///  - screens against finite samples of max-affine functions. A screen can
///    only falsify an order, never prove it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "strassen/coupling.hpp"
#include "strassen/error.hpp"
#include "strassen/measure.hpp"
#include "strassen/rng.hpp"

namespace strassen {

/// Expectation comparisons in order decisions use this slack.
inline constexpr double kOrderTol = 1e-9;

enum class Method { UnivariateBreakpoint, LpFeasibility, FamilyScreen };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::UnivariateBreakpoint: return "UnivariateBreakpoint";
        case Method::LpFeasibility: return "LpFeasibility";
        case Method::FamilyScreen: return "FamilyScreen";
    }
    return "?";
}

enum class WitnessKind { Mean, Breakpoint, InfeasibilityGap, TestFunction };

inline const char* to_string(WitnessKind w) {
    switch (w) {
        case WitnessKind::Mean: return "mean";
        case WitnessKind::Breakpoint: return "breakpoint";
        case WitnessKind::InfeasibilityGap: return "infeasibility_gap";
        case WitnessKind::TestFunction: return "test_function";
    }
    return "?";
}

/// Evidence that an order fails. For function witnesses `lhs` is E phi(X)
/// under mu and `rhs` under nu, with lhs > rhs.
struct Witness {
    WitnessKind kind = WitnessKind::Mean;
    std::string function;  // "x", "-x", "|x-t|", "(x-t)+", or a family member description
    double t = 0.0;
    std::size_t coordinate = 0;
    std::size_t member = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
};

struct OrderVerdict {
    bool holds = false;
    Method method = Method::UnivariateBreakpoint;
    std::optional<Witness> witness;
};

namespace detail {

inline void require_univariate(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (mu.dim() != 1 || nu.dim() != 1) {
        throw Error(ErrorCode::DimensionError, "univariate test needs d = 1 measures");
    }
}

inline std::vector<double> breakpoints(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    std::vector<double> ts;
    for (std::size_t i = 0; i < mu.size(); ++i) ts.push_back(mu.point(i)[0]);
    for (std::size_t j = 0; j < nu.size(); ++j) ts.push_back(nu.point(j)[0]);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    return ts;
}

inline Witness mean_witness(double mean_mu, double mean_nu, std::size_t coordinate = 0) {
    Witness w;
    w.kind = WitnessKind::Mean;
    w.coordinate = coordinate;
    if (mean_mu > mean_nu) {
        w.function = "x";
        w.lhs = mean_mu;
        w.rhs = mean_nu;
    } else {
        w.function = "-x";
        w.lhs = 0.0 - mean_mu;  // no negative zero in reports
        w.rhs = 0.0 - mean_nu;
    }
    return w;
}

template <class Test>
OrderVerdict breakpoint_scan(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const char* name, Test&& test,
                             double tol) {
    OrderVerdict v;
    v.method = Method::UnivariateBreakpoint;
    double worst = tol;
    for (double t : breakpoints(mu, nu)) {
        auto phi = [&](PointView x) { return test(x[0] - t); };
        const double lhs = expect(mu, phi);
        const double rhs = expect(nu, phi);
        if (lhs - rhs > worst) {
            worst = lhs - rhs;
            Witness w;
            w.kind = WitnessKind::Breakpoint;
            w.function = name;
            w.t = t;
            w.lhs = lhs;
            w.rhs = rhs;
            v.witness = w;
        }
    }
    v.holds = !v.witness.has_value();
    return v;
}

}  // namespace detail

inline OrderVerdict check_cx_univariate(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                        double tol = kOrderTol) {
    detail::require_univariate(mu, nu);
    const double m_mu = mean(mu)[0];
    const double m_nu = mean(nu)[0];
    if (std::abs(m_mu - m_nu) > tol) {
        return {false, Method::UnivariateBreakpoint, detail::mean_witness(m_mu, m_nu)};
    }
    return detail::breakpoint_scan(mu, nu, "|x-t|", [](double s) { return std::abs(s); }, tol);
}

inline OrderVerdict check_icx_univariate(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                                         double tol = kOrderTol) {
    detail::require_univariate(mu, nu);
    const double m_mu = mean(mu)[0];
    const double m_nu = mean(nu)[0];
    if (m_mu > m_nu + tol) {
        return {false, Method::UnivariateBreakpoint, detail::mean_witness(m_mu, m_nu)};
    }
    return detail::breakpoint_scan(mu, nu, "(x-t)+", [](double s) { return std::max(s, 0.0); }, tol);
}

inline OrderVerdict lp_verdict(const CouplingResult& res) {
    OrderVerdict v;
    v.method = Method::LpFeasibility;
    v.holds = res.coupling.has_value();
    if (!v.holds) {
        Witness w;
        w.kind = WitnessKind::InfeasibilityGap;
        w.gap = res.gap;
        v.witness = w;
    }
    return v;
}

/// mu <=cx nu iff a martingale coupling exists.
inline OrderVerdict check_cx(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const LpOptions& opts = {}) {
    return lp_verdict(martingale_coupling(mu, nu, opts));
}

/// mu <=icx nu iff a submartingale coupling exists.
inline OrderVerdict check_icx(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const LpOptions& opts = {}) {
    return lp_verdict(submartingale_coupling(mu, nu, opts));
}

inline OrderVerdict check_order(const DiscreteMeasure& mu, const DiscreteMeasure& nu, OrderKind kind,
                                const LpOptions& opts = {}) {
    return kind == OrderKind::Cx ? check_cx(mu, nu, opts) : check_icx(mu, nu, opts);
}

// ---------------------------------------------------------------------------
// Countable test families

enum class FamilyKind { MaxAffine, MaxAffineIncreasing, LipschitzMin };

inline const char* to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::MaxAffine: return "MaxAffine";
        case FamilyKind::MaxAffineIncreasing: return "MaxAffineIncreasing";
        case FamilyKind::LipschitzMin: return "LipschitzMin";
    }
    return "?";
}

inline FamilyKind parse_family_kind(const std::string& s) {
    if (s == "MaxAffine") return FamilyKind::MaxAffine;
    if (s == "MaxAffineIncreasing") return FamilyKind::MaxAffineIncreasing;
    if (s == "LipschitzMin") return FamilyKind::LipschitzMin;
    throw Error(ErrorCode::KindMismatch, "unknown family kind '" + s + "'");
}

struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }

    friend bool operator==(const Rational&, const Rational&) = default;
};

inline Rational parse_rational(const std::string& s) {
    Rational r;
    const auto slash = s.find('/');
    r.num = std::stoll(s.substr(0, slash));
    if (slash != std::string::npos) r.den = std::stoll(s.substr(slash + 1));
    if (r.den <= 0) throw Error(ErrorCode::NonFiniteInput, "rational '" + s + "' needs a positive denominator");
    return r;
}

/// slope^T x + offset
struct AffinePiece {
    std::vector<Rational> slope;
    Rational offset;

    friend bool operator==(const AffinePiece&, const AffinePiece&) = default;
};

/// offset + |x - anchor|
struct ConePiece {
    Rational offset;
    std::vector<Rational> anchor;

    friend bool operator==(const ConePiece&, const ConePiece&) = default;
};

/// A member of a test family: max over affine pieces, or min over cones.
struct TestFunction {
    FamilyKind kind = FamilyKind::MaxAffine;
    std::vector<AffinePiece> affine;
    std::vector<ConePiece> cones;

    double operator()(PointView x) const {
        if (kind == FamilyKind::LipschitzMin) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : cones) {
                double s = 0.0;
                for (std::size_t k = 0; k < x.size(); ++k) {
                    const double d = x[k] - c.anchor[k].value();
                    s += d * d;
                }
                best = std::min(best, c.offset.value() + std::sqrt(s));
            }
            return best;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& p : affine) {
            double s = p.offset.value();
            for (std::size_t k = 0; k < x.size(); ++k) s += p.slope[k].value() * x[k];
            best = std::max(best, s);
        }
        return best;
    }

    std::string describe() const {
        std::ostringstream os;
        if (kind == FamilyKind::LipschitzMin) {
            os << "min{";
            for (std::size_t i = 0; i < cones.size(); ++i) {
                if (i) os << ", ";
                os << cones[i].offset.str() << " + |x - (";
                for (std::size_t k = 0; k < cones[i].anchor.size(); ++k) os << (k ? "," : "") << cones[i].anchor[k].str();
                os << ")|";
            }
        } else {
            os << "max{";
            for (std::size_t i = 0; i < affine.size(); ++i) {
                if (i) os << ", ";
                os << "(";
                for (std::size_t k = 0; k < affine[i].slope.size(); ++k) os << (k ? "," : "") << affine[i].slope[k].str();
                os << ").x + " << affine[i].offset.str();
            }
        }
        os << "}";
        return os.str();
    }

    friend bool operator==(const TestFunction&, const TestFunction&) = default;
};

struct TestFamily {
    FamilyKind kind = FamilyKind::MaxAffine;
    std::size_t dim = 1;
    std::uint64_t seed = 0;
    std::vector<TestFunction> members;

    friend bool operator==(const TestFamily&, const TestFamily&) = default;
};

/// Axis-aligned box used to place cone anchors.
struct Box {
    Point lo;
    Point hi;
};

inline constexpr std::int64_t kMaxDenominator = 64;

namespace detail {

inline Rational draw_rational(Rng& rng, double lo, double hi) {
    Rational r;
    r.den = rng.uniform_int(1, kMaxDenominator);
    const double d = static_cast<double>(r.den);
    r.num = rng.uniform_int(static_cast<std::int64_t>(std::ceil(lo * d)), static_cast<std::int64_t>(std::floor(hi * d)));
    return r;
}

}  // namespace detail

/// Deterministic pseudo-random family. Members are drawn one after another
/// from a single stream, so a family is a prefix of every larger family with
/// the same seed. For LipschitzMin the anchors are drawn from `box` (default
/// [-coeff_range, coeff_range]^dim) and offsets from [0, coeff_range].
inline TestFamily generate_family(FamilyKind kind, std::size_t dim, std::size_t count, std::size_t max_pieces,
                                  double coeff_range, std::uint64_t seed, std::optional<Box> box = std::nullopt) {
    if (dim == 0) throw Error(ErrorCode::DimensionError, "family dimension must be positive");
    count = std::max<std::size_t>(count, 1);
    max_pieces = std::max<std::size_t>(max_pieces, 1);
    if (!box) box = Box{Point(dim, -coeff_range), Point(dim, coeff_range)};

    Rng rng(seed);
    TestFamily fam{kind, dim, seed, {}};
    fam.members.reserve(count);
    for (std::size_t c = 0; c < count; ++c) {
        TestFunction f;
        f.kind = kind;
        const auto pieces = static_cast<std::size_t>(rng.uniform_int(1, static_cast<std::int64_t>(max_pieces)));
        for (std::size_t p = 0; p < pieces; ++p) {
            if (kind == FamilyKind::LipschitzMin) {
                ConePiece cone;
                cone.offset = detail::draw_rational(rng, 0.0, coeff_range);
                for (std::size_t k = 0; k < dim; ++k) cone.anchor.push_back(detail::draw_rational(rng, box->lo[k], box->hi[k]));
                f.cones.push_back(std::move(cone));
                continue;
            }
            AffinePiece piece;
            for (std::size_t k = 0; k < dim; ++k) {
                Rational a = detail::draw_rational(rng, -coeff_range, coeff_range);
                while (kind == FamilyKind::MaxAffineIncreasing && a.num < 0) {
                    a = detail::draw_rational(rng, -coeff_range, coeff_range);
                }
                piece.slope.push_back(a);
            }
            piece.offset = detail::draw_rational(rng, -coeff_range, coeff_range);
            f.affine.push_back(std::move(piece));
        }
        fam.members.push_back(std::move(f));
    }
    return fam;
}

/// Falsification screen: reports the lowest-index member phi with
/// E_mu phi > E_nu phi + tol. `holds` is true only in the sense "no
/// violation found".
inline OrderVerdict screen_order(const DiscreteMeasure& mu, const DiscreteMeasure& nu, const TestFamily& family,
                                 OrderKind kind, double tol = kOrderTol) {
    require_same_dim(mu, nu);
    const FamilyKind expected = kind == OrderKind::Cx ? FamilyKind::MaxAffine : FamilyKind::MaxAffineIncreasing;
    if (family.kind != expected) {
        throw Error(ErrorCode::KindMismatch, std::string("a ") + to_string(kind) + " screen needs a " +
                                                     to_string(expected) + " family, got " + to_string(family.kind));
    }
    if (family.dim != mu.dim()) throw Error(ErrorCode::DimensionError, "family dimension differs from the measures");
    OrderVerdict v;
    v.method = Method::FamilyScreen;
    v.holds = true;
    for (std::size_t i = 0; i < family.members.size(); ++i) {
        const auto& phi = family.members[i];
        const double lhs = expect(mu, phi);
        const double rhs = expect(nu, phi);
        if (lhs > rhs + tol) {
            Witness w;
            w.kind = WitnessKind::TestFunction;
            w.function = phi.describe();
            w.member = i;
            w.lhs = lhs;
            w.rhs = rhs;
            v.holds = false;
            v.witness = w;
            break;
        }
    }
    return v;
}

inline void to_json(nlohmann::json& j, const Witness& w) {
    j = nlohmann::json{{"kind", to_string(w.kind)}};
    switch (w.kind) {
        case WitnessKind::Mean:
            j["function"] = w.function;
            j["coordinate"] = w.coordinate;
            j["lhs"] = w.lhs;
            j["rhs"] = w.rhs;
            break;
        case WitnessKind::Breakpoint:
            j["function"] = w.function;
            j["t"] = w.t;
            j["lhs"] = w.lhs;
            j["rhs"] = w.rhs;
            break;
        case WitnessKind::InfeasibilityGap: j["gap"] = w.gap; break;
        case WitnessKind::TestFunction:
            j["function"] = w.function;
            j["member"] = w.member;
            j["lhs"] = w.lhs;
            j["rhs"] = w.rhs;
            break;
    }
}

inline void to_json(nlohmann::json& j, const OrderVerdict& v) {
    j = nlohmann::json{{"holds", v.holds}, {"method", to_string(v.method)}};
    if (v.witness) j["witness"] = *v.witness;
}

inline void to_json(nlohmann::json& j, const TestFamily& fam) {
    nlohmann::json members = nlohmann::json::array();
    for (const auto& f : fam.members) {
        nlohmann::json pieces = nlohmann::json::array();
        if (fam.kind == FamilyKind::LipschitzMin) {
            for (const auto& c : f.cones) {
                std::vector<std::string> anchor;
                for (const auto& a : c.anchor) anchor.push_back(a.str());
                pieces.push_back({{"q", c.offset.str()}, {"y", anchor}});
            }
        } else {
            for (const auto& p : f.affine) {
                std::vector<std::string> slope;
                for (const auto& a : p.slope) slope.push_back(a.str());
                pieces.push_back({{"alpha", slope}, {"beta", p.offset.str()}});
            }
        }
        members.push_back(pieces);
    }
    j = nlohmann::json{{"kind", to_string(fam.kind)}, {"dim", fam.dim}, {"seed", fam.seed}, {"members", members}};
}

inline void from_json(const nlohmann::json& j, TestFamily& fam) {
    fam.kind = parse_family_kind(j.at("kind").get<std::string>());
    fam.dim = j.at("dim").get<std::size_t>();
    fam.seed = j.value("seed", std::uint64_t{0});
    fam.members.clear();
    auto rationals = [&](const nlohmann::json& arr) {
        std::vector<Rational> out;
        for (const auto& s : arr) out.push_back(parse_rational(s.get<std::string>()));
        if (out.size() != fam.dim) throw Error(ErrorCode::DimensionError, "family member has wrong dimension");
        return out;
    };
    for (const auto& pieces : j.at("members")) {
        TestFunction f;
        f.kind = fam.kind;
        for (const auto& p : pieces) {
            if (fam.kind == FamilyKind::LipschitzMin) {
                f.cones.push_back({parse_rational(p.at("q").get<std::string>()), rationals(p.at("y"))});
            } else {
                f.affine.push_back({rationals(p.at("alpha")), parse_rational(p.at("beta").get<std::string>())});
            }
        }
        if (f.cones.empty() && f.affine.empty()) throw Error(ErrorCode::KindMismatch, "family member has no pieces");
        fam.members.push_back(std::move(f));
    }
}

}  // namespace strassen
