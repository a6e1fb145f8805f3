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

/// \file cli.hpp
/// \brief Command-line front end. `run` is callable in-process.
///
/// Exit codes: 0 = success and the predicate (if any) holds, 1 = the
/// predicate fails (the report carries the witness), 2 = usage, I/O or
/// validation error (diagnostic on the error stream).
///
/// Any input path may carry a JSON pointer suffix, `file.json#/mu`, to pick
/// one field out of a combined document such as the output of `gen`.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "strassen/strassen.hpp"

namespace strassen::cli {

using nlohmann::json;

namespace detail {

/// Thrown for bad input files; always maps to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline json load(const std::string& spec) {
    std::string path = spec;
    std::string pointer;
    if (auto hash = spec.rfind('#'); hash != std::string::npos) {
        path = spec.substr(0, hash);
        pointer = spec.substr(hash + 1);
    }
    std::ifstream in(path);
    if (!in) throw InputError(path + ": cannot open file");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(path + ": " + e.what());
    }
    if (pointer.empty()) return doc;
    try {
        return doc.at(json::json_pointer(pointer));
    } catch (const json::exception& e) {
        throw InputError(spec + ": " + e.what());
    }
}

/// Decodes a loaded document, prefixing field errors with the source name.
template <class F>
auto decode(const std::string& spec, F&& f) {
    const json doc = load(spec);
    try {
        return f(doc);
    } catch (const json::exception& e) {
        throw InputError(spec + ": " + e.what());
    } catch (const Error& e) {
        throw InputError(spec + ": " + e.what());
    }
}

inline DiscreteMeasure load_measure(const std::string& spec) {
    return decode(spec, [](const json& j) { return j.get<DiscreteMeasure>(); });
}

inline FiniteKernel load_kernel(const std::string& spec) {
    return decode(spec, [](const json& j) { return kernel_from_json(j); });
}

inline PmChainSpec load_pm_spec(const std::string& spec) {
    return decode(spec, [](const json& j) { return pm_spec_from_json(j); });
}

inline ThetaLaw load_theta_law(const std::string& spec) {
    return decode(spec, [](const json& j) { return j.get<ThetaLaw>(); });
}

/// Built-in cost name, or a JSON file holding {"lower_bound": C, "table": [[...]]}
/// or a bare table.
inline CostSpec load_cost(const std::string& name, const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    if (name == "abs" || name == "square" || name == "forward") return CostSpec::by_name(name);
    return decode(name, [&](const json& j) {
        const json& tab = j.is_object() ? j.at("table") : j;
        const double bound = j.is_object() ? j.value("lower_bound", 0.0) : 0.0;
        const auto rows = tab.get<std::vector<std::vector<double>>>();
        std::vector<double> flat;
        for (const auto& r : rows) {
            if (r.size() != nu.size()) throw Error(ErrorCode::DimensionMismatch, "cost table rows must match the target support");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        if (rows.size() != mu.size()) throw Error(ErrorCode::DimensionMismatch, "cost table rows must match the source support");
        return CostSpec::table(rows.size(), nu.size(), std::move(flat), bound);
    });
}

}  // namespace detail

/// Runs one command. args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Convex orders, martingale couplings and transport for discrete measures"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    app.fallthrough();

    double tol = kOrderTol;
    bool trace = false;
    std::uint64_t seed = 1;
    std::string kind_name = "cx";
    app.add_option("--tol", tol, "Decision tolerance")->check(CLI::PositiveNumber);
    app.add_flag("--trace", trace, "Dump simplex tableaus to the error stream");
    app.add_option("--seed", seed, "Seed for every random generator");

    auto kind_option = [&](CLI::App* sub) {
        sub->add_option("--kind", kind_name, "cx or icx")->check(CLI::IsMember({"cx", "icx"}));
    };

    // check-order
    auto* check = app.add_subcommand("check-order", "Decide mu <= nu");
    std::string mu_path;
    std::string nu_path;
    std::string method = "auto";
    std::size_t family_size = 200;
    std::size_t max_pieces = 5;
    double coeff_range = 4.0;
    std::string family_path;
    kind_option(check);
    check->add_option("mu", mu_path)->required();
    check->add_option("nu", nu_path)->required();
    check->add_option("--method", method, "auto (breakpoint when d = 1, else lp), lp, breakpoint or screen")
            ->check(CLI::IsMember({"auto", "lp", "breakpoint", "screen"}));
    check->add_option("--family-size", family_size, "Screen family size")->check(CLI::PositiveNumber);
    check->add_option("--max-pieces", max_pieces, "Screen family pieces per member")->check(CLI::PositiveNumber);
    check->add_option("--coeff-range", coeff_range, "Screen coefficient bound")->check(CLI::PositiveNumber);
    check->add_option("--family", family_path, "Screen with this family file instead of generating one");

    // couple
    auto* couple = app.add_subcommand("couple", "Construct a (sub)martingale coupling");
    kind_option(couple);
    couple->add_option("mu", mu_path)->required();
    couple->add_option("nu", nu_path)->required();

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "Verify a coupling file");
    std::string coupling_path;
    kind_option(verify_cmd);
    verify_cmd->add_option("coupling", coupling_path)->required();

    // decompose
    auto* decompose = app.add_subcommand("decompose", "Split mu <=icx nu through an intermediate law");
    decompose->add_option("mu", mu_path)->required();
    decompose->add_option("nu", nu_path)->required();

    // compose
    auto* compose = app.add_subcommand("compose", "Markov chain of couplings through m0 <= m1 <= ...");
    std::vector<std::string> chain_paths;
    kind_option(compose);
    compose->add_option("measures", chain_paths)->required()->expected(2, -1);

    // conditional
    auto* conditional = app.add_subcommand("conditional", "Pointwise coupling of two kernels under a parameter law");
    std::string p_path;
    std::string q_path;
    std::string law_path;
    kind_option(conditional);
    conditional->add_option("p", p_path)->required();
    conditional->add_option("q", q_path)->required();
    conditional->add_option("--law", law_path, "Parameter law {label: weight}; uniform if omitted");

    // w1
    auto* w1 = app.add_subcommand("w1", "Wasserstein-1 distance");
    std::size_t dual_members = 0;
    w1->add_option("mu", mu_path)->required();
    w1->add_option("nu", nu_path)->required();
    w1->add_option("--dual", dual_members, "Also report a dual lower bound from this many Lipschitz test functions");

    // mot / ot
    std::string cost_name = "square";
    auto* mot = app.add_subcommand("mot", "Martingale optimal transport");
    mot->add_option("mu", mu_path)->required();
    mot->add_option("nu", nu_path)->required();
    mot->add_option("--cost", cost_name, "abs, square, forward or a cost table file");
    auto* ot = app.add_subcommand("ot", "Optimal transport");
    ot->add_option("mu", mu_path)->required();
    ot->add_option("nu", nu_path)->required();
    ot->add_option("--cost", cost_name, "abs, square, forward or a cost table file");

    // pseudo-marginal
    std::string spec_path;
    std::string spec_prime_path;
    std::vector<double> f_values;
    auto* pm_build = app.add_subcommand("pm-build", "Augmented pseudo-marginal kernel");
    pm_build->add_option("spec", spec_path)->required();
    auto* pm_compare = app.add_subcommand("pm-compare", "Exact asymptotic variances of two pseudo-marginal chains");
    pm_compare->add_option("spec", spec_path)->required();
    pm_compare->add_option("spec_prime", spec_prime_path)->required();
    pm_compare->add_option("--f", f_values, "Function values per state")->required()->delimiter(',');
    auto* sim = app.add_subcommand("simulate", "Run a pseudo-marginal chain");
    std::size_t steps = 100000;
    sim->add_option("spec", spec_path)->required();
    sim->add_option("--f", f_values, "Function values per state")->required()->delimiter(',');
    sim->add_option("--steps", steps)->check(CLI::PositiveNumber);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    std::string what = "pair";
    std::size_t atoms = 3;
    std::size_t dim = 1;
    std::size_t labels = 4;
    std::size_t length = 3;
    std::size_t states = 3;
    kind_option(gen);
    gen->add_option("--what", what, "pair, broken, kernel, chain or pm")
            ->check(CLI::IsMember({"pair", "broken", "kernel", "chain", "pm"}));
    gen->add_option("--atoms", atoms)->check(CLI::PositiveNumber);
    gen->add_option("--dim", dim)->check(CLI::PositiveNumber);
    gen->add_option("--labels", labels)->check(CLI::PositiveNumber);
    gen->add_option("--length", length)->check(CLI::PositiveNumber);
    gen->add_option("--states", states)->check(CLI::PositiveNumber);

    std::vector<std::string> argv_store{"strassen"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    LpOptions opts;
    opts.feas_tol = tol;
    if (trace) opts.trace = &err;
    const OrderKind kind = parse_order_kind(kind_name);
    auto emit = [&](const json& report) { out << report.dump(2) << "\n"; };

    try {
        if (*check) {
            const auto mu = detail::load_measure(mu_path);
            const auto nu = detail::load_measure(nu_path);
            OrderVerdict v;
            if (method == "auto") method = mu.dim() == 1 && nu.dim() == 1 ? "breakpoint" : "lp";
            if (method == "lp") {
                v = check_order(mu, nu, kind, opts);
            } else if (method == "breakpoint") {
                v = kind == OrderKind::Cx ? check_cx_univariate(mu, nu, tol) : check_icx_univariate(mu, nu, tol);
            } else {
                TestFamily fam = family_path.empty()
                                         ? generate_family(kind == OrderKind::Cx ? FamilyKind::MaxAffine
                                                                                 : FamilyKind::MaxAffineIncreasing,
                                                           mu.dim(), family_size, max_pieces, coeff_range, seed)
                                         : detail::decode(family_path, [](const json& j) { return j.get<TestFamily>(); });
                v = screen_order(mu, nu, fam, kind, tol);
            }
            json report = v;
            report["kind"] = to_string(kind);
            emit(report);
            return v.holds ? 0 : 1;
        }
        if (*couple) {
            const auto mu = detail::load_measure(mu_path);
            const auto nu = detail::load_measure(nu_path);
            const auto res = ordered_coupling(mu, nu, kind, opts);
            if (!res) {
                emit({{"kind", to_string(kind)}, {"exists", false}, {"gap", res.gap}});
                return 1;
            }
            json report = *res.coupling;
            report["kind"] = to_string(kind);
            emit(report);
            return 0;
        }
        if (*verify_cmd) {
            const auto c = detail::decode(coupling_path, [](const json& j) { return coupling_from_json(j); });
            const auto rep = verify(c, kind, tol);
            json report = rep;
            report["kind"] = to_string(kind);
            emit(report);
            return rep.passes ? 0 : 1;
        }
        if (*decompose) {
            const auto mu = detail::load_measure(mu_path);
            const auto nu = detail::load_measure(nu_path);
            const auto res = icx_decompose(mu, nu, opts, tol);
            if (!res) {
                emit({{"exists", false}, {"gap", res.gap}});
                return 1;
            }
            emit(*res.decomposition);
            return 0;
        }
        if (*compose) {
            std::vector<DiscreteMeasure> ms;
            for (const auto& p : chain_paths) ms.push_back(detail::load_measure(p));
            const auto res = compose_chain(ms, kind, opts);
            if (!res) {
                emit({{"kind", to_string(kind)}, {"exists", false}, {"failed_step", res.failed_step}, {"gap", res.gap}});
                return 1;
            }
            emit({{"kind", to_string(kind)},
                  {"path", *res.path},
                  {"marginal_residual", res.path->marginal_residual()},
                  {"conditional_mean_residual", res.path->conditional_mean_residual(kind)}});
            return 0;
        }
        if (*conditional) {
            const auto p = detail::load_kernel(p_path);
            const auto q = detail::load_kernel(q_path);
            ThetaLaw law;
            if (law_path.empty()) {
                for (const auto& l : p.params()) law[l] = 1.0 / static_cast<double>(p.size());
            } else {
                law = detail::load_theta_law(law_path);
            }
            const auto res = pointwise_coupling(p, q, kind, opts);
            if (!res) {
                emit({{"kind", to_string(kind)}, {"exists", false}, {"failures", res.failures}});
                return 1;
            }
            const auto cc = assemble_conditional(law, *res.kernel);
            emit({{"kind", to_string(kind)},
                  {"kernel", *res.kernel},
                  {"x_marginal", cc.x_marginal()},
                  {"y_marginal", cc.y_marginal()},
                  {"marginal_residual", cc.marginal_residual(p, q)},
                  {"conditional_mean_residual", cc.conditional_mean_residual(kind)}});
            return 0;
        }
        if (*w1) {
            const auto mu = detail::load_measure(mu_path);
            const auto nu = detail::load_measure(nu_path);
            const auto res = w1_lp(mu, nu, opts);
            json report{{"w1", res.value}, {"plan", res.plan}};
            if (mu.dim() == 1) report["w1_univariate"] = w1_univariate(mu, nu);
            if (dual_members > 0) {
                report["dual_lower_bound"] = dual_lower_bound(mu, nu, lipschitz_family(mu, nu, dual_members, 5, seed));
            }
            emit(report);
            return 0;
        }
        if (*mot) {
            const auto mu = detail::load_measure(mu_path);
            const auto nu = detail::load_measure(nu_path);
            const auto res = mot_solve(mu, nu, detail::load_cost(cost_name, mu, nu), opts);
            if (!res) {
                emit({{"exists", false}, {"gap", res.gap}});
                return 1;
            }
            emit({{"value", res.optimum->value}, {"plan", res.optimum->plan}});
            return 0;
        }
        if (*ot) {
            const auto mu = detail::load_measure(mu_path);
            const auto nu = detail::load_measure(nu_path);
            const auto res = ot_solve(mu, nu, detail::load_cost(cost_name, mu, nu), opts);
            emit({{"value", res.value}, {"plan", res.plan}});
            return 0;
        }
        if (*pm_build) {
            const auto spec = detail::load_pm_spec(spec_path);
            const auto cm = build_pm_kernel(spec);
            emit({{"chain", cm}, {"reversibility", stationary_check(cm)}, {"row_sum_residual", row_sum_residual(cm)}});
            return 0;
        }
        if (*pm_compare) {
            const auto spec = detail::load_pm_spec(spec_path);
            const auto spec_prime = detail::load_pm_spec(spec_prime_path);
            const auto cmp = compare_variances(spec, spec_prime, f_values, 1e-8, opts);
            emit(cmp);
            return cmp.ordered ? 0 : 1;
        }
        if (*sim) {
            const auto spec = detail::load_pm_spec(spec_path);
            if (f_values.size() != spec.size()) throw Error(ErrorCode::DimensionMismatch, "--f needs one value per state");
            const auto cm = build_pm_kernel(spec);
            const auto f = lift(cm, f_values);
            json report = simulate(cm, f, steps, seed);
            report["seed"] = seed;
            report["sigma2"] = asymptotic_variance(cm, f);
            emit(report);
            return 0;
        }
        if (*gen) {
            Rng rng(seed);
            json report{{"seed", seed}};
            if (what == "pair" || what == "broken") {
                const auto pair = what == "pair" ? ordered_pair(rng, kind, atoms, dim) : broken_pair(rng, kind, atoms, dim);
                report["kind"] = to_string(kind);
                report["mu"] = pair.mu;
                report["nu"] = pair.nu;
            } else if (what == "kernel") {
                const auto kp = ordered_kernels(rng, kind, labels, atoms, dim);
                report["kind"] = to_string(kind);
                report["p"] = kp.p;
                report["q"] = kp.q;
                report["law"] = random_theta_law(rng, kp.p.params());
            } else if (what == "chain") {
                report["kind"] = to_string(kind);
                report["measures"] = ordered_chain(rng, kind, length, atoms, dim);
            } else {
                const auto pm = random_pm_pair(rng, states, atoms);
                report["spec"] = pm.spec;
                report["spec_prime"] = pm.spec_prime;
            }
            emit(report);
            return 0;
        }
    } catch (const detail::InputError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace strassen::cli
