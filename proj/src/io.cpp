#include "padic/io.hpp"

#include <cstdio>
#include <fstream>

namespace padic::io {

json json_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return json(std::strtod(buf, nullptr));
}

json rat_json(const Rat& x) { return json(rat_to_string(x)); }

Rat rat_from_json(const json& j) {
    if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
    if (j.is_string()) return rat_from_string(j.get<std::string>());
    throw std::invalid_argument("expected rational as string or integer, got " + j.dump());
}

std::vector<Rat> rat_vector_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected array of rationals");
    std::vector<Rat> out;
    for (const auto& e : j) out.push_back(rat_from_json(e));
    return out;
}

json rat_vector_json(const std::vector<Rat>& v) {
    json out = json::array();
    for (const Rat& x : v) out.push_back(rat_json(x));
    return out;
}

json sbfunction_to_json(const SBFunction& f) {
    json coeffs = json::array();
    for (const auto& [rep, c] : f.coeffs()) {
        coeffs.push_back(json{{"rep", rat_vector_json(rep)},
                              {"re", json_real(c.real())},
                              {"im", json_real(c.imag())}});
    }
    return json{{"p", f.ctx().p()},
                {"n", f.n()},
                {"L", f.support_exp()},
                {"m", f.const_exp()},
                {"coeffs", std::move(coeffs)}};
}

SBFunction sbfunction_from_json(const json& j) {
    PrimeCtx ctx(j.at("p").get<long>());
    SBFunction f(ctx, j.at("n").get<size_t>(), j.at("L").get<long>(), j.at("m").get<long>());
    for (const auto& entry : j.at("coeffs")) {
        f.add(rat_vector_from_json(entry.at("rep")),
              Complex(entry.at("re").get<double>(), entry.value("im", 0.0)));
    }
    return f;
}

json ball_json(const Ball& b) {
    return json{{"center", rat_vector_json(b.center().coords)}, {"level", b.level()}};
}

json certificate_json(const QECertificate& cert) {
    json pure = json::array();
    for (const PurePower& pp : cert.pure_powers) {
        pure.push_back(json{{"variable", pp.index},
                            {"coefficient", rat_json(pp.coeff)},
                            {"exponent", pp.exponent}});
    }
    json bounds = json::array();
    for (const auto& [signs, M] : cert.domain_bounds) {
        bounds.push_back(json{{"orthant", signs}, {"M", M}});
    }
    return json{{"degree", cert.degree},
                {"pure_powers", std::move(pure)},
                {"domain_bounds", std::move(bounds)},
                {"refinement_depth", cert.refinement_depth},
                {"norm_shift", cert.norm_shift}};
}

json witness_json(const NonQEWitness& w) {
    json out{{"description", describe(w)}};
    if (const auto* ih = std::get_if<InhomogeneousWitness>(&w)) {
        out["kind"] = "inhomogeneous_term";
        out["term"] = ih->term;
    } else if (const auto* rt = std::get_if<RationalRootWitness>(&w)) {
        out["kind"] = "rational_root";
        out["root"] = rat_vector_json(rt->root.coords);
    } else if (const auto* rc = std::get_if<RootClassWitness>(&w)) {
        out["kind"] = "root_class";
        out["class"] = ball_json(rc->cls);
        out["ord_f"] = rc->ord_f;
        out["ord_grad"] = rc->ord_df;
    } else if (const auto* in = std::get_if<InconclusiveWitness>(&w)) {
        out["kind"] = "inconclusive";
        out["depth"] = in->depth;
    }
    return out;
}

json constants_json(const ConstantsReport& rep) {
    json out{{"A0", rat_json(rep.A0)},
             {"A1", rat_json(rep.A1)},
             {"M", rep.M},
             {"R", rep.R},
             {"M0", rep.M0},
             {"norm_shift", rep.norm_shift}};
    const auto witness = [](const ExtremalCell& w) {
        return json{{"cell", ball_json(w.cell)}, {"e", w.e}, {"xi", rat_json(w.xi_bound)}};
    };
    if (rep.lower_witness) out["lower_witness"] = witness(*rep.lower_witness);
    if (rep.upper_witness) out["upper_witness"] = witness(*rep.upper_witness);
    if (rep.sub_degree_a) out["sub_degree_a"] = *rep.sub_degree_a;
    else out["sub_degree_a"] = nullptr;
    return out;
}

ProblemSpec parse_problem(const json& j) {
    ProblemSpec spec;
    spec.p = j.at("p").get<long>();
    spec.n = j.at("n").get<size_t>();
    PrimeCtx ctx(spec.p);
    if (j.contains("weights")) spec.weights = j.at("weights").get<std::vector<long>>();
    else spec.weights.assign(spec.n, 1);
    if (spec.weights.size() != spec.n)
        throw std::invalid_argument("problem: weights arity mismatch");

    if (j.contains("polynomial")) {
        WeightedPoly poly(spec.n, spec.weights, ctx);
        for (const auto& term : j.at("polynomial")) {
            MultiIndex k = term.at("k").get<MultiIndex>();
            poly.add_term(k, rat_from_json(term.at("c")));
        }
        spec.poly = std::move(poly);
    }
    if (j.contains("lower_terms")) {
        for (const auto& term : j.at("lower_terms")) {
            MultiIndex k = term.at("k").get<MultiIndex>();
            CoeffFunction c(term.contains("tail") ? rat_from_json(term.at("tail")) : Rat(0));
            if (term.contains("patches")) {
                for (const auto& patch : term.at("patches")) {
                    Ball b(PadicVector{rat_vector_from_json(patch.at("center")), ctx},
                           patch.at("level").get<long>());
                    c.add_patch(std::move(b), rat_from_json(patch.at("value")));
                }
            }
            spec.lower.emplace_back(std::move(k), std::move(c));
        }
    }
    spec.alpha = j.value("alpha", 1.0);
    if (j.contains("beta_list")) spec.betas = j.at("beta_list").get<std::vector<double>>();
    if (j.contains("function")) {
        SBFunction fun = sbfunction_from_json(j.at("function"));
        // convenience: the file may specify the transform instead, which is
        // the natural way to write down members of Phi / Phi_M0 exactly
        if (j.value("function_is_fourier", false)) fun = inverse_fourier(fun);
        spec.fun = std::move(fun);
    }
    if (j.contains("t_grid")) spec.t_grid = j.at("t_grid").get<std::vector<double>>();
    if (j.contains("x")) spec.x = rat_vector_from_json(j.at("x"));
    spec.l = j.value("l", 2L);
    spec.r = j.value("r", 1L);
    spec.h = j.value("h", 1e-3);
    spec.tol = j.value("tol", 1e-10);
    if (j.contains("region")) {
        spec.region_lo = j.at("region").at("lo").get<long>();
        spec.region_hi = j.at("region").at("hi").get<long>();
    }
    if (j.contains("depth_cap")) {
        spec.copts.depth_cap = j.at("depth_cap").get<long>();
        spec.ropts.depth_cap = j.at("depth_cap").get<long>();
    }
    if (j.contains("cell_budget")) {
        spec.copts.cell_budget = j.at("cell_budget").get<size_t>();
        spec.ropts.cell_budget = j.at("cell_budget").get<size_t>();
    }
    if (j.contains("value_floor")) spec.ropts.value_floor_exp = j.at("value_floor").get<long>();
    return spec;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

}  // namespace padic::io
