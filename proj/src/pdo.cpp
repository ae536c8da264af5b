#include "padic/pdo.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace padic {

QSymbol make_qsymbol(WeightedPoly f, double alpha, const CertifyOptions& copts,
                     const RefineOptions& ropts) {
    if (!(alpha >= 0)) throw std::invalid_argument("make_qsymbol: alpha must be >= 0");
    CertifyResult res = certify_quasielliptic(f, copts);
    if (NonQEWitness* w = std::get_if<NonQEWitness>(&res))
        throw NotQuasiellipticError(std::move(*w));
    QSymbol sym{std::move(f), alpha, std::get<QECertificate>(res), {}, {}};
    sym.constants = estimate_constants(sym.poly, sym.cert, ropts);
    sym.meta = XiMeta(sym.cert.degree, sym.poly.weights());
    return sym;
}

std::pair<SBFunction, std::map<std::vector<Rat>, long, RatVecLess>> resolve_multiplier(
    const WeightedPoly& f, SBFunction hat, const RefineOptions& opts) {
    while (true) {
        std::map<std::vector<Rat>, long, RatVecLess> exps;
        bool ok = true;
        for (const auto& [rep, c] : hat.coeffs()) {
            Ball b(PadicVector{rep, f.ctx()}, hat.const_exp());
            const auto e = locally_constant_abs(f, b);
            if (!e) { ok = false; break; }
            exps.emplace(rep, *e);
        }
        if (ok) return {std::move(hat), std::move(exps)};
        if (hat.const_exp() >= opts.depth_cap)
            throw std::runtime_error("resolve_multiplier: depth cap exceeded");
        hat = hat.refined(hat.support_exp(), hat.const_exp() + 1);
    }
}

SBFunction clear_low_frequencies(SBFunction hat, std::optional<long> M0) {
    SBFunction out(hat.ctx(), hat.n(), hat.support_exp(), hat.const_exp());
    const long p = hat.ctx().p();
    for (const auto& [rep, c] : hat.coeffs()) {
        long min_ord = val_inf;
        for (const Rat& r : rep) min_ord = std::min(min_ord, ord_p(r, p));
        const bool zero_rep = val_is_inf(min_ord);
        bool drop;
        if (M0) drop = zero_rep || -min_ord <= *M0;
        else drop = zero_rep;
        if (!drop) out.add(rep, c);
    }
    return out;
}

namespace {

long double cell_multiplier(long p, long e, double alpha, int sign) {
    // p^{-e*alpha} (sign -1 divides); e exact, one extended-precision power.
    return powl(static_cast<long double>(p),
                static_cast<long double>(sign) * -static_cast<long double>(e) *
                    static_cast<long double>(alpha));
}

SBFunction apply_multiplier(const QSymbol& sym, const SBFunction& phi, int sign,
                            const RefineOptions& opts, std::optional<long> M0) {
    SBFunction hat = fourier(phi);
    const std::vector<Rat> zero(phi.n(), Rat(0));
    if (M0) {
        if (!in_Phi_M0(phi, *M0))
            throw std::domain_error("operator domain: function must lie in Phi_M0");
    } else {
        if (std::abs(hat.coeff(zero)) > 1e-12 * std::max(1.0, hat.sup_coeff()))
            throw std::domain_error("operator domain: function must lie in Phi");
    }
    hat = clear_low_frequencies(std::move(hat), M0);
    auto [res, exps] = resolve_multiplier(sym.poly, std::move(hat), opts);
    SBFunction scaled(res.ctx(), res.n(), res.support_exp(), res.const_exp());
    for (const auto& [rep, c] : res.coeffs()) {
        const long double mul = cell_multiplier(sym.poly.ctx().p(), exps.at(rep), sym.alpha, sign);
        scaled.add(rep, c * static_cast<double>(mul));
    }
    return inverse_fourier(scaled);
}

}  // namespace

SBFunction apply_q(const QSymbol& sym, const SBFunction& phi, const RefineOptions& opts) {
    if (sym.alpha == 0.0) {
        if (!in_Phi(phi)) throw std::domain_error("operator domain: function must lie in Phi");
        return phi;
    }
    return apply_multiplier(sym, phi, +1, opts, std::nullopt);
}

SBFunction solve_q(const QSymbol& sym, const SBFunction& v, const RefineOptions& opts) {
    if (sym.alpha == 0.0) {
        if (!in_Phi(v)) throw std::domain_error("operator domain: function must lie in Phi");
        return v;
    }
    return apply_multiplier(sym, v, -1, opts, std::nullopt);
}

namespace {

SBFunction taibleson_multiplier(double alpha, const SBFunction& phi, int sign) {
    SBFunction hat = fourier(phi);
    const std::vector<Rat> zero(phi.n(), Rat(0));
    if (std::abs(hat.coeff(zero)) > 1e-12 * std::max(1.0, hat.sup_coeff()))
        throw std::domain_error("operator domain: function must lie in Phi");
    hat = clear_low_frequencies(std::move(hat), std::nullopt);
    const long p = phi.ctx().p();
    SBFunction scaled(hat.ctx(), hat.n(), hat.support_exp(), hat.const_exp());
    for (const auto& [rep, c] : hat.coeffs()) {
        long min_ord = val_inf;
        for (const Rat& r : rep) min_ord = std::min(min_ord, ord_p(r, p));
        // ||xi|| = p^{-min_ord} on the coset
        const long double mul = cell_multiplier(p, min_ord, alpha, sign);
        scaled.add(rep, c * static_cast<double>(mul));
    }
    return inverse_fourier(scaled);
}

}  // namespace

SBFunction apply_taibleson(double alpha, const SBFunction& phi) {
    return taibleson_multiplier(alpha, phi, +1);
}

SBFunction solve_taibleson(double alpha, const SBFunction& v) {
    return taibleson_multiplier(alpha, v, -1);
}

SQSymbol make_sqsymbol(QSymbol principal, LowerTerms lower, const RefineOptions& opts) {
    const long M0 = sq_radius_M0(principal.poly, principal.cert, lower, opts);
    SQSymbol sym{std::move(principal), std::move(lower), M0};
    sym.principal.constants.M0 = M0;
    return sym;
}

std::vector<std::vector<Rat>> reachable_coefficient_values(const LowerTerms& lower,
                                                           const PrimeCtx& ctx, size_t n) {
    // Sample points: the tail (a point beyond every patch) plus the centers of
    // every patch refined to the finest patch level. Level-L* balls are either
    // inside a patch or disjoint from it, so each sample pins every c_k.
    long finest = 0;
    long far_exp = 1;
    bool any_patch = false;
    for (const auto& [k, c] : lower) {
        for (const auto& [b, v] : c.patches()) {
            any_patch = true;
            finest = std::max(finest, b.level());
            const AbsValue nb = vec_norm(b.center());
            if (!nb.is_zero()) far_exp = std::max(far_exp, -nb.ord() + 1);
            far_exp = std::max(far_exp, -b.level() + 1);
        }
    }
    std::vector<PadicVector> samples;
    PadicVector far{std::vector<Rat>(n, Rat(0)), ctx};
    far.coords[0] = pow_p(ctx.p(), -far_exp);
    samples.push_back(std::move(far));
    if (any_patch) {
        for (const auto& [k, c] : lower) {
            for (const auto& [b, v] : c.patches()) {
                std::deque<Ball> work{b};
                while (!work.empty()) {
                    Ball cur = std::move(work.front());
                    work.pop_front();
                    if (cur.level() >= finest) {
                        samples.push_back(cur.center());
                        continue;
                    }
                    for (Ball& ch : cur.subdivide()) work.push_back(std::move(ch));
                    if (samples.size() + work.size() > 100000)
                        throw std::runtime_error(
                            "reachable_coefficient_values: patch refinement too large");
                }
            }
        }
    }
    std::set<std::vector<Rat>, RatVecLess> seen;
    std::vector<std::vector<Rat>> out;
    for (const PadicVector& x : samples) {
        std::vector<Rat> vals;
        vals.reserve(lower.size());
        for (const auto& [k, c] : lower) vals.push_back(c.value_at(x));
        if (seen.insert(vals).second) out.push_back(std::move(vals));
    }
    return out;
}

namespace {

SQResult sq_multiplier(const SQSymbol& sym, const SBFunction& phi, int sign,
                       const RefineOptions& opts) {
    if (!in_Phi_M0(phi, sym.M0))
        throw std::domain_error("operator domain: function must lie in Phi_M0");
    SBFunction hat = clear_low_frequencies(fourier(phi), sym.M0);
    const WeightedPoly& f = sym.principal.poly;
    SQResult out;
    for (const std::vector<Rat>& vals : reachable_coefficient_values(sym.lower, f.ctx(), f.n())) {
        WeightedPoly fv = f;
        for (size_t idx = 0; idx < sym.lower.size(); ++idx)
            fv.add_term(sym.lower[idx].first, vals[idx]);
        auto [res, exps] = resolve_multiplier(fv, hat, opts);
        SBFunction scaled(res.ctx(), res.n(), res.support_exp(), res.const_exp());
        for (const auto& [rep, c] : res.coeffs()) {
            const long double mul = cell_multiplier(f.ctx().p(), exps.at(rep), sym.principal.alpha, sign);
            scaled.add(rep, c * static_cast<double>(mul));
        }
        out.pieces.push_back(SQPiece{vals, inverse_fourier(scaled)});
    }
    return out;
}

}  // namespace

const SBFunction& SQResult::at(const PadicVector& x, const SQSymbol& sym) const {
    std::vector<Rat> vals;
    vals.reserve(sym.lower.size());
    for (const auto& [k, c] : sym.lower) vals.push_back(c.value_at(x));
    for (const SQPiece& piece : pieces) {
        if (piece.values == vals) return piece.value;
    }
    throw std::logic_error("SQResult::at: no piece matches the coefficient values");
}

SQResult apply_sq(const SQSymbol& sym, const SBFunction& phi, const RefineOptions& opts) {
    return sq_multiplier(sym, phi, +1, opts);
}

SQResult solve_sq(const SQSymbol& sym, const SBFunction& v, const RefineOptions& opts) {
    return sq_multiplier(sym, v, -1, opts);
}

}  // namespace padic
