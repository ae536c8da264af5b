#include <algorithm>

#include "padic/symbol.hpp"

namespace padic {

CertifyResult certify_quasielliptic(const WeightedPoly& f, const CertifyOptions& opts) {
    if (f.is_constant())
        throw std::invalid_argument("certify_quasielliptic: polynomial is constant");

    const auto q1 = check_quasihomogeneous(f);
    if (const MultiIndex* k = std::get_if<MultiIndex>(&q1))
        return NonQEWitness{InhomogeneousWitness{*k}};
    const long d = std::get<long>(q1);

    QECertificate cert;
    cert.degree = d;
    cert.norm_shift = zp_normalization_shift(f);
    const WeightedPoly fn = f.scaled(pow_p(f.ctx().p(), cert.norm_shift));

    const auto cf = canonical_form(fn, d);
    if (const NonQEWitness* w = std::get_if<NonQEWitness>(&cf)) return *w;
    cert.pure_powers = std::get<CanonicalForm>(cf).pure_powers;

    const long maxw = *std::max_element(f.weights().begin(), f.weights().end());
    RefineOptions ropts;
    ropts.cell_budget = opts.cell_budget;
    ropts.depth_cap = opts.depth_cap > 0 ? opts.depth_cap : maxw + 3 * maxw + 4;

    // Nonvanishing over the scaling fundamental domain settles Q2 on all of
    // Q_p^n \ {0} (the orbit of any root meets it); the per-orthant domains
    // supply the certificate bounds. all_orthants lists the all-ones sign
    // vector first, so the decisive domain runs before the rest.
    for (const Orthant& j : all_orthants(f.n())) {
        const auto domain = fundamental_domain(j, f.weights(), f.ctx(), maxw);
        if (domain.empty()) continue;
        const auto res = certify_nonvanishing(fn, domain, ropts);
        if (const NonQEWitness* w = std::get_if<NonQEWitness>(&res)) return *w;
        cert.domain_bounds[j.signs] = std::get<long>(res);
    }
    cert.refinement_depth = ropts.depth_cap;
    return cert;
}

}  // namespace padic
