#include "padic/symbol.hpp"

#include <algorithm>

namespace padic {

XiMeta::XiMeta(long degree, std::vector<long> w) : d(degree), weights(std::move(w)) {
    if (weights.empty()) throw std::invalid_argument("XiMeta: empty weights");
    for (long wi : weights) {
        if (wi < 1) throw std::invalid_argument("XiMeta: weights must be positive");
        if (d % wi != 0) throw std::invalid_argument("XiMeta: d/w_i must be integral");
    }
}

long XiMeta::max_weight() const { return *std::max_element(weights.begin(), weights.end()); }

Rat xi_value(const XiMeta& meta, const PadicVector& xi) {
    if (xi.dim() != meta.n()) throw std::invalid_argument("xi_value: arity mismatch");
    Rat acc(0);
    for (size_t i = 0; i < meta.n(); ++i) {
        const long v = ord_p(xi.coords[i], xi.ctx.p());
        if (val_is_inf(v)) continue;
        acc += pow_p(xi.ctx.p(), -v * meta.exponent(i));
    }
    return acc;
}

XiRange xi_range(const XiMeta& meta, const Ball& b) {
    if (b.dim() != meta.n()) throw std::invalid_argument("xi_range: arity mismatch");
    const long p = b.ctx().p();
    Rat lo(0), slack(0);
    for (size_t i = 0; i < meta.n(); ++i) {
        const Rat& ci = b.center().coords[i];
        if (ci != 0) {
            lo += pow_p(p, -ord_p(ci, p) * meta.exponent(i));
        } else {
            slack += pow_p(p, -b.level() * meta.exponent(i));
        }
    }
    return XiRange{lo, Rat(lo + slack)};
}

std::optional<long> locally_constant_abs(const WeightedPoly& f, const Ball& b) {
    const Rat fc = f.evaluate(b.center());
    if (fc == 0) return std::nullopt;
    const long vc = ord_p(fc, f.ctx().p());
    const WeightedPoly g = f.shift_scale(b.center(), b.level());
    long mu = val_inf;
    const MultiIndex zero(f.n(), 0);
    for (const auto& [k, c] : g.terms()) {
        if (k == zero) continue;
        mu = std::min(mu, ord_p(c, f.ctx().p()));
    }
    if (vc < mu) return vc;
    return std::nullopt;
}

long abs_upper_bound_exp(const WeightedPoly& f, const Ball& b) {
    const long p = f.ctx().p();
    long best = val_inf;
    for (const auto& [k, c] : f.terms()) {
        long e = ord_p(c, p);
        for (size_t i = 0; i < f.n(); ++i) {
            if (k[i] == 0) continue;
            const Rat& ci = b.center().coords[i];
            const long u = (ci == 0) ? b.level() : ord_p(ci, p);
            e = val_add(e, static_cast<long>(k[i]) * u);
        }
        best = std::min(best, e);
    }
    return best;
}

long SymbolTable::lower_bound_exp() const {
    long m = 0;
    for (const auto& cell : cells) m = std::max(m, cell.e);
    return m;
}

namespace {

// Newton lift along one coordinate with the others frozen at the ball center;
// reports an exact rational root when the iterate stabilizes (directly or
// through rational reconstruction). Every coordinate meeting the Hensel
// criterion is tried, since the rational root may sit along a coordinate whose
// gradient valuation is not minimal.
std::optional<NonQEWitness> try_hensel_root(const WeightedPoly& f, const Ball& b) {
    const long p = f.ctx().p();
    const PadicVector& c = b.center();
    const Rat fc = f.evaluate(c);
    const long vf = ord_p(fc, p);
    std::vector<long> grad_ord(f.n(), val_inf);
    long vd = val_inf;
    for (size_t i = 0; i < f.n(); ++i) {
        grad_ord[i] = ord_p(f.partial_derivative(i).evaluate(c), p);
        vd = std::min(vd, grad_ord[i]);
    }
    if (val_is_inf(vd) || vf <= 2 * vd || vf - vd < b.level()) return std::nullopt;

    for (size_t i = 0; i < f.n(); ++i) {
        if (val_is_inf(grad_ord[i]) || vf <= 2 * grad_ord[i] || vf - grad_ord[i] < b.level())
            continue;
        const WeightedPoly df = f.partial_derivative(i);
        PadicVector x = c;
        const long target = std::min<long>(400, std::max<long>(48, 4 * (b.level() + vf)));
        Rat fx = fc;
        for (int iter = 0; iter < 40; ++iter) {
            const Rat dfx = df.evaluate(x);
            if (dfx == 0) break;
            x.coords[i] -= fx / dfx;
            fx = f.evaluate(x);
            if (fx == 0) break;
            if (ord_p(fx, p) >= target) break;
        }
        if (fx == 0 && !x.is_zero()) return NonQEWitness{RationalRootWitness{x}};
        const long vfx = ord_p(fx, p);
        const long prec = val_is_inf(vfx) ? 0 : std::min<long>(vfx - grad_ord[i], 1000);
        if (prec > b.level()) {
            const Int modulus = pow_int(Int(p), static_cast<unsigned long>(prec));
            const Int r = residue_mod(x.coords[i], modulus);
            if (auto cand = rational_reconstruct(r, modulus)) {
                PadicVector root = c;
                root.coords[i] = *cand;
                if (f.evaluate(root) == 0 && !root.is_zero())
                    return NonQEWitness{RationalRootWitness{root}};
            }
        }
    }
    // A Z_p root exists in the ball (Hensel criterion), but no rational one
    // surfaced: the class itself is the witness.
    return NonQEWitness{RootClassWitness{b, vf, vd}};
}

struct RefineOutcome {
    std::vector<SymbolCell> cells;
    std::vector<TaggedCell> unresolved;
    std::optional<NonQEWitness> witness;
    long max_level = 0;
};

RefineOutcome refine_abs(const WeightedPoly& f, const std::vector<Ball>& seeds,
                         const RefineOptions& opts, bool find_roots) {
    RefineOutcome out;
    // Witness priority: an exact rational root beats a certified root class,
    // which beats an inconclusive depth-out; the scan keeps going so a later
    // ball can upgrade the answer.
    std::optional<NonQEWitness> root_class, inconclusive;
    std::deque<Ball> work(seeds.begin(), seeds.end());
    size_t processed = 0;
    while (!work.empty()) {
        if (++processed > opts.cell_budget)
            throw std::runtime_error("refine_abs: cell budget exceeded");
        Ball b = std::move(work.front());
        work.pop_front();
        out.max_level = std::max(out.max_level, b.level());

        if (opts.value_floor_exp) {
            const long ub = abs_upper_bound_exp(f, b);
            if (ub >= *opts.value_floor_exp) {
                out.unresolved.push_back(TaggedCell{b, ub});
                continue;
            }
        }
        const Rat fc = f.evaluate(b.center());
        if (fc == 0) {
            if (find_roots && !b.center().is_zero()) {
                out.witness = NonQEWitness{RationalRootWitness{b.center()}};
                return out;
            }
            if (b.level() >= opts.depth_cap)
                throw std::runtime_error("refine_abs: symbol vanishes inside the region");
            for (Ball& ch : b.subdivide()) work.push_back(std::move(ch));
            continue;
        }
        if (auto e = locally_constant_abs(f, b)) {
            out.cells.push_back(SymbolCell{b, *e});
            continue;
        }
        if (find_roots) {
            if (auto w = try_hensel_root(f, b)) {
                if (std::holds_alternative<RationalRootWitness>(*w)) {
                    out.witness = w;
                    return out;
                }
                if (!root_class) root_class = w;
                continue;  // the class certifiably contains a root
            }
        }
        if (b.level() >= opts.depth_cap) {
            if (find_roots) {
                if (!inconclusive) inconclusive = NonQEWitness{InconclusiveWitness{b.level()}};
                continue;
            }
            throw std::runtime_error("refine_abs: depth cap exceeded");
        }
        for (Ball& ch : b.subdivide()) work.push_back(std::move(ch));
    }
    if (root_class) out.witness = root_class;
    else if (inconclusive) out.witness = inconclusive;
    return out;
}

}  // namespace

SymbolTable build_symbol_table(const WeightedPoly& f, const std::vector<Ball>& seeds,
                               const RefineOptions& opts) {
    RefineOutcome out = refine_abs(f, seeds, opts, /*find_roots=*/false);
    SymbolTable table;
    table.cells = std::move(out.cells);
    table.unresolved = std::move(out.unresolved);
    table.max_level = out.max_level;
    table.value_floor_exp = opts.value_floor_exp;
    return table;
}

std::variant<long, NonQEWitness> certify_nonvanishing(const WeightedPoly& f,
                                                      const std::vector<Ball>& domain,
                                                      const RefineOptions& opts) {
    RefineOptions o = opts;
    o.value_floor_exp.reset();
    RefineOutcome out = refine_abs(f, domain, o, /*find_roots=*/true);
    if (out.witness) return *out.witness;
    long m = 0;
    for (const auto& cell : out.cells) m = std::max(m, cell.e);
    return m;
}

std::vector<Ball> norm_shell(const PrimeCtx& ctx, size_t n, long l) {
    const long p = ctx.p();
    const Rat scale = pow_p(p, -l);
    std::vector<Ball> out;
    std::vector<long> digit(n, 0);
    while (true) {
        if (std::any_of(digit.begin(), digit.end(), [](long d) { return d != 0; })) {
            PadicVector c{std::vector<Rat>(n), ctx};
            for (size_t i = 0; i < n; ++i) c.coords[i] = Rat(digit[i]) * scale;
            out.emplace_back(std::move(c), -l + 1);
        }
        size_t i = 0;
        while (i < n && ++digit[i] == p) digit[i++] = 0;
        if (i == n) break;
    }
    return out;
}

std::vector<Ball> annulus(const PrimeCtx& ctx, size_t n, long lo, long hi) {
    if (lo > hi) throw std::invalid_argument("annulus: lo exceeds hi");
    std::vector<Ball> out;
    for (long l = lo; l <= hi; ++l) {
        std::vector<Ball> shell = norm_shell(ctx, n, l);
        out.insert(out.end(), std::make_move_iterator(shell.begin()),
                   std::make_move_iterator(shell.end()));
    }
    return out;
}

namespace {

std::optional<long> cross_orthant_sub_degree(const WeightedPoly& f) {
    std::optional<long> a;
    const size_t n = f.n();
    for (const Orthant& j : all_orthants(n)) {
        if (j.all_positive()) continue;
        for (const auto& [k, c] : f.terms()) {
            bool inside = true;  // supp(k) within the -1 coordinates of j
            long delta = 0;
            for (size_t i = 0; i < n; ++i) {
                if (k[i] == 0) continue;
                if (j.signs[i] == -1) delta += static_cast<long>(k[i]) * f.weights()[i];
                else inside = false;
            }
            if (!inside) a = std::max(a.value_or(delta), delta);
        }
    }
    return a;
}

}  // namespace

ConstantsReport estimate_constants(const WeightedPoly& f, const QECertificate& cert,
                                   const RefineOptions& opts) {
    const long p = f.ctx().p();
    const XiMeta meta(cert.degree, f.weights());
    const WeightedPoly fn = f.scaled(pow_p(p, cert.norm_shift));
    const long K = meta.max_weight();

    const Orthant full{std::vector<int>(f.n(), 1)};
    const std::vector<Ball> seeds = fundamental_domain(full, f.weights(), f.ctx(), K);
    SymbolTable table = build_symbol_table(fn, seeds, opts);
    if (!table.unresolved.empty())
        throw std::logic_error("estimate_constants: unexpected unresolved cells");
    if (table.cells.empty()) throw std::logic_error("estimate_constants: empty table");

    // |f_input| = p^{norm_shift} |f_norm|; on each cell the ratio |f|/Xi spans
    // exactly [p^{shift-e}/xi_hi, p^{shift-e}/xi_lo], both bounds attained.
    ConstantsReport rep;
    rep.norm_shift = cert.norm_shift;
    bool first = true;
    for (const SymbolCell& cell : table.cells) {
        const XiRange xr = xi_range(meta, cell.ball);
        const Rat value = pow_p(p, cert.norm_shift - cell.e);
        const Rat lo = value / xr.hi;
        const Rat hi = value / xr.lo;
        if (first || lo < rep.A0) {
            rep.A0 = lo;
            rep.lower_witness = ExtremalCell{cell.ball, cell.e, xr.hi};
        }
        if (first || hi > rep.A1) {
            rep.A1 = hi;
            rep.upper_witness = ExtremalCell{cell.ball, cell.e, xr.lo};
        }
        first = false;
        rep.M = std::max(rep.M, cell.e);
    }
    rep.R = std::max(0L, table.max_level - (rep.M + 1));
    rep.sub_degree_a = cross_orthant_sub_degree(f);
    return rep;
}

void CoeffFunction::add_patch(Ball region, Rat value) {
    for (const auto& [b, v] : patches_) {
        if (balls_intersect(b, region))
            throw std::invalid_argument("CoeffFunction: patches must be pairwise disjoint");
    }
    patches_.emplace_back(std::move(region), std::move(value));
}

Rat CoeffFunction::value_at(const PadicVector& x) const {
    for (const auto& [b, v] : patches_)
        if (b.contains(x)) return v;
    return tail_;
}

AbsValue CoeffFunction::sup_norm(const PrimeCtx& ctx) const {
    AbsValue best = abs_p(tail_, ctx);
    for (const auto& [b, v] : patches_) {
        AbsValue a = abs_p(v, ctx);
        if (best < a) best = a;
    }
    return best;
}

bool CoeffFunction::is_zero() const {
    if (tail_ != 0) return false;
    for (const auto& [b, v] : patches_)
        if (v != 0) return false;
    return true;
}

bool balls_intersect(const Ball& a, const Ball& b) {
    if (a.dim() != b.dim()) return false;
    return a.level() <= b.level() ? a.contains(b.center()) : b.contains(a.center());
}

long sq_radius_M0(const WeightedPoly& f, const QECertificate& cert, const LowerTerms& lower,
                  const RefineOptions& opts) {
    const long p = f.ctx().p();
    const long d = cert.degree;
    const size_t n = f.n();

    LowerTerms active;
    for (const auto& [k, c] : lower) {
        if (f.weighted_degree(k) > d - 1)
            throw std::domain_error("sq_radius_M0: lower term of weighted degree >= d");
        if (!c.is_zero()) active.push_back({k, c});
    }
    if (active.empty()) return 0;

    // Per-orthant lower-bound exponents of the principal restrictions: for the
    // negative-coordinate set S of an orthant, the domain projects onto the
    // scaling fundamental domain of the S-variables.
    long M = 0;
    for (const Orthant& j : all_orthants(n)) {
        std::vector<size_t> sel;
        for (size_t i = 0; i < n; ++i)
            if (j.signs[i] == -1) sel.push_back(i);
        if (sel.empty()) continue;
        std::vector<bool> keep(n, false);
        for (size_t i : sel) keep[i] = true;
        const WeightedPoly fj_full = f.restrict_support(keep);
        // project to the selected variables
        std::vector<long> wsel;
        for (size_t i : sel) wsel.push_back(f.weights()[i]);
        WeightedPoly fj(sel.size(), wsel, f.ctx());
        for (const auto& [k, c] : fj_full.terms()) {
            MultiIndex kk;
            for (size_t i : sel) kk.push_back(k[i]);
            fj.add_term(kk, c);
        }
        const Orthant sub_full{std::vector<int>(sel.size(), 1)};
        const long K = *std::max_element(wsel.begin(), wsel.end());
        const auto res =
            certify_nonvanishing(fj, fundamental_domain(sub_full, wsel, f.ctx(), K), opts);
        if (const long* m = std::get_if<long>(&res)) M = std::max(M, *m);
        else
            throw std::runtime_error("sq_radius_M0: principal restriction vanishes: " +
                                     describe(std::get<NonQEWitness>(res)));
    }

    const std::optional<long> a = cross_orthant_sub_degree(f);
    Rat bound(-1);
    bool have = false;
    if (a) {
        bound = Rat(M, d - *a);
        bound.canonicalize();
        have = true;
    }
    for (const auto& [k, c] : active) {
        const long delta = f.weighted_degree(k);
        const long logc = -c.sup_norm(f.ctx()).ord();  // log_p ||c||
        Rat term(M + logc, d - delta);
        term.canonicalize();
        if (!have || term > bound) { bound = term; have = true; }
    }
    long wsum = 0;
    for (long w : f.weights()) wsum += w;
    bound *= Rat(wsum);

    Int fl;
    mpz_fdiv_q(fl.get_mpz_t(), bound.get_num().get_mpz_t(), bound.get_den().get_mpz_t());
    long M0 = fl.get_si() + 1;
    if (M0 < 0) M0 = 0;

    // Boundary-shell verification: on ||xi|| = p^{M0} every lower term must be
    // strictly dominated by |f| cell-wise. Refinement may pin coordinates
    // further; a fully pinned failing cell is a hard error.
    std::deque<Ball> work;
    for (Ball& b : norm_shell(f.ctx(), n, M0)) work.push_back(std::move(b));
    size_t processed = 0;
    while (!work.empty()) {
        if (++processed > opts.cell_budget)
            throw std::runtime_error("sq_radius_M0: verification budget exceeded");
        Ball b = std::move(work.front());
        work.pop_front();
        const auto e = locally_constant_abs(f, b);
        bool ok = e.has_value();
        bool pinned = true;
        if (ok) {
            for (const auto& [k, c] : active) {
                // |c_k xi^k| <= p^{-lb}; need strict domination p^{-lb} < p^{-e}
                long lb = c.sup_norm(f.ctx()).ord();
                for (size_t i = 0; i < n; ++i) {
                    if (k[i] == 0) continue;
                    const Rat& ci = b.center().coords[i];
                    if (ci == 0) pinned = false;
                    const long u = (ci == 0) ? b.level() : ord_p(ci, p);
                    lb = val_add(lb, static_cast<long>(k[i]) * u);
                }
                if (!(lb > *e)) { ok = false; break; }
            }
        } else {
            pinned = false;
        }
        if (ok) continue;
        if (pinned)
            throw std::runtime_error(
                "sq_radius_M0: boundary verification failed on a pinned cell");
        if (b.level() >= opts.depth_cap)
            throw std::runtime_error("sq_radius_M0: verification depth cap exceeded");
        for (Ball& ch : b.subdivide()) work.push_back(std::move(ch));
    }
    return M0;
}

}  // namespace padic
