#include "padic/heat.hpp"

#include <algorithm>
#include <cmath>

namespace padic {

namespace {

double dpow(long p, double e) { return std::pow(static_cast<double>(p), e); }

// Exact ball integral of the character: int_{c+(p^lam Z_p)^n} Psi(x.xi) dxi
// = p^{-lam n} Psi(x.c) when ||x|| <= p^lam, 0 otherwise.
Complex char_ball_integral(const Ball& b, const PadicVector& x) {
    const long p = b.ctx().p();
    for (size_t i = 0; i < b.dim(); ++i) {
        if (-ord_p(x.coords[i], p) > b.level()) return Complex(0.0);
    }
    Rat dot(0);
    for (size_t i = 0; i < b.dim(); ++i) dot += x.coords[i] * b.center().coords[i];
    const double vol = dpow(p, -static_cast<double>(b.level() * static_cast<long>(b.dim())));
    return vol * character(dot, b.ctx()).value();
}

double cell_symbol_value(long p, long e, double alpha) {
    return static_cast<double>(powl(static_cast<long double>(p),
                                    -static_cast<long double>(e) * static_cast<long double>(alpha)));
}

// Outer tail: shells above level L contribute at most
// p^{ln}(1-p^{-n}) exp(-t (A0 p^{l d/maxw})^alpha) each.
double outer_tail(const QSymbol& sym, double t, long L) {
    const long p = sym.poly.ctx().p();
    const size_t n = sym.poly.n();
    const double A0 = to_double(sym.constants.A0);
    const double rate = static_cast<double>(sym.meta.d) / sym.meta.max_weight();
    const double logp = std::log(static_cast<double>(p));
    double sum = 0;
    for (long l = L + 1; l < L + 20000; ++l) {
        // log of the shell volume keeps the product finite even when the
        // volume itself overflows; the decay term dominates regardless.
        const double log_vol = static_cast<double>(l * static_cast<long>(n)) * logp +
                               std::log1p(-dpow(p, -static_cast<double>(n)));
        const double decay = t * std::pow(A0 * dpow(p, l * rate), sym.alpha);
        const double term = std::exp(log_vol - decay);
        sum += term;
        if (term < 1e-320) break;
    }
    return sum;
}

struct InnerBall {
    long level;  // ball (p^level Z_p)^n
    double ub;   // sup of |f|^alpha on it
};

// Shrink the ball at the origin until vol * (1 - e^{-t ub}) <= budget.
InnerBall pick_inner(const QSymbol& sym, double t, double budget) {
    const long p = sym.poly.ctx().p();
    const size_t n = sym.poly.n();
    const double A1 = to_double(sym.constants.A1);
    for (long lo = 0;; --lo) {
        double xi_max = 0;
        for (size_t i = 0; i < n; ++i)
            xi_max += dpow(p, static_cast<double>((lo - 1) * sym.meta.exponent(i)));
        const double ub = std::pow(A1 * xi_max, sym.alpha);
        const double vol = dpow(p, static_cast<double>((lo - 1) * static_cast<long>(n)));
        const double err = vol * (t * ub >= 1 ? 1.0 : 1.0 - std::exp(-t * ub));
        if (err <= budget) return InnerBall{1 - lo, std::pow(A1 * xi_max, sym.alpha)};
        if (lo < -4000) throw std::runtime_error("heat_kernel: inner budget unreachable");
    }
}

}  // namespace

KernelValue heat_kernel(const QSymbol& sym, const PadicVector& x, double t, double tol,
                        const RefineOptions& opts) {
    if (!(t > 0)) throw std::invalid_argument("heat_kernel: t must be positive");
    if (!(tol > 0)) throw std::invalid_argument("heat_kernel: tol must be positive");
    const long p = sym.poly.ctx().p();
    const size_t n = sym.poly.n();

    long hi = 1;
    while (outer_tail(sym, t, hi) > tol / 2) {
        if (++hi > 4000) throw std::runtime_error("heat_kernel: outer budget unreachable");
    }
    const double out_bound = outer_tail(sym, t, hi);
    const InnerBall inner = pick_inner(sym, t, tol / 2);
    const long lo = 1 - inner.level;

    SymbolTable table = build_symbol_table(sym.poly, annulus(sym.poly.ctx(), n, lo, hi), opts);
    Complex val(0.0);
    for (const SymbolCell& cell : table.cells) {
        const double v = cell_symbol_value(p, cell.e, sym.alpha);
        val += std::exp(-t * v) * char_ball_integral(cell.ball, x);
    }
    // Inner ball: integrand within [e^{-t ub}, 1]; take the midpoint.
    Ball origin(PadicVector{std::vector<Rat>(n, Rat(0)), sym.poly.ctx()}, inner.level);
    const Complex ci = char_ball_integral(origin, x);
    const double elo = std::exp(-t * inner.ub);
    val += ci * (0.5 * (1.0 + elo));
    const double in_bound = std::abs(ci) * 0.5 * (1.0 - elo);
    return KernelValue{val, out_bound + in_bound};
}

TruncatedState truncated_state(const QSymbol& sym, long l, long r, double t,
                               const RefineOptions& opts) {
    if (!(l > r && r >= 1)) throw std::invalid_argument("truncated_state: need l > r >= 1");
    if (!(t > 0)) throw std::invalid_argument("truncated_state: t must be positive");
    const long p = sym.poly.ctx().p();
    const size_t n = sym.poly.n();
    SymbolTable table = build_symbol_table(sym.poly, annulus(sym.poly.ctx(), n, -r + 1, l), opts);
    long m_hat = -r + 2;
    for (const SymbolCell& cell : table.cells) m_hat = std::max(m_hat, cell.ball.level());
    SBFunction hat(sym.poly.ctx(), n, l, m_hat);
    for (const SymbolCell& cell : table.cells) {
        const double coeff = std::exp(-t * cell_symbol_value(p, cell.e, sym.alpha));
        std::deque<Ball> work{cell.ball};
        while (!work.empty()) {
            Ball b = std::move(work.front());
            work.pop_front();
            if (b.level() == m_hat) {
                hat.add(b.center().coords, Complex(coeff));
                continue;
            }
            for (Ball& ch : b.subdivide()) work.push_back(std::move(ch));
        }
    }
    return TruncatedState{l, r, t, inverse_fourier(hat)};
}

KernelValue phi_rt(const QSymbol& sym, long r, double t, const PadicVector& x, double tol,
                   const RefineOptions& opts) {
    if (!(r >= 1)) throw std::invalid_argument("phi_rt: need r >= 1");
    if (!(t > 0)) throw std::invalid_argument("phi_rt: t must be positive");
    const long p = sym.poly.ctx().p();
    const size_t n = sym.poly.n();
    long hi = std::max<long>(1, -r + 2);
    while (outer_tail(sym, t, hi) > tol) {
        if (++hi > 4000) throw std::runtime_error("phi_rt: outer budget unreachable");
    }
    SymbolTable table = build_symbol_table(sym.poly, annulus(sym.poly.ctx(), n, -r + 1, hi), opts);
    Complex val(0.0);
    for (const SymbolCell& cell : table.cells) {
        const double v = cell_symbol_value(p, cell.e, sym.alpha);
        val += std::exp(-t * v) * char_ball_integral(cell.ball, x);
    }
    return KernelValue{val, outer_tail(sym, t, hi)};
}

SBFunction cauchy_evolve(const QSymbol& sym, const SBFunction& phi0, double t,
                         const RefineOptions& opts) {
    if (t < 0) throw std::invalid_argument("cauchy_evolve: t must be >= 0");
    if (!in_Phi(phi0)) throw std::domain_error("cauchy_evolve: initial datum must lie in Phi");
    if (t == 0) return phi0;
    const long p = sym.poly.ctx().p();
    SBFunction hat = clear_low_frequencies(fourier(phi0), std::nullopt);
    auto [res, exps] = resolve_multiplier(sym.poly, std::move(hat), opts);
    SBFunction scaled(res.ctx(), res.n(), res.support_exp(), res.const_exp());
    for (const auto& [rep, c] : res.coeffs()) {
        const double v = cell_symbol_value(p, exps.at(rep), sym.alpha);
        scaled.add(rep, c * std::exp(-t * v));
    }
    return inverse_fourier(scaled);
}

SBFunction taibleson_evolve(double alpha, const SBFunction& phi0, double t) {
    if (t < 0) throw std::invalid_argument("taibleson_evolve: t must be >= 0");
    if (!in_Phi(phi0)) throw std::domain_error("taibleson_evolve: initial datum must lie in Phi");
    if (t == 0) return phi0;
    const long p = phi0.ctx().p();
    SBFunction hat = clear_low_frequencies(fourier(phi0), std::nullopt);
    SBFunction scaled(hat.ctx(), hat.n(), hat.support_exp(), hat.const_exp());
    for (const auto& [rep, c] : hat.coeffs()) {
        long min_ord = val_inf;
        for (const Rat& ri : rep) min_ord = std::min(min_ord, ord_p(ri, p));
        const double v = cell_symbol_value(p, min_ord, alpha);  // ||xi||^alpha
        scaled.add(rep, c * std::exp(-t * v));
    }
    return inverse_fourier(scaled);
}

SBFunction taibleson_truncated_state(const PrimeCtx& ctx, size_t n, double alpha, long l, long r,
                                     double t) {
    if (!(l > r && r >= 1)) throw std::invalid_argument("taibleson_truncated_state: need l > r >= 1");
    const long p = ctx.p();
    SBFunction hat(ctx, n, l, r);
    for (long s = -r + 1; s <= l; ++s) {
        const double coeff = std::exp(-t * dpow(p, static_cast<double>(s) * alpha));
        for (const Ball& b : norm_shell(ctx, n, s)) {
            std::deque<Ball> work{b};
            while (!work.empty()) {
                Ball cur = std::move(work.front());
                work.pop_front();
                if (cur.level() == r) {
                    hat.add(cur.center().coords, Complex(coeff));
                    continue;
                }
                for (Ball& ch : cur.subdivide()) work.push_back(std::move(ch));
            }
        }
    }
    return inverse_fourier(hat);
}

double residual_check(const QSymbol& sym, const SBFunction& phi0, double t, double h,
                      const RefineOptions& opts) {
    if (!(t > h && h > 0)) throw std::invalid_argument("residual_check: need t > h > 0");
    if (!in_Phi(phi0)) throw std::domain_error("residual_check: initial datum must lie in Phi");
    const long p = sym.poly.ctx().p();
    SBFunction hat = clear_low_frequencies(fourier(phi0), std::nullopt);
    auto [res, exps] = resolve_multiplier(sym.poly, std::move(hat), opts);
    double worst = 0;
    for (const auto& [rep, c] : res.coeffs()) {
        const double v = cell_symbol_value(p, exps.at(rep), sym.alpha);
        const double diff =
            (std::exp(-(t + h) * v) - std::exp(-(t - h) * v)) / (2.0 * h) + v * std::exp(-t * v);
        worst = std::max(worst, std::abs(c) * std::abs(diff));
    }
    return worst;
}

std::vector<DiagnosticRow> regularization_diagnostic(const QSymbol& sym, const SBFunction& phi0,
                                                     const std::vector<double>& t_grid,
                                                     const std::vector<double>& betas,
                                                     const RefineOptions& opts) {
    std::vector<DiagnosticRow> rows;
    for (double t : t_grid) {
        const SBFunction u = cauchy_evolve(sym, phi0, t, opts);
        const SBFunction hat = fourier(u);
        for (double beta : betas) {
            const NormReport r = norm_beta_fourier(hat, beta, sym.meta, NormVariant::xi);
            rows.push_back(DiagnosticRow{t, beta, r.value, r.tail_bound});
        }
    }
    return rows;
}

}  // namespace padic
