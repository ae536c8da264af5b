#ifndef PADIC_HEAT_HPP
#define PADIC_HEAT_HPP

#include "padic/pdo.hpp"

namespace padic {

// Z(x,t) = integral of Psi(x.xi) e^{-t|f(xi)|^alpha}: cell sums over a symbol
// table, an outer tail bounded through the certified lower constant, and an
// inner ball bracketed by [e^{-t ub}, 1].
struct KernelValue {
    Complex value;
    double tail_bound = 0;
};

KernelValue heat_kernel(const QSymbol& sym, const PadicVector& x, double t, double tol,
                        const RefineOptions& opts = {});

// phi_{l,r,t} = F^{-1}((1-Omega_{-r}) Omega_l e^{-t|f|^alpha}) as an exact
// coset function over the symbol table of the annulus p^{-r+1} <= ||xi|| <= p^l.
struct TruncatedState {
    long l = 0;
    long r = 0;
    double t = 0;
    SBFunction value;
};

TruncatedState truncated_state(const QSymbol& sym, long l, long r, double t,
                               const RefineOptions& opts = {});

// phi_{r,t}(x): the r-truncation alone, with unbounded upper support;
// evaluated as a kernel sum with outer tail control only.
KernelValue phi_rt(const QSymbol& sym, long r, double t, const PadicVector& x, double tol,
                   const RefineOptions& opts = {});

// u(.,t) = F^{-1}(e^{-t|f|^alpha} F(phi0)) for phi0 in Phi; t = 0 returns phi0
// unchanged.
SBFunction cauchy_evolve(const QSymbol& sym, const SBFunction& phi0, double t,
                         const RefineOptions& opts = {});

// Taibleson counterparts (multiplier e^{-t ||xi||^alpha}, constant per norm
// shell).
SBFunction taibleson_evolve(double alpha, const SBFunction& phi0, double t);
SBFunction taibleson_truncated_state(const PrimeCtx& ctx, size_t n, double alpha, long l, long r,
                                     double t);

// Max over Fourier cells of |(u^(t+h) - u^(t-h))/(2h) + |f|^alpha u^(t)|;
// second order in h.
double residual_check(const QSymbol& sym, const SBFunction& phi0, double t, double h,
                      const RefineOptions& opts = {});

struct DiagnosticRow {
    double t = 0;
    double beta = 0;
    double norm = 0;
    double tail = 0;
};

// ||u(.,t)||_beta across a t-grid; all finite, non-increasing in t for fixed
// beta.
std::vector<DiagnosticRow> regularization_diagnostic(const QSymbol& sym, const SBFunction& phi0,
                                                     const std::vector<double>& t_grid,
                                                     const std::vector<double>& betas,
                                                     const RefineOptions& opts = {});

}  // namespace padic

#endif
