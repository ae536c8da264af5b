#ifndef PADIC_SBFUN_HPP
#define PADIC_SBFUN_HPP

#include <complex>
#include <map>

#include "padic/symbol.hpp"

namespace padic {

using Complex = std::complex<double>;

// Bruhat-Schwartz function in canonical uniform-level form: supported in
// {||x|| <= p^L}, constant on cosets of (p^m Z_p)^n, stored as a sparse map
// from canonical coset representatives to complex values. The cost of the
// uniform form is O(p^{(L+m)n}) cosets; intended scales keep L+m small.
class SBFunction {
public:
    SBFunction(PrimeCtx ctx, size_t n, long support_exp, long const_exp);

    const PrimeCtx& ctx() const { return ctx_; }
    size_t n() const { return n_; }
    long support_exp() const { return L_; }
    long const_exp() const { return m_; }

    bool empty() const { return coeffs_.empty(); }
    size_t size() const { return coeffs_.size(); }
    const std::map<std::vector<Rat>, Complex, RatVecLess>& coeffs() const { return coeffs_; }

    // Adds c on the coset of x (canonicalized). The representative must
    // satisfy ||rep|| <= p^L.
    void add(const std::vector<Rat>& x, Complex c);
    Complex coeff(const std::vector<Rat>& x) const;

    Complex evaluate(const std::vector<Rat>& x) const;
    Complex evaluate(const PadicVector& x) const;

    // Same function on a finer grid: new_m >= m, new_L >= L.
    SBFunction refined(long new_L, long new_m) const;

    void prune(double eps = 1e-15);

    SBFunction& operator+=(const SBFunction& o);
    SBFunction& operator*=(Complex c);
    friend SBFunction operator+(SBFunction a, const SBFunction& b) { return a += b; }
    friend SBFunction operator-(SBFunction a, const SBFunction& b) {
        SBFunction nb = b;
        nb *= Complex(-1.0, 0.0);
        return a += nb;
    }

    double sup_coeff() const;
    // L2 norm squared: sum |c|^2 p^{-mn}.
    double l2_norm_sq() const;

private:
    PrimeCtx ctx_;
    size_t n_;
    long L_;
    long m_;
    std::map<std::vector<Rat>, Complex, RatVecLess> coeffs_;
};

// Exact transform of the coset basis: each indicator 1_{a+(p^m Z_p)^n} maps to
// p^{-mn} Psi(-a.xi) 1_{||xi|| <= p^m}; the output lives on the dual grid
// (L', m') = (m, L). Character values are the only floating step.
SBFunction fourier(const SBFunction& phi);
SBFunction inverse_fourier(const SBFunction& phi);

SBFunction convolve(const SBFunction& a, const SBFunction& b);
SBFunction multiply(const SBFunction& a, const SBFunction& b);

// F(phi)(0) = 0, i.e. the coefficient of the zero coset of the transform
// vanishes.
bool in_Phi(const SBFunction& phi, double tol = 1e-12);
// F(phi) vanishes on ||xi|| <= p^{M0}.
bool in_Phi_M0(const SBFunction& phi, long M0, double tol = 1e-12);

enum class NormVariant {
    xi,      // weight Xi^{2 beta}; requires membership in Phi
    max_xi,  // weight max(1, Xi)^{2 beta}
};

struct NormReport {
    double beta = 0;
    double value = 0;       // the norm itself
    double tail_bound = 0;  // certified half-width on the norm
    NormVariant variant = NormVariant::xi;
};

// Weighted Sobolev-type norm (integral against Xi^{2beta} or max(1,Xi)^{2beta}
// of |F(phi)|^2). The weight integral over each coset is an exact shell sum
// with a certified geometric tail <= tol.
NormReport norm_beta(const SBFunction& phi, double beta, const XiMeta& meta,
                     NormVariant variant = NormVariant::xi, double tol = 1e-12);
// Same, taking the Fourier transform directly.
NormReport norm_beta_fourier(const SBFunction& phi_hat, double beta, const XiMeta& meta,
                             NormVariant variant = NormVariant::xi, double tol = 1e-12);

// max_beta c_beta ||phi-psi||_beta / (1 + ||phi-psi||_beta) with c_beta =
// 2^{-beta}; the tail over betas beyond the list is bounded by 2^{-max beta}.
double metric_rho(const SBFunction& phi, const SBFunction& psi, const std::vector<double>& betas,
                  const XiMeta& meta, double tol = 1e-12);

// I(beta) = integral of max(1,Xi)^{-2beta}; finite iff beta > n max_i w_i/(2d)
// (rejected otherwise).
struct IntegralReport {
    double value = 0;
    double tail_bound = 0;
};
IntegralReport I_beta(const XiMeta& meta, const PrimeCtx& ctx, double beta, double tol = 1e-12);

}  // namespace padic

#endif
