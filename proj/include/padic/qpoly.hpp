#ifndef PADIC_QPOLY_HPP
#define PADIC_QPOLY_HPP

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "padic/core.hpp"

namespace padic {

using MultiIndex = std::vector<unsigned>;

// Multivariate polynomial over Q together with a weight vector; the weighted
// degree of a term k is <k,w>. Zero coefficients are never stored.
class WeightedPoly {
public:
    WeightedPoly(size_t n, std::vector<long> weights, PrimeCtx ctx);

    size_t n() const { return n_; }
    const std::vector<long>& weights() const { return weights_; }
    const PrimeCtx& ctx() const { return ctx_; }
    const std::map<MultiIndex, Rat>& terms() const { return terms_; }

    void add_term(const MultiIndex& k, const Rat& c);
    Rat coefficient(const MultiIndex& k) const;

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;

    long weighted_degree(const MultiIndex& k) const;
    // Max weighted degree over stored terms; -1 for the zero polynomial.
    long degree() const;

    Rat evaluate(const std::vector<Rat>& xi) const;
    Rat evaluate(const PadicVector& xi) const;

    // f(center + p^level * eta) expanded as a polynomial in eta.
    WeightedPoly shift_scale(const PadicVector& center, long level) const;

    WeightedPoly partial_derivative(size_t i) const;

    // Terms supported on the given coordinate subset only.
    WeightedPoly restrict_support(const std::vector<bool>& keep) const;

    WeightedPoly operator+(const WeightedPoly& o) const;
    WeightedPoly operator-(const WeightedPoly& o) const;
    WeightedPoly operator*(const WeightedPoly& o) const;
    WeightedPoly scaled(const Rat& c) const;
    WeightedPoly pow(unsigned e) const;

    friend bool operator==(const WeightedPoly& a, const WeightedPoly& b) {
        return a.n_ == b.n_ && a.weights_ == b.weights_ && a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
    }

private:
    void check_compatible(const WeightedPoly& o) const;
    size_t n_;
    std::vector<long> weights_;
    PrimeCtx ctx_;
    std::map<MultiIndex, Rat> terms_;
};

// Evidence against quasiellipticity. A rational root is exact: f(root) = 0 and
// root != 0. A root class is a residue ball certified (by the Hensel
// criterion) to contain a Z_p root that did not stabilize to a rational.
struct InhomogeneousWitness {
    MultiIndex term;
};
struct RationalRootWitness {
    PadicVector root;
};
struct RootClassWitness {
    Ball cls;
    long ord_f;   // ord of f at the class center
    long ord_df;  // min ord of the gradient there
};
struct InconclusiveWitness {
    long depth;
};
using NonQEWitness =
    std::variant<InhomogeneousWitness, RationalRootWitness, RootClassWitness, InconclusiveWitness>;

std::string describe(const NonQEWitness& w);

// Q1 check: returns d when every term satisfies <k,w> = d, otherwise the
// offending multi-index. Throws on constant input.
std::variant<long, MultiIndex> check_quasihomogeneous(const WeightedPoly& f);

struct PurePower {
    size_t index;   // variable
    Rat coeff;      // c_i
    long exponent;  // d / w_i
};

struct CanonicalForm {
    std::vector<PurePower> pure_powers;  // one per variable
    WeightedPoly remainder;              // h, free of pure powers
};

// Splits a quasi-homogeneous f of degree d into pure powers c_i xi_i^{d/w_i}
// plus a remainder. A missing pure power (or d/w_i not integral) yields an
// exact root witness at the corresponding unit vector.
std::variant<CanonicalForm, NonQEWitness> canonical_form(const WeightedPoly& f, long d);

struct Orthant {
    std::vector<int> signs;  // entries in {-1, +1}
    bool all_positive() const;
};

// All 2^n sign vectors.
std::vector<Orthant> all_orthants(size_t n);

// Coordinate scaling eta_i = p^{l w_i} xi_i applied to the -1 coordinates of j
// (to every coordinate when j = (1,...,1)).
PadicVector dilate(long l, const Orthant& j, const std::vector<long>& weights,
                   const PadicVector& x);

// Exact residue-class enumeration, at level K, of
//   U_{n,j} = {eta in Z_p^n : exists i with j_i = -1 and ord(eta_i) <= w_i - 1}
// for j != (1,...,1), and of
//   V_n    = {eta in Z_p^n : exists i with ord(eta_i) <= w_i - 1}
// for j = (1,...,1). Requires K >= max relevant w_i.
std::vector<Ball> fundamental_domain(const Orthant& j, const std::vector<long>& weights,
                                     const PrimeCtx& ctx, long K);

// Smallest quasi-homogeneity scale clearing denominators into Z_p: f_norm =
// p^{shift} * f has all coefficient valuations >= 0.
long zp_normalization_shift(const WeightedPoly& f);

struct QECertificate {
    long degree = 0;
    std::vector<PurePower> pure_powers;
    // Lower-bound exponents M per fundamental domain, keyed by orthant signs;
    // the all-ones key carries the bound over V_n. Bounds refer to the
    // Z_p-normalized polynomial.
    std::map<std::vector<int>, long> domain_bounds;
    long refinement_depth = 0;
    long norm_shift = 0;  // |f_input| = p^{norm_shift} |f_normalized|
};

using CertifyResult = std::variant<QECertificate, NonQEWitness>;

struct CertifyOptions {
    // 0 means: 3 * max_i w_i + 4 levels past the initial domain level.
    long depth_cap = 0;
    size_t cell_budget = 500000;
};

// Full quasiellipticity certification: Q1, canonical form, and nonvanishing on
// every fundamental domain. Semi-decidable; inconclusive outcomes carry the
// depth reached.
CertifyResult certify_quasielliptic(const WeightedPoly& f, const CertifyOptions& opts = {});

// True when tau is an m-th power in Q_p^x. Valuation criterion plus a residue
// check at the Hensel-stable modulus.
bool is_mth_power(const Rat& tau, unsigned long m, const PrimeCtx& ctx);

// The degree-(d*a) quasielliptic extension f^a - tau * xi_{n+1}^d with weights
// (w_1,...,w_n,a). Requires gcd(a,d) > 1 and tau outside (Q_p^x)^{gcd(a,d)}.
WeightedPoly power_extension(const WeightedPoly& f, unsigned a, const Rat& tau);

}  // namespace padic

#endif
