#ifndef PADIC_PDO_HPP
#define PADIC_PDO_HPP

#include "padic/sbfun.hpp"

namespace padic {

struct NotQuasiellipticError : std::runtime_error {
    NonQEWitness witness;
    explicit NotQuasiellipticError(NonQEWitness w)
        : std::runtime_error("not quasielliptic: " + describe(w)), witness(std::move(w)) {}
};

// A certified quasielliptic symbol |f|^alpha together with its comparison
// constants.
struct QSymbol {
    WeightedPoly poly;
    double alpha = 1.0;
    QECertificate cert;
    ConstantsReport constants;
    XiMeta meta;
};

// Certifies f and computes the constants; throws NotQuasiellipticError when
// certification produces a witness (including inconclusive outcomes).
QSymbol make_qsymbol(WeightedPoly f, double alpha, const CertifyOptions& copts = {},
                     const RefineOptions& ropts = {});

// Refines the transform until |f| is constant on every supporting coset.
// Returns the refined function and the exponent e (|f| = p^{-e}) per
// representative.
std::pair<SBFunction, std::map<std::vector<Rat>, long, RatVecLess>> resolve_multiplier(
    const WeightedPoly& f, SBFunction hat, const RefineOptions& opts = {});

// Drop every coset meeting {||xi|| <= p^M0} (all of them carry zero
// coefficients for functions in the corresponding Lizorkin-type domain; this
// clears numerical residue). With M0 = nullopt only the zero coset is cleared.
SBFunction clear_low_frequencies(SBFunction hat, std::optional<long> M0);

// f(D;alpha): F^{-1}(|f|^alpha F(phi)) on Phi.
SBFunction apply_q(const QSymbol& sym, const SBFunction& phi, const RefineOptions& opts = {});
// Inverse on Phi: divide the transform by |f|^alpha cell-wise.
SBFunction solve_q(const QSymbol& sym, const SBFunction& v, const RefineOptions& opts = {});

// Taibleson operator D_T^alpha: multiplier ||xi||^alpha, constant per norm
// shell.
SBFunction apply_taibleson(double alpha, const SBFunction& phi);
SBFunction solve_taibleson(double alpha, const SBFunction& v);

// Variable-coefficient symbol F(xi,x) = f(xi) + sum c_k(x) xi^k with
// <k,w> <= d-1 and certified radius M0.
struct SQSymbol {
    QSymbol principal;
    LowerTerms lower;
    long M0 = 0;
};

SQSymbol make_sqsymbol(QSymbol principal, LowerTerms lower, const RefineOptions& opts = {});

// One x-region of a piecewise output: the coefficient values c_k(x) shared by
// the region, and the transform result there.
struct SQPiece {
    std::vector<Rat> values;  // parallel to sym.lower
    SBFunction value;
};

struct SQResult {
    std::vector<SQPiece> pieces;
    // Piece whose coefficient values match x.
    const SBFunction& at(const PadicVector& x, const SQSymbol& sym) const;
};

// All coefficient value vectors (c_k(x))_k that occur for some x, each with a
// point realizing it.
std::vector<std::vector<Rat>> reachable_coefficient_values(const LowerTerms& lower,
                                                           const PrimeCtx& ctx, size_t n);

// F(D;alpha;x) on Phi_{M0}: piecewise in x, one fixed polynomial per region.
SQResult apply_sq(const SQSymbol& sym, const SBFunction& phi, const RefineOptions& opts = {});
// Inverse on Phi_{M0}: divides on ||xi|| >= p^{M0+1} region-wise.
SQResult solve_sq(const SQSymbol& sym, const SBFunction& v, const RefineOptions& opts = {});

}  // namespace padic

#endif
