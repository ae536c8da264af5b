#include "padic/core.hpp"

#include <cmath>
#include <numbers>

namespace padic {

PrimeCtx::PrimeCtx(long p) : p_(p) {
    if (p < 2) throw std::invalid_argument("PrimeCtx: p must be >= 2");
    if (mpz_probab_prime_p(Int(p).get_mpz_t(), 40) == 0)
        throw std::invalid_argument("PrimeCtx: " + std::to_string(p) + " is not prime");
}

double AbsValue::to_double(long p) const {
    if (zero_) return 0.0;
    return std::pow(static_cast<double>(p), -static_cast<double>(e_));
}

bool PadicVector::is_zero() const {
    for (const Rat& c : coords)
        if (c != 0) return false;
    return true;
}

long valuation(const PadicScalar& x) { return ord_p(x.value, x.ctx.p()); }

AbsValue abs_p(const PadicScalar& x) { return AbsValue::from_ord(valuation(x)); }

AbsValue abs_p(const Rat& x, const PrimeCtx& ctx) {
    return AbsValue::from_ord(ord_p(x, ctx.p()));
}

AbsValue vec_norm(const PadicVector& x) {
    if (x.coords.empty()) throw std::invalid_argument("vec_norm: dimension must be >= 1");
    AbsValue best = AbsValue::zero();
    for (const Rat& c : x.coords) {
        AbsValue a = abs_p(c, x.ctx);
        if (best < a) best = a;
    }
    return best;
}

Rat coset_rep(const Rat& x, long level, const PrimeCtx& ctx) {
    const long p = ctx.p();
    const long v = ord_p(x, p);
    if (v >= level) return Rat(0);
    // x = p^v * u/w with u, w coprime to p; the class mod p^level is
    // p^v * (u w^{-1} mod p^{level-v}).
    const Rat unit = x / pow_p(p, v);
    const Int modulus = pow_int(Int(p), static_cast<unsigned long>(level - v));
    const Int t = residue_mod(unit, modulus);
    return Rat(t) * pow_p(p, v);
}

Rat fractional_part(const PadicScalar& x) { return coset_rep(x.value, 0, x.ctx); }

std::complex<double> UnitComplex::value() const {
    const double ph = 2.0 * std::numbers::pi * to_double(phase);
    return {std::cos(ph), std::sin(ph)};
}

UnitComplex character(const PadicScalar& x) { return UnitComplex{fractional_part(x)}; }

UnitComplex character(const Rat& x, const PrimeCtx& ctx) {
    return UnitComplex{coset_rep(x, 0, ctx)};
}

Ball::Ball(PadicVector center, long level) : center_(std::move(center)), level_(level) {
    if (center_.coords.empty()) throw std::invalid_argument("Ball: dimension must be >= 1");
    for (Rat& c : center_.coords) c = coset_rep(c, level_, center_.ctx);
}

bool Ball::contains(const PadicVector& x) const {
    if (x.dim() != dim()) return false;
    for (size_t i = 0; i < dim(); ++i) {
        if (ord_p(Rat(x.coords[i] - center_.coords[i]), ctx().p()) < level_) return false;
    }
    return true;
}

bool Ball::contains(const Ball& other) const {
    return other.level_ >= level_ && contains(other.center_);
}

std::vector<Ball> Ball::subdivide() const {
    const long p = ctx().p();
    const size_t n = dim();
    const Rat step = pow_p(p, level_);
    std::vector<Ball> children;
    std::vector<long> digit(n, 0);
    while (true) {
        PadicVector c{center_.coords, ctx()};
        for (size_t i = 0; i < n; ++i) c.coords[i] += Rat(digit[i]) * step;
        children.emplace_back(std::move(c), level_ + 1);
        size_t i = 0;
        while (i < n && ++digit[i] == p) digit[i++] = 0;
        if (i == n) break;
    }
    return children;
}

Rat Ball::measure() const {
    return pow_p(ctx().p(), -level_ * static_cast<long>(dim()));
}

}  // namespace padic
