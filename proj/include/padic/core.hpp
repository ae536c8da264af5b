#ifndef PADIC_CORE_HPP
#define PADIC_CORE_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "padic/rational.hpp"

namespace padic {

// Everything in this library works over exact rationals viewed inside Q_p.
// Absolute values are carried as exact exponents; the additive character is
// the single place where a floating-point value is produced.

class PrimeCtx {
public:
    explicit PrimeCtx(long p);
    long p() const { return p_; }
    friend bool operator==(const PrimeCtx& a, const PrimeCtx& b) { return a.p_ == b.p_; }
    friend bool operator!=(const PrimeCtx& a, const PrimeCtx& b) { return a.p_ != b.p_; }

private:
    long p_;
};

// |x|_p stored as the exponent e with |x|_p = p^{-e}; zero is flagged.
class AbsValue {
public:
    static AbsValue zero() { return AbsValue(true, 0); }
    static AbsValue from_ord(long ord) {
        return val_is_inf(ord) ? zero() : AbsValue(false, ord);
    }

    bool is_zero() const { return zero_; }
    // ord(x); val_inf when zero.
    long ord() const { return zero_ ? val_inf : e_; }

    Rat to_rational(long p) const { return zero_ ? Rat(0) : pow_p(p, -e_); }
    double to_double(long p) const;

    friend bool operator==(const AbsValue& a, const AbsValue& b) {
        return a.zero_ == b.zero_ && (a.zero_ || a.e_ == b.e_);
    }
    // |0| < p^{-e}; among nonzero values larger ord means smaller absolute value.
    friend bool operator<(const AbsValue& a, const AbsValue& b) {
        if (a.zero_) return !b.zero_;
        if (b.zero_) return false;
        return a.e_ > b.e_;
    }
    friend bool operator<=(const AbsValue& a, const AbsValue& b) { return a == b || a < b; }

    friend AbsValue operator*(const AbsValue& a, const AbsValue& b) {
        if (a.zero_ || b.zero_) return zero();
        return AbsValue(false, a.e_ + b.e_);
    }

private:
    AbsValue(bool z, long e) : zero_(z), e_(e) {}
    bool zero_;
    long e_;
};

struct PadicScalar {
    Rat value;
    PrimeCtx ctx;
};

struct PadicVector {
    std::vector<Rat> coords;
    PrimeCtx ctx;

    size_t dim() const { return coords.size(); }
    bool is_zero() const;
    friend bool operator==(const PadicVector& a, const PadicVector& b) {
        return a.ctx == b.ctx && a.coords == b.coords;
    }
};

long valuation(const PadicScalar& x);
AbsValue abs_p(const PadicScalar& x);
AbsValue abs_p(const Rat& x, const PrimeCtx& ctx);

// max_i |x_i|_p
AbsValue vec_norm(const PadicVector& x);

// Canonical representative of x modulo p^level Z_p: the unique r in [0, p^level)
// with p-power denominator and x - r in p^level Z_p.
Rat coset_rep(const Rat& x, long level, const PrimeCtx& ctx);

// coset_rep at level 0; lands in [0,1).
Rat fractional_part(const PadicScalar& x);

// exp(2*pi*i*fractional_part(x)). The rational phase is exact; only the complex
// value rounds.
struct UnitComplex {
    Rat phase;  // in [0,1)
    std::complex<double> value() const;
};

UnitComplex character(const PadicScalar& x);
UnitComplex character(const Rat& x, const PrimeCtx& ctx);

// center + (p^level Z_p)^n. Centers are kept in canonical coset form, so equal
// balls compare equal structurally. Two balls at the same level are equal or
// disjoint.
class Ball {
public:
    Ball(PadicVector center, long level);

    const PadicVector& center() const { return center_; }
    long level() const { return level_; }
    size_t dim() const { return center_.dim(); }
    const PrimeCtx& ctx() const { return center_.ctx; }

    bool contains(const PadicVector& x) const;
    bool contains(const Ball& other) const;  // other subset-of this
    std::vector<Ball> subdivide() const;     // the p^n children at level+1
    Rat measure() const;                     // p^{-level * n}

    friend bool operator==(const Ball& a, const Ball& b) {
        return a.level_ == b.level_ && a.center_ == b.center_;
    }

private:
    PadicVector center_;
    long level_;
};

}  // namespace padic

#endif
