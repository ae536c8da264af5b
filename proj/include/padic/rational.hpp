#ifndef PADIC_RATIONAL_HPP
#define PADIC_RATIONAL_HPP

#include <gmpxx.h>

#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace padic {

using Int = mpz_class;
using Rat = mpq_class;

// Sentinel for ord(0) = +infinity. Kept well below LONG_MAX so that sums of a
// sentinel with ordinary cell exponents cannot wrap.
inline constexpr long val_inf = std::numeric_limits<long>::max() / 4;

inline bool val_is_inf(long v) { return v >= val_inf; }

inline long val_add(long a, long b) {
    if (val_is_inf(a) || val_is_inf(b)) return val_inf;
    return a + b;
}

// ord_p of a nonzero integer.
long ord_p(const Int& z, long p);

// ord_p of a rational; val_inf for 0.
long ord_p(const Rat& x, long p);

// p^e as an exact rational, e may be negative.
Rat pow_p(long p, long e);

// b^e for integer base, e >= 0.
Int pow_int(const Int& b, unsigned long e);

// Inverse of a modulo m (gcd(a, m) = 1), result in [0, m).
Int mod_inverse(const Int& a, const Int& m);

// Residue of x modulo m for a rational whose denominator is coprime to m,
// result in [0, m).
Int residue_mod(const Rat& x, const Int& m);

// Recover a/b from its residue r mod m with |a|, b <= sqrt(m/2).
// Returns nullopt when no such fraction exists.
std::optional<Rat> rational_reconstruct(const Int& r, const Int& m);

// Parse "num" or "num/den". Throws std::invalid_argument on malformed input.
Rat rat_from_string(const std::string& s);

std::string rat_to_string(const Rat& x);

inline double to_double(const Rat& x) { return x.get_d(); }

struct RatLess {
    bool operator()(const Rat& a, const Rat& b) const { return cmp(a, b) < 0; }
};

struct RatVecLess {
    bool operator()(const std::vector<Rat>& a, const std::vector<Rat>& b) const {
        const size_t n = std::min(a.size(), b.size());
        for (size_t i = 0; i < n; ++i) {
            const int c = cmp(a[i], b[i]);
            if (c != 0) return c < 0;
        }
        return a.size() < b.size();
    }
};

}  // namespace padic

#endif
