#ifndef PADIC_TEST_UTIL_HPP
#define PADIC_TEST_UTIL_HPP

#include <complex>
#include <random>

#include "padic/core.hpp"

namespace padic::testutil {

// Deterministic generator for exact rationals with a prescribed valuation
// window: p^v * a/b with a, b coprime to p.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    long uniform(long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(eng_);
    }

    double real(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(eng_);
    }

    Rat unit(long p) {
        // nonzero rational with valuation 0
        long a = uniform(1, 40), b = uniform(1, 40);
        while (a % p == 0) ++a;
        while (b % p == 0) ++b;
        Rat r(a, b);
        r.canonicalize();
        if (uniform(0, 1)) r = -r;
        return r;
    }

    Rat rational(long p, long vmin, long vmax, bool allow_zero = true) {
        if (allow_zero && uniform(0, 9) == 0) return Rat(0);
        return unit(p) * pow_p(p, uniform(vmin, vmax));
    }

    std::vector<Rat> vector(long p, size_t n, long vmin, long vmax, bool allow_zero = true) {
        std::vector<Rat> out(n);
        for (auto& c : out) c = rational(p, vmin, vmax, allow_zero);
        return out;
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

inline bool close(std::complex<double> a, std::complex<double> b, double tol) {
    return std::abs(a - b) <= tol;
}

}  // namespace padic::testutil

#endif
