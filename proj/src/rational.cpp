#include "padic/rational.hpp"

namespace padic {

long ord_p(const Int& z, long p) {
    if (z == 0) return val_inf;
    Int reduced;
    const mp_bitcnt_t k = mpz_remove(reduced.get_mpz_t(), z.get_mpz_t(), Int(p).get_mpz_t());
    return static_cast<long>(k);
}

long ord_p(const Rat& x, long p) {
    if (x == 0) return val_inf;
    return ord_p(Int(x.get_num()), p) - ord_p(Int(x.get_den()), p);
}

Rat pow_p(long p, long e) {
    Int num = 1, den = 1;
    if (e >= 0) {
        mpz_ui_pow_ui(num.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    } else {
        mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(-e));
    }
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Int pow_int(const Int& b, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

Int mod_inverse(const Int& a, const Int& m) {
    Int inv;
    if (mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error("mod_inverse: argument not invertible");
    if (inv < 0) inv += m;
    return inv;
}

Int residue_mod(const Rat& x, const Int& m) {
    Int num(x.get_num()), den(x.get_den());
    Int r = num % m;
    if (r < 0) r += m;
    if (den != 1) r = (r * mod_inverse(den % m, m)) % m;
    return r;
}

std::optional<Rat> rational_reconstruct(const Int& r, const Int& m) {
    // Half-extended Euclid; stop once the remainder drops below sqrt(m/2).
    Int bound_sq = m / 2;
    Int r0 = m, r1 = r % m;
    if (r1 < 0) r1 += m;
    Int s0 = 0, s1 = 1;
    while (r1 * r1 > bound_sq) {
        if (r1 == 0) return std::nullopt;
        Int q = r0 / r1;
        Int r2 = r0 - q * r1;
        Int s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (s1 == 0 || s1 * s1 > bound_sq) return std::nullopt;
    Int num = r1, den = s1;
    if (den < 0) { den = -den; num = -num; }
    Rat cand(num, den);
    cand.canonicalize();
    // Validity: num - den*r must vanish mod m and the denominator must be a unit.
    Int check = (Int(cand.get_num()) - Int(cand.get_den()) * r) % m;
    if (check != 0) return std::nullopt;
    Int g;
    mpz_gcd(g.get_mpz_t(), Int(cand.get_den()).get_mpz_t(), m.get_mpz_t());
    if (g != 1) return std::nullopt;
    return cand;
}

Rat rat_from_string(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("rat_from_string: empty string");
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("rat_from_string: malformed rational '" + s + "'");
    r.canonicalize();
    if (r.get_den() == 0) throw std::invalid_argument("rat_from_string: zero denominator in '" + s + "'");
    return r;
}

std::string rat_to_string(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

}  // namespace padic
