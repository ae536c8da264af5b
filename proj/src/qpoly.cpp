#include "padic/qpoly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace padic {

WeightedPoly::WeightedPoly(size_t n, std::vector<long> weights, PrimeCtx ctx)
    : n_(n), weights_(std::move(weights)), ctx_(ctx) {
    if (n_ == 0) throw std::invalid_argument("WeightedPoly: dimension must be >= 1");
    if (weights_.size() != n_)
        throw std::invalid_argument("WeightedPoly: weight vector size mismatch");
    for (long w : weights_)
        if (w < 1) throw std::invalid_argument("WeightedPoly: weights must be positive");
}

void WeightedPoly::add_term(const MultiIndex& k, const Rat& c) {
    if (k.size() != n_) throw std::invalid_argument("WeightedPoly: multi-index size mismatch");
    if (c == 0) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Rat WeightedPoly::coefficient(const MultiIndex& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Rat(0) : it->second;
}

bool WeightedPoly::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == MultiIndex(n_, 0);
}

long WeightedPoly::weighted_degree(const MultiIndex& k) const {
    long d = 0;
    for (size_t i = 0; i < n_; ++i) d += static_cast<long>(k[i]) * weights_[i];
    return d;
}

long WeightedPoly::degree() const {
    long d = -1;
    for (const auto& [k, c] : terms_) d = std::max(d, weighted_degree(k));
    return d;
}

Rat WeightedPoly::evaluate(const std::vector<Rat>& xi) const {
    if (xi.size() != n_) throw std::invalid_argument("WeightedPoly::evaluate: arity mismatch");
    Rat acc(0);
    for (const auto& [k, c] : terms_) {
        Rat term = c;
        for (size_t i = 0; i < n_; ++i) {
            for (unsigned e = 0; e < k[i]; ++e) term *= xi[i];
        }
        acc += term;
    }
    return acc;
}

Rat WeightedPoly::evaluate(const PadicVector& xi) const { return evaluate(xi.coords); }

WeightedPoly WeightedPoly::shift_scale(const PadicVector& center, long level) const {
    if (center.dim() != n_)
        throw std::invalid_argument("WeightedPoly::shift_scale: arity mismatch");
    const Rat s = pow_p(ctx_.p(), level);
    WeightedPoly out(n_, weights_, ctx_);
    // Expand every term through per-coordinate binomials.
    for (const auto& [k, c] : terms_) {
        std::map<MultiIndex, Rat> partial{{MultiIndex(n_, 0), c}};
        for (size_t i = 0; i < n_; ++i) {
            if (k[i] == 0) continue;
            // (c_i + s*eta_i)^{k_i}
            std::vector<Rat> binom(k[i] + 1);
            Int ck(1);
            Rat pw(1);
            for (unsigned j = 0; j <= k[i]; ++j) {
                if (j > 0) {
                    ck = ck * (k[i] - j + 1) / j;
                    pw *= s;
                }
                // coefficient of eta_i^j: C(k_i,j) * s^j * c_i^{k_i-j}
                Rat base(1);
                for (unsigned e = 0; e < k[i] - j; ++e) base *= center.coords[i];
                binom[j] = Rat(ck) * pw * base;
            }
            std::map<MultiIndex, Rat> next;
            for (const auto& [mk, mc] : partial) {
                for (unsigned j = 0; j <= k[i]; ++j) {
                    if (binom[j] == 0) continue;
                    MultiIndex nk = mk;
                    nk[i] += j;
                    Rat& slot = next[nk];
                    slot += mc * binom[j];
                }
            }
            partial = std::move(next);
        }
        for (const auto& [mk, mc] : partial) out.add_term(mk, mc);
    }
    return out;
}

WeightedPoly WeightedPoly::partial_derivative(size_t i) const {
    WeightedPoly out(n_, weights_, ctx_);
    for (const auto& [k, c] : terms_) {
        if (k[i] == 0) continue;
        MultiIndex dk = k;
        dk[i] -= 1;
        out.add_term(dk, c * Rat(k[i]));
    }
    return out;
}

WeightedPoly WeightedPoly::restrict_support(const std::vector<bool>& keep) const {
    WeightedPoly out(n_, weights_, ctx_);
    for (const auto& [k, c] : terms_) {
        bool ok = true;
        for (size_t i = 0; i < n_; ++i)
            if (k[i] > 0 && !keep[i]) { ok = false; break; }
        if (ok) out.add_term(k, c);
    }
    return out;
}

void WeightedPoly::check_compatible(const WeightedPoly& o) const {
    if (n_ != o.n_ || weights_ != o.weights_ || !(ctx_ == o.ctx_))
        throw std::invalid_argument("WeightedPoly: incompatible operands");
}

WeightedPoly WeightedPoly::operator+(const WeightedPoly& o) const {
    check_compatible(o);
    WeightedPoly out = *this;
    for (const auto& [k, c] : o.terms_) out.add_term(k, c);
    return out;
}

WeightedPoly WeightedPoly::operator-(const WeightedPoly& o) const {
    check_compatible(o);
    WeightedPoly out = *this;
    for (const auto& [k, c] : o.terms_) out.add_term(k, Rat(-c));
    return out;
}

WeightedPoly WeightedPoly::operator*(const WeightedPoly& o) const {
    check_compatible(o);
    WeightedPoly out(n_, weights_, ctx_);
    for (const auto& [ka, ca] : terms_) {
        for (const auto& [kb, cb] : o.terms_) {
            MultiIndex k = ka;
            for (size_t i = 0; i < n_; ++i) k[i] += kb[i];
            out.add_term(k, ca * cb);
        }
    }
    return out;
}

WeightedPoly WeightedPoly::scaled(const Rat& c) const {
    WeightedPoly out(n_, weights_, ctx_);
    if (c == 0) return out;
    for (const auto& [k, v] : terms_) out.add_term(k, v * c);
    return out;
}

WeightedPoly WeightedPoly::pow(unsigned e) const {
    WeightedPoly out(n_, weights_, ctx_);
    out.add_term(MultiIndex(n_, 0), Rat(1));
    for (unsigned i = 0; i < e; ++i) out = out * (*this);
    return out;
}

std::string describe(const NonQEWitness& w) {
    std::ostringstream os;
    if (const auto* ih = std::get_if<InhomogeneousWitness>(&w)) {
        os << "inhomogeneous term k = (";
        for (size_t i = 0; i < ih->term.size(); ++i) os << (i ? "," : "") << ih->term[i];
        os << ")";
    } else if (const auto* rt = std::get_if<RationalRootWitness>(&w)) {
        os << "rational root (";
        for (size_t i = 0; i < rt->root.dim(); ++i)
            os << (i ? "," : "") << rat_to_string(rt->root.coords[i]);
        os << ")";
    } else if (const auto* rc = std::get_if<RootClassWitness>(&w)) {
        os << "root class at level " << rc->cls.level() << " around (";
        for (size_t i = 0; i < rc->cls.dim(); ++i)
            os << (i ? "," : "") << rat_to_string(rc->cls.center().coords[i]);
        os << ")";
    } else if (const auto* in = std::get_if<InconclusiveWitness>(&w)) {
        os << "inconclusive at depth " << in->depth;
    }
    return os.str();
}

std::variant<long, MultiIndex> check_quasihomogeneous(const WeightedPoly& f) {
    if (f.is_constant())
        throw std::invalid_argument("check_quasihomogeneous: polynomial is constant");
    long d = -1;
    for (const auto& [k, c] : f.terms()) d = std::max(d, f.weighted_degree(k));
    for (const auto& [k, c] : f.terms()) {
        if (f.weighted_degree(k) != d) return k;
    }
    return d;
}

std::variant<CanonicalForm, NonQEWitness> canonical_form(const WeightedPoly& f, long d) {
    const size_t n = f.n();
    CanonicalForm cf{{}, WeightedPoly(n, f.weights(), f.ctx())};
    for (const auto& [k, c] : f.terms()) {
        size_t support = 0, var = 0;
        for (size_t i = 0; i < n; ++i)
            if (k[i] > 0) { ++support; var = i; }
        if (support == 1 && f.weighted_degree(k) == d &&
            static_cast<long>(k[var]) * f.weights()[var] == d) {
            cf.pure_powers.push_back(PurePower{var, c, static_cast<long>(k[var])});
        } else {
            cf.remainder.add_term(k, c);
        }
    }
    for (size_t i = 0; i < n; ++i) {
        const bool has = std::any_of(cf.pure_powers.begin(), cf.pure_powers.end(),
                                     [i](const PurePower& pp) { return pp.index == i; });
        if (!has || d % f.weights()[i] != 0) {
            // f vanishes along the i-th axis, so the unit vector is a root.
            PadicVector root{std::vector<Rat>(n, Rat(0)), f.ctx()};
            root.coords[i] = 1;
            return NonQEWitness{RationalRootWitness{std::move(root)}};
        }
    }
    std::sort(cf.pure_powers.begin(), cf.pure_powers.end(),
              [](const PurePower& a, const PurePower& b) { return a.index < b.index; });
    return cf;
}

bool Orthant::all_positive() const {
    return std::all_of(signs.begin(), signs.end(), [](int s) { return s == 1; });
}

std::vector<Orthant> all_orthants(size_t n) {
    std::vector<Orthant> out;
    const size_t total = size_t{1} << n;
    for (size_t mask = 0; mask < total; ++mask) {
        Orthant j{std::vector<int>(n, 1)};
        for (size_t i = 0; i < n; ++i)
            if (mask & (size_t{1} << i)) j.signs[i] = -1;
        out.push_back(std::move(j));
    }
    return out;
}

PadicVector dilate(long l, const Orthant& j, const std::vector<long>& weights,
                   const PadicVector& x) {
    if (j.signs.size() != x.dim() || weights.size() != x.dim())
        throw std::invalid_argument("dilate: arity mismatch");
    PadicVector out = x;
    const bool full = j.all_positive();
    for (size_t i = 0; i < x.dim(); ++i) {
        if (full || j.signs[i] == -1)
            out.coords[i] *= pow_p(x.ctx.p(), l * weights[i]);
    }
    return out;
}

std::vector<Ball> fundamental_domain(const Orthant& j, const std::vector<long>& weights,
                                     const PrimeCtx& ctx, long K) {
    const size_t n = weights.size();
    if (j.signs.size() != n) throw std::invalid_argument("fundamental_domain: arity mismatch");
    const bool full = j.all_positive();
    long needed = 0;
    for (size_t i = 0; i < n; ++i)
        if (full || j.signs[i] == -1) needed = std::max(needed, weights[i]);
    if (K < needed)
        throw std::invalid_argument("fundamental_domain: K must be >= max relevant weight");

    const long p = ctx.p();
    const Int pk = pow_int(Int(p), static_cast<unsigned long>(K));
    std::vector<Ball> out;
    std::vector<Int> digits(n, Int(0));
    while (true) {
        bool ok = false;
        for (size_t i = 0; i < n && !ok; ++i) {
            if (!full && j.signs[i] != -1) continue;
            if (digits[i] == 0) continue;  // ord >= K > w_i - 1 inside this class
            if (ord_p(digits[i], p) <= weights[i] - 1) ok = true;
        }
        if (ok) {
            PadicVector c{std::vector<Rat>(n), ctx};
            for (size_t i = 0; i < n; ++i) c.coords[i] = Rat(digits[i]);
            out.emplace_back(std::move(c), K);
        }
        size_t i = 0;
        while (i < n && ++digits[i] == pk) digits[i++] = 0;
        if (i == n) break;
    }
    return out;
}

long zp_normalization_shift(const WeightedPoly& f) {
    long min_ord = 0;
    for (const auto& [k, c] : f.terms())
        min_ord = std::min(min_ord, ord_p(c, f.ctx().p()));
    return -min_ord;
}

bool is_mth_power(const Rat& tau, unsigned long m, const PrimeCtx& ctx) {
    if (tau == 0) throw std::invalid_argument("is_mth_power: tau must be nonzero");
    if (m == 0) throw std::invalid_argument("is_mth_power: m must be positive");
    if (m == 1) return true;
    const long p = ctx.p();
    const long v = ord_p(tau, p);
    if (v % static_cast<long>(m) != 0) return false;
    const Rat unit = tau / pow_p(p, v);
    // x^m = u over Z_p^x reduces, by the Newton criterion, to solvability
    // modulo p^{2 ord_p(m) + 1}.
    const long e = 2 * ord_p(Int(static_cast<long>(m)), p) + 1;
    const Int modulus = pow_int(Int(p), static_cast<unsigned long>(e));
    const Int target = residue_mod(unit, modulus);
    for (Int x(1); x < modulus; ++x) {
        if (mpz_divisible_ui_p(x.get_mpz_t(), static_cast<unsigned long>(p))) continue;
        Int xm;
        mpz_powm_ui(xm.get_mpz_t(), x.get_mpz_t(), m, modulus.get_mpz_t());
        if (xm == target) return true;
    }
    return false;
}

WeightedPoly power_extension(const WeightedPoly& f, unsigned a, const Rat& tau) {
    const long d = f.degree();
    const unsigned long g = std::gcd(static_cast<unsigned long>(a), static_cast<unsigned long>(d));
    if (g <= 1) throw std::invalid_argument("power_extension: gcd(a, d) must exceed 1");
    if (is_mth_power(tau, g, f.ctx()))
        throw std::invalid_argument("power_extension: tau is a gcd(a,d)-th power");
    const size_t n = f.n();
    std::vector<long> w = f.weights();
    w.push_back(static_cast<long>(a));
    WeightedPoly out(n + 1, w, f.ctx());
    const WeightedPoly fa = f.pow(a);
    for (const auto& [k, c] : fa.terms()) {
        MultiIndex ext = k;
        ext.push_back(0);
        out.add_term(ext, c);
    }
    MultiIndex last(n + 1, 0);
    last[n] = static_cast<unsigned>(d);
    out.add_term(last, Rat(-tau));
    return out;
}

}  // namespace padic
