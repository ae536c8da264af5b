#include "padic/sbfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace padic {

namespace {

constexpr double kGridBudget = 4.0e6;

double grid_count(long p, long L, long m, size_t n) {
    return std::pow(static_cast<double>(p), static_cast<double>((L + m) * static_cast<long>(n)));
}

void check_grid(long p, long L, long m, size_t n, const char* who) {
    if (L + m < 0) throw std::invalid_argument(std::string(who) + ": need L + m >= 0");
    if (grid_count(p, L, m, n) > kGridBudget)
        throw std::runtime_error(std::string(who) + ": coset grid exceeds budget");
}

}  // namespace

SBFunction::SBFunction(PrimeCtx ctx, size_t n, long support_exp, long const_exp)
    : ctx_(ctx), n_(n), L_(support_exp), m_(const_exp) {
    if (n_ == 0) throw std::invalid_argument("SBFunction: dimension must be >= 1");
    if (m_ < -L_) throw std::invalid_argument("SBFunction: need const_exp >= -support_exp");
}

void SBFunction::add(const std::vector<Rat>& x, Complex c) {
    if (x.size() != n_) throw std::invalid_argument("SBFunction::add: arity mismatch");
    std::vector<Rat> rep(n_);
    for (size_t i = 0; i < n_; ++i) {
        rep[i] = coset_rep(x[i], m_, ctx_);
        if (ord_p(rep[i], ctx_.p()) < -L_)
            throw std::invalid_argument("SBFunction::add: representative outside support ball");
    }
    Complex& slot = coeffs_[rep];
    slot += c;
    if (std::abs(slot) == 0.0) coeffs_.erase(rep);
}

Complex SBFunction::coeff(const std::vector<Rat>& x) const {
    std::vector<Rat> rep(n_);
    for (size_t i = 0; i < n_; ++i) rep[i] = coset_rep(x[i], m_, ctx_);
    auto it = coeffs_.find(rep);
    return it == coeffs_.end() ? Complex(0.0) : it->second;
}

Complex SBFunction::evaluate(const std::vector<Rat>& x) const { return coeff(x); }

Complex SBFunction::evaluate(const PadicVector& x) const {
    if (!(x.ctx == ctx_)) throw std::invalid_argument("SBFunction::evaluate: prime mismatch");
    return coeff(x.coords);
}

SBFunction SBFunction::refined(long new_L, long new_m) const {
    if (new_L < L_ || new_m < m_)
        throw std::invalid_argument("SBFunction::refined: grid can only grow finer");
    check_grid(ctx_.p(), new_L, new_m, n_, "SBFunction::refined");
    SBFunction out(ctx_, n_, new_L, new_m);
    if (new_m == m_) {
        out.coeffs_ = coeffs_;
        return out;
    }
    const long p = ctx_.p();
    const Rat step = pow_p(p, m_);
    const long span = new_m - m_;
    Int count = pow_int(Int(p), static_cast<unsigned long>(span));
    if (!count.fits_slong_p())
        throw std::runtime_error("SBFunction::refined: refinement too deep");
    const long per_coord = count.get_si();
    for (const auto& [rep, c] : coeffs_) {
        std::vector<long> digit(n_, 0);
        while (true) {
            std::vector<Rat> child = rep;
            for (size_t i = 0; i < n_; ++i) child[i] += Rat(digit[i]) * step;
            out.coeffs_[child] = c;
            size_t i = 0;
            while (i < n_ && ++digit[i] == per_coord) digit[i++] = 0;
            if (i == n_) break;
        }
    }
    return out;
}

void SBFunction::prune(double eps) {
    const double cut = eps * std::max(1.0, sup_coeff());
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        if (std::abs(it->second) <= cut) it = coeffs_.erase(it);
        else ++it;
    }
}

SBFunction& SBFunction::operator+=(const SBFunction& o) {
    if (!(ctx_ == o.ctx_) || n_ != o.n_)
        throw std::invalid_argument("SBFunction: incompatible operands");
    if (o.empty()) return *this;
    const long L = std::max(L_, o.L_), m = std::max(m_, o.m_);
    SBFunction a = refined(L, m), b = o.refined(L, m);
    for (const auto& [rep, c] : b.coeffs_) {
        Complex& slot = a.coeffs_[rep];
        slot += c;
        if (std::abs(slot) == 0.0) a.coeffs_.erase(rep);
    }
    *this = std::move(a);
    return *this;
}

SBFunction& SBFunction::operator*=(Complex c) {
    if (std::abs(c) == 0.0) {
        coeffs_.clear();
        return *this;
    }
    for (auto& [rep, v] : coeffs_) v *= c;
    return *this;
}

double SBFunction::sup_coeff() const {
    double s = 0;
    for (const auto& [rep, c] : coeffs_) s = std::max(s, std::abs(c));
    return s;
}

double SBFunction::l2_norm_sq() const {
    const double vol = std::pow(static_cast<double>(ctx_.p()),
                                -static_cast<double>(m_ * static_cast<long>(n_)));
    double s = 0;
    for (const auto& [rep, c] : coeffs_) s += std::norm(c);
    return s * vol;
}

namespace {

// Radix-p DFT of length N = p^K: X[k] = sum_j x[j] exp(sign 2 pi i j k / N).
std::vector<Complex> dft_pk(const std::vector<Complex>& x, long p, int sign) {
    const size_t N = x.size();
    if (N == 1) return x;
    const size_t M = N / p;
    std::vector<std::vector<Complex>> sub(p);
    for (long r = 0; r < p; ++r) {
        std::vector<Complex> xr(M);
        for (size_t q = 0; q < M; ++q) xr[q] = x[q * p + r];
        sub[r] = dft_pk(xr, p, sign);
    }
    std::vector<Complex> out(N);
    const double base = sign * 2.0 * std::numbers::pi / static_cast<double>(N);
    for (size_t k = 0; k < N; ++k) {
        Complex acc(0.0);
        for (long r = 0; r < p; ++r) {
            // r*k/N < p keeps the twiddle argument small and accurate
            const double angle = base * static_cast<double>(r) * static_cast<double>(k % N);
            acc += std::polar(1.0, angle) * sub[r][k % M];
        }
        out[k] = acc;
    }
    return out;
}

// Shared implementation of both transforms; sign = -1 gives the forward
// transform, +1 the inverse. The coset basis maps to the character basis of
// (Z/p^{L+m})^n, so a dense input goes through a factorized DFT; sparse inputs
// keep the direct character sum.
SBFunction transform(const SBFunction& phi, int sign) {
    const long p = phi.ctx().p();
    const size_t n = phi.n();
    const long L = phi.support_exp(), m = phi.const_exp();
    check_grid(p, L, m, n, "fourier");
    SBFunction out(phi.ctx(), n, m, L);
    if (phi.empty()) return out;

    const double vol = std::pow(static_cast<double>(p), -static_cast<double>(m * static_cast<long>(n)));
    Int per_coord_big = pow_int(Int(p), static_cast<unsigned long>(L + m));
    if (!per_coord_big.fits_slong_p()) throw std::runtime_error("fourier: grid too large");
    const long per_coord = per_coord_big.get_si();
    const long K = L + m;
    // input reps are multiples of p^{-L} in [0, p^m); output reps multiples of
    // p^{-m} in [0, p^L); the pairing is then the plain DFT kernel on Z/p^K
    const Rat in_scale = pow_p(p, -L);
    const Rat out_scale = pow_p(p, -m);

    double grid = 1;
    for (size_t i = 0; i < n; ++i) grid *= static_cast<double>(per_coord);

    const double direct_cost = grid * static_cast<double>(phi.size());
    const double fft_cost = grid * static_cast<double>(n) * static_cast<double>(K) * p;
    if (direct_cost <= 4 * fft_cost || K == 0) {
        std::vector<long> digit(n, 0);
        std::vector<Rat> eta(n);
        while (true) {
            for (size_t i = 0; i < n; ++i) eta[i] = Rat(digit[i]) * out_scale;
            Complex acc(0.0);
            for (const auto& [a, c] : phi.coeffs()) {
                Rat dot(0);
                for (size_t i = 0; i < n; ++i) dot += a[i] * eta[i];
                if (sign < 0) dot = -dot;
                acc += c * character(dot, phi.ctx()).value();
            }
            acc *= vol;
            if (std::abs(acc) != 0.0) out.add(eta, acc);
            size_t i = 0;
            while (i < n && ++digit[i] == per_coord) digit[i++] = 0;
            if (i == n) break;
        }
        out.prune();
        return out;
    }

    // dense path: flatten to an n-dimensional p^K grid and DFT along each axis
    const size_t total = static_cast<size_t>(grid);
    std::vector<Complex> data(total, Complex(0.0));
    for (const auto& [rep, c] : phi.coeffs()) {
        size_t idx = 0, stride = 1;
        for (size_t i = 0; i < n; ++i) {
            const Rat u = rep[i] / in_scale;  // integer in [0, p^K)
            idx += static_cast<size_t>(Int(u.get_num()).get_ui()) * stride;
            stride *= static_cast<size_t>(per_coord);
        }
        data[idx] = c;
    }
    const size_t axis_len = static_cast<size_t>(per_coord);
    std::vector<Complex> line(axis_len);
    size_t stride = 1;
    for (size_t axis = 0; axis < n; ++axis) {
        const size_t block = stride * axis_len;
        for (size_t base = 0; base < total; base += block) {
            for (size_t off = 0; off < stride; ++off) {
                for (size_t j = 0; j < axis_len; ++j) line[j] = data[base + off + j * stride];
                const std::vector<Complex> spec = dft_pk(line, p, sign);
                for (size_t j = 0; j < axis_len; ++j) data[base + off + j * stride] = spec[j];
            }
        }
        stride *= axis_len;
    }
    std::vector<long> digit(n, 0);
    std::vector<Rat> eta(n);
    const double cut = 1e-15;
    double sup = 0;
    for (const Complex& c : data) sup = std::max(sup, std::abs(c));
    size_t idx = 0;
    while (true) {
        const Complex value = data[idx] * vol;
        if (std::abs(data[idx]) > cut * std::max(1.0, sup)) {
            for (size_t i = 0; i < n; ++i) eta[i] = Rat(digit[i]) * out_scale;
            out.add(eta, value);
        }
        size_t i = 0;
        ++idx;
        while (i < n && ++digit[i] == per_coord) digit[i++] = 0;
        if (i == n) break;
    }
    out.prune();
    return out;
}

}  // namespace

SBFunction fourier(const SBFunction& phi) { return transform(phi, -1); }

SBFunction inverse_fourier(const SBFunction& phi) { return transform(phi, +1); }

SBFunction convolve(const SBFunction& a, const SBFunction& b) {
    if (!(a.ctx() == b.ctx()) || a.n() != b.n())
        throw std::invalid_argument("convolve: incompatible operands");
    const long L = std::max(a.support_exp(), b.support_exp());
    const long m = std::max(a.const_exp(), b.const_exp());
    const SBFunction fa = a.refined(L, m), fb = b.refined(L, m);
    const double vol = std::pow(static_cast<double>(a.ctx().p()),
                                -static_cast<double>(m * static_cast<long>(a.n())));
    SBFunction out(a.ctx(), a.n(), L, m);
    std::vector<Rat> sum(a.n());
    for (const auto& [ra, ca] : fa.coeffs()) {
        for (const auto& [rb, cb] : fb.coeffs()) {
            for (size_t i = 0; i < a.n(); ++i) sum[i] = ra[i] + rb[i];
            out.add(sum, ca * cb * vol);
        }
    }
    out.prune();
    return out;
}

SBFunction multiply(const SBFunction& a, const SBFunction& b) {
    if (!(a.ctx() == b.ctx()) || a.n() != b.n())
        throw std::invalid_argument("multiply: incompatible operands");
    const long L = std::max(a.support_exp(), b.support_exp());
    const long m = std::max(a.const_exp(), b.const_exp());
    const SBFunction fa = a.refined(L, m), fb = b.refined(L, m);
    SBFunction out(a.ctx(), a.n(), std::min(a.support_exp(), b.support_exp()), m);
    for (const auto& [rep, ca] : fa.coeffs()) {
        auto it = fb.coeffs().find(rep);
        if (it == fb.coeffs().end()) continue;
        out.add(rep, ca * it->second);
    }
    out.prune();
    return out;
}

bool in_Phi(const SBFunction& phi, double tol) {
    const SBFunction hat = fourier(phi);
    const std::vector<Rat> zero(phi.n(), Rat(0));
    return std::abs(hat.coeff(zero)) <= tol * std::max(1.0, hat.sup_coeff());
}

bool in_Phi_M0(const SBFunction& phi, long M0, double tol) {
    const SBFunction hat = fourier(phi);
    const double cut = tol * std::max(1.0, hat.sup_coeff());
    for (const auto& [rep, c] : hat.coeffs()) {
        long min_ord = val_inf;
        for (const Rat& r : rep) min_ord = std::min(min_ord, ord_p(r, phi.ctx().p()));
        // coset norm is p^{-min_ord} (0 for the zero representative)
        const bool meets_ball = val_is_inf(min_ord) || -min_ord <= M0;
        if (meets_ball && std::abs(c) > cut) return false;
    }
    return true;
}

namespace {

struct Bracket {
    double lo = 0;
    double hi = 0;
    double width() const { return hi - lo; }
};

double weight_of(double xi, double two_beta, NormVariant variant) {
    const double base = variant == NormVariant::max_xi ? std::max(1.0, xi) : xi;
    if (two_beta == 0.0) return 1.0;
    if (base == 0.0) return 0.0;
    return std::pow(base, two_beta);
}

// Integral of the weight over one coset a + (p^m Z_p)^n: coordinates with a
// nonzero representative contribute a pinned p-power to Xi; the others are
// split into valuation shells with a bracketed geometric tail.
Bracket coset_weight_bracket(const std::vector<Rat>& rep, long m, const XiMeta& meta,
                             NormVariant variant, double two_beta, double tol, long p) {
    const size_t n = rep.size();
    double pinned = 0;
    double pinned_meas = 1;
    std::vector<size_t> free_idx;
    for (size_t i = 0; i < n; ++i) {
        if (rep[i] != 0) {
            pinned += std::pow(static_cast<double>(p),
                               -static_cast<double>(ord_p(rep[i], p) * meta.exponent(i)));
            pinned_meas *= std::pow(static_cast<double>(p), -static_cast<double>(m));
        } else {
            free_idx.push_back(i);
        }
    }
    if (two_beta == 0.0) {
        double meas = pinned_meas;
        for (size_t z = 0; z < free_idx.size(); ++z)
            meas *= std::pow(static_cast<double>(p), -static_cast<double>(m));
        return Bracket{meas, meas};
    }
    if (free_idx.empty()) {
        const double w = weight_of(pinned, two_beta, variant);
        return Bracket{pinned_meas * w, pinned_meas * w};
    }

    const long max_extra = free_idx.size() == 1 ? 600 : (free_idx.size() == 2 ? 200 : 60);
    long T = m + 8;
    Bracket result;
    while (true) {
        Bracket acc{0, 0};
        // odometer over per-coordinate states: 0..T-m are shells m..T, last is tail
        const long states = (T - m) + 2;
        std::vector<long> st(free_idx.size(), 0);
        while (true) {
            double meas = pinned_meas;
            double xi_lo = pinned, xi_hi = pinned;
            for (size_t z = 0; z < free_idx.size(); ++z) {
                const size_t i = free_idx[z];
                if (st[z] < states - 1) {
                    const long j = m + st[z];
                    meas *= (1.0 - 1.0 / p) * std::pow(static_cast<double>(p), -static_cast<double>(j));
                    const double term =
                        std::pow(static_cast<double>(p), -static_cast<double>(j * meta.exponent(i)));
                    xi_lo += term;
                    xi_hi += term;
                } else {
                    meas *= std::pow(static_cast<double>(p), -static_cast<double>(T + 1));
                    xi_hi += std::pow(static_cast<double>(p),
                                      -static_cast<double>((T + 1) * meta.exponent(i)));
                }
            }
            if (meas > 0) {
                acc.lo += meas * weight_of(xi_lo, two_beta, variant);
                acc.hi += meas * weight_of(xi_hi, two_beta, variant);
            }
            size_t z = 0;
            while (z < free_idx.size() && ++st[z] == states) st[z++] = 0;
            if (z == free_idx.size()) break;
        }
        if (acc.lo > acc.hi) std::swap(acc.lo, acc.hi);
        result = acc;
        if (acc.width() <= tol || T - m >= max_extra) break;
        T += std::max<long>(8, (T - m));
    }
    return result;
}

}  // namespace

NormReport norm_beta_fourier(const SBFunction& hat, double beta, const XiMeta& meta,
                             NormVariant variant, double tol) {
    if (beta < 0) throw std::invalid_argument("norm_beta: beta must be >= 0");
    if (meta.n() != hat.n()) throw std::invalid_argument("norm_beta: arity mismatch");
    if (variant == NormVariant::xi) {
        const std::vector<Rat> zero(hat.n(), Rat(0));
        if (std::abs(hat.coeff(zero)) > 1e-12 * std::max(1.0, hat.sup_coeff()))
            throw std::domain_error("norm_beta: Xi-weighted norm requires membership in Phi");
    }
    const long p = hat.ctx().p();
    const size_t count = std::max<size_t>(1, hat.size());
    Bracket total{0, 0};
    for (const auto& [rep, c] : hat.coeffs()) {
        const double c2 = std::norm(c);
        if (c2 == 0.0) continue;
        const double tol_i = tol * tol / (4.0 * static_cast<double>(count) * c2);
        const Bracket b =
            coset_weight_bracket(rep, hat.const_exp(), meta, variant, 2.0 * beta, tol_i, p);
        total.lo += c2 * b.lo;
        total.hi += c2 * b.hi;
    }
    NormReport rep;
    rep.beta = beta;
    rep.variant = variant;
    const double slo = std::sqrt(std::max(0.0, total.lo));
    const double shi = std::sqrt(std::max(0.0, total.hi));
    rep.value = 0.5 * (slo + shi);
    rep.tail_bound = 0.5 * (shi - slo);
    return rep;
}

NormReport norm_beta(const SBFunction& phi, double beta, const XiMeta& meta, NormVariant variant,
                     double tol) {
    return norm_beta_fourier(fourier(phi), beta, meta, variant, tol);
}

double metric_rho(const SBFunction& phi, const SBFunction& psi, const std::vector<double>& betas,
                  const XiMeta& meta, double tol) {
    const SBFunction delta = phi - psi;
    const SBFunction hat = fourier(delta);
    double best = 0;
    for (double beta : betas) {
        const NormReport r = norm_beta_fourier(hat, beta, meta, NormVariant::xi, tol);
        const double c_beta = std::pow(2.0, -beta);
        best = std::max(best, c_beta * r.value / (1.0 + r.value));
    }
    return best;
}

IntegralReport I_beta(const XiMeta& meta, const PrimeCtx& ctx, double beta, double tol) {
    const size_t n = meta.n();
    const long p = ctx.p();
    const double maxw = static_cast<double>(meta.max_weight());
    const double threshold = static_cast<double>(n) * maxw / (2.0 * meta.d);
    if (!(beta > threshold))
        throw std::domain_error("I_beta: divergent, need beta > n*max(w)/(2d)");

    const double two_beta = 2.0 * beta;
    // Outer remainder over ||xi|| > p^Lplus: weight <= ||xi||^{-2 beta d/max w}.
    const double q = std::pow(static_cast<double>(p),
                              static_cast<double>(n) - two_beta * meta.d / maxw);
    long Lplus = 4;
    double remainder;
    while (true) {
        remainder = (1.0 - std::pow(static_cast<double>(p), -static_cast<double>(n))) *
                    std::pow(q, static_cast<double>(Lplus + 1)) / (1.0 - q);
        if (remainder <= tol / 2 || Lplus > 4000) break;
        Lplus += 4;
    }

    long T = 8;
    Bracket box;
    while (true) {
        Bracket acc{0, 0};
        const long states = (T + Lplus) + 2;  // shells -Lplus..T plus tail
        std::vector<long> st(n, 0);
        while (true) {
            double meas = 1;
            double xi_lo = 0, xi_hi = 0;
            for (size_t i = 0; i < n; ++i) {
                if (st[i] < states - 1) {
                    const long j = -Lplus + st[i];
                    meas *= (1.0 - 1.0 / p) * std::pow(static_cast<double>(p), -static_cast<double>(j));
                    const double term =
                        std::pow(static_cast<double>(p), -static_cast<double>(j * meta.exponent(i)));
                    xi_lo += term;
                    xi_hi += term;
                } else {
                    meas *= std::pow(static_cast<double>(p), -static_cast<double>(T + 1));
                    xi_hi += std::pow(static_cast<double>(p),
                                      -static_cast<double>((T + 1) * meta.exponent(i)));
                }
            }
            if (meas > 0) {
                // weight decreasing in Xi
                acc.lo += meas * weight_of(xi_hi, -two_beta, NormVariant::max_xi);
                acc.hi += meas * weight_of(xi_lo, -two_beta, NormVariant::max_xi);
            }
            size_t z = 0;
            while (z < n && ++st[z] == states) st[z++] = 0;
            if (z == n) break;
        }
        if (acc.lo > acc.hi) std::swap(acc.lo, acc.hi);
        box = acc;
        if (box.width() <= tol / 2 || T >= 400) break;
        T *= 2;
    }
    IntegralReport out;
    out.value = 0.5 * (box.lo + box.hi + remainder);
    out.tail_bound = 0.5 * (box.width() + remainder);
    return out;
}

}  // namespace padic
