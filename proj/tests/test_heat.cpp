#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "padic/heat.hpp"
#include "test_util.hpp"

using namespace padic;
using testutil::Rng;

namespace {

WeightedPoly circle(long p) {
    WeightedPoly f(2, {1, 1}, PrimeCtx(p));
    f.add_term({2, 0}, Rat(1));
    f.add_term({0, 2}, Rat(1));
    return f;
}

WeightedPoly line(long p) {
    WeightedPoly f(1, {1}, PrimeCtx(p));
    f.add_term({1}, Rat(1));
    return f;
}

SBFunction random_phi(Rng& rng, const PrimeCtx& ctx, size_t n, long L, long m, int count) {
    SBFunction hat(ctx, n, m, L);
    for (int i = 0; i < count; ++i) {
        std::vector<Rat> xi = rng.vector(ctx.p(), n, -m, L - 1, false);
        bool zero = true;
        for (const Rat& c : xi) zero = zero && c == 0;
        if (zero) xi[0] = pow_p(ctx.p(), rng.uniform(-m, L - 1));
        hat.add(xi, Complex(rng.real(-1, 1), rng.real(-1, 1)));
    }
    return inverse_fourier(hat);
}

double max_coeff_diff(const SBFunction& a, const SBFunction& b) {
    const long L = std::max(a.support_exp(), b.support_exp());
    const long m = std::max(a.const_exp(), b.const_exp());
    const SBFunction fa = a.refined(L, m), fb = b.refined(L, m);
    double worst = 0;
    for (const auto& [rep, c] : fa.coeffs()) worst = std::max(worst, std::abs(c - fb.coeff(rep)));
    for (const auto& [rep, c] : fb.coeffs()) worst = std::max(worst, std::abs(c - fa.coeff(rep)));
    return worst;
}

// closed shell series for n=1, f = xi, alpha = 1 at x = 0
double z_series_at_zero(long p, double t) {
    double sum = 0;
    for (long l = 60; l >= -200; --l) {
        const double term = (1.0 - 1.0 / p) * std::pow(static_cast<double>(p), l) *
                            std::exp(-t * std::pow(static_cast<double>(p), l));
        sum += term;
    }
    return sum;
}

// character-sum series for |x| = p^k, n=1, f = xi, alpha = 1
double z_series_at(long p, long k, double t) {
    double sum = 0;
    for (long l = -200; l <= 60; ++l) {
        double shell;
        if (-k >= l) shell = (1.0 - 1.0 / p) * std::pow(static_cast<double>(p), l);
        else if (-k == l - 1) shell = -std::pow(static_cast<double>(p), l - 1);
        else shell = 0.0;
        sum += shell * std::exp(-t * std::pow(static_cast<double>(p), l));
    }
    return sum;
}

}  // namespace

TEST_CASE("truncated states live in Phi and match the symbol pointwise") {
    Rng rng(61);
    const QSymbol sym = make_qsymbol(circle(3), 1.0);
    const TruncatedState st = truncated_state(sym, 2, 1, 1.0);
    CHECK(st.value.n() == 2);
    CHECK(in_Phi(st.value));

    // pointwise oracle: F(state)(xi) = exp(-t |f(xi)|^alpha) on the annulus
    const SBFunction hat = fourier(st.value);
    PrimeCtx p3(3);
    for (int i = 0; i < 200; ++i) {
        std::vector<Rat> xi = rng.vector(3, 2, -2, 1, false);
        const AbsValue norm = vec_norm({xi, p3});
        if (norm.is_zero()) continue;
        const long s = -norm.ord();
        const double expected =
            (s >= 0 && s <= 2)
                ? std::exp(-abs_p(circle(3).evaluate(std::vector<Rat>(xi)), p3).to_double(3))
                : 0.0;
        CHECK(testutil::close(hat.evaluate(xi), expected, 1e-12));
    }

    // t -> 0+: coefficients approach the annulus indicator
    const TruncatedState tiny = truncated_state(sym, 2, 1, 1e-9);
    const SBFunction hat_tiny = fourier(tiny.value);
    for (const auto& [rep, c] : hat_tiny.coeffs()) {
        const AbsValue norm = vec_norm({rep, p3});
        const bool in_annulus = !norm.is_zero() && -norm.ord() >= 0 && -norm.ord() <= 2;
        CHECK(std::abs(c - (in_annulus ? 1.0 : 0.0)) <= 1e-6);
    }

    CHECK_THROWS_AS(truncated_state(sym, 1, 1, 1.0), std::invalid_argument);
}

TEST_CASE("heat kernel at the origin matches the closed shell series") {
    const QSymbol sym = make_qsymbol(line(2), 1.0);
    PadicVector zero{{Rat(0)}, PrimeCtx(2)};
    for (double t : {0.1, 1.0, 10.0}) {
        const KernelValue z = heat_kernel(sym, zero, t, 1e-9);
        const double oracle = z_series_at_zero(2, t);
        CHECK(std::abs(z.value.real() - oracle) <= 1e-8);
        CHECK(std::abs(z.value.imag()) <= 1e-12);
        CHECK(z.tail_bound <= 1e-9);
    }
}

TEST_CASE("heat kernel away from the origin uses exact character sums") {
    const QSymbol sym = make_qsymbol(line(3), 1.0);
    PrimeCtx p3(3);
    for (long k : {-1L, 0L, 1L, 2L}) {
        const PadicVector x{{pow_p(3, -k)}, p3};  // |x| = p^k
        for (double t : {0.5, 2.0}) {
            const KernelValue z = heat_kernel(sym, x, t, 1e-9);
            CHECK(std::abs(z.value.real() - z_series_at(3, k, t)) <= 1e-8);
            CHECK(std::abs(z.value.imag()) <= 1e-10);
        }
    }
}

TEST_CASE("tail bound is honest under refinement") {
    const QSymbol sym = make_qsymbol(line(2), 1.0);
    PadicVector zero{{Rat(0)}, PrimeCtx(2)};
    const KernelValue coarse = heat_kernel(sym, zero, 0.7, 1e-6);
    const KernelValue fine = heat_kernel(sym, zero, 0.7, 1e-10);
    CHECK(std::abs(coarse.value.real() - fine.value.real()) <= coarse.tail_bound + 1e-12);
}

TEST_CASE("|Z(0,t)| decreases towards zero in t") {
    const QSymbol sym = make_qsymbol(line(2), 1.0);
    PadicVector zero{{Rat(0)}, PrimeCtx(2)};
    double prev = std::numeric_limits<double>::infinity();
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
        const double z = heat_kernel(sym, zero, t, 1e-9).value.real();
        CHECK(z < prev);
        prev = z;
    }
    CHECK(prev <= 0.1);
}

TEST_CASE("phi_rt approaches the kernel as r grows") {
    const QSymbol sym = make_qsymbol(line(2), 1.0);
    PadicVector zero{{Rat(0)}, PrimeCtx(2)};
    const double t = 1.0;
    const KernelValue z = heat_kernel(sym, zero, t, 1e-10);
    const KernelValue approx = phi_rt(sym, 8, t, zero, 1e-10);
    // the discarded inner ball has measure 2^{-8}
    CHECK(std::abs(z.value.real() - approx.value.real()) <=
          std::pow(2.0, -8) + z.tail_bound + approx.tail_bound);
}

TEST_CASE("cauchy evolution: exactness at t = 0, single-cell decay, semigroup") {
    Rng rng(62);
    PrimeCtx p3(3);
    const QSymbol sym = make_qsymbol(circle(3), 1.0);

    const SBFunction phi = random_phi(rng, p3, 2, 1, 1, 4);
    CHECK(max_coeff_diff(cauchy_evolve(sym, phi, 0.0), phi) == 0.0);

    // single cell: u = e^{-t v} phi
    SBFunction hat(p3, 2, 0, 1);
    hat.add({Rat(1), Rat(0)}, 1.0);  // |f| = 1 on the cell
    const SBFunction cell = inverse_fourier(hat);
    const double t = 0.8;
    SBFunction expected = cell;
    expected *= Complex(std::exp(-t), 0.0);
    CHECK(max_coeff_diff(cauchy_evolve(sym, cell, t), expected) <= 1e-12);

    // semigroup
    for (int trial = 0; trial < 10; ++trial) {
        const SBFunction f0 = random_phi(rng, p3, 2, 1, 1, 4);
        const SBFunction two_step = cauchy_evolve(sym, cauchy_evolve(sym, f0, 0.5), 0.5);
        const SBFunction one_step = cauchy_evolve(sym, f0, 1.0);
        CHECK(max_coeff_diff(two_step, one_step) <= 1e-10);
    }

    CHECK_THROWS_AS(cauchy_evolve(sym, [&] {
        SBFunction bad(p3, 2, 0, 0);
        bad.add({Rat(0), Rat(0)}, 1.0);
        return bad;
    }(), 1.0), std::domain_error);
}

TEST_CASE("evolution matches convolution with the truncated kernel") {
    Rng rng(63);
    PrimeCtx p3(3);
    const QSymbol sym = make_qsymbol(circle(3), 1.0);
    const double t = 0.4;

    // initial datum with transform inside the annulus 1 <= ||xi|| <= 3
    SBFunction hat(p3, 2, 1, 1);
    hat.add({Rat(1, 3), Rat(0)}, Complex(1.0, -0.5));
    hat.add({Rat(0), Rat(1)}, 0.75);
    const SBFunction phi0 = inverse_fourier(hat);

    const TruncatedState st = truncated_state(sym, 2, 1, t);
    const SBFunction via_conv = convolve(st.value, phi0);
    const SBFunction via_mult = cauchy_evolve(sym, phi0, t);
    CHECK(max_coeff_diff(via_conv, via_mult) <= 1e-10);
}

TEST_CASE("central-difference residual of the heat equation") {
    PrimeCtx p3(3);
    const QSymbol sym = make_qsymbol(circle(3), 1.0);
    SBFunction hat(p3, 2, 1, 1);
    hat.add({Rat(1, 3), Rat(0)}, 1.0);
    hat.add({Rat(0), Rat(1)}, 0.5);
    const SBFunction phi0 = inverse_fourier(hat);

    const double r1 = residual_check(sym, phi0, 1.0, 1e-3);
    CHECK(r1 <= 1e-4);

    // order-2 convergence: halving h divides the residual by about 4
    const double r2 = residual_check(sym, phi0, 1.0, 5e-4);
    const double ratio = r1 / r2;
    CHECK(ratio > 3.2);
    CHECK(ratio < 4.8);

    CHECK_THROWS_AS(residual_check(sym, phi0, 1e-4, 1e-3), std::invalid_argument);
}

TEST_CASE("regularization diagnostic: finite norms, non-increasing in t") {
    Rng rng(64);
    PrimeCtx p3(3);
    const QSymbol sym = make_qsymbol(circle(3), 1.0);
    const SBFunction phi0 = random_phi(rng, p3, 2, 1, 1, 5);
    const std::vector<double> t_grid{0.1, 0.5, 1.0, 2.0};
    const std::vector<double> betas{0, 1, 2, 3};
    const auto rows = regularization_diagnostic(sym, phi0, t_grid, betas);
    REQUIRE(rows.size() == t_grid.size() * betas.size());
    for (size_t bi = 0; bi < betas.size(); ++bi) {
        double prev = std::numeric_limits<double>::infinity();
        for (size_t ti = 0; ti < t_grid.size(); ++ti) {
            const DiagnosticRow& row = rows[ti * betas.size() + bi];
            CHECK(std::isfinite(row.norm));
            CHECK(row.norm <= prev + 1e-10);
            prev = row.norm;
        }
    }

    // single cell: ||u(.,t)||_beta = e^{-t v} ||phi0||_beta
    SBFunction hat(p3, 2, 0, 1);
    hat.add({Rat(1), Rat(0)}, 1.0);
    const SBFunction cell = inverse_fourier(hat);
    const auto rows2 = regularization_diagnostic(sym, cell, {0.0, 1.0}, {1.0});
    REQUIRE(rows2.size() == 2);
    CHECK(rows2[1].norm == doctest::Approx(std::exp(-1.0) * rows2[0].norm).epsilon(1e-10));
}

TEST_CASE("truncated states converge geometrically in the upper cutoff") {
    // t sized so every tested shell stays above double-precision absorption
    // while the Gaussian decay already dominates the Xi^{2 beta} growth
    const QSymbol sym = make_qsymbol(circle(2), 1.0);
    const double t = 0.05;
    std::vector<SBFunction> states;
    for (long l = 2; l <= 5; ++l) states.push_back(truncated_state(sym, l, 1, t).value);
    for (double beta : {0.0, 1.0, 2.0}) {
        std::vector<double> diffs;
        for (size_t i = 0; i + 1 < states.size(); ++i) {
            const SBFunction d = states[i + 1] - states[i];
            diffs.push_back(norm_beta(d, beta, sym.meta).value);
        }
        for (size_t i = 0; i + 1 < diffs.size(); ++i) {
            CHECK(diffs[i + 1] < 0.5 * diffs[i]);
        }
    }
}

TEST_CASE("Taibleson heat variant") {
    Rng rng(65);
    PrimeCtx p3(3);
    const double alpha = 1.0;

    const SBFunction st = taibleson_truncated_state(p3, 2, alpha, 2, 1, 0.5);
    CHECK(in_Phi(st));
    const XiMeta meta(2, {1, 1});
    for (double beta : {0.0, 1.0, 2.0}) {
        const NormReport r = norm_beta(st, beta, meta);
        CHECK(std::isfinite(r.value));
    }

    // pointwise: F(state) = exp(-t ||xi||^alpha) on the annulus
    const SBFunction hat = fourier(st);
    for (int i = 0; i < 100; ++i) {
        std::vector<Rat> xi = rng.vector(3, 2, -2, 1, false);
        const AbsValue norm = vec_norm({xi, p3});
        if (norm.is_zero()) continue;
        const long s = -norm.ord();
        const double expected = (s >= 0 && s <= 2)
                                    ? std::exp(-0.5 * std::pow(3.0, alpha * s))
                                    : 0.0;
        CHECK(testutil::close(hat.evaluate(xi), expected, 1e-12));
    }

    // evolution semigroup for the norm multiplier
    const SBFunction phi0 = random_phi(rng, p3, 2, 1, 1, 4);
    const SBFunction two = taibleson_evolve(alpha, taibleson_evolve(alpha, phi0, 0.3), 0.7);
    const SBFunction one = taibleson_evolve(alpha, phi0, 1.0);
    CHECK(max_coeff_diff(two, one) <= 1e-10);
}
