#ifndef PADIC_SYMBOL_HPP
#define PADIC_SYMBOL_HPP

#include <deque>
#include <optional>

#include "padic/qpoly.hpp"

namespace padic {

// Ball-refinement engine: partitions a region into balls on which |f|_p is
// provably constant, and derives the certified two-sided comparison constants
// against Xi(xi) = sum_i |xi_i|^{d/w_i}.

struct XiMeta {
    long d = 0;
    std::vector<long> weights;

    XiMeta() = default;
    XiMeta(long degree, std::vector<long> w);
    size_t n() const { return weights.size(); }
    long exponent(size_t i) const { return d / weights[i]; }
    long max_weight() const;
};

// Xi(xi) as an exact rational (a sum of p-powers).
Rat xi_value(const XiMeta& meta, const PadicVector& xi);

// Range of Xi over a ball: lo is attained at the center with the free
// coordinates set to 0, hi at points maximizing every free coordinate.
struct XiRange {
    Rat lo;
    Rat hi;
};
XiRange xi_range(const XiMeta& meta, const Ball& b);

// |f| restricted to the ball: the exponent e with |f| = p^{-e} when the
// coefficient-valuation test certifies constancy, nullopt when the ball must
// be subdivided.
std::optional<long> locally_constant_abs(const WeightedPoly& f, const Ball& b);

// Certified upper bound: |f| <= p^{-result} everywhere on the ball, from
// per-term exponent bounds.
long abs_upper_bound_exp(const WeightedPoly& f, const Ball& b);

struct RefineOptions {
    long depth_cap = 40;          // absolute ball level cap
    size_t cell_budget = 500000;  // total balls processed
    std::optional<long> value_floor_exp;  // tag cells with |f| <= p^{-floor}
};

struct SymbolCell {
    Ball ball;
    long e;  // |f| = p^{-e} on ball
};

struct TaggedCell {
    Ball ball;
    long ub_exp;  // certified |f| <= p^{-ub_exp}
};

struct SymbolTable {
    std::vector<SymbolCell> cells;
    std::vector<TaggedCell> unresolved;
    long max_level = 0;
    std::optional<long> value_floor_exp;

    // Lower-bound exponent: max e over resolved cells (|f| >= p^{-M}).
    long lower_bound_exp() const;
};

// Exact partition of the union of seeds with certified constant |f| per cell.
// Cells below the value floor may be tagged instead of resolved. Throws when
// the budget or depth cap is exceeded, or when f vanishes at a reachable
// rational point of the region.
SymbolTable build_symbol_table(const WeightedPoly& f, const std::vector<Ball>& seeds,
                               const RefineOptions& opts = {});

// Worklist nonvanishing certification: M with |f| >= p^{-M} on the domain, or
// a root/inconclusive witness.
std::variant<long, NonQEWitness> certify_nonvanishing(const WeightedPoly& f,
                                                      const std::vector<Ball>& domain,
                                                      const RefineOptions& opts = {});

// Seed helpers. norm_shell: {||xi|| = p^l}; annulus: {p^lo <= ||xi|| <= p^hi}.
std::vector<Ball> norm_shell(const PrimeCtx& ctx, size_t n, long l);
std::vector<Ball> annulus(const PrimeCtx& ctx, size_t n, long lo, long hi);

struct ExtremalCell {
    Ball cell;
    long e = 0;      // |f| = p^{-e} (for the normalized polynomial)
    Rat xi_bound;    // the Xi value at which the ratio bound is attained
};

struct ConstantsReport {
    Rat A0;  // inf |f|/Xi over Q_p^n \ {0}, exact, for the input polynomial
    Rat A1;  // sup |f|/Xi, exact
    long M = 0;      // |f_norm| >= p^{-M} on the scaling fundamental domain
    long R = 0;      // covering refinement depth beyond M+1
    long M0 = 0;     // semi-quasielliptic radius (0 for a bare quasielliptic f)
    std::optional<long> sub_degree_a;  // max cross-orthant scaling degree
    long norm_shift = 0;
    std::optional<ExtremalCell> lower_witness;  // attains A0
    std::optional<ExtremalCell> upper_witness;  // attains A1
};

// Exact A0, A1 of the two-sided bound A0*Xi <= |f| <= A1*Xi over all of
// Q_p^n \ {0}. Works on the scaling fundamental domain V_n, where both the
// symbol and Xi transform exactly along quasi-homogeneous orbits, so the
// reported constants are attained by the stored extremal cells.
ConstantsReport estimate_constants(const WeightedPoly& f, const QECertificate& cert,
                                   const RefineOptions& opts = {});

// Bounded variable coefficient c(x): a constant tail plus finitely many
// disjoint ball patches.
class CoeffFunction {
public:
    CoeffFunction() : tail_(0) {}
    explicit CoeffFunction(Rat tail) : tail_(std::move(tail)) {}

    void add_patch(Ball region, Rat value);
    Rat value_at(const PadicVector& x) const;
    const std::vector<std::pair<Ball, Rat>>& patches() const { return patches_; }
    const Rat& tail() const { return tail_; }

    AbsValue sup_norm(const PrimeCtx& ctx) const;
    bool is_zero() const;

private:
    Rat tail_;
    std::vector<std::pair<Ball, Rat>> patches_;
};

using LowerTerms = std::vector<std::pair<MultiIndex, CoeffFunction>>;

// Radius exponent M0 such that |F(xi,x)| = |f(xi)| for ||xi|| >= p^{M0},
// uniformly in x. Computed from the certified lower-bound exponents and the
// coefficient sup-norms, then verified cell-by-cell on the boundary shell;
// a verification failure is a hard error. Throws std::domain_error when some
// lower term has weighted degree >= d.
long sq_radius_M0(const WeightedPoly& f, const QECertificate& cert, const LowerTerms& lower,
                  const RefineOptions& opts = {});

bool balls_intersect(const Ball& a, const Ball& b);

}  // namespace padic

#endif
