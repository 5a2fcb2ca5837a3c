#pragma once

#include <algorithm>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "qes/diffop.hpp"
#include "qes/linalg.hpp"

namespace qes {

/// P_n + x^a P_m, with a either the formal parameter or a rational value.
/// Without m the space is the plain polynomial space P_n.
class V1Space {
public:
    V1Space(int n, std::optional<int> m, std::optional<Rational> a0 = std::nullopt)
        : n_(n), m_(m), a0_(std::move(a0)) {
        if (n < 0 || (m && *m < 0)) throw PreconditionViolation("space dimensions must be nonnegative");
    }
    static V1Space polynomial(int n) { return V1Space(n, std::nullopt); }

    int n() const { return n_; }
    const std::optional<int> &m() const { return m_; }
    const std::optional<Rational> &a_value() const { return a0_; }
    bool generic() const { return m_.has_value() && !a0_.has_value(); }
    bool specialized() const { return a0_.has_value(); }

    /// The parameter as an element of Q(a): the symbol, or its value.
    ParamScalar a() const { return a0_ ? ParamScalar(*a0_) : param_a(); }

    /// Whether x^a P_m overlaps P_n, i.e. a is an integer in [-m, n].
    bool collision() const {
        if (!m_ || !a0_ || !a0_->is_integer()) return false;
        long v = a0_->to_long();
        return v >= -*m_ && v <= n_;
    }
    int delta() const { return m_ ? std::abs(*m_ - n_) : 0; }
    int p() const { return m_ ? std::max(*m_, n_) : n_; }

    /// Polynomial part ascending, then the x^a part ascending. For rational a
    /// exponents are folded to plain rationals and duplicates dropped.
    std::vector<QuasiExponent> basis() const {
        std::vector<QuasiExponent> out;
        for (int i = 0; i <= n_; ++i) out.emplace_back(Rational(i));
        if (!m_) return out;
        for (int j = 0; j <= *m_; ++j) {
            QuasiExponent e = a0_ ? QuasiExponent(*a0_ + Rational(j)) : QuasiExponent(Rational(j), Rational(1));
            if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
        }
        return out;
    }

    bool contains(const QuasiExponent &e) const {
        if (!a0_ && e.a_part.is_zero()) return e.offset.is_integer() && e.offset.sign() >= 0 && e.offset <= Rational(n_);
        if (!a0_) {
            return m_ && e.a_part == Rational(1) && e.offset.is_integer() && e.offset.sign() >= 0 &&
                   e.offset <= Rational(*m_);
        }
        if (!e.a_part.is_zero()) return false;
        const Rational &v = e.offset;
        if (v.is_integer() && v.sign() >= 0 && v <= Rational(n_)) return true;
        if (!m_) return false;
        Rational j = v - *a0_;
        return j.is_integer() && j.sign() >= 0 && j <= Rational(*m_);
    }

    std::string to_string() const {
        if (!m_) return "P(" + std::to_string(n_) + ")";
        return "V1(" + std::to_string(n_) + "," + std::to_string(*m_) + "," + (a0_ ? a0_->to_string() : "a") + ")";
    }

    friend bool operator==(const V1Space &, const V1Space &) = default;

private:
    int n_;
    std::optional<int> m_;
    std::optional<Rational> a0_;
};

/// One failure: a basis vector and an output term that leaves the space.
struct Witness {
    std::string basis;
    std::string output;
    ParamScalar coefficient;
};

struct InvarianceReport {
    bool verdict = true;
    std::vector<Witness> witnesses;
};

/// Image of the basis vector x^e. On a specialized space the coefficients
/// and the x^{s*a} prefactor are evaluated at the space's value of a.
inline QuasiPoly act_on(const DiffOp &op, const V1Space &s, const QuasiExponent &e) {
    if (!s.specialized()) return act_quasi(op, QuasiPoly::monomial(e));
    const Rational &a0 = *s.a_value();
    return act_quasi(op.specialized(a0), QuasiPoly::monomial(e)).specialized(a0);
}

inline InvarianceReport check_invariance(const DiffOp &op, const V1Space &s) {
    InvarianceReport rep;
    for (const auto &e : s.basis()) {
        const QuasiPoly img = act_on(op, s, e);
        for (const auto &[out, c] : img.terms()) {
            if (s.contains(out)) continue;
            rep.witnesses.push_back({e.to_string(), out.to_string(), c});
        }
    }
    rep.verdict = rep.witnesses.empty();
    return rep;
}

// Generator catalogue.

struct Triple {
    DiffOp plus, zero, minus;
};

namespace detail {
inline DiffOp mul_x() { return DiffOp::multiplication(var_x()); }
inline DiffOp constant(const ParamScalar &c) { return DiffOp::scalar(c); }
inline DiffOp euler_minus(const ParamScalar &c) { return DiffOp::euler() - DiffOp::scalar(c); }
} // namespace detail

/// j+ = x^2 d - n x, j0 = x d - n/2, j- = d.
inline Triple make_sl2(int n) {
    ParamScalar nn(n);
    return {detail::mul_x() * detail::euler_minus(nn), detail::euler_minus(nn / ParamScalar(2)), DiffOp::d()};
}

/// k_e(a) = x^a j_e x^{-a}.
inline Triple make_k(int n, const ParamScalar &a) {
    Triple j = make_sl2(n);
    return {conjugate_by_power(j.plus, a), conjugate_by_power(j.zero, a), conjugate_by_power(j.minus, a)};
}

/// J+ = x(D-n)(D-(m+a)), J0 = D-(m+n+1)/2, J- = (D+1-a)d.
inline Triple make_bosonic(int n, int m, const ParamScalar &a) {
    DiffOp jp = detail::mul_x() * detail::euler_minus(ParamScalar(n)) * detail::euler_minus(ParamScalar(m) + a);
    DiffOp j0 = detail::euler_minus(ParamScalar(Rational(mpz_class(m + n + 1), mpz_class(2))));
    DiffOp jm = detail::euler_minus(a - ParamScalar(1)) * DiffOp::d();
    return {jp, j0, jm};
}

struct Kernels {
    DiffOp K, Kp;
};

/// K = (D-n)...(D-1)D kills P_n; K' = (D-m-a)...(D-a) kills x^a P_m.
inline Kernels make_kernels(int n, int m, const ParamScalar &a) {
    std::vector<ParamScalar> rk, rkp;
    for (int j = n; j >= 0; --j) rk.emplace_back(j);
    for (int j = m; j >= 0; --j) rkp.push_back(a + ParamScalar(j));
    return {euler_product(rk), euler_product(rkp)};
}

/// q_alpha = x^alpha.
inline DiffOp make_q(int alpha) { return DiffOp::x_power(alpha); }

/// qbar_alpha = prod_{j<alpha} (D-(p+1-Delta)-j) d^{Delta-alpha}.
inline DiffOp make_qbar(int n, int m, int alpha) {
    const int delta = std::abs(m - n), p = std::max(m, n);
    std::vector<ParamScalar> roots;
    for (int j = 0; j < alpha; ++j) roots.emplace_back(p + 1 - delta + j);
    return euler_product(roots) * power(DiffOp::d(), delta - alpha);
}

enum class Orientation { n_ge_m, n_le_m, coincident };

inline std::string to_string(Orientation o) {
    switch (o) {
    case Orientation::n_ge_m: return "n>=m";
    case Orientation::n_le_m: return "n<=m";
    default: return "coincident";
    }
}

struct Mixing {
    DiffOp Q, Qbar;
    Orientation orientation;
};

namespace detail {

/// Q must send every basis vector into P_n and Qbar into x^a P_m.
inline bool mixing_contract(const DiffOp &q, const DiffOp &qbar, const V1Space &s) {
    for (const auto &e : s.basis()) {
        const QuasiPoly down = act_quasi(q, QuasiPoly::monomial(e)), up = act_quasi(qbar, QuasiPoly::monomial(e));
        for (const auto &[out, c] : down.terms())
            if (!out.a_part.is_zero() || !s.contains(out)) return false;
        for (const auto &[out, c] : up.terms())
            if (out.a_part != Rational(1) || !s.contains(out)) return false;
    }
    return true;
}

} // namespace detail

/// Q_alpha = q x^{-a} K and Qbar_alpha = x^a qbar K', with the roles of q and
/// qbar fixed by checking the mapping contract on the generic space.
inline Mixing make_mixing(int n, int m, int alpha) {
    const int delta = std::abs(m - n);
    if (alpha < 0 || alpha > delta) throw PreconditionViolation("alpha must lie in [0, |m-n|]");
    Kernels k = make_kernels(n, m, param_a());
    const DiffOp down = DiffOp::a_power(Rational(-1)), up = DiffOp::a_power(Rational(1));
    const DiffOp q = make_q(alpha), qbar = make_qbar(n, m, alpha);
    V1Space s(n, m);
    Mixing printed{q * down * k.K, up * qbar * k.Kp, Orientation::n_ge_m};
    Mixing swapped{qbar * down * k.K, up * q * k.Kp, Orientation::n_le_m};
    const bool ok_printed = detail::mixing_contract(printed.Q, printed.Qbar, s);
    const bool ok_swapped = detail::mixing_contract(swapped.Q, swapped.Qbar, s);
    if (ok_printed && ok_swapped) {
        if (printed.Q == swapped.Q && printed.Qbar == swapped.Qbar) printed.orientation = Orientation::coincident;
        return printed;
    }
    if (ok_printed) return printed;
    if (ok_swapped) return swapped;
    throw Error("mapping contract violated in both orientations");
}

struct Jumps {
    DiffOp Wp, Wm;
};

/// W+ = x^k prod_{j<k} (D-k-m+j), W- = x^{-k} prod_{j<=n} (D-j) prod_{i=1}^{k-n-1} (D-k-n-i),
/// for a = k a positive integer with n <= k and m - k >= n.
inline Jumps make_jumps(int n, int m, int k) {
    if (k <= 0 || n > k || m - k < n || n < 0)
        throw PreconditionViolation("jump operators need a = k > 0, n <= k and m - k >= n");
    std::vector<ParamScalar> rp, rm;
    for (int j = 0; j < k; ++j) rp.emplace_back(k + m - j);
    for (int j = 0; j <= n; ++j) rm.emplace_back(j);
    for (int i = 1; i <= k - n - 1; ++i) rm.emplace_back(k + n + i);
    return {DiffOp::x_power(k) * euler_product(rp), DiffOp::x_power(-k) * euler_product(rm)};
}

struct JumpBehavior {
    /// k = n: the blocks overlap and the statements below are not about distinct vectors.
    bool skipped = false;
    bool holds = true;
    std::vector<std::string> failures;
};

/// On V = P_n + x^k P_m: W+ sends x^j (j <= n) to a nonzero multiple of
/// x^{k+j} and kills the top k monomials x^{m+1..m+k}; W- kills P_n and sends
/// x^{k+j} (j <= n) to a nonzero multiple of x^j; both preserve V.
inline JumpBehavior jump_behavior(int n, int m, int k) {
    Jumps w = make_jumps(n, m, k);
    JumpBehavior r;
    if (k == n) {
        r.skipped = true;
        return r;
    }
    V1Space s(n, m, Rational(k));
    auto image = [&](const DiffOp &op, int e) { return act_on(op, s, QuasiExponent(Rational(e))); };
    auto fail = [&](std::string msg) {
        r.holds = false;
        r.failures.push_back(std::move(msg));
    };
    auto single = [](const QuasiPoly &p, int e) {
        return p.terms().size() == 1 && p.terms().begin()->first == QuasiExponent(Rational(e));
    };
    for (int j = 0; j <= n; ++j) {
        if (!single(image(w.Wp, j), k + j)) fail("W+ x^" + std::to_string(j));
        if (!image(w.Wm, j).is_zero()) fail("W- x^" + std::to_string(j));
        if (!single(image(w.Wm, k + j), j)) fail("W- x^" + std::to_string(k + j));
    }
    for (int i = 1; i <= k; ++i)
        if (!image(w.Wp, m + i).is_zero()) fail("W+ x^" + std::to_string(m + i));
    if (!check_invariance(w.Wp, s).verdict) fail("W+ leaves V");
    if (!check_invariance(w.Wm, s).verdict) fail("W- leaves V");
    return r;
}

// Bounded-order classification.

struct SearchResult {
    std::vector<DiffOp> basis;
    /// Solution-space dimension found again at rational values of a.
    std::vector<std::pair<Rational, std::size_t>> rechecks;
    bool rechecks_agree = true;
};

namespace detail {

/// Unknown c_{j,d} multiplies x^{j+d} d^j.
inline std::vector<DiffOp> ansatz_terms(int max_order, int deg_lo, int deg_hi) {
    std::vector<DiffOp> t;
    for (int j = 0; j <= max_order; ++j)
        for (int d = deg_lo; d <= deg_hi; ++d) t.push_back(DiffOp::x_power(j + d) * power(DiffOp::d(), j));
    return t;
}

inline std::vector<Vec<ParamScalar>> preserving_nullspace(const V1Space &s, const std::vector<DiffOp> &terms) {
    // Rows: for each basis vector and each foreign output exponent, the
    // coefficient contributed by every unknown must cancel.
    Matrix<ParamScalar> rows;
    for (const auto &e : s.basis()) {
        std::map<QuasiExponent, Vec<ParamScalar>> foreign;
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const QuasiPoly img = act_on(terms[k], s, e);
            for (const auto &[out, c] : img.terms()) {
                if (s.contains(out)) continue;
                auto [it, inserted] = foreign.try_emplace(out, Vec<ParamScalar>(terms.size(), ParamScalar(0)));
                it->second[k] += c;
            }
        }
        for (auto &[out, row] : foreign) rows.push_back(std::move(row));
    }
    return nullspace(rows, terms.size());
}

inline DiffOp combine(const std::vector<DiffOp> &terms, const Vec<ParamScalar> &v) {
    DiffOp r;
    for (std::size_t k = 0; k < terms.size(); ++k)
        if (!v[k].is_zero()) r += terms[k].scaled(RatFunc(v[k]));
    return r;
}

/// Rationals avoiding the integers in [-bound, bound].
inline std::vector<Rational> nonresonant_points(int bound, unsigned seed, std::size_t count) {
    std::mt19937 rng(seed);
    std::vector<Rational> out;
    while (out.size() < count) {
        int den = std::uniform_int_distribution<int>(2, 9)(rng);
        int num = std::uniform_int_distribution<int>(-4 * den * (bound + 1), 4 * den * (bound + 1))(rng);
        Rational r{mpz_class(num), mpz_class(den)};
        if (r.is_integer() && std::abs(r.to_long()) <= bound) continue;
        if (std::find(out.begin(), out.end(), r) != out.end()) continue;
        out.push_back(r);
    }
    return out;
}

} // namespace detail

/// Basis of all operators sum c_{j,d} x^{j+d} d^j (j <= max_order,
/// deg_lo <= d <= deg_hi) preserving s. At generic a the elimination runs over
/// Q(a) and is repeated at two nonresonant rational values of a.
inline SearchResult search_preserving(const V1Space &s, int max_order, int deg_lo, int deg_hi, unsigned seed = 2024) {
    if (max_order < 0 || deg_lo > deg_hi) throw PreconditionViolation("empty search window");
    const auto terms = detail::ansatz_terms(max_order, deg_lo, deg_hi);
    SearchResult res;
    for (const auto &v : detail::preserving_nullspace(s, terms)) res.basis.push_back(detail::combine(terms, v));
    for (const auto &op : res.basis)
        if (!check_invariance(op, s).verdict) throw Error("search returned a non-preserving operator: " + op.to_string());
    if (s.generic()) {
        const int bound = s.n() + *s.m() + 2;
        for (const auto &a0 : detail::nonresonant_points(bound, seed, 2)) {
            V1Space spec(s.n(), s.m(), a0);
            std::size_t dim = detail::preserving_nullspace(spec, terms).size();
            res.rechecks.emplace_back(a0, dim);
            if (dim != res.basis.size()) res.rechecks_agree = false;
        }
    }
    return res;
}

/// Coordinates of an operator with Laurent coefficients on the monomials
/// x^i d^j, keyed by (j, i).
inline std::map<std::pair<int, int>, ParamScalar> laurent_coordinates(const DiffOp &op) {
    std::map<std::pair<int, int>, ParamScalar> out;
    for (const auto &[j, c] : op.terms()) {
        if (!c.denominator().is_monomial()) throw NonLaurentCoefficient(c.to_string());
        const int k = c.denominator().degree().value();
        const auto &num = c.numerator().coefficients();
        for (std::size_t i = 0; i < num.size(); ++i)
            if (!num[i].is_zero()) out.emplace(std::make_pair(j, static_cast<int>(i) - k), num[i]);
    }
    return out;
}

/// Coefficients expressing op in the span of ops, if it lies there.
inline std::optional<Vec<ParamScalar>> span_coordinates(const DiffOp &op, const std::vector<DiffOp> &ops) {
    std::vector<std::map<std::pair<int, int>, ParamScalar>> cols;
    std::set<std::pair<int, int>> keys;
    for (const auto &g : ops) {
        cols.push_back(laurent_coordinates(g));
        for (const auto &[k, v] : cols.back()) keys.insert(k);
    }
    auto target = laurent_coordinates(op);
    for (const auto &[k, v] : target) keys.insert(k);
    Matrix<ParamScalar> m;
    Vec<ParamScalar> rhs;
    for (const auto &k : keys) {
        Vec<ParamScalar> row;
        for (const auto &c : cols) {
            auto it = c.find(k);
            row.push_back(it == c.end() ? ParamScalar(0) : it->second);
        }
        m.push_back(std::move(row));
        auto it = target.find(k);
        rhs.push_back(it == target.end() ? ParamScalar(0) : it->second);
    }
    if (ops.empty()) return op.is_zero() ? std::optional<Vec<ParamScalar>>(Vec<ParamScalar>{}) : std::nullopt;
    return solve(m, rhs, ops.size());
}

inline bool in_span(const DiffOp &op, const std::vector<DiffOp> &ops) { return span_coordinates(op, ops).has_value(); }

// Exponent-set equivalences.

/// Exponents of span{x^{b i}, i <= n} + span{x^{b(c + j)}, j <= m}, i.e. the
/// space P_n + x^c P_m after the substitution x -> x^b.
struct SubstitutedSpace {
    int n;
    int m;
    ParamScalar c;
    ParamScalar b;

    std::vector<ParamScalar> exponents() const {
        std::vector<ParamScalar> out;
        for (int i = 0; i <= n; ++i) out.push_back(b * ParamScalar(i));
        for (int j = 0; j <= m; ++j) out.push_back(b * (c + ParamScalar(j)));
        return out;
    }
};

/// span{x^{b i}, i <= s} + span{x^{1 + b j}, j <= N-s-2}: the pattern of the
/// spaces V^(a-1) (b = a-1, s = 0) and V^(a) (b = a).
inline std::vector<ParamScalar> power_pattern(const ParamScalar &b, int N, int s) {
    std::vector<ParamScalar> out;
    for (int i = 0; i <= s; ++i) out.push_back(b * ParamScalar(i));
    for (int j = 0; j <= N - s - 2; ++j) out.push_back(ParamScalar(1) + b * ParamScalar(j));
    return out;
}

/// Set equality of exponent lists with exact comparison in Q(a).
inline bool same_exponent_set(std::vector<ParamScalar> l, std::vector<ParamScalar> r) {
    auto dedup = [](std::vector<ParamScalar> &v) {
        std::vector<ParamScalar> u;
        for (auto &e : v)
            if (std::find(u.begin(), u.end(), e) == u.end()) u.push_back(std::move(e));
        v = std::move(u);
    };
    dedup(l);
    dedup(r);
    if (l.size() != r.size()) return false;
    for (const auto &e : l)
        if (std::find(r.begin(), r.end(), e) == r.end()) return false;
    return true;
}

inline bool exponent_set_equiv(const SubstitutedSpace &lhs, const std::vector<ParamScalar> &rhs) {
    return same_exponent_set(lhs.exponents(), rhs);
}

inline bool exponent_set_equiv(const SubstitutedSpace &lhs, const V1Space &rhs) {
    std::vector<ParamScalar> r;
    for (const auto &e : rhs.basis()) r.push_back(e.value());
    return same_exponent_set(lhs.exponents(), r);
}

} // namespace qes
