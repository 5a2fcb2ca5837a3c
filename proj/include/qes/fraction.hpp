#pragma once

#include <optional>
#include <string>
#include <utility>

#include "qes/polynomial.hpp"

namespace qes {

/// Element of the field of fractions of F[var]: num/den with gcd(num, den) = 1
/// and den monic. Every constructor normalizes, so equality is structural.
template <class F> class Fraction {
public:
    using poly_type = Polynomial<F>;

    Fraction() : den_(F(1)) {}
    Fraction(int c) : num_(F(c)), den_(F(1)) {}
    Fraction(const F &c) : num_(c), den_(F(1)) {}
    Fraction(poly_type num) : num_(std::move(num)), den_(F(1)) {}
    Fraction(poly_type num, poly_type den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    /// The generator of the field (the symbol itself).
    static Fraction variable() { return Fraction(poly_type::variable()); }

    const poly_type &numerator() const { return num_; }
    const poly_type &denominator() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.is_one(); }
    bool is_constant() const { return den_.is_one() && num_.is_constant(); }
    /// Constant value; only meaningful when is_constant().
    F constant_value() const { return num_.constant_term(); }

    Fraction operator-() const { return Fraction(-num_, den_, raw_tag{}); }

    // Sums and products follow Henrici: only gcds of the small pieces are
    // taken, never the gcd of the full numerator against the full denominator.
    friend Fraction operator+(const Fraction &a, const Fraction &b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.is_polynomial()) return Fraction(a.num_ * b.den_ + b.num_, b.den_, raw_tag{});
        if (b.is_polynomial()) return Fraction(a.num_ + b.num_ * a.den_, a.den_, raw_tag{});
        poly_type d = gcd(a.den_, b.den_);
        if (d.is_one()) return Fraction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_, raw_tag{});
        poly_type da = a.den_ / d, db = b.den_ / d;
        poly_type t = a.num_ * db + b.num_ * da;
        if (t.is_zero()) return Fraction();
        poly_type e = gcd(t, d);
        if (e.is_one()) return Fraction(std::move(t), a.den_ * db, raw_tag{});
        return Fraction(t / e, da * (b.den_ / e), raw_tag{});
    }
    friend Fraction operator-(const Fraction &a, const Fraction &b) { return a + (-b); }
    friend Fraction operator*(const Fraction &a, const Fraction &b) {
        if (a.is_zero() || b.is_zero()) return Fraction();
        if (a.is_polynomial() && b.is_polynomial()) return Fraction(a.num_ * b.num_, poly_type(F(1)), raw_tag{});
        if (a.is_constant()) return Fraction(b.num_.scaled(a.constant_value()), b.den_, raw_tag{});
        if (b.is_constant()) return Fraction(a.num_.scaled(b.constant_value()), a.den_, raw_tag{});
        poly_type g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
        poly_type n1 = g1.is_one() ? a.num_ : a.num_ / g1, d2 = g1.is_one() ? b.den_ : b.den_ / g1;
        poly_type n2 = g2.is_one() ? b.num_ : b.num_ / g2, d1 = g2.is_one() ? a.den_ : a.den_ / g2;
        return Fraction(n1 * n2, d1 * d2, raw_tag{});
    }
    Fraction inverse() const {
        if (is_zero()) throw DivisionByZero();
        return Fraction(den_, num_);
    }
    friend Fraction operator/(const Fraction &a, const Fraction &b) {
        if (b.is_zero()) throw DivisionByZero();
        if (b.is_constant()) return Fraction(a.num_.scaled(F(1) / b.constant_value()), a.den_, raw_tag{});
        return a * b.inverse();
    }
    Fraction &operator+=(const Fraction &o) { return *this = *this + o; }
    Fraction &operator-=(const Fraction &o) { return *this = *this - o; }
    Fraction &operator*=(const Fraction &o) { return *this = *this * o; }
    Fraction &operator/=(const Fraction &o) { return *this = *this / o; }

    friend bool operator==(const Fraction &a, const Fraction &b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    /// Derivative with respect to the field variable.
    Fraction derivative() const {
        if (is_polynomial()) return Fraction(num_.derivative(), poly_type(F(1)), raw_tag{});
        // (n/d)' = (n' (d/g) - n (d'/g)) / (d (d/g)) with g = gcd(d, d'); any
        // remaining common factor divides d.
        poly_type dd = den_.derivative();
        poly_type g = gcd(den_, dd);
        poly_type dg = g.is_one() ? den_ : den_ / g;
        poly_type t = num_.derivative() * dg - num_ * (g.is_one() ? dd : dd / g);
        if (t.is_zero()) return Fraction();
        poly_type e = gcd(t, den_);
        if (e.is_one()) return Fraction(std::move(t), den_ * dg, raw_tag{});
        return Fraction(t / e, (den_ * dg) / e, raw_tag{});
    }

    std::string to_string() const {
        std::string n = num_.to_string();
        if (den_.is_one()) return n;
        auto wrap = [](const poly_type &p, std::string s) {
            bool simple = p.size() <= 1 || p.is_monomial();
            if (simple && (s.empty() || s[0] != '-')) return s;
            if (simple && s[0] == '-' && s.find_first_of("+-", 1) == std::string::npos) return s;
            return "(" + s + ")";
        };
        return wrap(num_, n) + "/" + wrap(den_, den_.to_string());
    }

private:
    struct raw_tag {};
    Fraction(poly_type num, poly_type den, raw_tag) : num_(std::move(num)), den_(std::move(den)) {
        if (num_.is_zero()) den_ = poly_type(F(1));
    }

    void normalize() {
        if (den_.is_zero()) throw DivisionByZero();
        if (num_.is_zero()) {
            den_ = poly_type(F(1));
            return;
        }
        if (!den_.is_constant()) {
            poly_type g = gcd(num_, den_);
            if (!g.is_one()) {
                num_ = num_ / g;
                den_ = den_ / g;
            }
        }
        F lc = den_.leading();
        if (!(lc == F(1))) {
            F inv = F(1) / lc;
            num_ = num_.scaled(inv);
            den_ = den_.scaled(inv);
        }
    }

    poly_type num_;
    poly_type den_;
};

/// Rational function of the formal parameter a over the rationals.
using ParamScalar = Fraction<Rational>;
/// Polynomial in x with ParamScalar coefficients.
using XPoly = Polynomial<ParamScalar>;
/// Rational function of x over the parameter field Q(a).
using RatFunc = Fraction<ParamScalar>;

template <> struct FieldTraits<ParamScalar> {
    static constexpr std::string_view variable = "x";
};

inline CoefficientText coefficient_text(const ParamScalar &v) {
    if (v.is_constant()) return {true, v.constant_value(), v.constant_value().to_string()};
    return {false, Rational(0), v.to_string()};
}

inline std::string to_string(const ParamScalar &v) { return v.to_string(); }
inline std::string to_string(const RatFunc &v) { return v.to_string(); }

/// The formal parameter a.
inline ParamScalar param_a() { return ParamScalar::variable(); }
/// The variable x as a rational function.
inline RatFunc var_x() { return RatFunc::variable(); }

inline ParamScalar scalar(const Rational &r) { return ParamScalar(r); }
inline ParamScalar scalar(long p, long q) { return ParamScalar(Rational(mpz_class(p), mpz_class(q))); }

inline RatFunc ratfunc(const ParamScalar &c) { return RatFunc(c); }
inline RatFunc ratfunc(const XPoly &p) { return RatFunc(p); }

/// x^k for any integer k.
inline RatFunc x_power(int k) {
    if (k >= 0) return RatFunc(XPoly::monomial(ParamScalar(1), k));
    return RatFunc(XPoly(ParamScalar(1)), XPoly::monomial(ParamScalar(1), -k));
}

/// Evaluates the parameter at a0. Throws SingularSpecialization when the
/// reduced denominator vanishes there.
inline Rational specialize(const ParamScalar &v, const Rational &a0) {
    Rational d = v.denominator().evaluate(a0);
    if (d.is_zero()) throw SingularSpecialization("(" + v.denominator().to_string() + ")");
    return v.numerator().evaluate(a0) / d;
}

inline XPoly specialize(const XPoly &p, const Rational &a0) {
    return p.map<ParamScalar>([&](const ParamScalar &c) { return ParamScalar(specialize(c, a0)); });
}

/// Substitutes a0 for the parameter in every coefficient, then renormalizes.
inline RatFunc specialize(const RatFunc &f, const Rational &a0) {
    XPoly den = specialize(f.denominator(), a0);
    if (den.is_zero()) throw SingularSpecialization("(" + f.denominator().to_string() + ")");
    return RatFunc(specialize(f.numerator(), a0), den);
}

namespace detail {

using APoly = Polynomial<Rational>;

inline bool try_specialize(const XPoly &p, const Rational &a0, Polynomial<Rational> &out) {
    std::vector<Rational> c;
    for (const auto &v : p.coefficients()) {
        Rational d = v.denominator().evaluate(a0);
        if (d.is_zero()) return false;
        c.push_back(v.numerator().evaluate(a0) / d);
    }
    out = Polynomial<Rational>(std::move(c));
    return out.degree() == p.degree();
}

/// Certifies gcd(a, b) = 1 from a single good specialization: the resultant
/// is a polynomial in the coefficients, so a nonzero value at a0 forces it
/// to be nonzero identically. Inconclusive answers return false.
inline bool coprime_by_specialization(const XPoly &a, const XPoly &b) {
    static const long samples[][2] = {{7, 11}, {-13, 17}, {29, 5}, {-3, 19}};
    for (const auto &s : samples) {
        Rational a0{mpz_class(s[0]), mpz_class(s[1])};
        Polynomial<Rational> sa, sb;
        if (!try_specialize(a, a0, sa) || !try_specialize(b, a0, sb)) continue;
        return gcd(sa, sb).is_one();
    }
    return false;
}

using ZPoly = std::vector<APoly>; // coefficients in Q[a], index = power of x

inline void trim(ZPoly &p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

inline ZPoly clear_denominators(const XPoly &p) {
    APoly l(Rational(1));
    for (const auto &c : p.coefficients()) {
        const APoly &d = c.denominator();
        if (!d.is_one()) l = l * (d / gcd(l, d));
    }
    ZPoly out;
    for (const auto &c : p.coefficients()) out.push_back(c.numerator() * (l / c.denominator()));
    return out;
}

inline ZPoly primitive_part(ZPoly p) {
    APoly g;
    for (const auto &c : p) {
        g = gcd(g, c);
        if (g.is_one()) break;
    }
    if (!g.is_one() && !g.is_zero())
        for (auto &c : p) c = c / g;
    return p;
}

/// Pseudo-remainder lc(b)^(da-db+1) * a mod b, computed without division.
inline ZPoly pseudo_remainder(ZPoly a, const ZPoly &b) {
    const std::size_t db = b.size() - 1;
    const APoly &lb = b.back();
    while (a.size() > db && !a.empty()) {
        const std::size_t shift = a.size() - 1 - db;
        APoly la = a.back();
        for (auto &c : a) c = c * lb;
        for (std::size_t j = 0; j <= db; ++j) a[shift + j] -= la * b[j];
        trim(a);
    }
    return a;
}

/// gcd over Q(a)[x] by the primitive remainder sequence in Q[a][x], which
/// keeps coefficient growth in check where plain Euclid over Q(a) explodes.
inline XPoly primitive_gcd(const XPoly &x, const XPoly &y) {
    ZPoly a = primitive_part(clear_denominators(x)), b = primitive_part(clear_denominators(y));
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        ZPoly r = pseudo_remainder(a, b);
        a = std::move(b);
        b = r.empty() ? r : primitive_part(std::move(r));
    }
    std::vector<ParamScalar> c;
    for (auto &v : a) c.emplace_back(std::move(v));
    return XPoly(std::move(c)).monic();
}

} // namespace detail

inline bool is_parameter_free(const XPoly &p) {
    for (const auto &c : p.coefficients())
        if (!c.is_constant()) return false;
    return true;
}

namespace detail {

/// gcd(p, q) with q free of the parameter. Monic factors of q over Q(a) have
/// rational coefficients, so it is enough to split p by powers of a.
inline XPoly gcd_with_rational(const XPoly &p, const XPoly &q) {
    ZPoly z = clear_denominators(p);
    std::size_t max_a = 0;
    for (const auto &c : z) max_a = std::max(max_a, c.size());
    Polynomial<Rational> g = q.map<Rational>([](const ParamScalar &c) { return c.constant_value(); });
    for (std::size_t k = 0; k < max_a && !g.is_one(); ++k) {
        std::vector<Rational> slice;
        for (const auto &c : z) slice.push_back(c.coefficient(static_cast<int>(k)));
        g = gcd(g, Polynomial<Rational>(std::move(slice)));
    }
    return g.map<ParamScalar>([](const Rational &c) { return ParamScalar(c); });
}

/// Interpolating polynomial through (xs[i], ys[i]) in Newton form.
inline APoly newton_interpolate(const std::vector<Rational> &xs, const std::vector<Rational> &ys) {
    std::vector<Rational> dd = ys;
    const std::size_t n = xs.size();
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = n - 1; i >= j; --i) dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
    APoly p(dd[n - 1]);
    for (std::size_t i = n - 1; i-- > 0;) p = p * APoly(std::vector<Rational>{-xs[i], Rational(1)}) + APoly(dd[i]);
    return p;
}

/// Rational function through the points with balanced numerator and
/// denominator degrees, or nullopt when none exists.
inline std::optional<ParamScalar> rational_reconstruct(const std::vector<Rational> &xs,
                                                       const std::vector<Rational> &ys) {
    const int n = static_cast<int>(xs.size());
    APoly m(Rational(1));
    for (const auto &x : xs) m = m * APoly(std::vector<Rational>{-x, Rational(1)});
    APoly r0 = m, r1 = newton_interpolate(xs, ys), s0, s1(Rational(1));
    const int k = (n - 1) / 2;
    while (!r1.is_zero() && r1.degree() > Degree(k)) {
        auto [q, r] = r0.divmod(r1);
        APoly s = s0 - q * s1;
        r0 = std::move(r1);
        r1 = std::move(r);
        s0 = std::move(s1);
        s1 = std::move(s);
    }
    if (s1.is_zero() || s1.degree() > Degree(n - 1 - k)) return std::nullopt;
    for (const auto &x : xs)
        if (s1.evaluate(x).is_zero()) return std::nullopt;
    return ParamScalar(r1, s1);
}

/// gcd over Q(a)[x] from gcds at rational points. The coefficients of the
/// monic gcd are rebuilt by rational interpolation, then certified: the
/// candidate must divide both inputs and match the smallest degree seen at
/// a point where neither input drops degree.
inline std::optional<XPoly> interpolated_gcd(const XPoly &a, const XPoly &b) {
    std::vector<Rational> xs;
    std::vector<std::vector<Rational>> ys; // per point, coefficients of the monic gcd
    int best = -1;
    std::optional<XPoly> previous;
    long step = 0;
    for (std::size_t target = 6; target <= 60; target += 6) {
        while (xs.size() < target && step < 400) {
            ++step;
            Rational a0{mpz_class(step % 2 ? 3 * step + 1 : -3 * step - 2), mpz_class(step % 7 + 2)};
            Polynomial<Rational> sa, sb;
            if (!try_specialize(a, a0, sa) || !try_specialize(b, a0, sb)) continue;
            Polynomial<Rational> g = gcd(sa, sb);
            const int deg = g.degree().value();
            if (best >= 0 && deg > best) continue; // unlucky point
            if (best < 0 || deg < best) {
                best = deg;
                xs.clear();
                ys.clear();
            }
            if (deg == 0) return XPoly(ParamScalar(1));
            xs.push_back(a0);
            ys.push_back(g.coefficients());
        }
        if (xs.size() < target) return std::nullopt;
        std::vector<ParamScalar> coeffs;
        for (int j = 0; j < best; ++j) {
            std::vector<Rational> col;
            for (const auto &row : ys) col.push_back(row[static_cast<std::size_t>(j)]);
            auto c = rational_reconstruct(xs, col);
            if (!c) break;
            coeffs.push_back(*c);
        }
        if (static_cast<int>(coeffs.size()) != best) continue;
        coeffs.emplace_back(1);
        XPoly cand(std::move(coeffs));
        if (previous && *previous == cand && (a % cand).is_zero() && (b % cand).is_zero()) return cand;
        previous = std::move(cand);
    }
    return std::nullopt;
}

} // namespace detail

/// gcd in Q(a)[x]; found by argument-dependent lookup from Fraction.
inline XPoly gcd(const XPoly &a, const XPoly &b) {
    XPoly out;
    if (detail::gcd_shortcut(a, b, out)) return out;
    if (is_parameter_free(b)) return detail::gcd_with_rational(a, b);
    if (is_parameter_free(a)) return detail::gcd_with_rational(b, a);
    if (detail::coprime_by_specialization(a, b)) return XPoly(ParamScalar(1));
    if (auto g = detail::interpolated_gcd(a, b)) return *g;
    return detail::primitive_gcd(a, b);
}

/// True when the parameter a does not occur.
inline bool is_parameter_free(const RatFunc &f) {
    for (const auto &c : f.numerator().coefficients())
        if (!c.is_constant()) return false;
    for (const auto &c : f.denominator().coefficients())
        if (!c.is_constant()) return false;
    return true;
}

inline bool exact_sqrt(const ParamScalar &v, ParamScalar &out);

/// Square root of a polynomial over a field when it is a perfect square.
template <class F> bool exact_sqrt(const Polynomial<F> &p, Polynomial<F> &out) {
    if (p.is_zero()) {
        out = {};
        return true;
    }
    int d = p.degree().value();
    if (d % 2 != 0) return false;
    int h = d / 2;
    F lead;
    if (!exact_sqrt(p.leading(), lead)) return false;
    std::vector<F> s(static_cast<std::size_t>(h) + 1, F(0));
    s[static_cast<std::size_t>(h)] = lead;
    const F two_lead = lead + lead;
    for (int k = 1; k <= h; ++k) {
        // coefficient of x^{d-k} in s^2 determines s_{h-k}
        F acc = p.coefficient(d - k);
        for (int i = h - k + 1; i <= h; ++i) {
            int j = d - k - i;
            if (j <= h - k || j > h) continue;
            acc -= s[static_cast<std::size_t>(i)] * s[static_cast<std::size_t>(j)];
        }
        s[static_cast<std::size_t>(h - k)] = acc / two_lead;
    }
    Polynomial<F> root(std::move(s));
    if (!(root * root == p)) return false;
    out = root;
    return true;
}

inline bool exact_sqrt(const ParamScalar &v, ParamScalar &out) {
    // num/den is a square iff num*den is, since gcd(num, den) = 1
    Polynomial<Rational> root;
    if (!exact_sqrt(v.numerator() * v.denominator(), root)) return false;
    out = ParamScalar(root, v.denominator());
    return true;
}

/// Whether f is the square of a rational function.
inline bool is_perfect_square(const RatFunc &f) {
    XPoly root;
    return exact_sqrt(f.numerator() * f.denominator(), root);
}

} // namespace qes
