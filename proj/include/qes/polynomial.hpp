#pragma once

#include <algorithm>
#include <compare>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qes/errors.hpp"
#include "qes/rational.hpp"

namespace qes {

/// Degree of a polynomial. The zero polynomial has degree negative infinity,
/// kept as its own kind so that degree arithmetic stays total.
class Degree {
public:
    enum class Kind { finite, negative_infinity };

    constexpr Degree(int value) : kind_(Kind::finite), value_(value) {}
    static constexpr Degree negative_infinity() { return Degree(Kind::negative_infinity); }

    constexpr Kind kind() const { return kind_; }
    constexpr bool is_finite() const { return kind_ == Kind::finite; }
    int value() const {
        if (!is_finite()) throw Error("degree of the zero polynomial has no finite value");
        return value_;
    }

    friend constexpr Degree operator+(Degree a, Degree b) {
        if (!a.is_finite() || !b.is_finite()) return negative_infinity();
        return Degree(a.value_ + b.value_);
    }
    friend constexpr bool operator==(Degree a, Degree b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
    }
    friend constexpr std::strong_ordering operator<=>(Degree a, Degree b) {
        if (!a.is_finite()) return b.is_finite() ? std::strong_ordering::less : std::strong_ordering::equal;
        if (!b.is_finite()) return std::strong_ordering::greater;
        return a.value_ <=> b.value_;
    }
    std::string to_string() const { return is_finite() ? std::to_string(value_) : "-inf"; }

private:
    constexpr explicit Degree(Kind k) : kind_(k), value_(0) {}
    Kind kind_;
    int value_;
};

/// Printable view of a coefficient: plain rationals are printed with their
/// sign folded into the surrounding sum, anything else is parenthesized.
/// Zero test for any field element exposing is_zero().
template <class F> bool is_zero(const F &v) { return v.is_zero(); }

struct CoefficientText {
    bool is_rational;
    Rational value;
    std::string text;
};

inline CoefficientText coefficient_text(const Rational &r) { return {true, r, r.to_string()}; }

template <class F> struct FieldTraits;

template <> struct FieldTraits<Rational> {
    static constexpr std::string_view variable = "a";
};

/// Dense univariate polynomial over an exact field F; coefficient i multiplies
/// var^i, with no trailing zeros.
template <class F> class Polynomial {
public:
    using coefficient_type = F;

    Polynomial() = default;
    Polynomial(const F &c) {
        if (!qes::is_zero(c)) c_.push_back(c);
    }
    Polynomial(int c) : Polynomial(F(c)) {}
    explicit Polynomial(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Polynomial monomial(const F &c, int k) {
        if (qes::is_zero(c)) return {};
        std::vector<F> v(static_cast<std::size_t>(k) + 1, F(0));
        v.back() = c;
        return Polynomial(std::move(v));
    }
    static Polynomial variable() { return monomial(F(1), 1); }

    Degree degree() const {
        return c_.empty() ? Degree::negative_infinity() : Degree(static_cast<int>(c_.size()) - 1);
    }
    /// Exponent of the lowest nonzero term; 0 for the zero polynomial.
    int valuation() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!qes::is_zero(c_[i])) return static_cast<int>(i);
        return 0;
    }
    bool is_zero() const { return c_.empty(); }
    bool is_constant() const { return c_.size() <= 1; }
    bool is_one() const { return c_.size() == 1 && c_[0] == F(1); }
    bool is_monomial() const {
        return !c_.empty() && static_cast<int>(c_.size()) - 1 == valuation();
    }
    std::size_t size() const { return c_.size(); }
    const std::vector<F> &coefficients() const { return c_; }

    F coefficient(int k) const {
        if (k < 0 || static_cast<std::size_t>(k) >= c_.size()) return F(0);
        return c_[static_cast<std::size_t>(k)];
    }
    F leading() const { return c_.empty() ? F(0) : c_.back(); }
    F constant_term() const { return coefficient(0); }

    Polynomial operator-() const {
        Polynomial r = *this;
        for (auto &c : r.c_) c = -c;
        return r;
    }
    Polynomial &operator+=(const Polynomial &o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Polynomial &operator-=(const Polynomial &o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), F(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial &b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) { return a -= b; }
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<F> r(a.c_.size() + b.c_.size() - 1, F(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (qes::is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
        }
        return Polynomial(std::move(r));
    }
    Polynomial &operator*=(const Polynomial &o) { return *this = *this * o; }
    Polynomial scaled(const F &s) const {
        if (qes::is_zero(s)) return {};
        Polynomial r = *this;
        for (auto &c : r.c_) c *= s;
        return r;
    }

    /// Euclidean division; the divisor's leading coefficient must be invertible.
    std::pair<Polynomial, Polynomial> divmod(const Polynomial &d) const {
        if (d.is_zero()) throw DivisionByZero();
        if (c_.size() < d.c_.size()) return {Polynomial(), *this};
        std::vector<F> rem = c_;
        std::vector<F> quo(c_.size() - d.c_.size() + 1, F(0));
        const F inv = F(1) / d.c_.back();
        const bool unit = d.c_.back() == F(1);
        for (std::size_t k = quo.size(); k-- > 0;) {
            F &top = rem[k + d.c_.size() - 1];
            if (qes::is_zero(top)) continue;
            F q = unit ? top : top * inv;
            for (std::size_t j = 0; j < d.c_.size(); ++j) rem[k + j] -= q * d.c_[j];
            quo[k] = std::move(q);
        }
        rem.resize(d.c_.size() - 1);
        return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
    }
    friend Polynomial operator/(const Polynomial &a, const Polynomial &b) { return a.divmod(b).first; }
    friend Polynomial operator%(const Polynomial &a, const Polynomial &b) { return a.divmod(b).second; }

    Polynomial monic() const {
        if (is_zero() || leading() == F(1)) return *this;
        return scaled(F(1) / leading());
    }

    Polynomial derivative() const {
        if (c_.size() <= 1) return {};
        std::vector<F> r(c_.size() - 1, F(0));
        for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * F(static_cast<int>(i));
        return Polynomial(std::move(r));
    }

    F evaluate(const F &v) const {
        F acc(0);
        for (std::size_t i = c_.size(); i-- > 0;) acc = acc * v + c_[i];
        return acc;
    }

    /// Applies f to every coefficient.
    template <class G, class Fn> Polynomial<G> map(Fn &&f) const {
        std::vector<G> r;
        r.reserve(c_.size());
        for (const auto &c : c_) r.push_back(f(c));
        return Polynomial<G>(std::move(r));
    }

    friend bool operator==(const Polynomial &a, const Polynomial &b) { return a.c_ == b.c_; }

    std::string to_string(std::string_view var = FieldTraits<F>::variable) const {
        if (c_.empty()) return "0";
        std::string out;
        bool first = true;
        for (std::size_t k = c_.size(); k-- > 0;) {
            if (qes::is_zero(c_[k])) continue;
            std::string mono = k == 0 ? "" : k == 1 ? std::string(var) : std::string(var) + "^" + std::to_string(k);
            CoefficientText ct = coefficient_text(c_[k]);
            if (ct.is_rational) {
                bool neg = ct.value.sign() < 0;
                Rational mag = ct.value.abs();
                std::string body = k == 0 ? mag.to_string() : mag.is_one() ? mono : mag.to_string() + "*" + mono;
                out += neg ? "-" : first ? "" : "+";
                out += body;
            } else {
                if (!first) out += "+";
                out += "(" + ct.text + ")";
                if (k > 0) out += "*" + mono;
            }
            first = false;
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && qes::is_zero(c_.back())) c_.pop_back();
    }
    std::vector<F> c_;
};

namespace detail {

/// Handles zero, constant and monomial arguments; returns false otherwise.
template <class F> bool gcd_shortcut(const Polynomial<F> &a, const Polynomial<F> &b, Polynomial<F> &out) {
    if (a.is_zero()) {
        out = b.monic();
        return true;
    }
    if (b.is_zero()) {
        out = a.monic();
        return true;
    }
    if (a.is_constant() || b.is_constant()) {
        out = Polynomial<F>(F(1));
        return true;
    }
    // a power of x against anything: the common power of x
    if (a.is_monomial() || b.is_monomial()) {
        const Polynomial<F> &mono = a.is_monomial() ? a : b;
        const Polynomial<F> &other = a.is_monomial() ? b : a;
        out = Polynomial<F>::monomial(F(1), std::min(mono.degree().value(), other.valuation()));
        return true;
    }
    return false;
}

template <class F> Polynomial<F> euclid_gcd(Polynomial<F> a, Polynomial<F> b) {
    while (!b.is_zero()) {
        Polynomial<F> r = a % b;
        a = std::move(b);
        b = r.monic();
    }
    return a.monic();
}

} // namespace detail

/// Monic greatest common divisor; gcd(0, 0) = 0.
template <class F> Polynomial<F> gcd(const Polynomial<F> &a, const Polynomial<F> &b) {
    Polynomial<F> out;
    if (detail::gcd_shortcut(a, b, out)) return out;
    return detail::euclid_gcd(a, b);
}

/// Resultant via the Euclidean remainder sequence over a field.
template <class F> F resultant(Polynomial<F> a, Polynomial<F> b) {
    if (a.is_zero() || b.is_zero()) return F(0);
    F acc(1);
    while (true) {
        int da = a.degree().value(), db = b.degree().value();
        if (db == 0) {
            F p(1);
            for (int i = 0; i < da; ++i) p *= b.leading();
            return acc * p;
        }
        Polynomial<F> r = a % b;
        if (r.is_zero()) return F(0);
        int dr = r.degree().value();
        if ((da % 2 == 1) && (db % 2 == 1)) acc = -acc;
        F lb(1);
        for (int i = 0; i < da - dr; ++i) lb *= b.leading();
        acc *= lb;
        a = std::move(b);
        b = std::move(r);
    }
}

/// Discriminant, normalized as (-1)^{d(d-1)/2} res(p, p') / lc(p).
template <class F> F discriminant(const Polynomial<F> &p) {
    int d = p.degree().value();
    F res = resultant(p, p.derivative());
    F s = res / p.leading();
    return ((d * (d - 1) / 2) % 2 == 0) ? s : -s;
}

} // namespace qes
