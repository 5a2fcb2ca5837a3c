#pragma once

#include <compare>
#include <map>
#include <string>

#include "qes/fraction.hpp"

namespace qes {

/// Exponent offset + a_part * a of a quasi-monomial x^{offset + a_part*a}.
/// Ordered lexicographically by (a_part, offset).
struct QuasiExponent {
    Rational offset;
    Rational a_part;

    QuasiExponent() = default;
    QuasiExponent(Rational off, Rational ap = Rational(0)) : offset(std::move(off)), a_part(std::move(ap)) {}

    ParamScalar value() const { return ParamScalar(offset) + ParamScalar(a_part) * param_a(); }

    friend bool operator==(const QuasiExponent &, const QuasiExponent &) = default;
    friend std::strong_ordering operator<=>(const QuasiExponent &l, const QuasiExponent &r) {
        if (auto c = l.a_part <=> r.a_part; c != 0) return c;
        return l.offset <=> r.offset;
    }

    std::string to_string() const { return value().to_string(); }
};

/// Finite sum of c * x^{e} with e a QuasiExponent and c in Q(a).
class QuasiPoly {
public:
    using map_type = std::map<QuasiExponent, ParamScalar>;

    QuasiPoly() = default;
    static QuasiPoly monomial(const QuasiExponent &e, ParamScalar c = ParamScalar(1)) {
        QuasiPoly p;
        p.add(e, c);
        return p;
    }

    const map_type &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    ParamScalar coefficient(const QuasiExponent &e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? ParamScalar(0) : it->second;
    }

    void add(const QuasiExponent &e, const ParamScalar &c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    QuasiPoly &operator+=(const QuasiPoly &o) {
        for (const auto &[e, c] : o.terms_) add(e, c);
        return *this;
    }
    QuasiPoly &operator-=(const QuasiPoly &o) {
        for (const auto &[e, c] : o.terms_) add(e, -c);
        return *this;
    }
    friend QuasiPoly operator+(QuasiPoly l, const QuasiPoly &r) { return l += r; }
    friend QuasiPoly operator-(QuasiPoly l, const QuasiPoly &r) { return l -= r; }
    QuasiPoly scaled(const ParamScalar &s) const {
        QuasiPoly r;
        for (const auto &[e, c] : terms_) r.add(e, c * s);
        return r;
    }

    friend bool operator==(const QuasiPoly &, const QuasiPoly &) = default;

    /// Sets a = a0: exponents fold to pure offsets and coefficients are evaluated.
    QuasiPoly specialized(const Rational &a0) const {
        QuasiPoly r;
        for (const auto &[e, c] : terms_)
            r.add(QuasiExponent(e.offset + e.a_part * a0), ParamScalar(specialize(c, a0)));
        return r;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto &[e, c] : terms_) {
            if (!out.empty()) out += "+";
            out += "(" + c.to_string() + ")*x^(" + e.to_string() + ")";
        }
        return out;
    }

private:
    map_type terms_;
};

/// Falling factorial e(e-1)...(e-j+1).
inline ParamScalar falling_factorial(const ParamScalar &e, int j) {
    ParamScalar r(1);
    for (int i = 0; i < j; ++i) r *= e - ParamScalar(i);
    return r;
}

} // namespace qes
