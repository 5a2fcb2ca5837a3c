#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

#include "qes/errors.hpp"

namespace qes {

/// Arbitrary-precision rational in lowest terms with positive denominator.
class Rational {
public:
    Rational() = default;
    Rational(int v) : v_(v) {}
    Rational(long v) : v_(v) {}
    explicit Rational(const mpz_class &v) : v_(v) {}
    explicit Rational(const mpq_class &v) : v_(v) { v_.canonicalize(); }

    Rational(const mpz_class &num, const mpz_class &den) {
        if (den == 0) throw DivisionByZero();
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }

    /// Accepts "p" or "p/q" with an optional leading sign.
    static Rational parse(std::string_view text) {
        auto bad = [&] { return Error("malformed rational literal '" + std::string(text) + "'"); };
        if (text.empty()) throw bad();
        auto slash = text.find('/');
        auto parse_int = [&](std::string_view s, bool allow_sign) {
            if (s.empty()) throw bad();
            std::size_t i = 0;
            if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
            if (i == s.size()) throw bad();
            for (std::size_t k = i; k < s.size(); ++k)
                if (s[k] < '0' || s[k] > '9') throw bad();
            std::string str(s[0] == '+' ? s.substr(1) : s);
            return mpz_class(str, 10);
        };
        if (slash == std::string_view::npos) return Rational(parse_int(text, true));
        return Rational(parse_int(text.substr(0, slash), true), parse_int(text.substr(slash + 1), false));
    }

    const mpq_class &get() const { return v_; }
    mpz_class numerator() const { return v_.get_num(); }
    mpz_class denominator() const { return v_.get_den(); }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    /// Value as a machine integer; throws if not an integer or out of range.
    long to_long() const {
        if (!is_integer() || !v_.get_num().fits_slong_p()) throw Error("not a machine integer: " + to_string());
        return v_.get_num().get_si();
    }

    Rational abs() const { return Rational(mpq_class(::abs(v_))); }
    Rational inverse() const {
        if (is_zero()) throw DivisionByZero();
        return Rational(mpq_class(1) / v_);
    }

    std::string to_string() const { return v_.get_str(10); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational &operator+=(const Rational &o) { v_ += o.v_; return *this; }
    Rational &operator-=(const Rational &o) { v_ -= o.v_; return *this; }
    Rational &operator*=(const Rational &o) { v_ *= o.v_; return *this; }
    Rational &operator/=(const Rational &o) {
        if (o.is_zero()) throw DivisionByZero();
        v_ /= o.v_;
        return *this;
    }
    friend Rational operator+(Rational a, const Rational &b) { return a += b; }
    friend Rational operator-(Rational a, const Rational &b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational &b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational &b) { return a /= b; }

    friend bool operator==(const Rational &a, const Rational &b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b) {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }
    friend std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.to_string(); }

private:
    mpq_class v_;
};

inline std::string to_string(const Rational &r) { return r.to_string(); }

/// Exact square root when r is the square of a rational.
inline bool exact_sqrt(const Rational &r, Rational &out) {
    if (r.sign() < 0) return false;
    mpz_class n = r.numerator(), d = r.denominator();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
    mpz_class sn, sd;
    mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
    out = Rational(sn, sd);
    return true;
}

} // namespace qes
