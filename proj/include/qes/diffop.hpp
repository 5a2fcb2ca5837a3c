#pragma once

#include <map>
#include <string>
#include <vector>

#include "qes/quasi.hpp"

namespace qes {

/// Linear differential operator x^{s*a} * sum_j c_j(x) d^j in normal order
/// (coefficients left, derivatives right), c_j in Q(a)(x).
///
/// The prefactor x^{s*a} (s rational, a the formal parameter) is what lets
/// x^{-a} K style operators move between the two halves of P_n + x^a P_m.
/// Operators with different s cannot be added; the zero operator carries s = 0
/// and is compatible with every shift.
class DiffOp {
public:
    using term_map = std::map<int, RatFunc>;

    DiffOp() = default;

    static DiffOp identity() { return multiplication(RatFunc(1)); }
    static DiffOp scalar(const ParamScalar &c) { return multiplication(RatFunc(c)); }
    static DiffOp multiplication(const RatFunc &c) {
        DiffOp r;
        if (!c.is_zero()) r.terms_.emplace(0, c);
        return r;
    }
    static DiffOp d() {
        DiffOp r;
        r.terms_.emplace(1, RatFunc(1));
        return r;
    }
    /// D = x d.
    static DiffOp euler() {
        DiffOp r;
        r.terms_.emplace(1, var_x());
        return r;
    }
    static DiffOp x_power(int k) { return multiplication(qes::x_power(k)); }
    /// Multiplication by x^{s*a}.
    static DiffOp a_power(const Rational &s) {
        DiffOp r = identity();
        r.shift_ = s;
        return r;
    }
    static DiffOp from_terms(term_map terms, Rational shift = Rational(0)) {
        DiffOp r;
        for (auto &[j, c] : terms)
            if (!c.is_zero()) r.terms_.emplace(j, std::move(c));
        if (!r.terms_.empty()) r.shift_ = std::move(shift);
        return r;
    }

    const term_map &terms() const { return terms_; }
    const Rational &shift() const { return shift_; }
    bool is_zero() const { return terms_.empty(); }
    Degree order() const { return terms_.empty() ? Degree::negative_infinity() : Degree(terms_.rbegin()->first); }

    RatFunc coefficient(int j) const {
        auto it = terms_.find(j);
        return it == terms_.end() ? RatFunc() : it->second;
    }

    /// Order zero with no x^{s*a} prefactor, i.e. plain multiplication.
    bool is_multiplication() const {
        return is_zero() || (shift_.is_zero() && terms_.size() == 1 && terms_.begin()->first == 0);
    }
    RatFunc as_multiplication() const {
        if (!is_multiplication()) throw Error("not a multiplication operator: " + to_string());
        return coefficient(0);
    }
    /// Multiplication by a constant of Q(a).
    bool is_scalar() const {
        return is_zero() || (is_multiplication() && coefficient(0).is_constant());
    }

    DiffOp operator-() const {
        DiffOp r = *this;
        for (auto &[j, c] : r.terms_) c = -c;
        return r;
    }
    DiffOp &operator+=(const DiffOp &o) {
        if (o.is_zero()) return *this;
        if (is_zero()) return *this = o;
        if (shift_ != o.shift_)
            throw ShiftMismatch("cannot add operators with prefactors x^(" + (ParamScalar(shift_) * param_a()).to_string() +
                                ") and x^(" + (ParamScalar(o.shift_) * param_a()).to_string() + ")");
        for (const auto &[j, c] : o.terms_) {
            auto [it, inserted] = terms_.try_emplace(j, c);
            if (!inserted) {
                it->second += c;
                if (it->second.is_zero()) terms_.erase(it);
            }
        }
        if (terms_.empty()) shift_ = Rational(0);
        return *this;
    }
    DiffOp &operator-=(const DiffOp &o) { return *this += -o; }
    friend DiffOp operator+(DiffOp l, const DiffOp &r) { return l += r; }
    friend DiffOp operator-(DiffOp l, const DiffOp &r) { return l -= r; }

    /// Left multiplication by a function.
    DiffOp scaled(const RatFunc &f) const {
        if (f.is_zero()) return {};
        DiffOp r = *this;
        for (auto &[j, c] : r.terms_) c = f * c;
        return r;
    }

    /// Substitutes a = a0 in every coefficient. The x^{s*a} prefactor is kept
    /// symbolic; the caller binds it when acting on a specialized space.
    DiffOp specialized(const Rational &a0) const {
        DiffOp r;
        r.shift_ = shift_;
        for (const auto &[j, c] : terms_) {
            RatFunc s = specialize(c, a0);
            if (!s.is_zero()) r.terms_.emplace(j, std::move(s));
        }
        if (r.terms_.empty()) r.shift_ = Rational(0);
        return r;
    }

    friend bool operator==(const DiffOp &, const DiffOp &) = default;

    /// Canonical print, derivative order descending: `(x^2)*d^2+((-a+1)/x)*d`.
    std::string to_string() const {
        if (terms_.empty()) return "0";
        std::string body;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!body.empty()) body += " + ";
            body += "(" + it->second.to_string() + ")";
            if (it->first == 1) body += "*d";
            else if (it->first > 1) body += "*d^" + std::to_string(it->first);
        }
        if (shift_.is_zero()) return body;
        std::string prefix = "x^(" + (ParamScalar(shift_) * param_a()).to_string() + ")*";
        return terms_.size() == 1 ? prefix + body : prefix + "(" + body + ")";
    }

private:
    term_map terms_;
    Rational shift_{0};
};

namespace detail {

inline long binomial(int n, int k) {
    long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Product of two prefactor-free operators, normal ordered by
/// d^i c = sum_k C(i,k) c^{(k)} d^{i-k}.
inline DiffOp::term_map compose_terms(const DiffOp::term_map &a, const DiffOp::term_map &b) {
    DiffOp::term_map out;
    if (a.empty() || b.empty()) return out;
    const int max_i = a.rbegin()->first;
    auto accumulate = [&out](int order, RatFunc v) {
        if (v.is_zero()) return;
        auto [it, inserted] = out.try_emplace(order, v);
        if (!inserted) {
            it->second += v;
            if (it->second.is_zero()) out.erase(it);
        }
    };
    for (const auto &[j, bj] : b) {
        std::vector<RatFunc> derivs{bj};
        for (int k = 1; k <= max_i; ++k) {
            if (derivs.back().is_zero()) break;
            derivs.push_back(derivs.back().derivative());
        }
        for (const auto &[i, ai] : a) {
            for (int k = 0; k <= i && k < static_cast<int>(derivs.size()); ++k) {
                if (derivs[static_cast<std::size_t>(k)].is_zero()) continue;
                RatFunc v = ai * derivs[static_cast<std::size_t>(k)];
                long bin = binomial(i, k);
                if (bin != 1) v = RatFunc(ParamScalar(Rational(bin))) * v;
                accumulate(i - k + j, std::move(v));
            }
        }
    }
    return out;
}

} // namespace detail

/// x^e * A * x^{-e}, realized by d -> d - e/x.
inline DiffOp conjugate_by_power(const DiffOp &op, const ParamScalar &e) {
    if (op.is_zero() || e.is_zero()) return op;
    DiffOp::term_map shifted_d{{1, RatFunc(1)}, {0, RatFunc(-e) * x_power(-1)}};
    DiffOp::term_map power{{0, RatFunc(1)}};
    DiffOp::term_map acc;
    int current = 0;
    for (const auto &[j, c] : op.terms()) {
        while (current < j) {
            power = detail::compose_terms(power, shifted_d);
            ++current;
        }
        DiffOp::term_map term = detail::compose_terms({{0, c}}, power);
        for (auto &[k, v] : term) {
            auto [it, inserted] = acc.try_emplace(k, v);
            if (!inserted) {
                it->second += v;
                if (it->second.is_zero()) acc.erase(it);
            }
        }
    }
    return DiffOp::from_terms(std::move(acc), op.shift());
}

/// Normal-ordered product A*B (B applied first).
inline DiffOp compose(const DiffOp &a, const DiffOp &b) {
    if (a.is_zero() || b.is_zero()) return {};
    DiffOp left = a;
    if (!b.shift().is_zero()) left = conjugate_by_power(a, -ParamScalar(b.shift()) * param_a());
    return DiffOp::from_terms(detail::compose_terms(left.terms(), b.terms()), a.shift() + b.shift());
}

inline DiffOp operator*(const DiffOp &a, const DiffOp &b) { return compose(a, b); }

inline DiffOp commutator(const DiffOp &a, const DiffOp &b) { return compose(a, b) - compose(b, a); }
inline DiffOp anticommutator(const DiffOp &a, const DiffOp &b) { return compose(a, b) + compose(b, a); }

inline DiffOp power(const DiffOp &a, int k) {
    if (k < 0) throw PreconditionViolation("negative operator power");
    DiffOp r = DiffOp::identity();
    for (int i = 0; i < k; ++i) r = compose(r, a);
    return r;
}

/// sum_j c_j * phi^{(j)}; the operator must carry no x^{s*a} prefactor.
inline RatFunc apply(const DiffOp &op, const RatFunc &phi) {
    if (!op.shift().is_zero()) throw PreconditionViolation("operator with x^(s*a) prefactor cannot act on rational functions");
    RatFunc out;
    RatFunc deriv = phi;
    int current = 0;
    for (const auto &[j, c] : op.terms()) {
        while (current < j) {
            deriv = deriv.derivative();
            ++current;
        }
        if (deriv.is_zero()) break;
        out += c * deriv;
    }
    return out;
}

inline RatFunc act_poly(const DiffOp &op, const XPoly &p) { return apply(op, RatFunc(p)); }

/// Action on quasi-monomials via d x^e = e x^{e-1}; coefficients must be
/// Laurent polynomials in x.
inline QuasiPoly act_quasi(const DiffOp &op, const QuasiPoly &v) {
    QuasiPoly out;
    for (const auto &[j, c] : op.terms())
        if (!c.denominator().is_monomial()) throw NonLaurentCoefficient(c.to_string());
    for (const auto &[e, coef] : v.terms()) {
        const ParamScalar ev = e.value();
        for (const auto &[j, c] : op.terms()) {
            ParamScalar ff = falling_factorial(ev, j);
            if (ff.is_zero()) continue;
            ParamScalar scale = coef * ff;
            const int k = c.denominator().degree().value();
            const auto &num = c.numerator().coefficients();
            for (std::size_t i = 0; i < num.size(); ++i) {
                if (num[i].is_zero()) continue;
                QuasiExponent out_e(e.offset - Rational(j) + Rational(static_cast<long>(i)) - Rational(k),
                                    e.a_part + op.shift());
                out.add(out_e, scale * num[i]);
            }
        }
    }
    return out;
}

/// Product of (D - c) over the given constants, leftmost factor first.
inline DiffOp euler_product(const std::vector<ParamScalar> &roots) {
    DiffOp r = DiffOp::identity();
    for (const auto &c : roots) r = compose(r, DiffOp::euler() - DiffOp::scalar(c));
    return r;
}

} // namespace qes
