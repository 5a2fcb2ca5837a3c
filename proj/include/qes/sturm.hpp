#pragma once

#include <vector>

#include "qes/polynomial.hpp"

namespace qes {

using RPoly = Polynomial<Rational>;

/// Sturm chain p, p', -rem(p, p'), ... for a nonzero polynomial.
inline std::vector<RPoly> sturm_sequence(const RPoly &p) {
    std::vector<RPoly> seq{p, p.derivative()};
    while (!seq.back().is_zero()) {
        RPoly r = seq[seq.size() - 2] % seq.back();
        if (r.is_zero()) break;
        seq.push_back(-r);
    }
    if (seq.back().is_zero()) seq.pop_back();
    return seq;
}

namespace detail {
inline int count_changes(const std::vector<int> &signs) {
    int changes = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}
inline int sign_at_infinity(const RPoly &q, bool positive) {
    int s = q.leading().sign();
    if (!positive && q.degree().value() % 2 == 1) s = -s;
    return s;
}
} // namespace detail

inline int sign_variations(const std::vector<RPoly> &seq, const Rational &x) {
    std::vector<int> s;
    for (const auto &q : seq) s.push_back(q.evaluate(x).sign());
    return detail::count_changes(s);
}

inline int sign_variations_at_infinity(const std::vector<RPoly> &seq, bool positive) {
    std::vector<int> s;
    for (const auto &q : seq) s.push_back(detail::sign_at_infinity(q, positive));
    return detail::count_changes(s);
}

/// Number of distinct real roots.
inline int count_real_roots(const RPoly &p) {
    if (p.degree() <= Degree(0)) return 0;
    auto seq = sturm_sequence(p);
    return sign_variations_at_infinity(seq, false) - sign_variations_at_infinity(seq, true);
}

/// Number of distinct real roots in the half-open interval (lo, hi].
inline int count_real_roots(const RPoly &p, const Rational &lo, const Rational &hi) {
    if (p.degree() <= Degree(0)) return 0;
    auto seq = sturm_sequence(p);
    return sign_variations(seq, lo) - sign_variations(seq, hi);
}

/// Distinct real roots in (0, +inf) and (-inf, 0).
inline int count_positive_roots(const RPoly &p) {
    if (p.degree() <= Degree(0)) return 0;
    auto seq = sturm_sequence(p);
    return sign_variations(seq, Rational(0)) - sign_variations_at_infinity(seq, true);
}

inline int count_negative_roots(const RPoly &p) {
    if (p.degree() <= Degree(0)) return 0;
    auto seq = sturm_sequence(p);
    int zero_root = p.evaluate(Rational(0)).is_zero() ? 1 : 0;
    return sign_variations_at_infinity(seq, false) - sign_variations(seq, Rational(0)) - zero_root;
}

inline bool is_squarefree(const RPoly &p) { return gcd(p, p.derivative()).degree() <= Degree(0); }

} // namespace qes
