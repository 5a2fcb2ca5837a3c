#include <gtest/gtest.h>

#include "qes/diffop.hpp"
#include "test_support.hpp"

using namespace qes;

namespace {

DiffOp X() { return DiffOp::multiplication(var_x()); }
DiffOp Dd() { return DiffOp::d(); }
DiffOp E() { return DiffOp::euler(); }
DiffOp C(long p, long q = 1) { return DiffOp::scalar(scalar(p, q)); }
DiffOp A() { return DiffOp::scalar(param_a()); }

QuasiExponent qe(long off, long ap = 0) { return QuasiExponent(Rational(off), Rational(ap)); }
QuasiPoly mono(long off, long ap = 0) { return QuasiPoly::monomial(qe(off, ap)); }

// Acting on x^s through the Euler eigenvalue: D^k x^s = s^k x^s.
ParamScalar eigen_on(const DiffOp &op, const QuasiExponent &e) {
    return act_quasi(op, QuasiPoly::monomial(e)).coefficient(e);
}

} // namespace

TEST(Compose, WeylExamples) {
    EXPECT_EQ(compose(Dd(), X()), X() * Dd() + DiffOp::identity());
    EXPECT_EQ(commutator(Dd(), X()), DiffOp::identity());
    EXPECT_EQ(compose(DiffOp::x_power(2), Dd()).to_string(), "(x^2)*d");
}

TEST(Compose, EulerSquared) {
    DiffOp dd = compose(E(), E());
    EXPECT_EQ(dd, DiffOp::x_power(2) * power(Dd(), 2) + E());
    EXPECT_EQ(dd.to_string(), "(x^2)*d^2 + (x)*d");
    // s^2 = s(s-1) + s on x^s
    QuasiExponent s = qe(3, 1);
    ParamScalar v = s.value();
    EXPECT_EQ(eigen_on(dd, s), v * v);
}

TEST(Commutator, EulerWithPower) {
    EXPECT_EQ(commutator(E(), DiffOp::x_power(3)), DiffOp::multiplication(RatFunc(ParamScalar(3)) * x_power(3)));
}

TEST(Conjugate, Examples) {
    EXPECT_EQ(conjugate_by_power(Dd(), param_a()), Dd() - DiffOp::multiplication(RatFunc(param_a()) * x_power(-1)));
    EXPECT_EQ(conjugate_by_power(E(), param_a()), E() - A());
}

TEST(Conjugate, KPlusOnQuasiMonomials) {
    // k+(a) x^{a+j} = (j-n) x^{a+j+1}
    for (int n = 0; n <= 3; ++n) {
        DiffOp jp = DiffOp::x_power(2) * Dd() - DiffOp::multiplication(RatFunc(ParamScalar(n)) * var_x());
        DiffOp kp = conjugate_by_power(jp, param_a());
        for (int j = 0; j <= 4; ++j) {
            QuasiPoly out = act_quasi(kp, mono(j, 1));
            if (j == n) {
                EXPECT_TRUE(out.is_zero());
            } else {
                EXPECT_EQ(out, QuasiPoly::monomial(qe(j + 1, 1), ParamScalar(j - n)));
            }
        }
    }
}

TEST(ActQuasi, Examples) {
    EXPECT_EQ(act_quasi(Dd(), mono(2, 1)), QuasiPoly::monomial(qe(1, 1), param_a() + ParamScalar(2)));
    // x(D-n)(D-(m+a)) with n = 2, m = 1
    DiffOp jp = X() * (E() - C(2)) * (E() - C(1) - A());
    EXPECT_TRUE(act_quasi(jp, mono(2)).is_zero());
    EXPECT_EQ(act_quasi(jp, mono(0)), QuasiPoly::monomial(qe(1), ParamScalar(2) * (ParamScalar(1) + param_a())));
}

TEST(ActQuasi, RejectsNonLaurent) {
    DiffOp op = DiffOp::multiplication(RatFunc(XPoly(ParamScalar(1)), XPoly(std::vector<ParamScalar>{ParamScalar(1), ParamScalar(1)})));
    EXPECT_THROW(act_quasi(op, mono(0)), NonLaurentCoefficient);
}

TEST(ActPoly, Examples) {
    XPoly x3 = XPoly::monomial(ParamScalar(1), 3);
    EXPECT_EQ(act_poly(Dd(), x3), RatFunc(XPoly::monomial(ParamScalar(3), 2)));
    EXPECT_TRUE(act_poly(DiffOp::x_power(-1) * E(), XPoly(ParamScalar(1))).is_zero());
    DiffOp op = conjugate_by_power(Dd(), param_a());
    RatFunc expect = RatFunc(ParamScalar(2) - param_a()) * var_x();
    EXPECT_EQ(act_poly(op, XPoly::monomial(ParamScalar(1), 2)), expect);
}

TEST(Shift, PrefactorComposition) {
    // x^{-a} d x^{a} = d + a/x
    DiffOp l = DiffOp::a_power(Rational(-1)) * Dd() * DiffOp::a_power(Rational(1));
    EXPECT_EQ(l, Dd() + DiffOp::multiplication(RatFunc(param_a()) * x_power(-1)));
    EXPECT_THROW(DiffOp::a_power(Rational(1)) + Dd(), ShiftMismatch);
    EXPECT_EQ(DiffOp::a_power(Rational(1)).to_string(), "x^(a)*(1)");
    QuasiPoly moved = act_quasi(DiffOp::a_power(Rational(-1)) * E(), mono(1, 1));
    EXPECT_EQ(moved, QuasiPoly::monomial(qe(1), param_a() + ParamScalar(1)));
}

TEST(EulerProduct, MatchesSequentialComposition) {
    std::vector<ParamScalar> roots{ParamScalar(0), ParamScalar(1), param_a()};
    DiffOp k = euler_product(roots);
    EXPECT_EQ(k, E() * (E() - C(1)) * (E() - A()));
    EXPECT_EQ(eigen_on(k, qe(2)), ParamScalar(2) * (ParamScalar(2) - param_a()));
}

// Properties on randomized operators.

TEST(Properties, Associativity) {
    testutil::Gen g(11);
    for (int i = 0; i < 100; ++i) {
        DiffOp a = g.diffop(), b = g.diffop(), c = g.diffop();
        EXPECT_EQ(compose(a, compose(b, c)), compose(compose(a, b), c));
    }
}

TEST(Properties, Bilinearity) {
    testutil::Gen g(12);
    for (int i = 0; i < 40; ++i) {
        DiffOp a = g.diffop(), b = g.diffop(), c = g.diffop();
        EXPECT_EQ(compose(a, b + c), compose(a, b) + compose(a, c));
        EXPECT_EQ(compose(a + b, c), compose(a, c) + compose(b, c));
    }
}

TEST(Properties, Jacobi) {
    testutil::Gen g(13);
    for (int i = 0; i < 100; ++i) {
        DiffOp a = g.diffop(), b = g.diffop(), c = g.diffop();
        DiffOp j = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b));
        EXPECT_TRUE(j.is_zero()) << j.to_string();
    }
}

TEST(Properties, ActionHomomorphism) {
    testutil::Gen g(14);
    for (int i = 0; i < 60; ++i) {
        DiffOp a = g.diffop(2, true), b = g.diffop(2, true);
        QuasiPoly v;
        for (int k = 0; k < 3; ++k) v.add(qe(g.integer(-2, 4), g.integer(0, 1)), ParamScalar(g.rational()));
        EXPECT_EQ(act_quasi(compose(a, b), v), act_quasi(a, act_quasi(b, v)));
        XPoly p = g.xpoly(4);
        if (a.shift().is_zero() && b.shift().is_zero())
            EXPECT_EQ(act_poly(compose(a, b), p), apply(a, act_poly(b, p)));
    }
}

TEST(Properties, ConjugationInverse) {
    testutil::Gen g(15);
    for (int i = 0; i < 60; ++i) {
        DiffOp a = g.diffop();
        ParamScalar e = g.coin() ? param_a() * ParamScalar(g.nonzero_rational()) : ParamScalar(g.rational());
        EXPECT_EQ(conjugate_by_power(conjugate_by_power(a, e), -e), a);
        // conjugation is an algebra automorphism
        DiffOp b = g.diffop();
        EXPECT_EQ(conjugate_by_power(compose(a, b), e), compose(conjugate_by_power(a, e), conjugate_by_power(b, e)));
    }
}

TEST(Properties, NormalFormUnique) {
    testutil::Gen g(16);
    for (int i = 0; i < 60; ++i) {
        DiffOp a = g.diffop();
        EXPECT_EQ(DiffOp::from_terms(a.terms(), a.shift()), a);
        EXPECT_EQ(a + DiffOp(), a);
        EXPECT_TRUE((a - a).is_zero());
        for (const auto &[j, c] : a.terms()) EXPECT_FALSE(c.is_zero());
    }
}
