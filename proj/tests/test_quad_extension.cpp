#include <gtest/gtest.h>

#include "qes/quad_extension.hpp"
#include "quad_oracle.hpp"
#include "test_support.hpp"

using namespace qes;
using testutil::FForm;
using testutil::letter_lift;
using testutil::times_letter;

namespace {

ParamScalar A() { return param_a(); }
ParamScalar S(long v) { return ParamScalar(v); }
XPoly xp(std::initializer_list<long> c) {
    std::vector<ParamScalar> v;
    for (long x : c) v.emplace_back(x);
    return XPoly(std::move(v));
}
DiffOp mul(const RatFunc &c) { return DiffOp::multiplication(c); }

// x -> s^2 on a polynomial.
XPoly spread(const XPoly &p) {
    std::vector<ParamScalar> c;
    for (const auto &v : p.coefficients()) {
        c.push_back(v);
        c.emplace_back(0);
    }
    return XPoly(std::move(c));
}

} // namespace

TEST(Lift, Examples) {
    QuadSpace s = sqrt_p2(2, A());
    const MatOp F = lift_f(s), D = lift_d(s);
    EXPECT_EQ(F * F, lift_mul(s.r()));
    EXPECT_EQ(commutator(D, F), F.scaled(log_derivative_f(s.r())));
    // f d maps x to f
    QuadPair o = act(F * D, xp({0, 1}), XPoly());
    EXPECT_TRUE(o.first.is_zero());
    EXPECT_EQ(o.second, RatFunc(1));
    EXPECT_EQ(lift(DiffOp::euler(), s), lift_x(s) * D);
}

TEST(Act, Examples) {
    QuadSpace s = sqrt_p2(2, A());
    const MatOp F = lift_f(s), D = lift_d(s);
    QuadPair z = act(F * D, xp({1}), XPoly());
    EXPECT_TRUE(z.first.is_zero() && z.second.is_zero());
    XPoly p = xp({1, 2}), q = xp({3, 0, 1});
    QuadPair fq = act(F, p, q);
    EXPECT_EQ(fq.first, s.r() * RatFunc(q));
    EXPECT_EQ(fq.second, RatFunc(p));
    QuadPair dq = act(D, XPoly(), xp({1}));
    EXPECT_TRUE(dq.first.is_zero());
    EXPECT_EQ(dq.second, log_derivative_f(s.r()));
}

TEST(Lift, HomomorphismOnRandomWords) {
    testutil::Gen g(31);
    const std::vector<QuadSpace> spaces{sqrt_p2(2, A()), ratio_sqrt(1, A()), QuadSpace(RatFunc(xp({0, 1, 0, 2})), 2, 1)};
    const char letters[] = {'x', 'd', 'f'};
    for (int i = 0; i < 200; ++i) {
        const QuadSpace &s = spaces[static_cast<std::size_t>(i) % spaces.size()];
        const int len = g.integer(1, 6);
        FForm nf{DiffOp::identity(), DiffOp()};
        MatOp prod = MatOp::identity();
        std::string word;
        for (int k = 0; k < len; ++k) {
            char c = letters[g.integer(0, 2)];
            word += c;
            nf = times_letter(nf, c, s.r());
            prod = prod * letter_lift(c, s);
        }
        EXPECT_EQ(prod, lift(nf.a, s) + lift_f(s) * lift(nf.b, s)) << word;
    }
}

TEST(QuadInvariance, Examples) {
    for (int n = 1; n <= 4; ++n) {
        QuadSpace s = sqrt_p2(n, A());
        EXPECT_TRUE(check_invariance_quad(lift_f(s) * lift_d(s), s).verdict);
        InvarianceReport bad = check_invariance_quad(lift_d(s), s);
        EXPECT_FALSE(bad.verdict);
        ASSERT_FALSE(bad.witnesses.empty());
        EXPECT_EQ(bad.witnesses.front().basis, "f");
    }
    QuadSpace s = sqrt_p2(3, A());
    const RatFunc p2 = s.r();
    MatOp s1 = lift_mul(p2) * lift_d(s) - lift_mul(RatFunc(S(3) * A()) * var_x());
    EXPECT_TRUE(check_invariance_quad(s1, s).verdict);
}

TEST(QuadSpace, RejectsSquares) {
    EXPECT_THROW(QuadSpace(RatFunc(xp({1, -2, 1})), 1, 0), PreconditionViolation);
    EXPECT_THROW(lame_space(1, S(1)), PreconditionViolation);
    EXPECT_NO_THROW(lame_space(1, S(0)));
    EXPECT_THROW(QuadSpace(RatFunc(), 1, 0), PreconditionViolation);
    EXPECT_EQ(sqrt_p2(2, A()).to_string(), "SqrtP2(2,lambda)");
    EXPECT_EQ(lame_space(2, A()).specialized(Rational::parse("1/2")).to_string(), "Lame(2,1/2)");
}

TEST(SGenerators, SqrtP2Family) {
    for (int n = 1; n <= 4; ++n) {
        QuadSpace s = sqrt_p2(n, A());
        SopReport rep = sop_crosscheck(s, A());
        ASSERT_EQ(rep.family.size(), 3u) << n;
        for (const auto &g : rep.family) EXPECT_TRUE(check_invariance_quad(g.mat, s).verdict);
        ASSERT_EQ(rep.checks.size(), 3u);
        const auto &s1 = rep.checks[0], &s2 = rep.checks[1], &s3 = rep.checks[2];
        EXPECT_TRUE(s3.invariant && s3.in_family);
        EXPECT_FALSE(s1.invariant);
        ASSERT_TRUE(s1.witness.has_value());
        // S1 x^n has an x^{n+1} term with coefficient n(1 + lambda)
        EXPECT_EQ(s1.witness->output, "x^" + std::to_string(n + 1));
        EXPECT_EQ(s1.witness->coefficient, S(n) * (S(1) + A()));
        EXPECT_FALSE(s1.corrected.empty());
        EXPECT_FALSE(s2.invariant);
        EXPECT_FALSE(s2.corrected.empty());
    }
}

TEST(SGenerators, PrintedS1AgreesAtMinusOne) {
    QuadSpace s = sqrt_p2(3, S(-1));
    SopReport rep = sop_crosscheck(s, S(-1));
    EXPECT_TRUE(rep.checks[0].invariant);
    EXPECT_TRUE(rep.checks[0].in_family);
    EXPECT_FALSE(rep.checks[1].invariant);
}

TEST(SGenerators, RatioFamily) {
    for (int n = 1; n <= 3; ++n) {
        QuadSpace s = ratio_sqrt(n, A());
        auto fam = s_generators(s);
        EXPECT_EQ(fam.size(), 3u);
        for (const auto &g : fam) EXPECT_TRUE(check_invariance_quad(g.mat, s).verdict);
    }
}

TEST(SGenerators, TooSmallFamilyIsAnError) {
    // P_1 + f P_1 with f^2 = x^3 + 1 has no three-dimensional first-order family
    EXPECT_THROW(s_generators(QuadSpace(RatFunc(xp({1, 0, 0, 1})), 1, 1)), Error);
}

TEST(Closure, SFamilyIsSl2R) {
    for (auto s : {sqrt_p2(2, A()), ratio_sqrt(2, A())}) {
        auto fam = s_generators(s);
        std::vector<MatOp> g;
        for (const auto &x : fam) g.push_back(x.mat);
        ClosureReport r = closure_check(g, {"S1", "S2", "S3"}, s);
        EXPECT_TRUE(r.closed);
        EXPECT_TRUE(r.antisymmetric);
        EXPECT_TRUE(r.jacobi);
        ASSERT_TRUE(r.killing.has_value());
        ASSERT_EQ(r.killing->samples.size(), 3u);
        for (const auto &[a0, sig] : r.killing->samples) EXPECT_EQ(sig, (std::array<int, 3>{2, 1, 0}));
        EXPECT_EQ(r.classification, "sl(2,R)");
    }
}

TEST(Lame, PreservesSpace) {
    for (int n = 1; n <= 3; ++n) EXPECT_TRUE(check_invariance_quad(lame_pullback(n, A()), lame_space(n, A())).verdict) << n;
    ParamScalar half(Rational::parse("1/2"));
    EXPECT_TRUE(check_invariance_quad(lame_pullback(2, half), lame_space(2, half)).verdict);
    EXPECT_TRUE(check_invariance_quad(lame_pullback(1, S(0)), lame_space(1, S(0))).verdict);
}

TEST(Lame, AgreesWithSnRoute) {
    // In s = sn with f = cn dn, r_s = (1-s^2)(1-k^2 s^2): d/dz (p + f q) = (r_s q' + r_s' q/2) + f p'
    // and the gauge factor adds w = (f - 1)/(2 s). H = -(d/dz + w)^2 + N(N+1) k^2 s^2.
    const ParamScalar k2 = A();
    const RatFunc s = var_x();
    const RatFunc rs = RatFunc(xp({1, 0, -1})) * (RatFunc(1) - RatFunc(k2) * s * s);
    const DiffOp d = DiffOp::d();
    MatOp Dz(DiffOp(), mul(rs) * d + mul(rs.derivative() / RatFunc(2)), d, DiffOp());
    const RatFunc half_s = RatFunc(1) / (RatFunc(2) * s);
    MatOp W(mul(-half_s), mul(rs * half_s), mul(half_s), mul(-half_s));
    for (int n = 1; n <= 3; ++n) {
        const ParamScalar N(lame_N(n));
        MatOp B = Dz + W;
        MatOp Hs = -(B * B) + lift_mul(RatFunc(N * (N + S(1)) * k2) * s * s);
        MatOp Hx = lame_pullback(n, k2);
        QuadSpace sp = lame_space(n, k2);
        for (std::size_t idx = 0; idx < sp.dimension(); ++idx) {
            XPoly p = static_cast<int>(idx) <= n ? XPoly::monomial(S(1), static_cast<int>(idx)) : XPoly();
            XPoly q = static_cast<int>(idx) > n ? XPoly::monomial(S(1), static_cast<int>(idx) - n - 1) : XPoly();
            QuadPair viax = act(Hx, p, q);
            QuadPair vias = act(Hs, spread(p), spread(q));
            ASSERT_TRUE(viax.first.is_polynomial() && viax.second.is_polynomial());
            EXPECT_EQ(vias.first, RatFunc(spread(viax.first.numerator()))) << n << " " << idx;
            EXPECT_EQ(vias.second, RatFunc(spread(viax.second.numerator()))) << n << " " << idx;
        }
    }
}

TEST(Lame, SpectrumRealAndDistinct) {
    for (int n = 1; n <= 3; ++n) {
        QuadSpace sp = lame_space(n, A());
        Spectrum spec = algebraic_spectrum(lame_pullback(n, A()), sp);
        ASSERT_EQ(spec.charpoly.degree(), Degree(2 * n + 1));
        EXPECT_EQ(spec.charpoly.leading(), S(1));
        EXPECT_EQ(trace(spec.matrix), -spec.charpoly.coefficient(2 * n));
        for (const char *v : {"1/4", "1/2", "3/4"}) {
            RootCount rc = real_roots_at(spec.charpoly, Rational::parse(v));
            EXPECT_EQ(rc.degree, 2 * n + 1);
            EXPECT_EQ(rc.real_distinct, 2 * n + 1) << n << " " << v;
            EXPECT_TRUE(rc.squarefree);
        }
    }
}

TEST(Lame, SpectrumAtZeroModulus) {
    // k^2 = 0 is not degenerate in the x = sn^2 form
    Spectrum spec = algebraic_spectrum(lame_pullback(1, S(0)), lame_space(1, S(0)));
    std::vector<Rational> c;
    for (const auto &v : spec.charpoly.coefficients()) c.push_back(v.constant_value());
    EXPECT_EQ(count_real_roots(RPoly(c)), 3);
    EXPECT_THROW(algebraic_spectrum(lift_d(lame_space(1, A())), lame_space(1, A())), PreconditionViolation);
}
