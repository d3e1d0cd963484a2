#include <gtest/gtest.h>

#include "prexp/robba.hpp"

using namespace prexp;

TEST(Padic, ArithmeticRoundTrip) {
  PrimeContext ctx(5, 12, 60, 16, 8);
  Padic a = ctx.rational(-9, 10);
  EXPECT_EQ(a.valuation(), -1);
  Padic b = a * ctx.integer(10);
  EXPECT_TRUE(congruent(b, ctx.integer(-9)));
  EXPECT_EQ(Padic::parse(a.str(), 5, 12), a);
}

TEST(Padic, Teichmueller) {
  PrimeContext ctx(5, 12, 60, 16, 8);
  for (int a = 1; a < 5; ++a) EXPECT_TRUE(congruent(ctx.omega(a).pow(4), ctx.one()));
}

TEST(Robba, PsiPhiIdentity) {
  for (int p : {3, 5}) {
    PrimeContext ctx(p, 12, 60, 16, 8);
    PiSeries f = PiSeries::from_ints(ctx, {3, 1, 4, 1, 5, 9, 2, 6});
    auto c = compare(psi(frobenius_phi(f)), f);
    EXPECT_TRUE(c.equal) << p;
    auto t = t_mult(PiSeries::one(ctx));
    auto d = compare(frobenius_phi(t), ctx.integer(p) * t, 20);
    EXPECT_TRUE(d.equal) << d.first_mismatch;
    auto e = psi(PiSeries::one_plus_pi(ctx));
    EXPECT_TRUE(compare(e, PiSeries::zero(ctx)).equal);
  }
}

TEST(Robba, Solver) {
  PrimeContext ctx(5, 12, 60, 16, 8);
  Padic a = ctx.integer(5);
  PiSeries rhs = PiSeries::pi(ctx);
  PiSeries F = solve_one_minus_aphi(a, rhs);
  auto res = compare(F - a * frobenius_phi(F), rhs);
  EXPECT_TRUE(res.equal) << res.first_mismatch;
  EXPECT_TRUE(congruent(F.coeff(1), ctx.rational(1, 1 - 25)));
  PiSeries G = solve_one_minus_aphi_iterative(a, rhs);
  EXPECT_TRUE(compare(F, G).equal);
}

TEST(Robba, EvalCyclo) {
  PrimeContext ctx(3, 12, 60, 16, 8);
  auto z = eval_at_cyclo(PiSeries::one_plus_pi(ctx), 2);
  EXPECT_TRUE(congruent(z, CycloScalar::zeta_power(3, 2, 1, 12)));
}

TEST(Robba, OperatorIdentities) {
  for (int p : {3, 5}) {
    PrimeContext ctx(p, 12, 60, 16, 8);
    PiSeries f = PiSeries::from_ints(ctx, {3, 1, 4, 1, 5, 9, 2, 6});
    GammaUnit g{ctx.integer(1 + p)};
    auto lhs = partial(gamma_act(g, f));
    auto rhs = g.chi_value * gamma_act(g, partial(f));
    auto c = compare(lhs, rhs);
    EXPECT_TRUE(c.equal) << c.first_mismatch << " prec " << c.min_prec;
    auto c2 = compare(psi(partial(f)), ctx.integer(p) * partial(psi(f)));
    EXPECT_TRUE(c2.equal);
    auto t = t_mult(PiSeries::one(ctx));
    auto c3 = compare(gamma_act(g, t), g.chi_value * t);
    EXPECT_TRUE(c3.equal) << c3.first_mismatch << " prec " << c3.min_prec << " deg " << gamma_act(g, t).degree();
    PiSeries acc = f;
    for (int j = 0; j < 3; ++j) acc = ell_apply(j, acc);
    PiSeries ref = f;
    for (int j = 0; j < 3; ++j) ref = partial(ref);
    for (int j = 0; j < 3; ++j) ref = t_mult(ref);
    auto c4 = compare(acc, -ref);
    EXPECT_TRUE(c4.equal) << c4.first_mismatch << " prec " << c4.min_prec;
    std::cout << "p=" << p << " prec " << c.min_prec << " " << c2.min_prec << " " << c3.min_prec << " " << c4.min_prec
              << " psi-of-inexact-deg " << psi(t).degree() << "\n";
  }
}
