#include <gtest/gtest.h>

#include "prexp/phigamma.hpp"

using namespace prexp;

namespace {
FrakDElement sample_alpha(const PrimeContext& ctx) {
  std::vector<PiSeries> parts;
  for (int i = 1; i < ctx.p(); ++i) parts.push_back(PiSeries::from_ints(ctx, {i, 2, -1, 3 * i, 1}));
  return {psi_zero_from_parts(parts), DcrisElement{ctx.one()}};
}
}  // namespace

TEST(PhiGamma, RecursionAndMembership) {
  for (int p : {3, 5}) {
    PrimeContext ctx(p, 12, 60, 16, 8);
    auto alpha = sample_alpha(ctx);
    EXPECT_TRUE(compare(psi(alpha.f), PiSeries::zero(ctx)).equal);
    for (int m = 0; m <= 2; ++m) {
      RankOneDelta delta{ctx.integer(p).pow(m) * ctx.integer(2), m};
      for (int h = m; h <= m + 2; ++h) {
        auto z = pr_exp(delta, alpha, h);
        auto mem = check_membership(z);
        EXPECT_TRUE(mem.equal) << p << " " << m << " " << h;
        auto z1 = pr_exp(delta, alpha, h + 1);
        auto c = compare(z1.F, ell_apply(h - m, z.F));
        EXPECT_TRUE(c.equal);
        auto cf = compare(z.F, pr_exp_closed_form(delta, alpha, h).F);
        EXPECT_TRUE(cf.equal) << "closed form " << p << " " << m << " " << h << " prec " << cf.min_prec;
      }
    }
  }
}

TEST(PhiGamma, Xi) {
  PrimeContext ctx(5, 12, 60, 16, 8);
  RankOneDelta delta{ctx.integer(2), 0};
  FrakDElement alpha{PiSeries::one_plus_pi(ctx), DcrisElement{ctx.one()}};
  auto x0 = xi_level_n(delta, alpha, 0);
  EXPECT_TRUE(congruent(x0.scalar, ctx.rational(-9, 10))) << x0.scalar;
  auto x1 = xi_level_n(delta, sample_alpha(ctx), 1);
  CycloScalar sum = CycloScalar::zero(5, 1);
  for (int i = 0; i < 4; ++i) sum = sum + isotypic_projector(ctx, i, *x1.cyclo);
  EXPECT_TRUE(congruent(sum, *x1.cyclo));
}

TEST(PhiGamma, Berger) {
  PrimeContext ctx(5, 12, 60, 16, 8);
  auto a = sample_alpha(ctx);
  std::vector<PiSeries> alpha{a.f, ctx.integer(3) * a.f + PiSeries::one_plus_pi(ctx)};
  PadicMatrix Phi(5, 2, 2);
  Phi(0, 0) = ctx.integer(2);
  Phi(0, 1) = ctx.integer(1);
  Phi(1, 1) = ctx.integer(2);
  DcrisMatrixData V{Phi, {0, 1}};
  auto o1 = berger_omega(V, alpha, 1);
  auto o2 = berger_omega(V, alpha, 2);
  EXPECT_TRUE(check_berger_membership(Phi, o1).equal);
  EXPECT_TRUE(compare(o2[0], ell_apply(1, o1[0])).equal);
  // twist identity
  DcrisMatrixData Vt{PadicMatrix::diagonal({ctx.integer(10), ctx.integer(15)}), {0, 1}};
  DcrisMatrixData V1{PadicMatrix::diagonal({ctx.integer(2), ctx.integer(3)}), {0, 1}};
  for (int h = 0; h <= 1; ++h) {
    auto lhs = berger_omega(V1, alpha, h + 1);
    auto rhs = berger_omega(Vt, {partial(alpha[0]), partial(alpha[1])}, h);
    for (int i = 0; i < 2; ++i) {
      auto c = compare(lhs[i], -t_mult(rhs[i]));
      EXPECT_TRUE(c.equal) << h << " " << c.min_prec;
    }
  }
}
