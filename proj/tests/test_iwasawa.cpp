#include <gtest/gtest.h>

#include "prexp/iwasawa.hpp"

using namespace prexp;

TEST(Iwasawa, SigmaEvaluation) {
  PrimeContext ctx(5, 12, 60, 16, 8);
  auto s6 = group_like_sigma(6, ctx);
  EXPECT_TRUE(congruent(s6.branch(0).coeff(1), ctx.one()));
  EXPECT_TRUE(congruent(evaluate_character(group_like_sigma(2, ctx), CharacterSpec::chi_power(3)), ctx.integer(8)));
  EXPECT_TRUE(congruent(evaluate_character(group_like_sigma(2, ctx), CharacterSpec::chi_power(1)), ctx.integer(2)));
  auto io = involution_iota(group_like_sigma(2, ctx));
  auto v = evaluate_character(io, CharacterSpec::chi_power(2));
  EXPECT_TRUE(congruent(v, ctx.rational(1, 4))) << v;
  auto tw = twist_tw(2, group_like_sigma(3, ctx));
  auto v2 = evaluate_character(tw, CharacterSpec::chi_power(1));
  EXPECT_TRUE(congruent(v2, ctx.integer(27))) << v2;
}

TEST(Iwasawa, AmiceCharacter) {
  for (int p : {3, 5}) {
    PrimeContext ctx(p, 12, 60, 16, 8);
    auto lam = group_like_sigma(2, ctx) + ctx.integer(3) * group_like_sigma(7, ctx);
    PiSeries f = amice_realize(lam);
    auto z = psi(f);
    EXPECT_TRUE(compare(z, PiSeries::zero(ctx)).equal);
    PiSeries g = f;
    for (int r = 0; r <= 4; ++r) {
      auto e = evaluate_character(lam, CharacterSpec::chi_power(r));
      EXPECT_TRUE(congruent(g.coeff(0), e)) << p << " r=" << r << " " << g.coeff(0) << " vs " << e;
      g = partial(g);
    }
  }
}

TEST(Iwasawa, Moment) {
  PrimeContext ctx(5, 12, 60, 16, 8);
  auto m = cyclo_moment(group_like_sigma(7, ctx), 1, 1);
  EXPECT_TRUE(congruent(m.get(2), ctx.rational(1, 7)));
  auto m2 = cyclo_moment(group_like_sigma(7, ctx) * group_like_sigma(3, ctx), 1, 2);
  auto m3 = cyclo_moment(group_like_sigma(7, ctx), 1, 2) * cyclo_moment(group_like_sigma(3, ctx), 1, 2);
  EXPECT_TRUE(congruent(m2, m3));
  EXPECT_TRUE(congruent(m2.get(21), ctx.rational(1, 21))) << m2.get(21);
}
