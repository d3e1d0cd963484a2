#include <gtest/gtest.h>

#include <random>

#include "prexp/lfunction.hpp"

using namespace prexp;

namespace {

IwasawaElement random_iw(const PrimeContext& ctx, std::mt19937_64& rng, int deg) {
  std::vector<Series> br;
  for (int i = 0; i < ctx.p() - 1; ++i) {
    std::vector<Padic> c;
    for (int k = 0; k <= deg; ++k) c.push_back(ctx.integer(static_cast<std::int64_t>(rng() % 41) - 20));
    br.push_back(Series(ctx.p(), c));
  }
  return IwasawaElement(ctx, br);
}

LambdaXElement random_lx(const PrimeContext& ctx, int k0, std::mt19937_64& rng, int ydeg, int tdeg) {
  std::vector<IwasawaElement> parts;
  for (int n = 0; n <= ydeg; ++n) parts.push_back(random_iw(ctx, rng, tdeg));
  return LambdaXElement(ctx, k0, parts);
}

IwasawaElement group_ring_iw(const PrimeContext& ctx, const std::vector<Padic>& by_residue) {
  // by_residue[a-1] is the coefficient of delta_a
  std::vector<Series> br;
  for (int i = 0; i < ctx.p() - 1; ++i) {
    Padic s = ctx.zero();
    for (int a = 1; a < ctx.p(); ++a) s = s + by_residue[a - 1] * ctx.omega(a).pow(i);
    br.push_back(Series::constant(s, ctx.p()));
  }
  return IwasawaElement(ctx, br);
}

}  // namespace

TEST(MuFactors, DefiningIdentities) {
  PrimeContext ctx(5, 12, 60, 8, 4);
  const int k0 = 2;
  for (std::int64_t c : {2, 3})
    for (std::int64_t d : {2, 3})
      for (std::int64_t j : {0, 1, 2}) {
        MuFactors mu = mu_factors(c, d, j, k0, ctx);
        IwasawaElement sc = group_like_sigma(c, ctx);
        IwasawaElement lhs1 = -(ctx.integer(c).pow(j) * mu.mu1.part(0));
        IwasawaElement rhs1 = sc - IwasawaElement::scalar(ctx, ctx.integer(c).pow(j + 2));
        EXPECT_TRUE(compare(lhs1, rhs1, 8).equal);
        Series ex = weight_exp_series(ctx, log_unit_part(ctx, d), 1);
        LambdaXElement e = LambdaXElement::from_y_series(ctx, k0, ex);
        LambdaXElement lhs2 = -(ctx.integer(d).pow(k0 - j) * (e * mu.mu2));
        LambdaXElement rhs2 = LambdaXElement::constant(group_like_sigma(d, ctx), k0) -
                              LambdaXElement::constant(IwasawaElement::scalar(ctx, ctx.integer(d).pow(k0 + 2 - j)), k0) * e;
        auto cmp = compare(lhs2, rhs2, 8, 4);
        EXPECT_TRUE(cmp.equal) << c << d << j;
        EXPECT_GE(cmp.min_prec, 1);
      }
}

TEST(MuFactors, ZerosAndCoprimality) {
  PrimeContext ctx(5, 12, 60, 8, 6);
  const int k0 = 2;
  for (std::int64_t j : {0, 1, 2}) {
    MuFactors mu = mu_factors(2, 3, j, k0, ctx);
    EXPECT_TRUE(specialize_l(mu.mu1, k0, CharacterSpec::chi_power(j + 2)).is_zero());
    for (std::int64_t w : {k0, k0 + 4, k0 + 8}) {
      EXPECT_TRUE(specialize_l(mu.mu2, w, CharacterSpec::chi_power(w - j + 2)).is_zero()) << w;
      for (std::int64_t r = -10; r <= 10; ++r) {
        const CharacterSpec chi = CharacterSpec::chi_power(r);
        const bool z1 = specialize_l(mu.mu1, w, chi).is_zero();
        const bool z2 = specialize_l(mu.mu2, w, chi).is_zero();
        if (w != 2 * j) {
          EXPECT_FALSE(z1 && z2) << j << " " << w << " " << r;
        }
      }
    }
  }
}

TEST(EulerFactor, WeightTwelveExample) {
  PrimeContext ctx(5, 12, 60, 8, 4);
  const int k0 = 12;
  EulerFactor f{11, Series(5, {ctx.integer(534612)}), 10, true, 534612};
  EnValue v = evaluate_en({f}, k0, 12, 6, ctx);
  EXPECT_FALSE(v.value.is_zero());
  EXPECT_EQ(v.advisory, "guaranteed");
  EXPECT_FALSE(v.archimedean_zero);
  Padic expect = ctx.one() - ctx.rational(534612, 1771561);
  EXPECT_TRUE(congruent(v.value, expect));
  LambdaXElement E = euler_en({f}, k0, ctx);
  EXPECT_TRUE(congruent(specialize_l(E, 12, CharacterSpec::chi_power(6)), expect));
  EXPECT_EQ(evaluate_en({f}, k0, 12, 5, ctx).advisory, "not guaranteed");
}

TEST(Division, RoundTripAndUniqueness) {
  PrimeContext ctx(5, 12, 60, 10, 3);
  const int k0 = 2;
  std::mt19937_64 rng(7);
  MuFactors mu = mu_factors(2, 3, 1, k0, ctx);
  for (int trial = 0; trial < 5; ++trial) {
    LambdaXElement v = random_lx(ctx, k0, rng, 2, 3);
    LambdaXElement prod = mu.mu0 * v;
    LambdaXElement back = divide_exact(prod, mu.mu0);
    auto cmp = compare(back, v, 4, 2);
    EXPECT_TRUE(cmp.equal);
    EXPECT_GE(cmp.min_prec, 1);
    LambdaXElement two_step = divide_exact(divide_exact(prod, mu.mu1), mu.mu2);
    EXPECT_TRUE(compare(two_step, back, 4, 2).equal);
  }
  EXPECT_THROW(
      {
        try {
          divide_exact(LambdaXElement::one(ctx, k0), mu.mu1);
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), Errc::NotDivisible);
          throw;
        }
      },
      Error);
}

TEST(TwoVariable, MatchesOneVariablePath) {
  PrimeContext ctx(5, 12, 60, 8, 4);
  const int k0 = 2;
  std::mt19937_64 rng(11);
  const int d = 2;
  std::vector<std::vector<std::vector<Series>>> h(d, std::vector<std::vector<Series>>(d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) h[a][b].push_back(Series(5, {ctx.integer(rng() % 7 + 1), ctx.integer(rng() % 5)}));
  PairingData gram = PairingData::structural(d, 1, h);
  PadicMatrix conj(5, 2, 2);
  conj(0, 1) = ctx.one();
  conj(1, 0) = ctx.one();
  TwoVarData data{{ctx.integer(10), 1}, ctx.integer(3), conj, gram, 2, 0};
  BigClass z;
  for (int a = 0; a < d; ++a) z.coords.push_back(random_lx(ctx, k0, rng, 2, 3));
  TwoVarL L = two_var_l(z, data);
  ASSERT_EQ(L.comps.size(), 1u);
  for (std::int64_t w : {k0, k0 + 4})
    for (std::int64_t r : {0, 1, 3}) {
      std::vector<IwasawaElement> zx;
      for (const auto& c : z.coords) zx.push_back(evaluate_weight(c, w));
      IwasawaElement one = one_variable_l(zx, data, w, k0, ctx);
      const CharacterSpec chi = CharacterSpec::chi_power(r);
      EXPECT_TRUE(congruent(specialize_l(L.comps[0], w, chi), evaluate_character(one, chi))) << w << " " << r;
      EXPECT_TRUE(congruent(specialize_l(L.comps[0], w, chi), specialize_l_weight_first(L.comps[0], w, chi)));
    }
}

TEST(TwoVariable, PairingCharacterValues) {
  PrimeContext ctx(5, 12, 60, 8, 4);
  const int k0 = 2;
  std::mt19937_64 rng(13);
  std::vector<std::vector<std::vector<Series>>> h(1, std::vector<std::vector<Series>>(1));
  h[0][0].push_back(Series(5, {ctx.integer(3), ctx.integer(2)}));
  PairingData gram = PairingData::structural(1, 1, h);
  std::vector<Padic> xr, yr;
  for (int a = 1; a < 5; ++a) {
    xr.push_back(ctx.integer(rng() % 9));
    yr.push_back(ctx.integer(rng() % 9));
  }
  BigClass x{{LambdaXElement::constant(group_ring_iw(ctx, xr), k0)}};
  BigClass y{{LambdaXElement::constant(group_ring_iw(ctx, yr), k0)}};
  LambdaXElement P = pr_pairing(x, y, gram);
  for (std::int64_t w : {k0, k0 + 4})
    for (int i = 0; i < 4; ++i) {
      GroupRingElement gx = cyclo_moment(group_ring_iw(ctx, xr), 0, 1);
      GroupRingElement gy = cyclo_moment(group_ring_iw(ctx, yr), 0, 1);
      Padic rx = ctx.zero(), ry = ctx.zero();
      for (int a = 1; a < 5; ++a) {
        rx = rx + gx.get(a) * ctx.omega(a).pow(i);
        ry = ry + gy.get(a) * ctx.omega(a).pow(-i);
      }
      Padic g = evaluate(h[0][0][0], gamma1_character_point(ctx, w - k0));
      EXPECT_TRUE(congruent(specialize_l(P, w, CharacterSpec{i, 0}), rx * ry * g)) << w << " " << i;
    }
}

TEST(TwoVariable, SignSplitAndErrors) {
  PrimeContext ctx(5, 12, 60, 8, 4);
  const int k0 = 2;
  std::mt19937_64 rng(17);
  PadicMatrix conj(5, 2, 2);
  conj(0, 1) = ctx.one();
  conj(1, 0) = ctx.one();
  BigClass z{{random_lx(ctx, k0, rng, 1, 2), random_lx(ctx, k0, rng, 1, 2)}};
  SignSplit s = sign_split(z, conj, 1, k0);
  EXPECT_TRUE(compare(s.plus.coords[0] + s.minus.coords[0], z.coords[0]).equal);
  EXPECT_TRUE(compare(s.plus.coords[0], s.plus.coords[1]).equal);
  EXPECT_EQ(s.l_plus_uses, '-');
  EXPECT_EQ(s.l_minus_uses, '+');
  PadicMatrix bad = conj;
  bad(0, 1) = ctx.integer(2);
  EXPECT_THROW(sign_split(z, bad, 1, k0), Error);
  BigClass other = z;
  other.basis = "other";
  std::vector<std::vector<std::vector<Series>>> h(2, std::vector<std::vector<Series>>(2, {Series(5, {ctx.one()})}));
  EXPECT_THROW(pr_pairing(z, other, PairingData::structural(2, 1, h)), Error);
}
