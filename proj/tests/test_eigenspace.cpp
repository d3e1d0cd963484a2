#include <gtest/gtest.h>

#include <random>

#include "prexp/eigenspace.hpp"

using namespace prexp;

namespace {
AElement random_a(const PrimeContext& ctx, int e, std::mt19937_64& rng) {
  std::vector<Padic> c;
  for (int k = 0; k < 2 * e + 1; ++k) c.push_back(ctx.integer(static_cast<std::int64_t>(rng() % 50) - 25));
  return AElement(ctx, e, 1, Series(ctx.p(), c));
}
}  // namespace

TEST(Eigenspace, PhiElementSpecialization) {
  PrimeContext ctx(5, 12, 60, 16, 8);
  std::mt19937_64 rng(1);
  for (int e = 1; e <= 3; ++e)
    for (int d = 1; d <= 2; ++d) {
      std::vector<AElement> co;
      for (int i = 0; i < d; ++i) co.push_back(random_a(ctx, e, rng));
      FreeModuleElement m(co);
      TensorMA phi = phi_element(m);
      EXPECT_TRUE(tensors_equal(phi.times_x_left(), phi.times_x_right()));
      XPoint x(ctx.integer(5 * 3), 1);
      FiberElement s = sp_x(phi, x);
      EXPECT_TRUE(in_eigenspace(s, x));
      auto pt = s.at_point(x.value);
      auto mx = fiber_and_eigenspace(m, x).point;
      Padic scale = ctx.integer(e) * x.value.pow(e - 1);
      for (int i = 0; i < d; ++i) EXPECT_TRUE(congruent(pt[i], scale * mx[i])) << e << " " << d;
    }
}

TEST(Eigenspace, Factorization) {
  PrimeContext ctx(5, 12, 60, 16, 8);
  std::mt19937_64 rng(2);
  for (int e : {1, 2}) {
    int d = 2;
    std::vector<std::vector<std::vector<Series>>> h(d, std::vector<std::vector<Series>>(d));
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int s = 0; s < e; ++s)
          h[a][b].push_back(Series(5, {ctx.integer(rng() % 17), ctx.integer(rng() % 13)}));
    PairingData P = PairingData::structural(d, e, h);
    EXPECT_TRUE(P.check_adj());
    for (auto u : {ctx.integer(10), ctx.zero()}) {
      XPoint x(u, 1);
      auto F = factor_pairing(P, x, ctx);
      std::vector<AElement> c1, c2;
      for (int i = 0; i < d; ++i) {
        c1.push_back(random_a(ctx, e, rng));
        c2.push_back(random_a(ctx, e, rng));
      }
      FiberElement v = fiber_of(FreeModuleElement(c1), x);
      FiberElement w = fiber_of(FreeModuleElement(c2), x);
      Padic lhs = P.pair_fibers(v, w.times_poly(p_x_polynomial(x, e)));
      auto pv = v.at_point(u), pw = w.at_point(u);
      Padic rhs = ctx.zero();
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) rhs += pv[a] * F.gram(a, b) * pw[b];
      EXPECT_TRUE(congruent(lhs, rhs)) << e;
    }
  }
}
