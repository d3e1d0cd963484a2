#pragma once

// The positive Robba ring R+ truncated in pi, with the operators
// phi, psi, gamma, d = (1+pi) d/dpi, multiplication by t = log(1+pi),
// l_j = j - t d, the (1 - a phi) solver and evaluation at zeta_{p^n} - 1.

#include <vector>

#include "prexp/cyclo.hpp"
#include "prexp/series.hpp"

namespace prexp {

class PiSeries {
 public:
  PiSeries(const PrimeContext& ctx, Series s) : ctx_(ctx), s_(std::move(s)) {
    if (s_.degree() > ctx_.NPi()) s_ = s_.truncated(ctx_.NPi());
  }

  static PiSeries zero(const PrimeContext& ctx) { return PiSeries(ctx, Series::zero(ctx.p())); }
  static PiSeries constant(const PrimeContext& ctx, const Padic& c) { return PiSeries(ctx, Series::constant(c, ctx.p())); }
  static PiSeries one(const PrimeContext& ctx) { return constant(ctx, ctx.one()); }
  static PiSeries from_ints(const PrimeContext& ctx, const std::vector<std::int64_t>& c) {
    std::vector<Padic> v;
    for (auto x : c) v.push_back(ctx.integer(x));
    return PiSeries(ctx, Series(ctx.p(), std::move(v)));
  }
  static PiSeries monomial(const PrimeContext& ctx, int k, const Padic& c) {
    std::vector<Padic> v(k + 1, ctx.zero());
    v[k] = c;
    return PiSeries(ctx, Series(ctx.p(), std::move(v)));
  }
  static PiSeries pi(const PrimeContext& ctx) { return monomial(ctx, 1, ctx.one()); }
  static PiSeries one_plus_pi(const PrimeContext& ctx) { return from_ints(ctx, {1, 1}); }

  const PrimeContext& ctx() const { return ctx_; }
  const Series& series() const { return s_; }
  int degree() const { return s_.degree(); }
  Padic coeff(int n) const { return s_.coeff(n); }

  friend PiSeries operator+(const PiSeries& a, const PiSeries& b) { return PiSeries(a.ctx_, a.s_ + b.s_); }
  friend PiSeries operator-(const PiSeries& a, const PiSeries& b) { return PiSeries(a.ctx_, a.s_ - b.s_); }
  friend PiSeries operator*(const PiSeries& a, const PiSeries& b) {
    return PiSeries(a.ctx_, mul(a.s_, b.s_, a.ctx_.NPi()));
  }
  friend PiSeries operator*(const Padic& c, const PiSeries& a) { return PiSeries(a.ctx_, a.s_.scaled(c)); }
  PiSeries operator-() const { return PiSeries(ctx_, -s_); }

 private:
  PrimeContext ctx_;
  Series s_;
};

inline SeriesComparison compare(const PiSeries& a, const PiSeries& b, int max_degree = -1) {
  return compare(a.series(), b.series(), max_degree);
}

// (1+pi)^c - 1 for c in Z_p, with the constant term exactly zero.
inline Series binomial_minus_one(const PrimeContext& ctx, const Padic& c, int deg) {
  const int p = ctx.p();
  std::vector<Padic> v(deg + 1, Padic::exact_zero(p));
  Padic b = ctx.one();
  for (int n = 1; n <= deg; ++n) {
    b = b * (c - ctx.integer(n - 1)) / ctx.integer(n);
    v[n] = b;
  }
  return Series(p, std::move(v), Tail::bound(0));
}

// (1+pi)^c as an exact polynomial when c is a nonnegative integer.
inline Series binomial_power(const PrimeContext& ctx, std::int64_t c, int deg) {
  const int p = ctx.p();
  if (c < 0) {
    Series s = binomial_minus_one(ctx, ctx.integer(c), deg);
    std::vector<Padic> v = s.coeffs();
    v[0] = ctx.one();
    return Series(p, std::move(v), s.tail());
  }
  const int top = static_cast<int>(std::min<std::int64_t>(c, deg));
  std::vector<Padic> v(top + 1);
  Padic b = ctx.one();
  v[0] = b;
  for (int n = 1; n <= top; ++n) {
    b = b * ctx.integer(c - n + 1) / ctx.integer(n);
    v[n] = b;
  }
  Tail t = Tail::none();
  if (c > deg) t = Tail::bound(0);
  return Series(p, std::move(v), t);
}

inline PiSeries frobenius_phi(const PiSeries& f) {
  const PrimeContext& ctx = f.ctx();
  const int p = ctx.p();
  const Series& s = f.series();
  int D;
  bool exact = false;
  if (s.is_exact()) {
    D = std::min(p * s.degree(), ctx.NPi());
    exact = p * s.degree() <= ctx.NPi();
  } else {
    D = s.degree();
  }
  std::vector<Padic> c(D + 1, Padic::exact_zero(p));
  for (int k = 0; k <= std::min(D, s.degree()); ++k) {
    const Padic& ck = s.coeffs()[k];
    if (ck.is_exact_zero()) continue;
    for (int n = k; n <= std::min(D, p * k); ++n) {
      const Padic& e = ctx.phi_pow(k, n);
      if (e.is_exact_zero()) continue;
      c[n] += ck * e;
    }
  }
  Tail t = Tail::none();
  if (!exact) {
    const int sl = s.is_exact() ? 0 : std::min(s.tail().slope, 0);
    const int k = s.is_exact() ? 0 : s.tail().kappa;
    t = Tail::bound(s.global_tau(sl, k), sl, k);
  }
  return PiSeries(ctx, Series(p, std::move(c), t));
}

struct GammaUnit {
  Padic chi_value;
};

inline PiSeries gamma_act(const GammaUnit& g, const PiSeries& f) {
  const PrimeContext& ctx = f.ctx();
  if (g.chi_value.valuation() != 0) throw Error(Errc::PreconditionViolated, "chi(gamma) must be a unit");
  Series inner = binomial_minus_one(ctx, g.chi_value, ctx.NPi());
  return PiSeries(ctx, compose(f.series(), inner, ctx.NPi()));
}

// Lower bound on v(coefficient of pi^j in psi(pi^n)).
inline int psi_entry_bound(std::int64_t n, std::int64_t j, int p) {
  return static_cast<int>(detail::ceil_div(n - p * j, p - 1)) - 1;
}

inline PiSeries psi(const PiSeries& f) {
  const PrimeContext& ctx = f.ctx();
  const int p = ctx.p();
  const Series& s = f.series();
  const int D = s.degree();
  const int J = D / p;
  std::vector<Padic> c(J + 1, Padic::exact_zero(p));
  for (int n = 0; n <= D; ++n) {
    const Padic& cn = s.coeffs()[n];
    if (cn.is_exact_zero()) continue;
    const auto& row = ctx.psi_row(n);
    for (size_t j = 0; j < row.size(); ++j) {
      if (row[j].is_exact_zero()) continue;
      c[j] += cn * row[j];
    }
  }
  Series r(p, std::move(c), Tail::none());
  if (!s.is_exact()) {
    const Tail& t = s.tail();
    for (int j = 0; j <= J; ++j) {
      int cap = tail_min(D, p, t.kappa, [&](std::int64_t n) {
        int b = t.at(n, p);
        return b <= kNoBound / 2 ? kNoBound : b + psi_entry_bound(n, j, p);
      });
      r = r.cap_coeff(j, cap);
    }
    int slack = 0;
    for (int d = 0; d < 4096; ++d)
      slack = std::max<int>(slack, t.kappa * detail::ceil_log(d + 1, p) -
                                        static_cast<int>(detail::ceil_div(d, p - 1)));
    const int tau = s.global_tau(t.slope, t.kappa);
    r = r.with_tail(Tail::bound(tau <= kNoBound / 2 ? kNoBound : tau - 1 - t.kappa - slack, t.slope, t.kappa));
  }
  return PiSeries(ctx, r);
}

// (1+pi) d/dpi.
inline PiSeries partial(const PiSeries& f) {
  const PrimeContext& ctx = f.ctx();
  const int p = ctx.p();
  const Series& s = f.series();
  const int D = s.is_exact() ? s.degree() : s.degree() - 1;
  if (D < 0) throw Error(Errc::PrecisionExhausted, "derivative of a series with no known coefficients");
  std::vector<Padic> c(D + 1, Padic::exact_zero(p));
  for (int n = 0; n <= D; ++n) {
    Padic a = s.coeff(n + 1);
    Padic b = s.coeff(n);
    c[n] = (a.is_exact_zero() ? a : ctx.integer(n + 1) * a) + (b.is_exact_zero() || n == 0 ? Padic::exact_zero(p) : ctx.integer(n) * b);
  }
  Tail t = Tail::none();
  if (!s.is_exact()) {
    const Tail& st = s.tail();
    const int tau = s.global_tau(st.slope, st.kappa);
    t = Tail::bound(tau <= kNoBound / 2 ? kNoBound : tau - st.kappa, st.slope, st.kappa);
  }
  return PiSeries(ctx, Series(p, std::move(c), t));
}

// t = log(1+pi) truncated at NPi.
inline PiSeries log1p_series(const PrimeContext& ctx) {
  const int p = ctx.p();
  std::vector<Padic> c(ctx.NPi() + 1, Padic::exact_zero(p));
  for (int n = 1; n <= ctx.NPi(); ++n) c[n] = ctx.rational(n % 2 == 1 ? 1 : -1, n);
  return PiSeries(ctx, Series(p, std::move(c), Tail::bound(0, 0, 1)));
}

inline PiSeries t_mult(const PiSeries& f) { return log1p_series(f.ctx()) * f; }

inline PiSeries ell_apply(std::int64_t j, const PiSeries& f) {
  PiSeries td = t_mult(partial(f));
  if (j == 0) return -td;
  return f.ctx().integer(j) * f - td;
}

// F with (1 - a phi) F = rhs, solved degree by degree:
//   F_k (1 - a p^k) = rhs_k + a sum_{i<k} F_i [pi^k] phi(pi)^i.
inline PiSeries solve_one_minus_aphi(const Padic& a, const PiSeries& rhs) {
  const PrimeContext& ctx = rhs.ctx();
  const int p = ctx.p();
  if (!a.is_exact_zero() && a.valuation() < 0) throw Error(Errc::PreconditionViolated, "v_p(a) must be >= 0");
  const Padic one_minus_a = ctx.one() - a;
  if (one_minus_a.is_zero()) throw Error(Errc::NotInvertible, "1 - a vanishes");
  const Series& s = rhs.series();
  const int D = s.is_exact() ? ctx.NPi() : s.degree();
  std::vector<Padic> F(D + 1, Padic::exact_zero(p));
  Padic pk = ctx.one();
  for (int k = 0; k <= D; ++k) {
    Padic acc = s.coeff(k);
    Padic mix = Padic::exact_zero(p);
    for (int i = 0; i < k; ++i) {
      if (F[i].is_exact_zero() || p * i < k) continue;
      const Padic& e = ctx.phi_pow(i, k);
      if (e.is_exact_zero()) continue;
      mix += F[i] * e;
    }
    acc += a * mix;
    Padic denom = ctx.one() - a * pk;
    F[k] = acc / denom;
    pk = pk * ctx.integer(p);
  }
  Series out(p, std::move(F), Tail::none());
  const int k = s.is_exact() ? 0 : s.tail().kappa;
  int tau = std::min(s.global_tau(0, k), out.global_tau(0, k));
  if (a.is_exact_zero() && s.is_exact() && s.degree() <= D) return PiSeries(ctx, out);
  return PiSeries(ctx, out.with_tail(Tail::bound(tau, 0, k)));
}

// Fixed-point form of the same solve: constant term first, then
// G <- a phi(G) + (rhs - rhs(0)) with a monitor on the update size.
inline PiSeries solve_one_minus_aphi_iterative(const Padic& a, const PiSeries& rhs) {
  const PrimeContext& ctx = rhs.ctx();
  const int p = ctx.p();
  const Padic one_minus_a = ctx.one() - a;
  if (one_minus_a.is_zero()) throw Error(Errc::NotInvertible, "1 - a vanishes");
  const Padic F0 = rhs.coeff(0) / one_minus_a;
  PiSeries base = rhs - PiSeries::constant(ctx, rhs.coeff(0));
  const int D = rhs.series().is_exact() ? ctx.NPi() : rhs.degree();
  // the constant of base is zero at its precision; make it exactly zero
  std::vector<Padic> bc(D + 1, Padic::exact_zero(p));
  for (int n = 1; n <= std::min(D, base.degree()); ++n) bc[n] = base.coeff(n);
  Tail bt = rhs.series().is_exact() ? Tail::none() : rhs.series().tail();
  PiSeries b(ctx, Series(p, bc, bt));
  // phi(F0) = F0 contributes a*F0 to the constant only, already accounted for.
  PiSeries G = b;
  const int limit = ctx.Np() + detail::ceil_log(ctx.NPi(), p) + 2;
  int stale = 0;
  int last_change = kInfPrec;
  for (int it = 0;; ++it) {
    PiSeries next = a * frobenius_phi(G) + b;
    SeriesComparison c = compare(next, G);
    G = next;
    if (c.equal) break;
    if (c.first_mismatch >= last_change) ++stale;
    else stale = 0;
    last_change = c.first_mismatch;
    if (stale > limit || it > 64 * limit) throw Error(Errc::NoConvergence, "fixed-point update does not shrink");
  }
  std::vector<Padic> out = G.series().coeffs();
  out[0] = F0;
  return PiSeries(ctx, Series(p, std::move(out), G.series().tail()));
}

// f(zeta_{p^n} - 1), with the tail folded into the reported precision.
inline CycloScalar eval_at_cyclo(const PiSeries& f, int n) {
  const PrimeContext& ctx = f.ctx();
  const int p = ctx.p();
  if (n < 1) throw Error(Errc::PreconditionViolated, "level must be >= 1");
  const int e = CycloScalar::ram_index(p, n);
  if (ctx.NPi() < e) throw Error(Errc::PrecisionExhausted, "pi-degree cap below the ramification index");
  // Eisenstein polynomial Phi_{p^n}(1+y) = sum_{k<p} (1+y)^{k p^{n-1}}, monic of degree e.
  const int step = static_cast<int>(detail::pow_u64(p, n - 1));
  auto C = detail::binomial_table(p, e + 1);
  std::vector<Padic> eis(e + 1, Padic::exact_zero(p));
  for (int k = 0; k < p; ++k) {
    int m = k * step;
    for (int i = 0; i <= m; ++i) eis[i] += C[m][i];
  }
  const Series& s = f.series();
  std::vector<Padic> acc(e, Padic::exact_zero(p));
  for (int k = s.degree(); k >= 0; --k) {
    // acc <- acc * y + c_k, reducing y^e = -sum_{i<e} eis_i y^i
    Padic top = acc[e - 1];
    for (int i = e - 1; i >= 1; --i) acc[i] = acc[i - 1];
    acc[0] = Padic::exact_zero(p);
    if (!top.is_exact_zero())
      for (int i = 0; i < e; ++i) acc[i] -= top * eis[i];
    acc[0] += s.coeffs()[k];
  }
  CycloScalar r = CycloScalar::from_uniformizer_coords(p, n, acc);
  if (!s.is_exact()) {
    const Tail& t = s.tail();
    // v((zeta-1)^m) = m/e; take the floor of the tail valuation.
    int cap = tail_min(s.degree(), p, t.kappa, [&](std::int64_t m) {
      int b = t.at(m, p);
      return b <= kNoBound / 2 ? kNoBound : static_cast<int>(detail::floor_div(static_cast<std::int64_t>(b) * e + m, e));
    });
    if (cap < 1 - 1000) throw Error(Errc::PrecisionExhausted, "tail has no usable bound");
    r = r.cap_abs(cap);
  }
  return r;
}

}  // namespace prexp
