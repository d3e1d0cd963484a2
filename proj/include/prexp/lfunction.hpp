#pragma once

// Two-variable layer: elements of O_X (x) Lambda(Gamma) as series in the
// weight variable y = w - k0 with Iwasawa-element coefficients, the
// normalization factors mu_1, mu_2, mu_0, Euler factors E_N, exact division,
// the Perrin-Riou pairing on coefficient vectors, and the two-variable L.

#include <numeric>
#include <string>
#include <vector>

#include "prexp/eigenspace.hpp"
#include "prexp/phigamma.hpp"

namespace prexp {

namespace detail {

// Lower bound for the Gauss norm on the disc v(T) >= 1: min_k v(c_k) + k. It
// bounds every character value and is multiplicative.
inline int iw_content(const IwasawaElement& x) {
  int best = kInfPrec;
  const int p = x.ctx().p();
  for (const auto& s : x.branches()) {
    for (int k = 0; k <= s.degree(); ++k) {
      const Padic& c = s.coeffs()[k];
      if (!c.is_exact_zero()) best = std::min(best, c.valuation() + k);
    }
    if (!s.is_exact()) {
      const Tail& t = s.tail();
      if (t.tau <= kNoBound / 2) return kNoBound;
      best = std::min(best, tail_min(s.degree(), p, t.kappa, [&](std::int64_t n) {
        return static_cast<int>(std::min<std::int64_t>(t.at(n, p) + n, kInfPrec / 4));
      }));
    }
  }
  return best;
}

}  // namespace detail

class LambdaXElement {
 public:
  // parts[n] is the coefficient of y^n; ytail bounds the dropped parts in units 1/(p-1) of slope.
  LambdaXElement(const PrimeContext& ctx, int k0, std::vector<IwasawaElement> parts, Tail ytail = Tail::none())
      : ctx_(ctx), k0_(k0), parts_(std::move(parts)), ytail_(ytail) {
    if (parts_.empty()) parts_.push_back(IwasawaElement::zero(ctx_));
    if (static_cast<int>(parts_.size()) > ctx_.NY() + 1) {
      int tau = ytail_.exact ? kInfPrec : ytail_.tau;
      for (size_t n = ctx_.NY() + 1; n < parts_.size(); ++n) tau = std::min(tau, detail::iw_content(parts_[n]));
      parts_.erase(parts_.begin() + ctx_.NY() + 1, parts_.end());
      ytail_ = Tail::bound(tau >= kInfPrec ? 0 : tau, ytail_.exact ? 0 : ytail_.slope, 0);
    }
  }

  static LambdaXElement zero(const PrimeContext& ctx, int k0) { return LambdaXElement(ctx, k0, {IwasawaElement::zero(ctx)}); }
  static LambdaXElement one(const PrimeContext& ctx, int k0) { return LambdaXElement(ctx, k0, {IwasawaElement::one(ctx)}); }
  static LambdaXElement constant(const IwasawaElement& x, int k0) { return LambdaXElement(x.ctx(), k0, {x}); }
  // A series in y with scalar coefficients.
  static LambdaXElement from_y_series(const PrimeContext& ctx, int k0, const Series& s) {
    std::vector<IwasawaElement> parts;
    for (const auto& c : s.coeffs()) parts.push_back(IwasawaElement::scalar(ctx, c));
    return LambdaXElement(ctx, k0, std::move(parts), s.tail());
  }

  const PrimeContext& ctx() const { return ctx_; }
  int k0() const { return k0_; }
  const std::vector<IwasawaElement>& parts() const { return parts_; }
  const IwasawaElement& part(int n) const { return parts_.at(n); }
  int y_degree() const { return static_cast<int>(parts_.size()) - 1; }
  const Tail& ytail() const { return ytail_; }

  bool is_exact_zero() const {
    if (!ytail_.exact) return false;
    for (const auto& x : parts_)
      for (const auto& s : x.branches())
        if (!s.is_exact_zero()) return false;
    return true;
  }

  LambdaXElement map_parts(const std::function<IwasawaElement(const IwasawaElement&)>& f) const {
    std::vector<IwasawaElement> v;
    for (const auto& x : parts_) v.push_back(f(x));
    return LambdaXElement(ctx_, k0_, std::move(v), ytail_);
  }

  friend LambdaXElement operator+(const LambdaXElement& a, const LambdaXElement& b) { return combine(a, b, false); }
  friend LambdaXElement operator-(const LambdaXElement& a, const LambdaXElement& b) { return combine(a, b, true); }
  LambdaXElement operator-() const {
    return map_parts([](const IwasawaElement& x) { return -x; });
  }
  friend LambdaXElement operator*(const Padic& c, const LambdaXElement& a) {
    LambdaXElement r = a.map_parts([&](const IwasawaElement& x) { return c * x; });
    if (!r.ytail_.exact && r.ytail_.tau > kNoBound / 2 && !c.is_exact_zero()) r.ytail_.tau += c.valuation();
    return r;
  }
  friend LambdaXElement operator*(const IwasawaElement& c, const LambdaXElement& a) {
    LambdaXElement r = a.map_parts([&](const IwasawaElement& x) { return c * x; });
    if (!r.ytail_.exact && r.ytail_.tau > kNoBound / 2) {
      const int cc = detail::iw_content(c);
      r.ytail_.tau = cc <= kNoBound / 2 ? kNoBound : r.ytail_.tau + std::min(cc, 0);
    }
    return r;
  }
  friend LambdaXElement operator*(const LambdaXElement& a, const LambdaXElement& b) {
    check(a, b);
    const PrimeContext& ctx = a.ctx_;
    const int cap = ctx.NY();
    const bool ea = a.ytail_.exact, eb = b.ytail_.exact;
    int D;
    bool exact = false;
    if (ea && eb) {
      D = std::min(a.y_degree() + b.y_degree(), cap);
      exact = a.y_degree() + b.y_degree() <= cap;
    } else if (ea) {
      D = std::min(b.y_degree(), cap);
    } else if (eb) {
      D = std::min(a.y_degree(), cap);
    } else {
      D = std::min({a.y_degree(), b.y_degree(), cap});
    }
    std::vector<IwasawaElement> v(D + 1, IwasawaElement::zero(ctx));
    for (int i = 0; i <= std::min(D, a.y_degree()); ++i)
      for (int j = 0; j <= std::min(D - i, b.y_degree()); ++j) v[i + j] = v[i + j] + a.parts_[i] * b.parts_[j];
    Tail t = Tail::none();
    if (!exact) {
      int s = kInfPrec;
      if (!ea) s = std::min(s, a.ytail_.slope);
      if (!eb) s = std::min(s, b.ytail_.slope);
      const int ta = a.content(s), tb = b.content(s);
      t = (ta <= kNoBound / 2 || tb <= kNoBound / 2) ? Tail::bound(kNoBound, s, 0) : Tail::bound(ta + tb, s, 0);
    }
    return LambdaXElement(ctx, a.k0_, std::move(v), t);
  }

  // Lower bound tau with v(part_n) >= tau + slope n/(p-1) for all n.
  int content(int slope) const {
    const int p = ctx_.p();
    std::int64_t best = kInfPrec;
    for (int n = 0; n <= y_degree(); ++n) {
      const int c = detail::iw_content(parts_[n]);
      if (c >= kInfPrec) continue;
      if (c <= kNoBound / 2) return kNoBound;
      best = std::min<std::int64_t>(best, c + detail::floor_div(-static_cast<std::int64_t>(slope) * n, p - 1));
    }
    if (!ytail_.exact) {
      if (ytail_.slope < slope || ytail_.tau <= kNoBound / 2) return kNoBound;
      best = std::min<std::int64_t>(best, ytail_.tau);
    }
    return static_cast<int>(std::max<std::int64_t>(best, kNoBound));
  }

 private:
  static void check(const LambdaXElement& a, const LambdaXElement& b) {
    if (a.k0_ != b.k0_) throw Error(Errc::PreconditionViolated, "weight centers differ");
  }
  static LambdaXElement combine(const LambdaXElement& a, const LambdaXElement& b, bool subtract) {
    check(a, b);
    const PrimeContext& ctx = a.ctx_;
    int D;
    if (a.ytail_.exact && b.ytail_.exact) D = std::max(a.y_degree(), b.y_degree());
    else if (a.ytail_.exact) D = b.y_degree();
    else if (b.ytail_.exact) D = a.y_degree();
    else D = std::min(a.y_degree(), b.y_degree());
    std::vector<IwasawaElement> v;
    for (int n = 0; n <= D; ++n) {
      IwasawaElement x = n <= a.y_degree() ? a.parts_[n] : IwasawaElement::zero(ctx);
      IwasawaElement y = n <= b.y_degree() ? b.parts_[n] : IwasawaElement::zero(ctx);
      v.push_back(subtract ? x - y : x + y);
    }
    Tail t = Tail::none();
    if (!(a.ytail_.exact && b.ytail_.exact)) {
      int s = kInfPrec;
      if (!a.ytail_.exact) s = std::min(s, a.ytail_.slope);
      if (!b.ytail_.exact) s = std::min(s, b.ytail_.slope);
      const int ta = a.content(s), tb = b.content(s);
      t = Tail::bound(std::min(ta, tb), s, 0);
    }
    return LambdaXElement(ctx, a.k0_, std::move(v), t);
  }

  PrimeContext ctx_;
  int k0_;
  std::vector<IwasawaElement> parts_;
  Tail ytail_;
};

inline SeriesComparison compare(const LambdaXElement& a, const LambdaXElement& b, int max_t_degree = -1,
                                int max_y_degree = -1) {
  SeriesComparison r;
  int D = std::max(a.y_degree(), b.y_degree());
  if (!a.ytail().exact) D = std::min(D, a.y_degree());
  if (!b.ytail().exact) D = std::min(D, b.y_degree());
  if (max_y_degree >= 0) D = std::min(D, max_y_degree);
  const IwasawaElement z = IwasawaElement::zero(a.ctx());
  for (int n = 0; n <= D; ++n) {
    const IwasawaElement& x = n <= a.y_degree() ? a.part(n) : z;
    const IwasawaElement& y = n <= b.y_degree() ? b.part(n) : z;
    auto c = compare(x, y, max_t_degree);
    r.min_prec = std::min(r.min_prec, c.min_prec);
    if (!c.equal && r.equal) {
      r.equal = false;
      r.first_mismatch = n;
    }
  }
  return r;
}

inline LambdaXElement iota(const LambdaXElement& x) {
  return x.map_parts([](const IwasawaElement& e) { return involution_iota(e); });
}

namespace detail {

inline IwasawaElement weight_partial_sum(const LambdaXElement& L, std::int64_t y) {
  const PrimeContext& ctx = L.ctx();
  IwasawaElement acc = L.part(0);
  if (y == 0) return acc;
  const Padic yp = Padic::from_int(ctx.p(), y, wide_prec(ctx.p()));
  Padic pw = ctx.one();
  for (int n = 1; n <= L.y_degree(); ++n) {
    pw = pw * yp;
    acc = acc + pw * L.part(n);
  }
  return acc;
}

// Disc-norm bound for the dropped weight terms at y.
inline int weight_tail_cap(const LambdaXElement& L, std::int64_t y) {
  if (L.ytail().exact || y == 0) return kInfPrec;
  const int p = L.ctx().p();
  const Tail& t = L.ytail();
  const int vy = vp_int(y, p);
  if (static_cast<long>(t.slope) + static_cast<long>(p - 1) * vy <= 0 || t.tau <= kNoBound / 2)
    throw Error(Errc::PrecisionExhausted, "weight series does not converge at this weight");
  return tail_min(L.y_degree(), p, 0, [&](std::int64_t n) {
    return static_cast<int>(std::min<std::int64_t>(t.at(n, p) + n * vy, kInfPrec / 4));
  });
}

}  // namespace detail

// Weight-series evaluation at y = w - k0. The dropped terms are bounded on the
// disc v(T) >= 1, so T-coefficient k is known modulo p^{cap - k}.
inline IwasawaElement evaluate_weight(const LambdaXElement& L, std::int64_t w) {
  const std::int64_t y = w - L.k0();
  IwasawaElement acc = detail::weight_partial_sum(L, y);
  const int cap = detail::weight_tail_cap(L, y);
  if (cap >= kInfPrec) return acc;
  const int p = L.ctx().p();
  return acc.map([&](const Series& s) {
    Series r = s;
    for (int k = 0; k <= r.degree(); ++k) r = r.cap_coeff(k, cap - k);
    Tail bt = r.is_exact() ? Tail::bound(cap, -(p - 1), 0) : r.tail();
    bt.tau = std::min(bt.tau, cap);
    bt.slope = std::min(bt.slope, -(p - 1));
    return r.with_tail(bt);
  });
}

// Character first, then weight.
inline Padic specialize_l(const LambdaXElement& L, std::int64_t w, const CharacterSpec& chi) {
  const PrimeContext& ctx = L.ctx();
  std::vector<Padic> vals;
  for (const auto& x : L.parts()) vals.push_back(evaluate_character(x, chi));
  Series s(ctx.p(), std::move(vals), L.ytail());
  const std::int64_t y = w - L.k0();
  if (y == 0) return s.coeffs()[0];
  return evaluate(s, Padic::from_int(ctx.p(), y, detail::wide_prec(ctx.p())));
}

// Weight first, then character.
inline Padic specialize_l_weight_first(const LambdaXElement& L, std::int64_t w, const CharacterSpec& chi) {
  const std::int64_t y = w - L.k0();
  const Padic v = evaluate_character(detail::weight_partial_sum(L, y), chi);
  const int cap = detail::weight_tail_cap(L, y);
  if (cap >= kInfPrec) return v;
  return v.is_exact_zero() ? Padic::zero_mod(L.ctx().p(), cap) : v.cap_abs(cap);
}

// exp(sign * y * log(u)) as a series in y, for a principal unit u.
inline Series weight_exp_series(const PrimeContext& ctx, const Padic& log_u, int sign) {
  const int p = ctx.p();
  if (log_u.valuation() < 1) throw Error(Errc::PreconditionViolated, "log must have positive valuation");
  const int NY = ctx.NY();
  std::vector<Padic> c(NY + 1, Padic::exact_zero(p));
  Padic term = Padic::from_int(p, 1, detail::wide_prec(p));
  c[0] = term.cap_rel(ctx.Np());
  const Padic L = sign < 0 ? -log_u : log_u;
  for (int n = 1; n <= NY; ++n) {
    term = term * L / Padic::from_int(p, n, detail::wide_prec(p));
    c[n] = term.cap_rel(ctx.Np());
  }
  const int slope = (p - 1) * log_u.valuation() - 1;
  return Series(p, std::move(c), Tail::bound(0, slope, 0));
}

inline Padic log_unit_part(const PrimeContext& ctx, std::int64_t d) {
  const int p = ctx.p();
  const int W = detail::wide_prec(p);
  return log_one_unit(Padic::from_int(p, d, W) / teichmueller(p, d, W));
}

// Y = (1+p)^y - 1 as a series in y.
inline Series weight_coordinate_series(const PrimeContext& ctx) {
  const int p = ctx.p();
  Series e = weight_exp_series(ctx, log_one_unit(Padic::from_int(p, 1 + p, detail::wide_prec(p))), 1);
  std::vector<Padic> c = e.coeffs();
  c[0] = Padic::exact_zero(p);
  return Series(p, std::move(c), e.tail());
}

// An element of R = E<Y/p^{re}> as a series in y.
inline LambdaXElement weight_ring_element(const PrimeContext& ctx, int k0, const Series& inY) {
  return LambdaXElement::from_y_series(ctx, k0, compose(inY, weight_coordinate_series(ctx), ctx.NY()));
}

struct MuFactors {
  LambdaXElement mu1, mu2, mu0;
};

// mu_1 = c^2 - c^{-j} sigma_c; mu_2 = d^2 - d^{j-k0} <d>^{-y} sigma_d; mu_0 = mu_1 mu_2.
inline MuFactors mu_factors(std::int64_t c, std::int64_t d, std::int64_t j, int k0, const PrimeContext& ctx) {
  const int p = ctx.p();
  if (detail::mod_signed(c, p) == 0 || detail::mod_signed(d, p) == 0)
    throw Error(Errc::PreconditionViolated, "c and d must be prime to p");
  if (c * c == 1 || d * d == 1) throw Error(Errc::PreconditionViolated, "c^2 and d^2 must differ from 1");
  const Padic cp = ctx.integer(c), dp = ctx.integer(d);
  IwasawaElement m1 = IwasawaElement::scalar(ctx, cp * cp) - cp.pow(-j) * group_like_sigma(c, ctx);
  LambdaXElement mu1 = LambdaXElement::constant(m1, k0);
  const Series ex = weight_exp_series(ctx, log_unit_part(ctx, d), -1);
  LambdaXElement sig = (dp.pow(j - k0) * LambdaXElement::from_y_series(ctx, k0, ex));
  sig = group_like_sigma(d, ctx) * sig;
  LambdaXElement mu2 = LambdaXElement::constant(IwasawaElement::scalar(ctx, dp * dp), k0) - sig;
  return {mu1, mu2, mu1 * mu2};
}

struct EulerFactor {
  std::int64_t ell = 0;
  Series a_ell;               // a_ell as a series in y
  int weil_weight = 0;        // |a_ell| = ell^{weil_weight/2} (archimedean size data)
  bool a_is_integer = false;  // a_ell constant and integral, stored in a_int
  std::int64_t a_int = 0;
};

inline LambdaXElement euler_en(const std::vector<EulerFactor>& data, int k0, const PrimeContext& ctx) {
  LambdaXElement acc = LambdaXElement::one(ctx, k0);
  for (const auto& f : data) {
    if (f.ell == ctx.p() || detail::mod_signed(f.ell, ctx.p()) == 0) throw Error(Errc::PreconditionViolated, "ell must differ from p");
    LambdaXElement a = LambdaXElement::from_y_series(ctx, k0, f.a_ell);
    LambdaXElement term = LambdaXElement::one(ctx, k0) - involution_iota(group_like_sigma(f.ell, ctx)) * a;
    acc = acc * term;
  }
  return acc;
}

struct EnValue {
  Padic value;
  std::string advisory;
  bool archimedean_zero = false;
};

// prod (1 - a_ell(w) ell^{-m}); the advisory is "guaranteed" when m avoids {w/2, (w+1)/2}.
inline EnValue evaluate_en(const std::vector<EulerFactor>& data, int k0, std::int64_t w, std::int64_t m,
                           const PrimeContext& ctx) {
  const int p = ctx.p();
  Padic acc = ctx.one();
  bool guaranteed = true;
  bool arch_zero = false;
  for (const auto& f : data) {
    const std::int64_t y = w - k0;
    Padic a = y == 0 ? f.a_ell.coeffs()[0] : evaluate(f.a_ell, Padic::from_int(p, y, detail::wide_prec(p)));
    acc = acc * (ctx.one() - a * ctx.integer(f.ell).pow(-m));
    if (2 * m == f.weil_weight || 2 * m == f.weil_weight + 1) guaranteed = false;
    if (f.a_is_integer && m >= 0) {
      long double lm = 1;
      std::int64_t pw = 1;
      bool fits = true;
      for (std::int64_t i = 0; i < m; ++i) {
        lm *= static_cast<long double>(f.ell);
        if (lm > 9.0e18L) fits = false;
        else pw *= f.ell;
      }
      if (fits && pw == f.a_int) arch_zero = true;
    }
  }
  return {acc, guaranteed ? "guaranteed" : "not guaranteed", arch_zero};
}

// q with B q = A, branch by branch, by Weierstrass division; the remainder must vanish.
inline Series divide_series(const Series& A, const Series& B, int cap) {
  const int p = B.prime();
  if (A.is_exact_zero()) return Series::zero(p);
  int m0 = kInfPrec;
  for (const auto& c : B.coeffs())
    if (!c.is_zero()) m0 = std::min(m0, c.valuation());
  if (m0 >= kInfPrec) throw Error(Errc::NotDivisible, "divisor vanishes at working precision");
  int lambda0 = -1;
  for (int k = 0; k <= B.degree(); ++k)
    if (!B.coeffs()[k].is_zero() && B.coeffs()[k].valuation() == m0) {
      lambda0 = k;
      break;
    }
  const Padic scale = Padic::from_int(p, 1, detail::max_digits(p) - 2).shift(-m0);
  const Series Ap = A.scaled(scale), Bp = B.scaled(scale);
  int known = cap;
  if (!A.is_exact()) known = std::min(known, A.degree());
  if (!B.is_exact()) known = std::min(known, B.degree());
  const int Dq = known - lambda0;
  if (Dq < 0) throw Error(Errc::PrecisionExhausted, "no quotient coefficients are determined");

  std::vector<Padic> low(lambda0, Padic::exact_zero(p)), high;
  for (int k = 0; k <= std::min(known, Bp.degree()); ++k) {
    if (k < lambda0) low[k] = Bp.coeffs()[k];
    else high.push_back(Bp.coeffs()[k]);
  }
  const Series P(p, low);
  const Series U(p, high, Tail::bound(0));
  const Series Uinv = inverse_series(U, Dq);

  auto shift_down = [&](const Series& s) {
    std::vector<Padic> v;
    for (int k = lambda0; k <= std::min(s.degree(), known); ++k) v.push_back(s.coeff(k));
    return Series(p, v);
  };
  Series q = Series::zero(p);
  const int limit = 4 * (detail::max_digits(p) + Dq + 4);
  for (int it = 0;; ++it) {
    Series num = Ap.truncated(known) - mul(q, P, known);
    std::vector<Padic> nv;
    for (int k = 0; k <= known; ++k) nv.push_back(num.coeff(k));
    Series next = mul(Uinv, shift_down(Series(p, nv)), Dq);
    std::vector<Padic> qv;
    for (int k = 0; k <= Dq; ++k) qv.push_back(k <= next.degree() ? next.coeffs()[k] : Padic::exact_zero(p));
    Series qn(p, qv);
    bool same = compare(qn, q).equal && qn.min_abs_prec() == q.min_abs_prec();
    q = qn;
    if (same || lambda0 == 0) break;
    if (it > limit) throw Error(Errc::NoConvergence, "Weierstrass division does not settle");
  }
  // truncation error reaching q_k through the non-unit part of B
  int tau_q = kInfPrec;
  for (const auto& c : Ap.coeffs())
    if (!c.is_exact_zero()) tau_q = std::min(tau_q, c.valuation());
  if (!Ap.is_exact() && Ap.tail().tau > kNoBound / 2) tau_q = std::min(tau_q, Ap.tail().tau - Ap.tail().kappa);
  if (tau_q >= kInfPrec) tau_q = 0;
  if (lambda0 > 0) {
    for (int k = 0; k <= Dq; ++k)
      q = q.cap_coeff(k, tau_q + static_cast<int>(detail::ceil_div(Dq + 1 - k, lambda0)));
  }
  // remainder: low part of A - qB
  Series prod = mul(q, Bp.truncated(known), lambda0 > 0 ? lambda0 - 1 : 0);
  for (int k = 0; k < lambda0; ++k) {
    Padic r = Ap.coeff(k) - prod.coeff(k);
    if (!r.is_zero()) throw Error(Errc::NotDivisible, "nonzero Weierstrass remainder");
  }
  return q.with_tail(Tail::bound(tau_q, 0, 0));
}

inline IwasawaElement divide_iwasawa(const IwasawaElement& A, const IwasawaElement& B) {
  std::vector<Series> br;
  for (size_t i = 0; i < A.branches().size(); ++i)
    br.push_back(divide_series(A.branches()[i], B.branches()[i], A.ctx().NT()));
  return IwasawaElement(A.ctx(), std::move(br));
}

// w with mu w = v: y-recursion w_n = (v_n - sum_{i<n} mu_{n-i} w_i) / mu_0.
inline LambdaXElement divide_exact(const LambdaXElement& v, const LambdaXElement& mu) {
  const PrimeContext& ctx = v.ctx();
  if (v.k0() != mu.k0()) throw Error(Errc::PreconditionViolated, "weight centers differ");
  int D = ctx.NY();
  if (!v.ytail().exact) D = std::min(D, v.y_degree());
  if (!mu.ytail().exact) D = std::min(D, mu.y_degree());
  std::vector<IwasawaElement> w;
  const IwasawaElement zero = IwasawaElement::zero(ctx);
  bool exhausted = false;
  for (int n = 0; n <= D; ++n) {
    IwasawaElement num = n <= v.y_degree() ? v.part(n) : zero;
    for (int i = 0; i < n; ++i)
      if (n - i <= mu.y_degree()) num = num - mu.part(n - i) * w[i];
    try {
      w.push_back(divide_iwasawa(num, mu.part(0)));
    } catch (const Error& e) {
      // each y-step costs the Weierstrass degree in T-precision
      if (e.code() != Errc::PrecisionExhausted || n == 0) throw;
      exhausted = true;
      break;
    }
  }
  int s = 0;
  if (!v.ytail().exact) s = v.ytail().slope;
  if (!mu.ytail().exact) s = std::min(s, mu.ytail().slope);
  if (exhausted) return LambdaXElement(ctx, v.k0(), std::move(w), Tail::bound(kNoBound, std::max(s, 0), 0));
  LambdaXElement r(ctx, v.k0(), w, Tail::none());
  const bool exact = v.ytail().exact && mu.ytail().exact && mu.y_degree() == 0 && v.y_degree() <= D;
  if (exact) return r;
  const int tau = r.content(std::max(s, 0));
  return LambdaXElement(ctx, v.k0(), std::move(w), Tail::bound(tau >= kInfPrec ? 0 : tau, std::max(s, 0), 0));
}

// Coefficient vector over a free-module basis; iota marks coordinates already carrying the inverted action.
struct BigClass {
  std::vector<LambdaXElement> coords;
  bool iota_tagged = false;
  std::string basis = "std";
};

inline BigClass iota_class(const BigClass& z) {
  BigClass r = z;
  for (auto& c : r.coords) c = iota(c);
  r.iota_tagged = !z.iota_tagged;
  return r;
}

inline BigClass divide_exact(const BigClass& z, const LambdaXElement& mu) {
  BigClass r = z;
  for (auto& c : r.coords) c = divide_exact(c, mu);
  return r;
}

// <x, y> = sum_{ab} x_a iota(y_b) (m'_a, m_b), with iota skipped on tagged coordinates.
inline LambdaXElement pr_pairing(const BigClass& x, const BigClass& y, const PairingData& gram) {
  if (x.basis != y.basis || x.coords.size() != y.coords.size())
    throw Error(Errc::BasisMismatch, "classes use different bases");
  const int n = gram.d() * gram.e();
  if (static_cast<int>(x.coords.size()) != n) throw Error(Errc::BasisMismatch, "coordinate count differs from the pairing size");
  if (!gram.check_adj()) throw Error(Errc::AdjViolated, "pairing is not X-adjoint");
  const PrimeContext& ctx = x.coords[0].ctx();
  const int k0 = x.coords[0].k0();
  const int d = gram.d();
  LambdaXElement acc = LambdaXElement::zero(ctx, k0);
  for (int a = 0; a < n; ++a) {
    if (x.coords[a].is_exact_zero()) continue;
    for (int b = 0; b < n; ++b) {
      if (y.coords[b].is_exact_zero()) continue;
      const Series& g = gram.entry(a / d, a % d, b / d, b % d);
      if (g.is_exact_zero()) continue;
      LambdaXElement yb = y.iota_tagged ? y.coords[b] : iota(y.coords[b]);
      acc = acc + x.coords[a] * yb * weight_ring_element(ctx, k0, g);
    }
  }
  return acc;
}

// beta = sum_{i<e} X^i eta (x) X^{e-1-i}; the tilde form tensors with 1+pi.
struct BetaTilde {
  TensorMA beta;
  PiSeries one_plus_pi;
};

inline BetaTilde beta_tilde(const FreeModuleElement& eta, const PrimeContext& ctx) {
  return {phi_element(eta), PiSeries::one_plus_pi(ctx)};
}

// prod_{j=m}^{h-1} l_j.
inline IwasawaElement exp_factor(std::int64_t m, std::int64_t h, const PrimeContext& ctx) {
  if (h < m) throw Error(Errc::PreconditionViolated, "h must be >= m");
  IwasawaElement acc = IwasawaElement::one(ctx);
  for (std::int64_t j = m; j < h; ++j) acc = acc * ell_element(j, ctx);
  return acc;
}

struct TwoVarL {
  // comps[i] is the coefficient of X^i in A = R[X]/(X^e - Y).
  std::vector<LambdaXElement> comps;
};

struct TwoVarData {
  RankOneDelta delta;
  Padic eta;
  PadicMatrix conj;
  PairingData gram;
  int h = 0;
  // eta lies on this basis vector; c maps it to sum_k conj(k, line) m_k
  int line = 0;
};

// L_{e-1-i} = < z, iota-tagged class E_h eta c(m_line) X^i >, for i < e.
inline TwoVarL two_var_l(const BigClass& z, const TwoVarData& data) {
  const PrimeContext& ctx = z.coords.at(0).ctx();
  const int k0 = z.coords[0].k0();
  const int d = data.gram.d(), e = data.gram.e();
  const std::int64_t m = data.delta.m;
  const std::int64_t span = (m < 0 ? -m : m) + data.h + 2;
  if (!check_le_star(data.delta, -span, span).ok) throw Error(Errc::PreconditionViolated, "condition LE* fails");
  if (data.conj.rows() != d || data.conj.cols() != d) throw Error(Errc::BasisMismatch, "conjugation matrix has the wrong size");
  const IwasawaElement Eh = exp_factor(m, data.h, ctx);
  TwoVarL out;
  out.comps.assign(e, LambdaXElement::zero(ctx, k0));
  for (int i = 0; i < e; ++i) {
    BigClass y;
    y.basis = z.basis;
    y.coords.assign(d * e, LambdaXElement::zero(ctx, k0));
    for (int k = 0; k < d; ++k) {
      const Padic coef = data.conj(k, data.line) * data.eta;
      if (coef.is_exact_zero()) continue;
      y.coords[i * d + k] = LambdaXElement::constant(coef * Eh, k0);
    }
    out.comps[e - 1 - i] = pr_pairing(z, y, data.gram);
  }
  return out;
}

// One-variable construction at weight w from specialized data (e = 1).
inline IwasawaElement one_variable_l(const std::vector<IwasawaElement>& z_x, const TwoVarData& data, std::int64_t w,
                                     int k0, const PrimeContext& ctx) {
  if (data.gram.e() != 1) throw Error(Errc::PreconditionViolated, "the one-variable path needs e = 1");
  const int d = data.gram.d();
  const IwasawaElement Eh = involution_iota(exp_factor(data.delta.m, data.h, ctx));
  const Padic Yx = gamma1_character_point(ctx, w - k0);
  IwasawaElement acc = IwasawaElement::zero(ctx);
  for (int a = 0; a < d; ++a)
    for (int k = 0; k < d; ++k) {
      const Series& g = data.gram.entry(0, a, 0, k);
      if (g.is_exact_zero()) continue;
      const Padic gv = Yx.is_exact_zero() ? g.coeffs()[0] : evaluate(g, Yx);
      const Padic coef = data.conj(k, data.line) * data.eta * gv;
      if (coef.is_exact_zero()) continue;
      acc = acc + coef * (z_x[a] * Eh);
    }
  return acc;
}

struct SignSplit {
  BigClass plus;
  BigClass minus;
  // sign of the part feeding L^+ and L^-, and epsilon(j)
  char l_plus_uses = '+';
  char l_minus_uses = '-';
  char j_sign = '+';
};

inline char epsilon_sign(std::int64_t n) { return (n % 2 == 0) ? '+' : '-'; }

inline SignSplit sign_split(const BigClass& z, const PadicMatrix& conj, std::int64_t j, std::int64_t k0) {
  const int n = conj.rows();
  if (conj.cols() != n || static_cast<int>(z.coords.size()) != n)
    throw Error(Errc::BasisMismatch, "conjugation data does not match the class");
  const int p = conj.prime();
  const PadicMatrix sq = conj * conj;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Padic target = a == b ? Padic::from_int(p, 1, detail::max_digits(p) - 2) : Padic::exact_zero(p);
      if (!(sq(a, b) - target).is_zero()) throw Error(Errc::NotInvolution, "conjugation does not square to the identity");
    }
  const PrimeContext& ctx = z.coords[0].ctx();
  const int k = z.coords[0].k0();
  const Padic half = ctx.rational(1, 2);
  SignSplit r;
  r.plus = z;
  r.minus = z;
  for (int a = 0; a < n; ++a) {
    LambdaXElement cz = LambdaXElement::zero(ctx, k);
    for (int b = 0; b < n; ++b)
      if (!conj(a, b).is_exact_zero()) cz = cz + conj(a, b) * z.coords[b];
    r.plus.coords[a] = half * (z.coords[a] + cz);
    r.minus.coords[a] = half * (z.coords[a] - cz);
  }
  r.l_plus_uses = epsilon_sign(k0 - 1);
  r.l_minus_uses = epsilon_sign(k0);
  r.j_sign = epsilon_sign(j);
  return r;
}

}  // namespace prexp
