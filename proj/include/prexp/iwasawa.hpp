#pragma once

// Truncated Iwasawa algebra Z_p[Delta] (x) Z_p[[T]], T = gamma_1 - 1 with
// chi(gamma_1) = 1 + p. An element is stored through its omega^i components:
// branch i is the series b_i(T) with value omega^i(delta) on delta in Delta,
// so multiplication is branchwise and evaluation at omega^i chi^r reads
// branch i at T = (1+p)^r - 1.

#include <vector>

#include "prexp/robba.hpp"

namespace prexp {

struct CharacterSpec {
  std::int64_t tame = 0;
  std::int64_t wt = 0;

  // chi^r itself: tame index r mod (p-1).
  static CharacterSpec chi_power(std::int64_t r) { return {r, r}; }
};

namespace detail {

// Working precision for exactly known integers.
inline int wide_prec(int p) { return max_digits(p) - 2; }

// s(c) = log<c> / log(1+p), computed to the wide precision.
inline Padic gamma_exponent(int p, std::int64_t c) {
  if (mod_signed(c, p) == 0) throw Error(Errc::PreconditionViolated, "c must be prime to p");
  const int W = wide_prec(p);
  Padic cw = Padic::from_int(p, c, W);
  Padic unit_part = cw / teichmueller(p, c, W);
  Padic num = log_one_unit(unit_part);
  Padic den = log_one_unit(Padic::from_int(p, 1 + p, W));
  return num / den;
}

// Binomial series (1+T)^s truncated at degree D, integral tail.
inline Series binomial_series(int p, const Padic& s, int D, int rel_out) {
  const int W = wide_prec(p);
  std::vector<Padic> v(D + 1, Padic::exact_zero(p));
  Padic b = Padic::from_int(p, 1, W);
  v[0] = b.cap_rel(rel_out);
  for (int n = 1; n <= D; ++n) {
    b = b * (s - Padic::from_int(p, n - 1, W)) / Padic::from_int(p, n, W);
    v[n] = b.is_exact_zero() ? b : b.cap_rel(rel_out);
  }
  return Series(p, std::move(v), Tail::bound(0));
}

}  // namespace detail

class IwasawaElement {
 public:
  IwasawaElement(const PrimeContext& ctx, std::vector<Series> branches) : ctx_(ctx), b_(std::move(branches)) {
    if (static_cast<int>(b_.size()) != ctx_.p() - 1)
      throw Error(Errc::PreconditionViolated, "an Iwasawa element needs p-1 branches");
    for (auto& s : b_)
      if (s.degree() > ctx_.NT()) s = s.truncated(ctx_.NT());
  }

  static IwasawaElement zero(const PrimeContext& ctx) {
    return IwasawaElement(ctx, std::vector<Series>(ctx.p() - 1, Series::zero(ctx.p())));
  }
  static IwasawaElement scalar(const PrimeContext& ctx, const Padic& c) {
    return IwasawaElement(ctx, std::vector<Series>(ctx.p() - 1, Series::constant(c, ctx.p())));
  }
  static IwasawaElement one(const PrimeContext& ctx) { return scalar(ctx, ctx.one()); }
  // The same T-series on every branch (an element of Z_p[[Gamma_1]]).
  static IwasawaElement from_gamma1_series(const PrimeContext& ctx, const Series& s) {
    return IwasawaElement(ctx, std::vector<Series>(ctx.p() - 1, s));
  }
  // A single series on branch i, zero elsewhere.
  static IwasawaElement on_branch(const PrimeContext& ctx, std::int64_t i, const Series& s) {
    IwasawaElement r = zero(ctx);
    r.b_[detail::mod_signed(i, ctx.p() - 1)] = s;
    return r;
  }

  const PrimeContext& ctx() const { return ctx_; }
  const std::vector<Series>& branches() const { return b_; }
  const Series& branch(std::int64_t i) const { return b_[detail::mod_signed(i, ctx_.p() - 1)]; }

  bool is_integral() const {
    for (const auto& s : b_) {
      if (s.is_exact()) {
        if (s.global_tau(0, 0) < 0) return false;
      } else if (s.global_tau(s.tail().slope, s.tail().kappa) < 0 || s.tail().kappa > 0 || s.tail().slope < 0) {
        return false;
      }
    }
    return true;
  }

  IwasawaElement map(const std::function<Series(const Series&)>& f) const {
    std::vector<Series> r;
    for (const auto& s : b_) r.push_back(f(s));
    return IwasawaElement(ctx_, std::move(r));
  }

  friend IwasawaElement operator+(const IwasawaElement& a, const IwasawaElement& b) {
    std::vector<Series> r;
    for (size_t i = 0; i < a.b_.size(); ++i) r.push_back(a.b_[i] + b.b_[i]);
    return IwasawaElement(a.ctx_, std::move(r));
  }
  friend IwasawaElement operator-(const IwasawaElement& a, const IwasawaElement& b) {
    std::vector<Series> r;
    for (size_t i = 0; i < a.b_.size(); ++i) r.push_back(a.b_[i] - b.b_[i]);
    return IwasawaElement(a.ctx_, std::move(r));
  }
  friend IwasawaElement operator*(const IwasawaElement& a, const IwasawaElement& b) {
    std::vector<Series> r;
    for (size_t i = 0; i < a.b_.size(); ++i) r.push_back(mul(a.b_[i], b.b_[i], a.ctx_.NT()));
    return IwasawaElement(a.ctx_, std::move(r));
  }
  friend IwasawaElement operator*(const Padic& c, const IwasawaElement& a) {
    return a.map([&](const Series& s) { return s.scaled(c); });
  }
  IwasawaElement operator-() const {
    return map([](const Series& s) { return -s; });
  }

 private:
  PrimeContext ctx_;
  std::vector<Series> b_;
};

inline SeriesComparison compare(const IwasawaElement& a, const IwasawaElement& b, int max_degree = -1) {
  SeriesComparison r;
  for (size_t i = 0; i < a.branches().size(); ++i) {
    auto c = compare(a.branches()[i], b.branches()[i], max_degree);
    r.min_prec = std::min(r.min_prec, c.min_prec);
    if (!c.equal && r.equal) {
      r.equal = false;
      r.first_mismatch = c.first_mismatch;
    }
  }
  return r;
}

// sigma_c with chi(sigma_c) = c.
inline IwasawaElement group_like_sigma(std::int64_t c, const PrimeContext& ctx) {
  const int p = ctx.p();
  const Padic s = detail::gamma_exponent(p, c);
  const Series tpart = detail::binomial_series(p, s, ctx.NT(), ctx.Np());
  std::vector<Series> br;
  for (int i = 0; i < p - 1; ++i) br.push_back(tpart.scaled(ctx.omega(c).pow(i)));
  return IwasawaElement(ctx, std::move(br));
}

// gamma_1^k.
inline IwasawaElement gamma1_power(std::int64_t k, const PrimeContext& ctx) {
  return IwasawaElement::from_gamma1_series(
      ctx, detail::binomial_series(ctx.p(), Padic::from_int(ctx.p(), k, detail::wide_prec(ctx.p())), ctx.NT(), ctx.Np()));
}

// (1+p)^r - 1, exactly zero for r = 0.
inline Padic gamma1_character_point(const PrimeContext& ctx, std::int64_t r) {
  if (r == 0) return ctx.zero();
  const int p = ctx.p();
  const int W = detail::wide_prec(p);
  Padic x = Padic::from_int(p, 1 + p, W).pow(r) - Padic::from_int(p, 1, W);
  return x.cap_rel(ctx.Np());
}

inline Padic evaluate_character(const IwasawaElement& lam, const CharacterSpec& chi) {
  return evaluate(lam.branch(chi.tame), gamma1_character_point(lam.ctx(), chi.wt));
}

inline IwasawaElement involution_iota(const IwasawaElement& lam) {
  const PrimeContext& ctx = lam.ctx();
  const int p = ctx.p();
  std::vector<Padic> g(ctx.NT() + 1, Padic::exact_zero(p));
  for (int k = 1; k <= ctx.NT(); ++k) g[k] = ctx.integer(k % 2 == 0 ? 1 : -1);
  const Series inner(p, std::move(g), Tail::bound(0));
  std::vector<Series> br(p - 1);
  for (int i = 0; i < p - 1; ++i) br[i] = compose(lam.branch(-i), inner, ctx.NT());
  return IwasawaElement(ctx, std::move(br));
}

// Tw_m: gamma -> chi(gamma)^m gamma.
inline IwasawaElement twist_tw(std::int64_t m, const IwasawaElement& lam) {
  if (m == 0) return lam;
  const PrimeContext& ctx = lam.ctx();
  const int p = ctx.p();
  const Padic u1 = gamma1_character_point(ctx, m) + ctx.one();
  const Padic u0 = u1 - ctx.one();
  const auto binom = detail::binomial_table(p, ctx.NT() + 1);
  std::vector<Series> br(p - 1);
  for (int i = 0; i < p - 1; ++i) br[i] = compose_affine(lam.branch(i + m), u0, u1, binom);
  return IwasawaElement(ctx, std::move(br));
}

// log(gamma_1)/log(1+p) = log(1+T)/log(1+p) on every branch; acts as t d on (R+)^{psi=0}.
inline IwasawaElement nabla_element(const PrimeContext& ctx) {
  const int p = ctx.p();
  std::vector<Padic> c(ctx.NT() + 1, Padic::exact_zero(p));
  for (int n = 1; n <= ctx.NT(); ++n) c[n] = ctx.rational(n % 2 == 1 ? 1 : -1, n) / ctx.log_gamma1();
  return IwasawaElement::from_gamma1_series(ctx, Series(p, std::move(c), Tail::bound(-1, 0, 1)));
}

// l_j = j - nabla.
inline IwasawaElement ell_element(std::int64_t j, const PrimeContext& ctx) {
  return IwasawaElement::scalar(ctx, j == 0 ? ctx.zero() : ctx.integer(j)) - nabla_element(ctx);
}

// Coordinates on the group basis: f_a(T) with lambda = sum_a [omega(a)] f_a(gamma_1 - 1).
inline std::vector<Series> group_coordinates(const IwasawaElement& lam) {
  const PrimeContext& ctx = lam.ctx();
  const int p = ctx.p();
  const Padic inv = ctx.rational(1, p - 1);
  std::vector<Series> out;
  for (int a = 1; a < p; ++a) {
    Series acc = Series::zero(p);
    const Padic w_inv = ctx.omega(a).inverse();
    Padic w = ctx.one();
    for (int i = 0; i < p - 1; ++i) {
      acc = acc + lam.branch(i).scaled(w);
      w = w * w_inv;
    }
    out.push_back(acc.scaled(inv));
  }
  return out;
}

// lambda . (1+pi) in (R+)^{psi=0}.
inline PiSeries amice_realize(const IwasawaElement& lam) {
  const PrimeContext& ctx = lam.ctx();
  const int p = ctx.p();
  const int NPi = ctx.NPi();
  const int W = detail::wide_prec(p);
  const auto coords = group_coordinates(lam);
  int D = 0;
  for (const auto& f : coords) D = std::max(D, f.degree());
  const auto C = detail::binomial_table(p, D + 1);

  std::vector<Padic> out(NPi + 1, Padic::exact_zero(p));
  int tau = kInfPrec;
  int kappa = 0;
  bool exact_t = true;
  int tail_tau = kInfPrec;
  int tail_kappa = 0;
  for (int a = 1; a < p; ++a) {
    const Series& f = coords[a - 1];
    if (f.is_exact_zero()) continue;
    // (1+pi)^{omega(a)(1+p)^s} for s = 0..deg f
    std::vector<Series> pw;
    Padic x = ctx.omega(a);
    const Padic step = Padic::from_int(p, 1 + p, W);
    for (int s = 0; s <= f.degree(); ++s) {
      Series m1 = binomial_minus_one(ctx, x, NPi);
      std::vector<Padic> c = m1.coeffs();
      c[0] = ctx.one();
      pw.emplace_back(p, std::move(c));
      x = x * step;
    }
    for (int k = 0; k <= f.degree(); ++k) {
      const Padic& fk = f.coeffs()[k];
      if (fk.is_exact_zero()) continue;
      for (int s = 0; s <= k; ++s) {
        Padic w = C[k][s];
        if ((k - s) % 2 == 1) w = -w;
        const Padic fw = fk * w;
        for (int n = 0; n <= NPi; ++n) out[n] += fw * pw[s].coeffs()[n];
      }
    }
    const int sl = f.is_exact() ? 0 : std::min(0, f.tail().slope);
    const int kp = f.is_exact() ? 0 : f.tail().kappa;
    tau = std::min(tau, f.global_tau(sl, kp));
    kappa = std::max(kappa, kp);
    if (!f.is_exact()) {
      exact_t = false;
      tail_tau = std::min(tail_tau, f.tail().tau);
      tail_kappa = std::max(tail_kappa, f.tail().kappa);
    }
  }
  Series r(p, std::move(out), Tail::none());
  if (!exact_t) {
    // dropped T^k (k > D) terms: v([pi^n] (gamma_1 - 1)^k (1+pi)) >= k - v_p(n!)
    const Tail tt = Tail::bound(tail_tau, 0, tail_kappa);
    for (int n = 0; n <= NPi; ++n) {
      const int vf = detail::vp_factorial(n, p);
      int cap = tail_min(D, p, tail_kappa, [&](std::int64_t k) {
        int b = tt.at(k, p);
        return b <= kNoBound / 2 ? kNoBound : b + static_cast<int>(std::max<std::int64_t>(0, k - vf));
      });
      r = r.cap_coeff(n, cap);
    }
  }
  if (tau >= kInfPrec) return PiSeries::zero(ctx);
  r = r.with_tail(Tail::bound(tau <= kNoBound / 2 ? kNoBound : tau - kappa, 0, kappa));
  return PiSeries(ctx, r);
}

// Element of Z_p[(Z/p^n)^x], indexed by residues mod p^n (non-units unused).
class GroupRingElement {
 public:
  GroupRingElement(int p, int level) : p_(p), level_(level) {
    if (level < 1) throw Error(Errc::PreconditionViolated, "level must be >= 1");
    c_.assign(detail::pow_u64(p, level), Padic::exact_zero(p));
  }
  static GroupRingElement basis(int p, int level, std::int64_t g, const Padic& coeff) {
    GroupRingElement r(p, level);
    r.at(g) = coeff;
    return r;
  }

  int prime() const { return p_; }
  int level() const { return level_; }
  std::int64_t modulus() const { return static_cast<std::int64_t>(c_.size()); }
  Padic& at(std::int64_t g) {
    auto k = detail::mod_signed(g, c_.size());
    if (k % p_ == 0) throw Error(Errc::PreconditionViolated, "group element must be a unit");
    return c_[k];
  }
  const Padic& get(std::int64_t g) const { return c_[detail::mod_signed(g, c_.size())]; }

  bool is_zero() const {
    for (const auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }
  int abs_prec() const {
    int r = kInfPrec;
    for (const auto& x : c_) r = std::min(r, x.abs_prec());
    return r;
  }
  GroupRingElement cap_abs(int N) const {
    GroupRingElement r = *this;
    for (size_t k = 0; k < c_.size(); ++k) {
      if (k % p_ == 0) continue;
      r.c_[k] = c_[k].is_exact_zero() ? Padic::zero_mod(p_, N) : c_[k].cap_abs(N);
    }
    return r;
  }

  friend GroupRingElement operator+(const GroupRingElement& a, const GroupRingElement& b) {
    check(a, b);
    GroupRingElement r = a;
    for (size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.c_[k] + b.c_[k];
    return r;
  }
  friend GroupRingElement operator-(const GroupRingElement& a, const GroupRingElement& b) {
    check(a, b);
    GroupRingElement r = a;
    for (size_t k = 0; k < r.c_.size(); ++k) r.c_[k] = a.c_[k] - b.c_[k];
    return r;
  }
  friend GroupRingElement operator*(const Padic& s, const GroupRingElement& a) {
    GroupRingElement r = a;
    for (auto& x : r.c_) x = s * x;
    return r;
  }
  friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b) {
    check(a, b);
    const auto N = static_cast<std::uint64_t>(a.c_.size());
    GroupRingElement r(a.p_, a.level_);
    for (std::uint64_t i = 0; i < N; ++i) {
      if (a.c_[i].is_exact_zero()) continue;
      for (std::uint64_t j = 0; j < N; ++j) {
        if (b.c_[j].is_exact_zero()) continue;
        auto k = detail::mulmod(i, j, N);
        r.c_[k] += a.c_[i] * b.c_[j];
      }
    }
    return r;
  }

 private:
  static void check(const GroupRingElement& a, const GroupRingElement& b) {
    if (a.level_ != b.level_ || a.p_ != b.p_) throw Error(Errc::LevelMismatch, "group ring levels differ");
  }

  int p_;
  int level_;
  std::vector<Padic> c_;
};

inline bool congruent(const GroupRingElement& a, const GroupRingElement& b) { return (a - b).is_zero(); }

// Ring map g -> chi^{-r}(g) [g mod p^n].
inline GroupRingElement cyclo_moment(const IwasawaElement& lam, std::int64_t r, int n) {
  const PrimeContext& ctx = lam.ctx();
  const int p = ctx.p();
  if (n < 1) throw Error(Errc::PreconditionViolated, "level must be >= 1");
  if (n > ctx.Np()) throw Error(Errc::PrecisionExhausted, "level exceeds the p-adic precision");
  const std::int64_t order = static_cast<std::int64_t>(detail::pow_u64(p, n - 1));
  if (ctx.NT() < order) throw Error(Errc::PrecisionExhausted, "T-degree cap below p^{n-1}");
  const int W = detail::wide_prec(p);

  // U = (1+p)^{-r} [1+p] - 1
  const Padic g1 = Padic::from_int(p, 1 + p, W).pow(-r).cap_rel(ctx.Np());
  GroupRingElement U = GroupRingElement::basis(p, n, 1 + p, g1) - GroupRingElement::basis(p, n, 1, ctx.one());

  const auto coords = group_coordinates(lam);
  GroupRingElement out(p, n);
  for (int a = 1; a < p; ++a) {
    const Series& f = coords[a - 1];
    if (f.is_exact_zero()) continue;
    GroupRingElement acc(p, n);
    GroupRingElement pw = GroupRingElement::basis(p, n, 1, ctx.one());
    for (int k = 0; k <= f.degree(); ++k) {
      if (!f.coeffs()[k].is_exact_zero()) acc = acc + f.coeffs()[k] * pw;
      pw = pw * U;
    }
    if (!f.is_exact()) {
      const Tail& t = f.tail();
      int cap = tail_min(f.degree(), p, t.kappa, [&](std::int64_t k) {
        int b = t.at(k, p);
        return b <= kNoBound / 2 ? kNoBound : b + static_cast<int>(k / order);
      });
      acc = acc.cap_abs(cap);
    }
    const Padic wa = ctx.omega(a);
    const auto wres = static_cast<std::int64_t>(wa.residue(n));
    GroupRingElement shift = GroupRingElement::basis(p, n, wres, wa.pow(-r));
    out = out + shift * acc;
  }
  return out;
}

}  // namespace prexp
