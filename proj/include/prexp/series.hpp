#pragma once

// Truncated power series with an explicit bound on the dropped tail.
//
// Coefficients 0..degree are stored. Beyond the degree either every
// coefficient is zero (exact) or
//   v(c_n) >= tau + slope * n / (p - 1) - kappa * floor(log_p n).

#include <algorithm>
#include <functional>
#include <vector>

#include "prexp/padic.hpp"

namespace prexp {

struct Tail {
  bool exact = true;
  int tau = 0;
  int slope = 0;
  int kappa = 0;

  static Tail none() { return {}; }
  static Tail bound(int tau, int slope = 0, int kappa = 0) { return {false, tau, slope, kappa}; }

  int at(std::int64_t n, int p) const {
    if (exact) return kInfPrec;
    if (tau <= kNoBound / 2) return kNoBound;
    return static_cast<int>(tau + detail::ceil_div(static_cast<std::int64_t>(slope) * n, p - 1) -
                            static_cast<std::int64_t>(kappa) * detail::floor_log(n, p));
  }
};

// Minimum of f(n) for n > D, for f growing at least linearly once past the
// log_p corrections. The scan window covers every p-power crossing that
// the linear term has not yet dominated.
inline int tail_min(std::int64_t D, int p, int kappa, const std::function<int(std::int64_t)>& f) {
  const std::int64_t span = 2 * (D + 1) + 64 * static_cast<std::int64_t>(p) * (kappa + 1);
  int best = kInfPrec;
  for (std::int64_t n = D + 1; n <= D + span; ++n) best = std::min(best, f(n));
  return best;
}

class Series {
 public:
  using i64 = std::int64_t;

  Series() = default;
  Series(int p, std::vector<Padic> coeffs, Tail tail = Tail::none())
      : p_(p), c_(std::move(coeffs)), tail_(tail) {
    if (c_.empty()) c_.push_back(Padic::exact_zero(p));
  }

  static Series zero(int p) { return Series(p, {Padic::exact_zero(p)}); }
  static Series constant(const Padic& x, int p) { return Series(p, {x}); }

  int prime() const { return p_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const std::vector<Padic>& coeffs() const { return c_; }
  const Tail& tail() const { return tail_; }
  bool is_exact() const { return tail_.exact; }

  bool known(int n) const { return n <= degree() || tail_.exact; }
  Padic coeff(int n) const {
    if (n <= degree()) return c_[n];
    if (tail_.exact) return Padic::exact_zero(p_);
    throw Error(Errc::PrecisionExhausted, "coefficient beyond the known degree");
  }

  bool is_exact_zero() const {
    if (!tail_.exact) return false;
    for (const auto& x : c_)
      if (!x.is_exact_zero()) return false;
    return true;
  }

  // Lower bound on v(c_n) valid for every n >= 0, relative to the shape
  // slope*n/(p-1) - kappa*floor(log_p n).
  int global_tau(int slope, int kappa) const { return tau_beyond(-1, slope, kappa); }

  // Same bound restricted to n > D.
  int tau_beyond(int D, int slope, int kappa) const {
    std::int64_t best = kInfPrec;
    for (int n = std::max(D + 1, 0); n <= degree(); ++n) {
      if (c_[n].is_exact_zero()) continue;
      std::int64_t b = static_cast<std::int64_t>(c_[n].valuation()) +
                       static_cast<std::int64_t>(kappa) * detail::floor_log(n, p_) +
                       detail::floor_div(-static_cast<std::int64_t>(slope) * n, p_ - 1);
      best = std::min(best, b);
    }
    if (!tail_.exact) {
      if (tail_.slope < slope || tail_.kappa > kappa || tail_.tau <= kNoBound / 2) return kNoBound;
      best = std::min<std::int64_t>(best, tail_.tau);
    }
    return static_cast<int>(std::max<std::int64_t>(best, kNoBound));
  }

  // Smallest absolute precision among known coefficients.
  int min_abs_prec() const {
    int r = kInfPrec;
    for (const auto& x : c_) r = std::min(r, x.abs_prec());
    return r;
  }

  Series truncated(int D) const {
    if (D >= degree()) return *this;
    Tail t;
    if (tail_.exact) {
      t = Tail::bound(tau_beyond(D, 0, 0));
    } else {
      t = Tail::bound(tau_beyond(D, tail_.slope, tail_.kappa), tail_.slope, tail_.kappa);
    }
    if (t.tau >= kInfPrec) t = Tail::none();
    std::vector<Padic> c(c_.begin(), c_.begin() + D + 1);
    return Series(p_, std::move(c), t);
  }

  Series with_tail(Tail t) const {
    Series r = *this;
    r.tail_ = t;
    return r;
  }

  Series map_coeffs(const std::function<Padic(int, const Padic&)>& f) const {
    Series r = *this;
    for (int n = 0; n <= degree(); ++n) r.c_[n] = f(n, c_[n]);
    return r;
  }

  Series cap_coeff(int n, int abs) const {
    Series r = *this;
    r.c_[n] = r.c_[n].is_exact_zero() ? Padic::zero_mod(p_, abs) : r.c_[n].cap_abs(abs);
    return r;
  }

  // Multiply by c.
  Series scaled(const Padic& s) const {
    if (s.is_exact_zero()) return zero(p_);
    Series r = *this;
    for (auto& x : r.c_) x = s * x;
    if (!r.tail_.exact && r.tail_.tau > kNoBound / 2) r.tail_.tau += s.valuation();
    return r;
  }

  Series operator-() const { return scaled(Padic::from_int(p_, -1, detail::max_digits(p_) - 2)); }

  friend Series operator+(const Series& a, const Series& b) {
    const int p = a.p_ ? a.p_ : b.p_;
    int D;
    if (a.tail_.exact && b.tail_.exact) {
      D = std::max(a.degree(), b.degree());
    } else if (a.tail_.exact) {
      D = b.degree();
    } else if (b.tail_.exact) {
      D = a.degree();
    } else {
      D = std::min(a.degree(), b.degree());
    }
    std::vector<Padic> c(D + 1);
    for (int n = 0; n <= D; ++n) c[n] = a.coeff(n) + b.coeff(n);
    Tail t = Tail::none();
    if (!(a.tail_.exact && b.tail_.exact)) {
      int s = kInfPrec, k = 0;
      for (const Series* x : {&a, &b})
        if (!x->tail_.exact) {
          s = std::min(s, x->tail_.slope);
          k = std::max(k, x->tail_.kappa);
        }
      int tau = std::min(a.tau_beyond(D, s, k), b.tau_beyond(D, s, k));
      t = tau >= kInfPrec ? Tail::none() : Tail::bound(tau, s, k);
    }
    return Series(p, std::move(c), t);
  }

  friend Series operator-(const Series& a, const Series& b) { return a + (-b); }

 private:
  int p_ = 0;
  std::vector<Padic> c_;
  Tail tail_;
};

// Product truncated at degree cap.
inline Series mul(const Series& a, const Series& b, int cap) {
  const int p = a.prime() ? a.prime() : b.prime();
  if (a.is_exact_zero() || b.is_exact_zero()) return Series::zero(p);
  const bool ea = a.is_exact(), eb = b.is_exact();
  int D;
  bool exact = false;
  if (ea && eb) {
    D = std::min(a.degree() + b.degree(), cap);
    exact = a.degree() + b.degree() <= cap;
  } else if (ea) {
    D = std::min(b.degree(), cap);
  } else if (eb) {
    D = std::min(a.degree(), cap);
  } else {
    D = std::min({a.degree(), b.degree(), cap});
  }
  std::vector<Padic> c(D + 1, Padic::exact_zero(p));
  const auto& ac = a.coeffs();
  const auto& bc = b.coeffs();
  for (int i = 0; i <= std::min(D, a.degree()); ++i) {
    if (ac[i].is_exact_zero()) continue;
    const int jmax = std::min(D - i, b.degree());
    for (int j = 0; j <= jmax; ++j) {
      if (bc[j].is_exact_zero()) continue;
      c[i + j] += ac[i] * bc[j];
    }
  }
  Tail t = Tail::none();
  if (!exact) {
    int s = kInfPrec;
    if (!ea) s = std::min(s, a.tail().slope);
    if (!eb) s = std::min(s, b.tail().slope);
    if (s >= kInfPrec) s = 0;
    const int ka = ea ? 0 : a.tail().kappa, kb = eb ? 0 : b.tail().kappa;
    const int ta = a.global_tau(s, ka), tb = b.global_tau(s, kb);
    if (ta <= kNoBound / 2 || tb <= kNoBound / 2) t = Tail::bound(kNoBound, s, ka + kb);
    else t = Tail::bound(ta + tb, s, ka + kb);
  }
  return Series(p, std::move(c), t);
}

// f(g) for g with an exactly zero constant term and integral coefficients.
inline Series compose(const Series& f, const Series& g, int cap) {
  const int p = f.prime() ? f.prime() : g.prime();
  if (!g.coeffs()[0].is_exact_zero()) throw Error(Errc::PreconditionViolated, "inner series must vanish at 0");
  if (g.global_tau(0, 0) < 0) throw Error(Errc::PreconditionViolated, "inner series must be integral");
  int D;
  bool exact = false;
  if (f.is_exact() && g.is_exact()) {
    D = std::min(static_cast<int>(std::min<long>(static_cast<long>(f.degree()) * g.degree(), cap)), cap);
    exact = static_cast<long>(f.degree()) * g.degree() <= cap;
  } else if (f.is_exact()) {
    D = std::min(g.degree(), cap);
  } else if (g.is_exact()) {
    D = std::min(f.degree(), cap);
  } else {
    D = std::min({f.degree(), g.degree(), cap});
  }
  const Series gt = g.truncated(D);
  Series acc = Series::constant(f.coeff(std::min(D, f.degree())), p);
  for (int k = std::min(D, f.degree()) - 1; k >= 0; --k) {
    acc = mul(acc, gt, D);
    acc = acc + Series::constant(f.coeff(k), p);
  }
  std::vector<Padic> c(D + 1, Padic::exact_zero(p));
  for (int n = 0; n <= std::min(D, acc.degree()); ++n) c[n] = acc.coeffs()[n];
  Tail t = Tail::none();
  if (!exact) {
    const int s = f.is_exact() ? 0 : std::min(f.tail().slope, 0);
    const int k = f.is_exact() ? 0 : f.tail().kappa;
    t = Tail::bound(f.global_tau(s, k), s, k);
    // an exact outer polynomial keeps the decay of an inner series bounded by its slope
    if (f.is_exact() && !g.is_exact() && g.tail().kappa == 0 && g.tail().slope > 0 &&
        g.global_tau(g.tail().slope, 0) >= 0)
      t = Tail::bound(f.global_tau(0, 0), g.tail().slope, 0);
  }
  return Series(p, std::move(c), t);
}

// 1/u for a series with unit constant term, truncated at degree D.
inline Series inverse_series(const Series& u, int D) {
  const int p = u.prime();
  const Padic u0 = u.coeffs()[0];
  if (u0.is_zero() || u0.valuation() != 0) throw Error(Errc::NotInvertible, "constant term is not a unit");
  const int known = u.is_exact() ? D : std::min(D, u.degree());
  const Padic inv0 = u0.inverse();
  std::vector<Padic> c(known + 1, Padic::exact_zero(p));
  c[0] = inv0;
  for (int n = 1; n <= known; ++n) {
    Padic acc = Padic::exact_zero(p);
    for (int k = 1; k <= std::min(n, u.degree()); ++k)
      if (!u.coeffs()[k].is_exact_zero()) acc += u.coeffs()[k] * c[n - k];
    c[n] = -(acc * inv0);
  }
  Series r(p, std::move(c), Tail::none());
  const int sl = u.is_exact() ? 0 : std::min(0, u.tail().slope);
  const int kp = u.is_exact() ? 0 : u.tail().kappa;
  const int tau = std::min(0, r.global_tau(sl, kp));
  return r.with_tail(Tail::bound(tau, sl, kp));
}

// f(u0 + u1*T) with v(u0) >= 1 and u1 a unit.
inline Series compose_affine(const Series& f, const Padic& u0, const Padic& u1,
                             const std::vector<std::vector<Padic>>& binom) {
  const int p = f.prime();
  const int D = f.degree();
  if (!u0.is_exact_zero() && u0.valuation() < 1) throw Error(Errc::PreconditionViolated, "shift must be divisible by p");
  std::vector<Padic> u0pow(D + 1), u1pow(D + 1);
  u0pow[0] = Padic::from_int(p, 1, detail::max_digits(p) - 2);
  u1pow[0] = u0pow[0];
  for (int k = 1; k <= D; ++k) {
    u0pow[k] = u0pow[k - 1] * u0;
    u1pow[k] = u1pow[k - 1] * u1;
  }
  std::vector<Padic> c(D + 1, Padic::exact_zero(p));
  for (int k = 0; k <= D; ++k) {
    const Padic& ck = f.coeffs()[k];
    if (ck.is_exact_zero()) continue;
    for (int j = 0; j <= k; ++j) c[j] += ck * binom[k][j] * u0pow[k - j];
  }
  for (int j = 0; j <= D; ++j) c[j] = c[j] * u1pow[j];
  Series r(p, std::move(c), Tail::none());
  if (!f.is_exact()) {
    const Tail& ft = f.tail();
    const int v0 = u0.valuation();
    for (int j = 0; j <= D; ++j) {
      int cap = tail_min(D, p, ft.kappa, [&](std::int64_t k) {
        int b = ft.at(k, p);
        return b <= kNoBound / 2 ? kNoBound : b + static_cast<int>(std::min<std::int64_t>((k - j) * v0, kInfPrec / 4));
      });
      r = r.cap_coeff(j, cap);
    }
    const int tau = f.tau_beyond(-1, ft.slope, ft.kappa);
    r = r.with_tail(Tail::bound(tau <= kNoBound / 2 ? kNoBound : tau - ft.kappa, ft.slope, ft.kappa));
  }
  return r;
}

// Value at x, honest about the tail.
inline Padic evaluate(const Series& f, const Padic& x) {
  const int p = f.prime();
  if (x.is_exact_zero()) return f.coeffs()[0];
  Padic acc = f.coeffs()[f.degree()];
  for (int k = f.degree() - 1; k >= 0; --k) acc = acc * x + f.coeffs()[k];
  if (!f.is_exact()) {
    const Tail& t = f.tail();
    const int vx = x.valuation();
    if (static_cast<long>(t.slope) + static_cast<long>(p - 1) * vx <= 0 || t.tau <= kNoBound / 2)
      throw Error(Errc::PrecisionExhausted, "tail does not converge at the evaluation point");
    int cap = tail_min(f.degree(), p, t.kappa, [&](std::int64_t n) {
      return static_cast<int>(std::min<std::int64_t>(t.at(n, p) + n * vx, kInfPrec / 4));
    });
    acc = acc.is_exact_zero() ? Padic::zero_mod(p, cap) : acc.cap_abs(cap);
  }
  return acc;
}

// Coefficientwise comparison over the range known for both series.
struct SeriesComparison {
  bool equal = true;
  int first_mismatch = -1;
  int min_prec = kInfPrec;
};

inline SeriesComparison compare(const Series& a, const Series& b, int max_degree = -1) {
  SeriesComparison r;
  int D = std::max(a.degree(), b.degree());
  if (!a.is_exact()) D = std::min(D, a.degree());
  if (!b.is_exact()) D = std::min(D, b.degree());
  if (max_degree >= 0) D = std::min(D, max_degree);
  for (int n = 0; n <= D; ++n) {
    Padic d = a.coeff(n) - b.coeff(n);
    r.min_prec = std::min(r.min_prec, d.abs_prec());
    if (!d.is_zero() && r.equal) {
      r.equal = false;
      r.first_mismatch = n;
    }
  }
  return r;
}

}  // namespace prexp
