#pragma once

// A = R[X]/(X^e - Y) = E<X/p^r> over the weight ring R = E<Y/p^{re}>, free
// A-modules M = A^d, fibers M_{w(x)} = M/(Y - X(x)^e), points M_x = M/(X - X(x)),
// eigenspaces M[x] = ker(X - X(x) | M_{w(x)}), the element Phi of M (x)_R A,
// specializations, and the factorization of an Adj pairing through M'_x.

#include <vector>

#include "prexp/matrix.hpp"
#include "prexp/series.hpp"

namespace prexp {

class AElement {
 public:
  AElement(const PrimeContext& ctx, int e, int r, Series s) : ctx_(ctx), e_(e), r_(r), s_(std::move(s)) {
    if (e < 1) throw Error(Errc::PreconditionViolated, "e must be >= 1");
    const int cap = ctx_.NY() * e_;
    if (s_.degree() > cap) s_ = s_.truncated(cap);
    for (int n = 0; n <= s_.degree(); ++n) {
      const Padic& c = s_.coeffs()[n];
      if (c.is_zero()) continue;
      if (c.valuation() + static_cast<std::int64_t>(r_) * n < 0)
        throw Error(Errc::PreconditionViolated, "coefficient violates the Tate norm bound");
    }
  }

  static AElement zero(const PrimeContext& ctx, int e, int r) { return AElement(ctx, e, r, Series::zero(ctx.p())); }
  static AElement constant(const PrimeContext& ctx, int e, int r, const Padic& c) {
    return AElement(ctx, e, r, Series::constant(c, ctx.p()));
  }
  static AElement monomial(const PrimeContext& ctx, int e, int r, int k, const Padic& c) {
    std::vector<Padic> v(k + 1, Padic::exact_zero(ctx.p()));
    v[k] = c;
    return AElement(ctx, e, r, Series(ctx.p(), std::move(v)));
  }

  const PrimeContext& ctx() const { return ctx_; }
  int e() const { return e_; }
  int r() const { return r_; }
  const Series& series() const { return s_; }

  friend AElement operator+(const AElement& a, const AElement& b) { return AElement(a.ctx_, a.e_, a.r_, a.s_ + b.s_); }
  friend AElement operator-(const AElement& a, const AElement& b) { return AElement(a.ctx_, a.e_, a.r_, a.s_ - b.s_); }
  friend AElement operator*(const AElement& a, const AElement& b) {
    return AElement(a.ctx_, a.e_, a.r_, mul(a.s_, b.s_, a.ctx_.NY() * a.e_));
  }
  friend AElement operator*(const Padic& c, const AElement& a) { return AElement(a.ctx_, a.e_, a.r_, a.s_.scaled(c)); }

  // Multiplication by X^k.
  AElement shift_x(int k) const {
    std::vector<Padic> v(k, Padic::exact_zero(ctx_.p()));
    v.insert(v.end(), s_.coeffs().begin(), s_.coeffs().end());
    Tail t = s_.tail();
    if (!t.exact && t.tau > kNoBound / 2) t.tau += static_cast<int>(detail::floor_div(-static_cast<std::int64_t>(t.slope) * k, ctx_.p() - 1));
    return AElement(ctx_, e_, r_, Series(ctx_.p(), std::move(v), t));
  }

  // Residue modulo X^e - y as coefficients of 1, X, ..., X^{e-1}.
  std::vector<Padic> reduce(const Padic& y) const {
    const int p = ctx_.p();
    std::vector<Padic> out(e_, Padic::exact_zero(p));
    for (int s = 0; s < e_; ++s) {
      std::vector<Padic> g;
      for (int n = s; n <= s_.degree(); n += e_) g.push_back(s_.coeffs()[n]);
      Tail t = Tail::none();
      if (!s_.is_exact()) {
        const Tail& ft = s_.tail();
        t = Tail::bound(ft.tau <= kNoBound / 2
                            ? kNoBound
                            : ft.tau + static_cast<int>(detail::floor_div(static_cast<std::int64_t>(ft.slope) * s, p - 1)) -
                                  ft.kappa * (detail::floor_log(2 * e_, p) + 1),
                        ft.slope * e_, ft.kappa);
      }
      Series gs(p, std::move(g), t);
      out[s] = y.is_exact_zero() ? gs.coeffs()[0] : evaluate(gs, y);
    }
    return out;
  }

  Padic evaluate_at(const Padic& u) const {
    if (u.is_exact_zero()) return s_.coeffs()[0];
    return evaluate(s_, u);
  }

 private:
  PrimeContext ctx_;
  int e_;
  int r_;
  Series s_;
};

struct XPoint {
  Padic value;
  int r = 0;

  XPoint(const Padic& u, int r_) : value(u), r(r_) {
    if (!u.is_exact_zero() && !u.is_zero() && u.valuation() < r)
      throw Error(Errc::PreconditionViolated, "v_p(X(x)) must be >= r");
  }
  Padic weight(int e) const { return value.is_exact_zero() ? value : value.pow(e); }
  bool is_x0() const { return value.is_exact_zero(); }
};

class FreeModuleElement {
 public:
  explicit FreeModuleElement(std::vector<AElement> coords) : c_(std::move(coords)) {
    if (c_.empty()) throw Error(Errc::PreconditionViolated, "rank must be >= 1");
  }
  static FreeModuleElement zero(const PrimeContext& ctx, int d, int e, int r) {
    return FreeModuleElement(std::vector<AElement>(d, AElement::zero(ctx, e, r)));
  }
  static FreeModuleElement basis(const PrimeContext& ctx, int d, int e, int r, int b) {
    FreeModuleElement v = zero(ctx, d, e, r);
    v.c_[b] = AElement::constant(ctx, e, r, ctx.one());
    return v;
  }

  int rank() const { return static_cast<int>(c_.size()); }
  int e() const { return c_[0].e(); }
  const std::vector<AElement>& coords() const { return c_; }
  const AElement& coord(int i) const { return c_[i]; }

  friend FreeModuleElement operator+(const FreeModuleElement& a, const FreeModuleElement& b) {
    check(a, b);
    std::vector<AElement> v;
    for (int i = 0; i < a.rank(); ++i) v.push_back(a.c_[i] + b.c_[i]);
    return FreeModuleElement(std::move(v));
  }
  friend FreeModuleElement operator-(const FreeModuleElement& a, const FreeModuleElement& b) {
    check(a, b);
    std::vector<AElement> v;
    for (int i = 0; i < a.rank(); ++i) v.push_back(a.c_[i] - b.c_[i]);
    return FreeModuleElement(std::move(v));
  }
  friend FreeModuleElement operator*(const AElement& s, const FreeModuleElement& a) {
    std::vector<AElement> v;
    for (const auto& x : a.c_) v.push_back(s * x);
    return FreeModuleElement(std::move(v));
  }
  FreeModuleElement shift_x(int k) const {
    std::vector<AElement> v;
    for (const auto& x : c_) v.push_back(x.shift_x(k));
    return FreeModuleElement(std::move(v));
  }

 private:
  static void check(const FreeModuleElement& a, const FreeModuleElement& b) {
    if (a.rank() != b.rank()) throw Error(Errc::PreconditionViolated, "ranks differ");
  }
  std::vector<AElement> c_;
};

// Element of M_{w(x)} = (E[X]/(X^e - y))^d; coords[b][s] is the X^s coefficient on m_b.
class FiberElement {
 public:
  FiberElement(int p, int e, Padic y, std::vector<std::vector<Padic>> c) : p_(p), e_(e), y_(std::move(y)), c_(std::move(c)) {}
  static FiberElement zero(int p, int d, int e, const Padic& y) {
    return FiberElement(p, e, y, std::vector<std::vector<Padic>>(d, std::vector<Padic>(e, Padic::exact_zero(p))));
  }

  int rank() const { return static_cast<int>(c_.size()); }
  int e() const { return e_; }
  const Padic& y() const { return y_; }
  const std::vector<std::vector<Padic>>& coords() const { return c_; }
  const Padic& at(int b, int s) const { return c_[b][s]; }

  bool is_zero() const {
    for (const auto& row : c_)
      for (const auto& x : row)
        if (!x.is_zero()) return false;
    return true;
  }
  int abs_prec() const {
    int r = kInfPrec;
    for (const auto& row : c_)
      for (const auto& x : row) r = std::min(r, x.abs_prec());
    return r;
  }

  friend FiberElement operator+(const FiberElement& a, const FiberElement& b) {
    FiberElement r = a;
    for (int i = 0; i < a.rank(); ++i)
      for (int s = 0; s < a.e_; ++s) r.c_[i][s] = a.c_[i][s] + b.c_[i][s];
    return r;
  }
  friend FiberElement operator-(const FiberElement& a, const FiberElement& b) {
    FiberElement r = a;
    for (int i = 0; i < a.rank(); ++i)
      for (int s = 0; s < a.e_; ++s) r.c_[i][s] = a.c_[i][s] - b.c_[i][s];
    return r;
  }
  friend FiberElement operator*(const Padic& k, const FiberElement& a) {
    FiberElement r = a;
    for (auto& row : r.c_)
      for (auto& x : row) x = k * x;
    return r;
  }

  FiberElement times_x() const {
    FiberElement r = *this;
    for (auto& row : r.c_) {
      Padic top = row[e_ - 1];
      for (int s = e_ - 1; s >= 1; --s) row[s] = row[s - 1];
      row[0] = y_ * top;
    }
    return r;
  }

  // Multiplication by a polynomial in X.
  FiberElement times_poly(const std::vector<Padic>& poly) const {
    FiberElement acc = zero(p_, rank(), e_, y_);
    FiberElement pw = *this;
    for (size_t k = 0; k < poly.size(); ++k) {
      if (!poly[k].is_exact_zero()) acc = acc + poly[k] * pw;
      pw = pw.times_x();
    }
    return acc;
  }

  // pi_x: substitute X = u.
  std::vector<Padic> at_point(const Padic& u) const {
    std::vector<Padic> out;
    for (const auto& row : c_) {
      Padic acc = Padic::exact_zero(p_);
      for (int s = e_ - 1; s >= 0; --s) acc = acc * u + row[s];
      out.push_back(acc);
    }
    return out;
  }

 private:
  int p_;
  int e_;
  Padic y_;
  std::vector<std::vector<Padic>> c_;
};

// P_x(X) = sum_{i<e} X^i u^{e-1-i}.
inline std::vector<Padic> p_x_polynomial(const XPoint& x, int e) {
  const int p = x.value.prime();
  std::vector<Padic> c(e, Padic::exact_zero(p));
  const Padic one = Padic::from_int(p, 1, detail::max_digits(p) - 2);
  for (int i = 0; i < e; ++i) c[i] = (e - 1 - i == 0) ? one : x.value.pow(e - 1 - i);
  return c;
}

inline FiberElement fiber_of(const FreeModuleElement& v, const XPoint& x) {
  const int e = v.e();
  const Padic y = x.weight(e);
  std::vector<std::vector<Padic>> c;
  for (const auto& a : v.coords()) c.push_back(a.reduce(y));
  return FiberElement(y.prime() ? y.prime() : v.coord(0).ctx().p(), e, y, std::move(c));
}

struct FiberEigenPoint {
  FiberElement fiber;
  FiberElement eigen;
  std::vector<Padic> point;
};

inline FiberEigenPoint fiber_and_eigenspace(const FreeModuleElement& v, const XPoint& x) {
  FiberElement f = fiber_of(v, x);
  FiberElement eig = f.times_poly(p_x_polynomial(x, v.e()));
  std::vector<Padic> pt;
  for (const auto& a : v.coords()) pt.push_back(a.evaluate_at(x.value));
  return {f, eig, pt};
}

// (X - u) n = 0 in the fiber.
inline bool in_eigenspace(const FiberElement& n, const XPoint& x) {
  return (n.times_x() - x.value * n).is_zero();
}

// Element of M (x)_R A: legs[j] is the coefficient of X_2^j (X_2 the A-leg variable).
class TensorMA {
 public:
  explicit TensorMA(std::vector<FreeModuleElement> legs) : legs_(std::move(legs)) {}
  const std::vector<FreeModuleElement>& legs() const { return legs_; }
  int e() const { return static_cast<int>(legs_.size()); }

  // (X (x) 1)
  TensorMA times_x_left() const {
    std::vector<FreeModuleElement> v;
    for (const auto& l : legs_) v.push_back(l.shift_x(1));
    return TensorMA(std::move(v));
  }
  // (1 (x) X): X_2^{e} = Y acts as X^e on the M-leg.
  TensorMA times_x_right() const {
    const int e = this->e();
    std::vector<FreeModuleElement> v(legs_.begin(), legs_.end());
    v[0] = legs_[e - 1].shift_x(e);
    for (int j = 1; j < e; ++j) v[j] = legs_[j - 1];
    return TensorMA(std::move(v));
  }

 private:
  std::vector<FreeModuleElement> legs_;
};

// Phi = sum_{i<e} X^i m (x) X^{e-1-i}.
inline TensorMA phi_element(const FreeModuleElement& m) {
  const int e = m.e();
  std::vector<FreeModuleElement> legs(e, m);
  for (int i = 0; i < e; ++i) legs[e - 1 - i] = m.shift_x(i);
  return TensorMA(std::move(legs));
}

// Evaluate the A-leg at X(x) and reduce the M-leg to the fiber over w(x).
inline FiberElement sp_x(const TensorMA& t, const XPoint& x) {
  const int e = t.e();
  FiberElement acc = fiber_of(t.legs()[0], x);
  for (int j = 1; j < e; ++j) acc = acc + x.value.pow(j) * fiber_of(t.legs()[j], x);
  return acc;
}

inline bool tensors_equal(const TensorMA& a, const TensorMA& b) {
  for (int j = 0; j < a.e(); ++j)
    for (int i = 0; i < a.legs()[j].rank(); ++i) {
      auto c = compare(a.legs()[j].coord(i).series(), b.legs()[j].coord(i).series());
      if (!c.equal) return false;
    }
  return true;
}

// R-bilinear pairing M' (x)_R M -> R on the R-bases X^i m'_a, X^j m_b (i, j < e).
// gram[(i*d + a)][(j*d + b)] is a series in Y.
class PairingData {
 public:
  PairingData(int d, int e, std::vector<std::vector<Series>> gram) : d_(d), e_(e), g_(std::move(gram)) {
    if (d < 1 || e < 1) throw Error(Errc::PreconditionViolated, "rank and e must be >= 1");
    if (static_cast<int>(g_.size()) != d * e) throw Error(Errc::PreconditionViolated, "Gram matrix has the wrong size");
  }

  // (X^i m'_a, X^j m_b) = Y^{floor((i+j)/e)} h_ab((i+j) mod e).
  static PairingData structural(int d, int e, const std::vector<std::vector<std::vector<Series>>>& h) {
    std::vector<std::vector<Series>> g(d * e, std::vector<Series>(d * e));
    for (int i = 0; i < e; ++i)
      for (int a = 0; a < d; ++a)
        for (int j = 0; j < e; ++j)
          for (int b = 0; b < d; ++b) {
            const Series& base = h[a][b][(i + j) % e];
            g[i * d + a][j * d + b] = (i + j) >= e ? shift_y(base) : base;
          }
    return PairingData(d, e, std::move(g));
  }

  int d() const { return d_; }
  int e() const { return e_; }
  const Series& entry(int i, int a, int j, int b) const { return g_[i * d_ + a][j * d_ + b]; }

  // Adj: (X m', m) = (m', X m) on basis elements.
  bool check_adj() const {
    for (int i = 0; i < e_; ++i)
      for (int a = 0; a < d_; ++a)
        for (int j = 0; j < e_; ++j)
          for (int b = 0; b < d_; ++b) {
            Series lhs = i + 1 < e_ ? entry(i + 1, a, j, b) : shift_y(entry(0, a, j, b));
            Series rhs = j + 1 < e_ ? entry(i, a, j + 1, b) : shift_y(entry(i, a, 0, b));
            if (!compare(lhs, rhs).equal) return false;
          }
    return true;
  }

  // Value on fibers over y.
  Padic pair_fibers(const FiberElement& v, const FiberElement& w) const {
    const Padic& y = v.y();
    const int p = y.prime() ? y.prime() : v.coords()[0][0].prime();
    Padic acc = Padic::exact_zero(p);
    for (int i = 0; i < e_; ++i)
      for (int a = 0; a < d_; ++a) {
        const Padic& va = v.at(a, i);
        if (va.is_exact_zero()) continue;
        for (int j = 0; j < e_; ++j)
          for (int b = 0; b < d_; ++b) {
            const Padic& wb = w.at(b, j);
            if (wb.is_exact_zero()) continue;
            const Series& g = entry(i, a, j, b);
            Padic gv = y.is_exact_zero() ? g.coeffs()[0] : evaluate(g, y);
            acc += va * gv * wb;
          }
      }
    return acc;
  }

 private:
  static Series shift_y(const Series& s) {
    std::vector<Padic> v{Padic::exact_zero(s.prime())};
    v.insert(v.end(), s.coeffs().begin(), s.coeffs().end());
    return Series(s.prime(), std::move(v), s.tail());
  }

  int d_;
  int e_;
  std::vector<std::vector<Series>> g_;
};

// The pairing (,)_x on M'_x (x) M[x] in the bases m'_{a,x} and P_x(X) m_b.
struct FactoredPairing {
  PadicMatrix gram;
};

inline FactoredPairing factor_pairing(const PairingData& P, const XPoint& x, const PrimeContext& ctx) {
  if (!P.check_adj()) throw Error(Errc::AdjViolated, "pairing is not X-adjoint");
  const int d = P.d(), e = P.e();
  const int p = ctx.p();
  const Padic y = x.weight(e);
  const auto px = p_x_polynomial(x, e);
  auto basis_fiber = [&](int b) {
    FiberElement f = FiberElement::zero(p, d, e, y);
    auto c = f.coords();
    c[b][0] = ctx.one();
    return FiberElement(p, e, y, c);
  };
  // (X - u) M'_{w(x)} must pair to zero with M[x].
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < e; ++i) {
      FiberElement v = basis_fiber(a);
      for (int k = 0; k < i; ++k) v = v.times_x();
      FiberElement kern = v.times_x() - x.value * v;
      for (int b = 0; b < d; ++b) {
        FiberElement n = basis_fiber(b).times_poly(px);
        if (!P.pair_fibers(kern, n).is_zero())
          throw Error(Errc::AdjViolated, "(X - X(x)) M' is not orthogonal to M[x]");
      }
    }
  PadicMatrix g(p, d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) g(a, b) = P.pair_fibers(basis_fiber(a), basis_fiber(b).times_poly(px));
  return {g};
}

}  // namespace prexp
