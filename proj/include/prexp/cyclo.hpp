#pragma once

// Elements of K_n = Q_p(zeta_{p^n}) in the power basis 1, zeta, ..., zeta^(e-1)
// with e = (p-1)p^(n-1), reduced modulo the p^n-th cyclotomic polynomial.

#include <vector>

#include "prexp/padic.hpp"

namespace prexp {

namespace detail {

// Binomial coefficients C(k, i) for k < rows, exact to the machine budget.
inline std::vector<std::vector<Padic>> binomial_table(int p, int rows) {
  const int K = max_digits(p);
  const u64 mod = pow_u64(p, K);
  std::vector<std::vector<u64>> raw(rows);
  std::vector<std::vector<Padic>> out(rows);
  for (int k = 0; k < rows; ++k) {
    raw[k].assign(k + 1, 1);
    for (int i = 1; i < k; ++i) raw[k][i] = addmod(raw[k - 1][i - 1], raw[k - 1][i], mod);
    out[k].resize(k + 1);
    for (int i = 0; i <= k; ++i) out[k][i] = Padic::from_residue(p, raw[k][i], K, K - 2);
  }
  return out;
}

}  // namespace detail

class CycloScalar {
 public:
  using i64 = std::int64_t;

  CycloScalar(int p, int level, std::vector<Padic> coeffs) : p_(p), level_(level), c_(std::move(coeffs)) {
    if (level < 1) throw Error(Errc::PreconditionViolated, "cyclotomic level must be >= 1");
    if (static_cast<int>(c_.size()) != degree())
      throw Error(Errc::PreconditionViolated, "coefficient vector has the wrong length");
  }

  static CycloScalar zero(int p, int level) {
    return CycloScalar(p, level, std::vector<Padic>(ram_index(p, level), Padic::exact_zero(p)));
  }
  static CycloScalar scalar(int p, int level, const Padic& x) {
    CycloScalar r = zero(p, level);
    r.c_[0] = x;
    return r;
  }
  // zeta^k with unit coefficient known to rel_cap digits.
  static CycloScalar zeta_power(int p, int level, i64 k, int rel_cap) {
    std::vector<Padic> full(order(p, level), Padic::exact_zero(p));
    full[detail::mod_signed(k, order(p, level))] = Padic::from_int(p, 1, rel_cap);
    return CycloScalar(p, level, reduce(p, level, std::move(full)));
  }
  // From coordinates in the basis (zeta - 1)^i.
  static CycloScalar from_uniformizer_coords(int p, int level, const std::vector<Padic>& b) {
    const int e = ram_index(p, level);
    auto C = detail::binomial_table(p, e);
    std::vector<Padic> a(e, Padic::exact_zero(p));
    for (int i = 0; i < e; ++i) {
      if (b[i].is_exact_zero()) continue;
      for (int k = 0; k <= i; ++k) {
        Padic term = b[i] * C[i][k];
        a[k] = ((i - k) % 2 == 0) ? a[k] + term : a[k] - term;
      }
    }
    return CycloScalar(p, level, std::move(a));
  }

  static int ram_index(int p, int level) { return static_cast<int>((p - 1) * detail::pow_u64(p, level - 1)); }
  static int order(int p, int level) { return static_cast<int>(detail::pow_u64(p, level)); }

  int prime() const { return p_; }
  int level() const { return level_; }
  int degree() const { return ram_index(p_, level_); }
  const std::vector<Padic>& coeffs() const { return c_; }
  const Padic& coeff(int i) const { return c_.at(i); }

  // Coordinates in the basis (zeta - 1)^i.
  std::vector<Padic> uniformizer_coords() const {
    const int e = degree();
    auto C = detail::binomial_table(p_, e);
    std::vector<Padic> b(e, Padic::exact_zero(p_));
    for (int k = 0; k < e; ++k) {
      if (c_[k].is_exact_zero()) continue;
      for (int i = 0; i <= k; ++i) b[i] = b[i] + c_[k] * C[k][i];
    }
    return b;
  }

  bool is_zero() const {
    for (const auto& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }

  // Valuation in units of 1/e. For a value that is zero at its precision this
  // is the lower bound implied by the known digits.
  int valuation_e() const {
    const int e = degree();
    auto b = uniformizer_coords();
    int best = kInfPrec;
    bool nonzero = !is_zero();
    for (int i = 0; i < e; ++i) {
      if (b[i].is_exact_zero()) continue;
      if (nonzero && b[i].is_zero()) continue;
      best = std::min(best, b[i].valuation() * e + i);
    }
    return best;
  }

  // Smallest absolute precision among the power-basis coefficients.
  int abs_prec() const {
    int r = kInfPrec;
    for (const auto& x : c_) r = std::min(r, x.abs_prec());
    return r;
  }

  CycloScalar cap_abs(int N) const {
    CycloScalar r = *this;
    for (auto& x : r.c_) x = x.is_exact_zero() ? Padic::zero_mod(p_, N) : x.cap_abs(N);
    return r;
  }

  friend CycloScalar operator+(const CycloScalar& a, const CycloScalar& b) {
    check_level(a, b);
    CycloScalar r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] + b.c_[i];
    return r;
  }
  friend CycloScalar operator-(const CycloScalar& a, const CycloScalar& b) {
    check_level(a, b);
    CycloScalar r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = a.c_[i] - b.c_[i];
    return r;
  }
  friend CycloScalar operator*(const Padic& s, const CycloScalar& a) {
    CycloScalar r = a;
    for (auto& x : r.c_) x = s * x;
    return r;
  }
  friend CycloScalar operator*(const CycloScalar& a, const CycloScalar& b) {
    check_level(a, b);
    const int N = order(a.p_, a.level_);
    std::vector<Padic> full(N, Padic::exact_zero(a.p_));
    for (size_t i = 0; i < a.c_.size(); ++i) {
      if (a.c_[i].is_exact_zero()) continue;
      for (size_t j = 0; j < b.c_.size(); ++j) {
        if (b.c_[j].is_exact_zero()) continue;
        size_t k = (i + j) % N;
        full[k] = full[k] + a.c_[i] * b.c_[j];
      }
    }
    return CycloScalar(a.p_, a.level_, reduce(a.p_, a.level_, std::move(full)));
  }

  // Reduce a vector indexed by exponents 0..p^n-1 to the power basis.
  static std::vector<Padic> reduce(int p, int level, std::vector<Padic> full) {
    const int e = ram_index(p, level);
    const int step = static_cast<int>(detail::pow_u64(p, level - 1));
    for (int k = static_cast<int>(full.size()) - 1; k >= e; --k) {
      if (full[k].is_exact_zero()) continue;
      const int s = k - e;
      for (int t = 0; t <= p - 2; ++t) full[t * step + s] = full[t * step + s] - full[k];
    }
    full.resize(e);
    return full;
  }

 private:
  static void check_level(const CycloScalar& a, const CycloScalar& b) {
    if (a.level_ != b.level_ || a.p_ != b.p_) throw Error(Errc::LevelMismatch, "cyclotomic levels differ");
  }

  int p_;
  int level_;
  std::vector<Padic> c_;
};

// The automorphism zeta -> zeta^a.
inline CycloScalar galois_act(std::int64_t a, const CycloScalar& x) {
  const int p = x.prime();
  if (detail::mod_signed(a, p) == 0) throw Error(Errc::PreconditionViolated, "Galois index must be a unit");
  const int N = CycloScalar::order(p, x.level());
  const auto ar = detail::mod_signed(a, N);
  std::vector<Padic> full(N, Padic::exact_zero(p));
  for (int i = 0; i < x.degree(); ++i) {
    if (x.coeff(i).is_exact_zero()) continue;
    size_t k = static_cast<size_t>(detail::mulmod(ar, i, N));
    full[k] = full[k] + x.coeff(i);
  }
  return CycloScalar(p, x.level(), CycloScalar::reduce(p, x.level(), std::move(full)));
}

inline bool congruent(const CycloScalar& a, const CycloScalar& b) { return (a - b).is_zero(); }

}  // namespace prexp
