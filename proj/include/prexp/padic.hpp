#pragma once

// Capped relative precision p-adic numbers.
//
// A nonzero value is p^v * u with u a unit known modulo p^N (N is the
// relative precision). A value that is zero at its precision is stored as
// O(p^k) with N = 0 and v = k. Exact zeros are flagged separately.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace prexp {

enum class Errc {
  DivisionByZero,
  PrecisionExhausted,
  LevelMismatch,
  NotInvertible,
  NoConvergence,
  PreconditionViolated,
  NotPrimitive,
  LEViolated,
  InconsistentData,
  AdjViolated,
  NotDivisible,
  BasisMismatch,
  NotInvolution,
  ConfigInvalid,
  ParseError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::LevelMismatch: return "LevelMismatch";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::NotPrimitive: return "NotPrimitive";
    case Errc::LEViolated: return "LEViolated";
    case Errc::InconsistentData: return "InconsistentData";
    case Errc::AdjViolated: return "AdjViolated";
    case Errc::NotDivisible: return "NotDivisible";
    case Errc::BasisMismatch: return "BasisMismatch";
    case Errc::NotInvolution: return "NotInvolution";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::ParseError: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Sentinel precision of exact values.
inline constexpr int kInfPrec = 1 << 28;
// Sentinel for "no lower bound available".
inline constexpr int kNoBound = -(1 << 28);

namespace detail {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 pow_u64(u64 p, int k) {
  u64 r = 1;
  for (int i = 0; i < k; ++i) r *= p;
  return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>((u128)a * b % m); }
inline u64 addmod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  return s >= m ? s - m : s;
}
inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 invmod(u64 a, u64 m) {
  i128 t = 0, nt = 1;
  i128 r = m, nr = a % m;
  while (nr != 0) {
    i128 q = r / nr;
    i128 tmp = t - q * nt;
    t = nt;
    nt = tmp;
    tmp = r - q * nr;
    r = nr;
    nr = tmp;
  }
  if (r != 1) throw Error(Errc::DivisionByZero, "residue is not invertible");
  if (t < 0) t += m;
  return static_cast<u64>(t);
}

inline u64 mod_signed(i64 x, u64 m) {
  i128 r = static_cast<i128>(x) % static_cast<i128>(m);
  if (r < 0) r += m;
  return static_cast<u64>(r);
}

// Largest k with p^k < 2^62.
inline int max_digits(int p) {
  int k = 0;
  u64 v = 1;
  while (v <= (u64(1) << 62) / static_cast<u64>(p)) {
    v *= static_cast<u64>(p);
    ++k;
  }
  return k - 1;
}

// floor(log_p n) for n >= 1, and 0 for n <= 1.
inline int floor_log(i64 n, int p) {
  int k = 0;
  while (n >= p) {
    n /= p;
    ++k;
  }
  return k;
}

// ceil(log_p n) for n >= 1.
inline int ceil_log(i64 n, int p) {
  int k = 0;
  i64 v = 1;
  while (v < n) {
    v *= p;
    ++k;
  }
  return k;
}

inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
inline i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }

inline int vp_int(i64 x, int p) {
  if (x == 0) return kInfPrec;
  int k = 0;
  while (x % p == 0) {
    x /= p;
    ++k;
  }
  return k;
}

// v_p(n!) by Legendre's formula.
inline int vp_factorial(i64 n, int p) {
  int s = 0;
  while (n > 0) {
    n /= p;
    s += static_cast<int>(n);
  }
  return s;
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace detail

class Padic {
 public:
  using u64 = detail::u64;
  using i64 = detail::i64;

  Padic() = default;

  static Padic exact_zero(int p) {
    Padic r;
    r.p_ = p;
    return r;
  }

  // O(p^abs).
  static Padic zero_mod(int p, int abs) {
    Padic r;
    r.p_ = p;
    r.exact_ = false;
    r.val_ = abs;
    return r;
  }

  // p^val * unit with unit known modulo p^rel; unit may carry factors of p.
  static Padic from_unit(int p, int val, u64 unit, int rel) {
    if (rel <= 0) return zero_mod(p, val + std::max(rel, 0));
    u64 mod = detail::pow_u64(p, rel);
    unit %= mod;
    if (unit == 0) return zero_mod(p, val + rel);
    while (unit % p == 0) {
      unit /= p;
      ++val;
      --rel;
    }
    Padic r;
    r.p_ = p;
    r.exact_ = false;
    r.val_ = val;
    r.rel_ = rel;
    r.unit_ = unit % detail::pow_u64(p, rel);
    return r;
  }

  static Padic from_int(int p, i64 x, int rel_cap) {
    if (x == 0) return exact_zero(p);
    int v = 0;
    while (x % p == 0) {
      x /= p;
      ++v;
    }
    u64 mod = detail::pow_u64(p, rel_cap);
    return from_unit(p, v, detail::mod_signed(x, mod), rel_cap);
  }

  static Padic from_rational(int p, i64 num, i64 den, int rel_cap) {
    if (den == 0) throw Error(Errc::DivisionByZero, "rational with zero denominator");
    return from_int(p, num, rel_cap) / from_int(p, den, rel_cap);
  }

  // Integer known modulo p^abs, given by its residue.
  static Padic from_residue(int p, u64 residue, int abs, int rel_cap) {
    u64 mod = detail::pow_u64(p, abs);
    residue %= mod;
    if (residue == 0) return zero_mod(p, abs);
    int v = 0;
    while (residue % p == 0) {
      residue /= p;
      ++v;
    }
    return from_unit(p, v, residue, std::min(abs - v, rel_cap));
  }

  int prime() const { return p_; }
  bool is_exact_zero() const { return exact_ && rel_ == 0; }
  bool is_zero() const { return rel_ == 0; }
  // Valuation; for an inexact zero this is the lower bound carried by O(p^k).
  int valuation() const { return is_exact_zero() ? kInfPrec : val_; }
  int rel_prec() const { return is_exact_zero() ? kInfPrec : rel_; }
  int abs_prec() const { return is_exact_zero() ? kInfPrec : val_ + rel_; }
  u64 unit() const { return unit_; }

  Padic operator-() const {
    if (rel_ == 0) return *this;
    Padic r = *this;
    u64 mod = detail::pow_u64(p_, rel_);
    r.unit_ = (mod - unit_) % mod;
    return r;
  }

  friend Padic operator+(const Padic& a, const Padic& b) {
    if (a.is_exact_zero()) return b.with_prime(a.p_);
    if (b.is_exact_zero()) return a.with_prime(b.p_);
    check_prime(a, b);
    const int p = a.p_;
    const int abs = std::min(a.abs_prec(), b.abs_prec());
    const int v = std::min(a.val_, b.val_);
    if (v >= abs) return zero_mod(p, abs);
    const int k = abs - v;
    const u64 mod = detail::pow_u64(p, k);
    u64 s = a.shifted_residue(v, k, mod);
    s = detail::addmod(s, b.shifted_residue(v, k, mod), mod);
    if (s == 0) return zero_mod(p, abs);
    return from_unit(p, v, s, k);
  }

  friend Padic operator-(const Padic& a, const Padic& b) { return a + (-b); }

  friend Padic operator*(const Padic& a, const Padic& b) {
    if (a.is_exact_zero()) return exact_zero(a.p_ ? a.p_ : b.p_);
    if (b.is_exact_zero()) return exact_zero(b.p_ ? b.p_ : a.p_);
    check_prime(a, b);
    if (a.rel_ == 0 || b.rel_ == 0) return zero_mod(a.p_, a.val_ + b.val_);
    const int rel = std::min(a.rel_, b.rel_);
    const u64 mod = detail::pow_u64(a.p_, rel);
    Padic r;
    r.p_ = a.p_;
    r.exact_ = false;
    r.val_ = a.val_ + b.val_;
    r.rel_ = rel;
    r.unit_ = detail::mulmod(a.unit_ % mod, b.unit_ % mod, mod);
    return r;
  }

  friend Padic operator/(const Padic& a, const Padic& b) {
    if (b.is_exact_zero()) throw Error(Errc::DivisionByZero, "division by exact zero");
    if (b.rel_ == 0) throw Error(Errc::PrecisionExhausted, "division by a value that is zero at its precision");
    if (a.is_exact_zero()) return exact_zero(b.p_);
    check_prime(a, b);
    if (a.rel_ == 0) return zero_mod(a.p_, a.val_ - b.val_);
    const int rel = std::min(a.rel_, b.rel_);
    const u64 mod = detail::pow_u64(a.p_, rel);
    Padic r;
    r.p_ = a.p_;
    r.exact_ = false;
    r.val_ = a.val_ - b.val_;
    r.rel_ = rel;
    r.unit_ = detail::mulmod(a.unit_ % mod, detail::invmod(b.unit_ % mod, mod), mod);
    return r;
  }

  Padic& operator+=(const Padic& o) { return *this = *this + o; }
  Padic& operator-=(const Padic& o) { return *this = *this - o; }
  Padic& operator*=(const Padic& o) { return *this = *this * o; }
  Padic& operator/=(const Padic& o) { return *this = *this / o; }

  Padic inverse() const { return from_int(p_, 1, is_zero() ? 1 : rel_) / *this; }

  Padic pow(i64 k) const {
    if (k < 0) return pow(-k).inverse();
    Padic result = one_like();
    Padic base = *this;
    while (k > 0) {
      if (k & 1) result = result * base;
      base = base * base;
      k >>= 1;
    }
    return result;
  }

  // Multiply by p^k exactly.
  Padic shift(int k) const {
    if (is_exact_zero()) return *this;
    Padic r = *this;
    r.val_ += k;
    return r;
  }

  // Forget digits beyond absolute precision N.
  Padic cap_abs(int N) const {
    if (N >= abs_prec()) return *this;
    if (N <= val_ || rel_ == 0) return zero_mod(p_, std::min(N, abs_prec()));
    return from_unit(p_, val_, unit_, N - val_);
  }

  Padic cap_rel(int r) const {
    if (rel_ == 0 || r >= rel_) return *this;
    return from_unit(p_, val_, unit_, r);
  }

  // Value modulo p^k for an element with valuation >= 0.
  u64 residue(int k) const {
    if (is_exact_zero()) return 0;
    if (val_ < 0) throw Error(Errc::PreconditionViolated, "residue of a non-integral value");
    if (abs_prec() < k) throw Error(Errc::PrecisionExhausted, "residue beyond known digits");
    if (rel_ == 0 || val_ >= k) return 0;
    u64 mod = detail::pow_u64(p_, k);
    return detail::mulmod(unit_ % mod, detail::pow_u64(p_, val_), mod);
  }

  // Structural equality: identical representation.
  bool operator==(const Padic& o) const {
    return p_ == o.p_ && exact_ == o.exact_ && val_ == o.val_ && rel_ == o.rel_ && unit_ == o.unit_;
  }

  std::string str() const {
    if (is_exact_zero()) return "v=inf;u=0;N=inf";
    std::ostringstream os;
    os << "v=" << val_ << ";u=" << unit_ << ";N=" << rel_;
    return os.str();
  }

  // Accepts "v=..;u=..;N=..", an integer "-12", or a fraction "-9/10".
  static Padic parse(const std::string& text, int p, int rel_cap) {
    if (text.rfind("v=", 0) == 0) return parse_canonical(text, p);
    auto slash = text.find('/');
    try {
      size_t used = 0;
      if (slash == std::string::npos) {
        i64 x = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return from_int(p, x, rel_cap);
      }
      size_t u1 = 0, u2 = 0;
      std::string ns = text.substr(0, slash), ds = text.substr(slash + 1);
      i64 num = std::stoll(ns, &u1);
      i64 den = std::stoll(ds, &u2);
      if (u1 != ns.size() || u2 != ds.size()) throw std::invalid_argument(text);
      return from_rational(p, num, den, rel_cap);
    } catch (const std::logic_error&) {
      throw Error(Errc::ParseError, "bad p-adic literal '" + text + "'");
    }
  }

 private:
  static void check_prime(const Padic& a, const Padic& b) {
    if (a.p_ != b.p_ && a.p_ != 0 && b.p_ != 0)
      throw Error(Errc::PreconditionViolated, "mixing different primes");
  }

  Padic with_prime(int p) const {
    Padic r = *this;
    if (r.p_ == 0) r.p_ = p;
    return r;
  }

  // (unit * p^(val - v)) mod p^k, for val >= v.
  u64 shifted_residue(int v, int k, u64 mod) const {
    if (rel_ == 0) return 0;
    int s = val_ - v;
    if (s >= k) return 0;
    return detail::mulmod(unit_ % mod, detail::pow_u64(p_, s), mod);
  }

  Padic one_like() const { return from_int(p_, 1, rel_ == 0 ? 1 : rel_); }

  static Padic parse_canonical(const std::string& text, int p) {
    std::string vs, us, ns;
    std::istringstream is(text);
    std::string part;
    while (std::getline(is, part, ';')) {
      if (part.rfind("v=", 0) == 0) vs = part.substr(2);
      else if (part.rfind("u=", 0) == 0) us = part.substr(2);
      else if (part.rfind("N=", 0) == 0) ns = part.substr(2);
      else throw Error(Errc::ParseError, "bad p-adic field '" + part + "'");
    }
    if (vs.empty() || us.empty() || ns.empty())
      throw Error(Errc::ParseError, "incomplete p-adic literal '" + text + "'");
    if (vs == "inf") {
      if (us != "0" || ns != "inf") throw Error(Errc::ParseError, "bad exact zero '" + text + "'");
      return exact_zero(p);
    }
    try {
      int v = std::stoi(vs);
      int n = std::stoi(ns);
      u64 u = std::stoull(us);
      if (n < 0 || n > detail::max_digits(p))
        throw Error(Errc::ParseError, "precision out of range in '" + text + "'");
      if (n == 0) {
        if (u != 0) throw Error(Errc::ParseError, "zero precision with nonzero unit '" + text + "'");
        return zero_mod(p, v);
      }
      if (u % p == 0 || u >= detail::pow_u64(p, n))
        throw Error(Errc::ParseError, "unit out of range in '" + text + "'");
      return from_unit(p, v, u, n);
    } catch (const std::logic_error&) {
      throw Error(Errc::ParseError, "bad p-adic literal '" + text + "'");
    }
  }

  int p_ = 0;
  bool exact_ = true;
  int val_ = 0;
  int rel_ = 0;
  u64 unit_ = 0;
};

// a and b agree at the smaller of their absolute precisions.
inline bool congruent(const Padic& a, const Padic& b) { return (a - b).is_zero(); }

inline std::ostream& operator<<(std::ostream& os, const Padic& x) { return os << x.str(); }

// Hensel lift of the (p-1)-th root of unity congruent to u mod p.
inline Padic teichmueller(int p, std::int64_t u, int rel_cap) {
  std::int64_t r = static_cast<std::int64_t>(detail::mod_signed(u, p));
  if (r == 0) throw Error(Errc::PreconditionViolated, "Teichmueller lift of a non-unit");
  Padic x = Padic::from_int(p, r, rel_cap);
  const Padic one = Padic::from_int(p, 1, rel_cap);
  const Padic pm1 = Padic::from_int(p, p - 1, rel_cap);
  for (int it = 0; it < rel_cap + 2; ++it) {
    Padic f = x.pow(p - 1) - one;
    if (f.is_zero()) break;
    x = x - f / (pm1 * x.pow(p - 2));
  }
  return x;
}

// p-adic logarithm of a principal unit x (v(x - 1) >= 1).
inline Padic log_one_unit(const Padic& x) {
  const int p = x.prime();
  const Padic y = x - Padic::from_int(p, 1, std::max(1, x.rel_prec()));
  if (y.is_exact_zero()) return y;
  const int vy = y.valuation();
  if (vy < 1) throw Error(Errc::PreconditionViolated, "log of a non-principal unit");
  const int target = x.abs_prec();
  Padic sum = Padic::exact_zero(p);
  Padic pw = y;
  for (int k = 1; k * vy - detail::floor_log(k, p) < target + 1 || k <= p; ++k) {
    Padic term = pw / Padic::from_int(p, k, x.rel_prec());
    sum = (k % 2 == 1) ? sum + term : sum - term;
    pw = pw * y;
  }
  return sum.cap_abs(target);
}

// Immutable bundle of prime and truncation caps with precomputed tables.
class PrimeContext {
 public:
  PrimeContext(int p, int Np, int NPi, int NT, int NY);

  int p() const { return d_->p; }
  int Np() const { return d_->Np; }
  int NPi() const { return d_->NPi; }
  int NT() const { return d_->NT; }
  int NY() const { return d_->NY; }

  Padic zero() const { return Padic::exact_zero(p()); }
  Padic integer(std::int64_t x) const { return Padic::from_int(p(), x, Np()); }
  Padic rational(std::int64_t n, std::int64_t d) const { return Padic::from_rational(p(), n, d, Np()); }
  Padic one() const { return integer(1); }
  Padic parse(const std::string& s) const { return Padic::parse(s, p(), Np()); }

  // Teichmueller lift of a mod p.
  const Padic& omega(std::int64_t a) const {
    return d_->teich.at(static_cast<size_t>(detail::mod_signed(a, p())));
  }
  // log(1+p).
  const Padic& log_gamma1() const { return d_->log_gamma1; }
  // Coefficient of pi^n in phi(pi)^k, for k, n <= NPi.
  const Padic& phi_pow(int k, int n) const { return d_->phi_pow[k][n]; }
  // Coefficient of pi^j in psi(pi^n), for n <= NPi.
  const std::vector<Padic>& psi_row(int n) const { return d_->psi_rows[n]; }

  bool operator==(const PrimeContext& o) const {
    return p() == o.p() && Np() == o.Np() && NPi() == o.NPi() && NT() == o.NT() && NY() == o.NY();
  }
  bool operator!=(const PrimeContext& o) const { return !(*this == o); }

 private:
  struct Data {
    int p, Np, NPi, NT, NY;
    std::vector<Padic> teich;
    Padic log_gamma1;
    std::vector<std::vector<Padic>> phi_pow;
    std::vector<std::vector<Padic>> psi_rows;
  };
  std::shared_ptr<const Data> d_;
};

namespace detail {

inline std::vector<u64> mul_trunc(const std::vector<u64>& a, const std::vector<u64>& b, size_t len, u64 mod) {
  std::vector<u64> r(std::min(len, a.size() + b.size() - 1), 0);
  for (size_t i = 0; i < a.size() && i < r.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size() && i + j < r.size(); ++j)
      r[i + j] = addmod(r[i + j], mulmod(a[i], b[j], mod), mod);
  }
  return r;
}

}  // namespace detail

inline PrimeContext::PrimeContext(int p, int Np, int NPi, int NT, int NY) {
  using namespace detail;
  if (p < 3 || !is_prime(p)) throw Error(Errc::ConfigInvalid, "p must be an odd prime");
  if (Np < 1 || NPi < 1 || NT < 1 || NY < 1) throw Error(Errc::ConfigInvalid, "all caps must be >= 1");
  const int K = max_digits(p);
  if (Np > K - 2) throw Error(Errc::ConfigInvalid, "p^Np does not fit the machine word budget");
  if (NPi > 4000 || NT > 4000 || NY > 400) throw Error(Errc::ConfigInvalid, "cap too large");

  auto d = std::make_shared<Data>();
  d->p = p;
  d->Np = Np;
  d->NPi = NPi;
  d->NT = NT;
  d->NY = NY;

  d->teich.resize(p);
  d->teich[0] = Padic::exact_zero(p);
  for (int a = 1; a < p; ++a) d->teich[a] = teichmueller(p, a, Np);
  d->log_gamma1 = log_one_unit(Padic::from_int(p, 1 + p, Np + 1)).cap_rel(Np);

  // phi(pi)^k modulo p^K, truncated at degree NPi.
  const u64 mod = pow_u64(p, K);
  const size_t len = static_cast<size_t>(NPi) + 1;
  std::vector<u64> phi_pi(std::min<size_t>(len, p + 1), 0);
  {
    u64 binom = 1;
    for (int i = 1; i <= p && i < static_cast<int>(len); ++i) {
      binom = binom * (p - i + 1) / i;
      phi_pi[i] = binom % mod;
    }
  }
  std::vector<std::vector<u64>> raw(len);
  raw[0] = std::vector<u64>(len, 0);
  raw[0][0] = 1;
  for (size_t k = 1; k < len; ++k) {
    raw[k] = mul_trunc(raw[k - 1], phi_pi, len, mod);
    raw[k].resize(len, 0);
  }
  d->phi_pow.assign(len, std::vector<Padic>(len));
  for (size_t k = 0; k < len; ++k)
    for (size_t n = 0; n < len; ++n)
      d->phi_pow[k][n] = raw[k][n] == 0 && n < k ? Padic::exact_zero(p)
                                                 : (raw[k][n] == 0 && n > p * k ? Padic::exact_zero(p)
                                                                                : Padic::from_residue(p, raw[k][n], K, Np));

  // psi(pi^n): peel monic pieces pi^i phi(pi)^j off the top, then psi(pi^i) = (-1)^i for i < p.
  d->psi_rows.resize(len);
  for (size_t n = 0; n < len; ++n) {
    std::vector<u64> poly(n + 1, 0);
    poly[n] = 1;
    std::vector<u64> out(n / p + 1, 0);
    for (size_t m = n + 1; m-- > 0;) {
      u64 c = poly[m];
      if (c == 0) continue;
      size_t i = m % p, j = m / p;
      // subtract c * pi^i * phi(pi)^j (monic of degree m)
      for (size_t t = 0; t + i <= m; ++t) {
        u64 coef = raw[j][t];
        if (t > p * j) break;
        if (coef == 0) continue;
        poly[t + i] = submod(poly[t + i], mulmod(c, coef, mod), mod);
      }
      out[j] = (i % 2 == 0) ? addmod(out[j], c, mod) : submod(out[j], c, mod);
    }
    d->psi_rows[n].resize(out.size());
    for (size_t j = 0; j < out.size(); ++j)
      d->psi_rows[n][j] = out[j] == 0 && p * j > n ? Padic::exact_zero(p) : Padic::from_residue(p, out[j], K, Np);
  }
  d_ = std::move(d);
}

}  // namespace prexp
