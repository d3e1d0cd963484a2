#pragma once

// Small dense matrices over Q_p.

#include <vector>

#include "prexp/padic.hpp"

namespace prexp {

class PadicMatrix {
 public:
  PadicMatrix(int p, int rows, int cols) : p_(p), r_(rows), c_(cols), a_(rows * cols, Padic::exact_zero(p)) {}

  static PadicMatrix identity(int p, int n, int rel) {
    PadicMatrix m(p, n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Padic::from_int(p, 1, rel);
    return m;
  }
  static PadicMatrix diagonal(const std::vector<Padic>& d) {
    PadicMatrix m(d.at(0).prime(), static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  int prime() const { return p_; }
  int rows() const { return r_; }
  int cols() const { return c_; }
  Padic& operator()(int i, int j) { return a_[i * c_ + j]; }
  const Padic& operator()(int i, int j) const { return a_[i * c_ + j]; }

  int min_valuation() const {
    int v = kInfPrec;
    for (const auto& x : a_)
      if (!x.is_zero()) v = std::min(v, x.valuation());
    return v;
  }

  friend PadicMatrix operator+(const PadicMatrix& a, const PadicMatrix& b) {
    check_shape(a, b);
    PadicMatrix r = a;
    for (size_t k = 0; k < r.a_.size(); ++k) r.a_[k] = a.a_[k] + b.a_[k];
    return r;
  }
  friend PadicMatrix operator-(const PadicMatrix& a, const PadicMatrix& b) {
    check_shape(a, b);
    PadicMatrix r = a;
    for (size_t k = 0; k < r.a_.size(); ++k) r.a_[k] = a.a_[k] - b.a_[k];
    return r;
  }
  friend PadicMatrix operator*(const Padic& s, const PadicMatrix& a) {
    PadicMatrix r = a;
    for (auto& x : r.a_) x = s * x;
    return r;
  }
  friend PadicMatrix operator*(const PadicMatrix& a, const PadicMatrix& b) {
    if (a.c_ != b.r_) throw Error(Errc::PreconditionViolated, "matrix shapes do not compose");
    PadicMatrix r(a.p_, a.r_, b.c_);
    for (int i = 0; i < a.r_; ++i)
      for (int k = 0; k < a.c_; ++k) {
        if (a(i, k).is_exact_zero()) continue;
        for (int j = 0; j < b.c_; ++j) r(i, j) += a(i, k) * b(k, j);
      }
    return r;
  }
  std::vector<Padic> apply(const std::vector<Padic>& v) const {
    std::vector<Padic> out(r_, Padic::exact_zero(p_));
    for (int i = 0; i < r_; ++i)
      for (int j = 0; j < c_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  // Solves A X = B by elimination with pivots of least valuation.
  PadicMatrix solve(const PadicMatrix& B) const {
    if (r_ != c_ || B.r_ != r_) throw Error(Errc::PreconditionViolated, "solve needs a square system");
    PadicMatrix A = *this, X = B;
    const int n = r_;
    for (int col = 0; col < n; ++col) {
      int piv = -1, best = kInfPrec;
      for (int i = col; i < n; ++i) {
        const Padic& x = A(i, col);
        if (!x.is_zero() && x.valuation() < best) {
          best = x.valuation();
          piv = i;
        }
      }
      if (piv < 0) throw Error(Errc::NotInvertible, "singular matrix at working precision");
      if (piv != col) {
        for (int j = 0; j < n; ++j) std::swap(A(piv, j), A(col, j));
        for (int j = 0; j < X.c_; ++j) std::swap(X(piv, j), X(col, j));
      }
      const Padic inv = A(col, col).inverse();
      for (int i = 0; i < n; ++i) {
        if (i == col || A(i, col).is_exact_zero()) continue;
        const Padic f = A(i, col) * inv;
        for (int j = col; j < n; ++j) A(i, j) -= f * A(col, j);
        for (int j = 0; j < X.c_; ++j) X(i, j) -= f * X(col, j);
      }
    }
    for (int i = 0; i < n; ++i) {
      const Padic inv = A(i, i).inverse();
      for (int j = 0; j < X.c_; ++j) X(i, j) = X(i, j) * inv;
    }
    return X;
  }

  PadicMatrix inverse(int rel) const { return solve(identity(p_, r_, rel)); }

  Padic det() const {
    if (r_ != c_) throw Error(Errc::PreconditionViolated, "determinant of a non-square matrix");
    PadicMatrix A = *this;
    const int n = r_;
    Padic d = Padic::from_int(p_, 1, detail::max_digits(p_) - 2);
    for (int col = 0; col < n; ++col) {
      int piv = -1, best = kInfPrec;
      for (int i = col; i < n; ++i) {
        const Padic& x = A(i, col);
        if (!x.is_zero() && x.valuation() < best) {
          best = x.valuation();
          piv = i;
        }
      }
      if (piv < 0) {
        int v = 0;
        for (int i = col; i < n; ++i) v = std::max(v, A(i, col).valuation());
        return Padic::zero_mod(p_, d.valuation() + v);
      }
      if (piv != col) {
        for (int j = 0; j < n; ++j) std::swap(A(piv, j), A(col, j));
        d = -d;
      }
      d = d * A(col, col);
      const Padic inv = A(col, col).inverse();
      for (int i = col + 1; i < n; ++i) {
        if (A(i, col).is_exact_zero()) continue;
        const Padic f = A(i, col) * inv;
        for (int j = col; j < n; ++j) A(i, j) -= f * A(col, j);
      }
    }
    return d;
  }

 private:
  static void check_shape(const PadicMatrix& a, const PadicMatrix& b) {
    if (a.r_ != b.r_ || a.c_ != b.c_) throw Error(Errc::PreconditionViolated, "matrix shapes differ");
  }

  int p_;
  int r_;
  int c_;
  std::vector<Padic> a_;
};

}  // namespace prexp
