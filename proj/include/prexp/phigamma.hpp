#pragma once

// Rank-one (phi, Gamma)-modules D_delta over R+, the Perrin-Riou exponential
// and its descent maps, the class twist, Berger's construction for a matrix
// Dcris, and the theta-criticality classifier.

#include <optional>
#include <string>
#include <vector>

#include "prexp/iwasawa.hpp"
#include "prexp/matrix.hpp"

namespace prexp {

// delta(p) = a, delta(u) = u^m on units.
struct RankOneDelta {
  Padic a;
  std::int64_t m = 0;
};

// coeff * d_delta with d_delta = t^{-m} e_delta; phi acts by p^{-m} a.
struct DcrisElement {
  Padic coeff;
};

// f (x) d with psi(f) = 0.
struct FrakDElement {
  PiSeries f;
  DcrisElement d;
};

// F e_delta in D_delta^{psi=1}: psi(F) = a F.
struct IwasawaClassD {
  PiSeries F;
  RankOneDelta delta;
};

struct LeReport {
  bool ok = true;
  std::vector<std::int64_t> failures;
  // Per scanned exponent: "no zero guaranteed" or "zero possible" (family data only).
  std::vector<std::string> advisories;
};

inline LeReport check_le_star(const RankOneDelta& delta, std::int64_t i_min, std::int64_t i_max) {
  const int p = delta.a.prime();
  LeReport r;
  const Padic one = Padic::from_int(p, 1, detail::max_digits(p) - 2);
  for (std::int64_t i = i_min; i <= i_max; ++i) {
    Padic x = one - delta.a.shift(static_cast<int>(i));
    if (x.is_zero()) {
      r.ok = false;
      r.failures.push_back(i);
    }
  }
  return r;
}

// Family version: a(x) = sum_k c_k x^k over the closed unit disc, checked at
// sample points; the advisory for each i reads the Newton polygon of 1 - p^i a(x).
inline LeReport check_le_star_family(const std::vector<Padic>& a_coeffs, const std::vector<Padic>& samples,
                                     std::int64_t i_min, std::int64_t i_max) {
  if (a_coeffs.empty()) throw Error(Errc::PreconditionViolated, "empty family");
  const int p = a_coeffs[0].prime();
  const Padic one = Padic::from_int(p, 1, detail::max_digits(p) - 2);
  LeReport r;
  for (std::int64_t i = i_min; i <= i_max; ++i) {
    bool fail = false;
    for (const auto& x : samples) {
      Padic ax = Padic::exact_zero(p);
      for (size_t k = a_coeffs.size(); k-- > 0;) ax = ax * x + a_coeffs[k];
      if ((one - ax.shift(static_cast<int>(i))).is_zero()) fail = true;
    }
    if (fail) {
      r.ok = false;
      r.failures.push_back(i);
    }
    std::vector<Padic> g;
    for (size_t k = 0; k < a_coeffs.size(); ++k) g.push_back(-a_coeffs[k].shift(static_cast<int>(i)));
    g[0] = one + g[0];
    const int v0 = g[0].is_zero() ? kInfPrec : g[0].valuation();
    bool strict = v0 < kInfPrec;
    for (size_t k = 1; k < g.size(); ++k)
      if (!g[k].is_exact_zero() && g[k].valuation() <= v0) strict = false;
    r.advisories.push_back(strict ? "no zero guaranteed" : "zero possible");
  }
  return r;
}

// Sum_{i=1}^{p-1} (1+pi)^i phi(g_i), an element of (R+)^{psi=0}.
inline PiSeries psi_zero_from_parts(const std::vector<PiSeries>& parts) {
  const PrimeContext& ctx = parts.at(0).ctx();
  PiSeries acc = PiSeries::zero(ctx);
  for (size_t i = 0; i < parts.size(); ++i)
    acc = acc + PiSeries(ctx, binomial_power(ctx, static_cast<std::int64_t>(i) + 1, ctx.NPi())) * frobenius_phi(parts[i]);
  return acc;
}

inline Padic pr_exp_prefactor(const PrimeContext& ctx, std::int64_t m) {
  Padic c = ctx.log_gamma1() / ctx.integer(ctx.p());
  return ((m - 1) % 2 == 0) ? c : -c;
}

inline PiSeries iterate_partial(PiSeries f, std::int64_t k) {
  for (std::int64_t i = 0; i < k; ++i) f = partial(f);
  return f;
}

// Exp_{D_delta,h}(alpha) on the e_delta coordinate.
inline IwasawaClassD pr_exp(const RankOneDelta& delta, const FrakDElement& alpha, std::int64_t h) {
  const PrimeContext& ctx = alpha.f.ctx();
  const std::int64_t m = delta.m;
  if (h < m) throw Error(Errc::PreconditionViolated, "h must be >= m");
  if (delta.a.is_zero()) throw Error(Errc::PreconditionViolated, "delta(p) must be nonzero");
  if (delta.a.valuation() < 0) throw Error(Errc::PreconditionViolated, "v_p(a) must be >= 0");
  const std::int64_t span = (m < 0 ? -m : m) + h + 2;
  if (!check_le_star(delta, -span, span).ok) throw Error(Errc::PreconditionViolated, "condition LE* fails");
  if (alpha.d.coeff.is_exact_zero() || alpha.f.series().is_exact_zero()) return {PiSeries::zero(ctx), delta};
  if (m < 0) throw Error(Errc::PreconditionViolated, "negative m is not supported by the R+ construction");
  PiSeries rhs = iterate_partial(alpha.d.coeff * alpha.f, m);
  PiSeries F = pr_exp_prefactor(ctx, m) * solve_one_minus_aphi(delta.a, rhs);
  // l_j (F t^m e_delta-coordinate) = t^m l_{j-m}(F)
  for (std::int64_t j = m; j < h; ++j) F = ell_apply(j - m, F);
  return {F, delta};
}

// Independent closed form (-1)^{h-1} c t^{h-m} d^h G with (1 - p^{-m} a phi) G = f.
inline IwasawaClassD pr_exp_closed_form(const RankOneDelta& delta, const FrakDElement& alpha, std::int64_t h) {
  const PrimeContext& ctx = alpha.f.ctx();
  const std::int64_t m = delta.m;
  if (h < m || m < 0) throw Error(Errc::PreconditionViolated, "need 0 <= m <= h");
  const Padic b = delta.a / ctx.integer(ctx.p()).pow(m);
  if (b.valuation() < 0) throw Error(Errc::PreconditionViolated, "v_p(a) must be >= m");
  PiSeries G = solve_one_minus_aphi(b, alpha.d.coeff * alpha.f);
  PiSeries F = iterate_partial(G, h);
  for (std::int64_t i = 0; i < h - m; ++i) F = t_mult(F);
  Padic c = ctx.log_gamma1() / ctx.integer(ctx.p());
  if ((h - 1) % 2 != 0) c = -c;
  return {c * F, delta};
}

inline SeriesComparison check_membership(const IwasawaClassD& z) {
  return compare(psi(z.F), z.delta.a * z.F);
}

// Re-tag over delta chi: e_{delta chi} = e_delta (x) epsilon, delta chi(p) = delta(p).
inline IwasawaClassD twist_class(const IwasawaClassD& z) {
  if (!check_membership(z).equal) throw Error(Errc::PreconditionViolated, "input is not in D^{psi=1}");
  return {z.F, RankOneDelta{z.delta.a, z.delta.m + 1}};
}

// F -> d F moves the psi-eigenvalue from a to p a.
inline IwasawaClassD partial_class(const IwasawaClassD& z) {
  const PrimeContext& ctx = z.F.ctx();
  return {partial(z.F), RankOneDelta{ctx.integer(ctx.p()) * z.delta.a, z.delta.m}};
}

// Result of a descent map: either a Dcris scalar (n = 0) or an element of
// K_n tensored with d_delta (n >= 1).
struct XiValue {
  int level = 0;
  Padic scalar;
  std::optional<CycloScalar> cyclo;
};

inline Padic dcris_phi(const RankOneDelta& delta, const PrimeContext& ctx) {
  return delta.a / ctx.integer(ctx.p()).pow(delta.m);
}

inline XiValue xi_level_n(const RankOneDelta& delta, const FrakDElement& alpha, int n) {
  const PrimeContext& ctx = alpha.f.ctx();
  const int p = ctx.p();
  const Padic b = dcris_phi(delta, ctx);
  if ((ctx.one() - b).is_zero()) throw Error(Errc::NotInvertible, "1 - p^{-m} a vanishes");
  XiValue r;
  r.level = n;
  if (n == 0) {
    const Padic num = ctx.one() - (ctx.integer(p) * b).inverse();
    r.scalar = num / (ctx.one() - b) * alpha.d.coeff * alpha.f.coeff(0);
    return r;
  }
  if (b.valuation() < 0) throw Error(Errc::PreconditionViolated, "v_p(p^{-m} a) must be >= 0");
  PiSeries G = solve_one_minus_aphi(b, alpha.d.coeff * alpha.f);
  const Padic scale = (ctx.integer(p) * b).pow(-n);
  r.cyclo = scale * eval_at_cyclo(G, n);
  return r;
}

// e_rho = (1/(p-1)) sum_a omega(a)^{-i} sigma_a on K_1.
inline CycloScalar isotypic_projector(const PrimeContext& ctx, std::int64_t tame, const CycloScalar& x) {
  const int p = ctx.p();
  if (x.level() != 1) throw Error(Errc::LevelMismatch, "isotypic projection is defined on K_1");
  CycloScalar acc = CycloScalar::zero(p, 1);
  for (int a = 1; a < p; ++a) {
    const auto g = static_cast<std::int64_t>(ctx.omega(a).residue(1));
    acc = acc + ctx.omega(a).pow(-tame) * galois_act(g, x);
  }
  return ctx.rational(1, p - 1) * acc;
}

inline CycloScalar isotypic_xi(const RankOneDelta& delta, const FrakDElement& alpha, const CharacterSpec& rho) {
  const PrimeContext& ctx = alpha.f.ctx();
  if (detail::mod_signed(rho.tame, ctx.p() - 1) == 0) throw Error(Errc::NotPrimitive, "trivial character");
  XiValue full = xi_level_n(delta, alpha, 1);
  return isotypic_projector(ctx, rho.tame, *full.cyclo);
}

// Constant-term preimage of s d_delta under Xi_0: alpha = c (1+pi) (x) d_delta.
inline FrakDElement xi0_preimage(const RankOneDelta& delta, const Padic& s, const PrimeContext& ctx) {
  const Padic b = dcris_phi(delta, ctx);
  const Padic factor = (ctx.one() - (ctx.integer(ctx.p()) * b).inverse()) / (ctx.one() - b);
  return {factor.inverse() * s * PiSeries::one_plus_pi(ctx), DcrisElement{ctx.one()}};
}

struct DcrisMatrixData {
  PadicMatrix phi;
  std::vector<int> fil_jumps;
};

inline void check_le_matrix(const PadicMatrix& phi, int kmax) {
  const int p = phi.prime();
  for (int k = 0; k <= kmax; ++k) {
    PadicMatrix A = PadicMatrix::identity(p, phi.rows(), detail::max_digits(p) - 2) -
                    Padic::from_int(p, 1, detail::max_digits(p) - 2).shift(k) * phi;
    if (A.det().is_zero()) throw Error(Errc::LEViolated, "1 - p^k phi is singular for k = " + std::to_string(k));
  }
}

// Solves (1 - phi_R (x) Phi) F = alpha coefficientwise:
//   (I - p^k Phi) F_k = alpha_k + Phi sum_{i<k} [pi^k] phi(pi)^i F_i.
inline std::vector<PiSeries> solve_matrix_phi(const PadicMatrix& Phi, const std::vector<PiSeries>& alpha) {
  const PrimeContext& ctx = alpha.at(0).ctx();
  const int p = ctx.p();
  const int d = Phi.rows();
  if (static_cast<int>(alpha.size()) != d) throw Error(Errc::PreconditionViolated, "coordinate count mismatch");
  if (Phi.min_valuation() < 0) throw Error(Errc::PreconditionViolated, "phi-matrix must be integral");
  int D = ctx.NPi();
  bool all_exact = true;
  for (const auto& a : alpha)
    if (!a.series().is_exact()) {
      D = std::min(D, a.degree());
      all_exact = false;
    }
  check_le_matrix(Phi, D);
  std::vector<std::vector<Padic>> F(d, std::vector<Padic>(D + 1, Padic::exact_zero(p)));
  const int W = detail::max_digits(p) - 2;
  for (int k = 0; k <= D; ++k) {
    std::vector<Padic> mix(d, Padic::exact_zero(p));
    for (int c = 0; c < d; ++c)
      for (int i = 0; i < k; ++i) {
        if (F[c][i].is_exact_zero() || p * i < k) continue;
        const Padic& e = ctx.phi_pow(i, k);
        if (!e.is_exact_zero()) mix[c] += F[c][i] * e;
      }
    std::vector<Padic> rhs = Phi.apply(mix);
    PadicMatrix B(p, d, 1);
    for (int c = 0; c < d; ++c) B(c, 0) = alpha[c].series().coeff(k) + rhs[c];
    PadicMatrix A = PadicMatrix::identity(p, d, W) - Padic::from_int(p, 1, W).shift(k) * Phi;
    PadicMatrix X = A.solve(B);
    for (int c = 0; c < d; ++c) F[c][k] = X(c, 0);
  }
  std::vector<PiSeries> out;
  int kappa = 0, tau = kInfPrec;
  for (const auto& a : alpha)
    if (!a.series().is_exact()) kappa = std::max(kappa, a.series().tail().kappa);
  for (int c = 0; c < d; ++c) tau = std::min(tau, alpha[c].series().global_tau(0, kappa));
  for (int c = 0; c < d; ++c) tau = std::min(tau, Series(p, F[c]).global_tau(0, kappa));
  for (int c = 0; c < d; ++c) {
    Series s(p, F[c]);
    if (!(all_exact && tau >= kInfPrec)) s = s.with_tail(Tail::bound(tau >= kInfPrec ? 0 : tau, 0, kappa));
    out.emplace_back(ctx, s);
  }
  return out;
}

// Omega_{V,h}(alpha) = -(log(1+p)/p) l_{h-1} ... l_0 F.
inline std::vector<PiSeries> berger_omega(const DcrisMatrixData& V, const std::vector<PiSeries>& alpha, int h) {
  const PrimeContext& ctx = alpha.at(0).ctx();
  if (h < 0) throw Error(Errc::PreconditionViolated, "h must be >= 0");
  std::vector<PiSeries> F = solve_matrix_phi(V.phi, alpha);
  const Padic c = -(ctx.log_gamma1() / ctx.integer(ctx.p()));
  for (auto& x : F) {
    for (int j = 0; j < h; ++j) x = ell_apply(j, x);
    x = c * x;
  }
  return F;
}

// psi(out) against Phi . out, coordinatewise.
inline SeriesComparison check_berger_membership(const PadicMatrix& Phi, const std::vector<PiSeries>& out) {
  const PrimeContext& ctx = out.at(0).ctx();
  SeriesComparison r;
  for (int i = 0; i < Phi.rows(); ++i) {
    PiSeries rhs = PiSeries::zero(ctx);
    for (int j = 0; j < Phi.cols(); ++j)
      if (!Phi(i, j).is_exact_zero()) rhs = rhs + Phi(i, j) * out[j];
    auto c = compare(psi(out[i]), rhs);
    r.min_prec = std::min(r.min_prec, c.min_prec);
    if (!c.equal && r.equal) {
      r.equal = false;
      r.first_mismatch = c.first_mismatch;
    }
  }
  return r;
}

// Xi_{V,n}: n >= 1 gives p^{-n} Phi^{-n} F(zeta_{p^n} - 1); n = 0 gives
// (1 - p^{-1} Phi^{-1})(1 - Phi)^{-1} alpha(0) in the first slot of each coordinate.
inline std::vector<CycloScalar> berger_xi(const DcrisMatrixData& V, const std::vector<PiSeries>& alpha, int n) {
  const PrimeContext& ctx = alpha.at(0).ctx();
  const int p = ctx.p();
  const int d = V.phi.rows();
  const int W = detail::max_digits(p) - 2;
  const PadicMatrix I = PadicMatrix::identity(p, d, W);
  const PadicMatrix Phi_inv = V.phi.inverse(ctx.Np());
  std::vector<CycloScalar> out;
  if (n == 0) {
    PadicMatrix a0(p, d, 1);
    for (int i = 0; i < d; ++i) a0(i, 0) = alpha[i].coeff(0);
    PadicMatrix y = (I - V.phi).solve(a0);
    PadicMatrix z = (I - ctx.rational(1, p) * Phi_inv) * y;
    for (int i = 0; i < d; ++i) out.push_back(CycloScalar::scalar(p, 1, z(i, 0)));
    return out;
  }
  std::vector<PiSeries> F = solve_matrix_phi(V.phi, alpha);
  PadicMatrix M = I;
  for (int k = 0; k < n; ++k) M = M * Phi_inv;
  M = ctx.integer(p).pow(-n) * M;
  std::vector<CycloScalar> vals;
  for (const auto& f : F) vals.push_back(eval_at_cyclo(f, n));
  for (int i = 0; i < d; ++i) {
    CycloScalar acc = CycloScalar::zero(p, n);
    for (int j = 0; j < d; ++j)
      if (!M(i, j).is_exact_zero()) acc = acc + M(i, j) * vals[j];
    out.push_back(acc);
  }
  return out;
}

struct ThetaResult {
  bool theta_critical = false;
  int v_alpha = 0;
  int v_beta = 0;
};

inline ThetaResult theta_classify(const Padic& alpha, const Padic& beta, int k0, bool fil_on_alpha_line) {
  if (!fil_on_alpha_line) return {false, 0, 0};
  const int va = alpha.valuation(), vb = beta.valuation();
  if (va + vb != k0 + 1 || va != k0 + 1 || vb != 0)
    throw Error(Errc::InconsistentData, "theta-critical slopes must be (k0+1, 0)");
  return {true, va, vb};
}

// Rank-two form: beta = det(Phi) / alpha.
inline ThetaResult theta_classify(const DcrisMatrixData& V, const Padic& alpha, int k0, bool fil_on_alpha_line) {
  const int p = alpha.prime();
  if (V.phi.rows() != 2 || V.phi.cols() != 2) throw Error(Errc::PreconditionViolated, "rank two data expected");
  PadicMatrix shifted = V.phi - alpha * PadicMatrix::identity(p, 2, detail::max_digits(p) - 2);
  if (!shifted.det().is_zero()) throw Error(Errc::PreconditionViolated, "alpha is not an eigenvalue");
  return theta_classify(alpha, V.phi.det() / alpha, k0, fil_on_alpha_line);
}

}  // namespace prexp
