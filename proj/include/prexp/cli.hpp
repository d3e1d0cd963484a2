#pragma once

// Command bodies of the `prexp` tool, returning their output so tests can drive them.

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include "prexp/checks.hpp"
#include "prexp/textio.hpp"

namespace prexp::cli {

struct TimedResult {
  CheckResult result;
  double wall_ms = 0;
};

struct CheckReport {
  std::vector<TimedResult> checks;
  int failures() const {
    int n = 0;
    for (const auto& c : checks) n += c.result.pass ? 0 : 1;
    return n;
  }
};

inline CheckReport run_suite(const std::string& suite, const CheckConfig& cfg) {
  const std::vector<int> ids = checks::suite_criteria(suite);
  cfg.context();  // validates the configuration before any work
  CheckReport report;
  for (int id : ids) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<CheckResult> results = checks::run_criterion(id, cfg);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    for (auto& r : results) report.checks.push_back({std::move(r), ms / static_cast<double>(results.size())});
  }
  return report;
}

inline std::string format_report(const CheckReport& report, bool machine) {
  std::ostringstream os;
  for (const auto& c : report.checks) {
    const auto& r = c.result;
    if (machine) {
      os << "CHECK " << r.name << (r.pass ? " PASS" : " FAIL") << " eff_prec=" << r.eff_prec << "\n";
    } else {
      os << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "  eff_prec=" << r.eff_prec << "  wall="
         << static_cast<long long>(c.wall_ms) << "ms";
      if (!r.detail.empty()) os << "  " << r.detail;
      os << "\n";
    }
  }
  if (!machine) os << report.checks.size() << " checks, " << report.failures() << " failed\n";
  return os.str();
}

// ---- exp ----

struct ExpOutput {
  IwasawaClassD value;
  std::string residual;  // "0", "O(p^n)" or "v=<k>"
  bool residual_vanishes = false;
};

inline ExpOutput compute_exp(const textio::ExpInput& in) {
  const PrimeContext& ctx = in.ctx;
  if (!in.alpha.f.series().is_exact_zero()) {
    const SeriesComparison c = compare(psi(in.alpha.f), PiSeries::zero(ctx), checks::psi_window(ctx));
    if (!c.equal) throw Error(Errc::PreconditionViolated, "input f does not satisfy psi(f) = 0");
  }
  ExpOutput out{pr_exp(in.delta, in.alpha, in.h), "", false};
  const Series diff = (psi(out.value.F) - in.delta.a * out.value.F).series();
  if (diff.is_exact_zero()) {
    out.residual = "0";
    out.residual_vanishes = true;
    return out;
  }
  const int window = std::min(diff.degree(), checks::psi_window(ctx));
  int nonzero_val = kInfPrec, floor = kInfPrec;
  for (int n = 0; n <= window; ++n) {
    const Padic& x = diff.coeffs()[n];
    if (x.is_zero()) floor = std::min(floor, x.abs_prec());
    else nonzero_val = std::min(nonzero_val, x.valuation());
  }
  if (nonzero_val < kInfPrec) {
    out.residual = "v=" + std::to_string(nonzero_val);
  } else {
    out.residual = floor >= kInfPrec ? "0" : "O(p^" + std::to_string(floor) + ")";
    out.residual_vanishes = true;
  }
  return out;
}

inline std::string format_exp(const textio::ExpInput& in, const ExpOutput& out) {
  std::ostringstream os;
  os << "delta a=" << in.delta.a.str() << " m=" << in.delta.m << "\n";
  os << "h " << in.h << "\n";
  const Series& F = out.value.F.series();
  if (!F.is_exact_zero())
    for (int k = 0; k <= F.degree(); ++k) os << "c " << k << " " << F.coeffs()[k].str() << "\n";
  os << "residual " << out.residual << "\n";
  return os.str();
}

inline std::string run_exp(std::istream& input) {
  const textio::ExpInput in = textio::parse_exp(textio::tokenize(input));
  return format_exp(in, compute_exp(in));
}

// ---- lfun ----

struct LfunRow {
  std::int64_t w = 0;
  CharacterSpec chi;
  int comp = 0;
  Padic value;
  std::string cross;  // "match", "mismatch" or empty when e > 1
  std::optional<EnValue> en;
};

inline BigClass normalized_class(const textio::LfunInput& in) {
  if (!in.normalize) return in.z;
  const auto [c, d, j] = *in.normalize;
  const MuFactors mu = mu_factors(c, d, j, in.k0, in.ctx);
  if (in.normalize_op == "divide") return divide_exact(in.z, mu.mu0);
  BigClass r = in.z;
  for (auto& coord : r.coords) coord = mu.mu1 * coord;
  return r;
}

inline std::vector<LfunRow> compute_lfun(const textio::LfunInput& in, const textio::GridSpec& grid) {
  const PrimeContext& ctx = in.ctx;
  const BigClass z = normalized_class(in);
  const TwoVarL L = two_var_l(z, in.data);
  const bool single = in.data.gram.e() == 1;
  std::vector<LfunRow> rows;
  for (std::int64_t w : grid.weights) {
    std::optional<IwasawaElement> one_var;
    if (single) {
      std::vector<IwasawaElement> zx;
      for (const auto& c : z.coords) zx.push_back(evaluate_weight(c, w));
      one_var = one_variable_l(zx, in.data, w, in.k0, ctx);
    }
    for (const auto& chi : grid.chars) {
      const bool pure_power = detail::mod_signed(chi.tame - chi.wt, ctx.p() - 1) == 0;
      for (int comp = 0; comp < static_cast<int>(L.comps.size()); ++comp) {
        LfunRow row{w, chi, comp, specialize_l(L.comps[comp], w, chi), "", std::nullopt};
        if (one_var) row.cross = congruent(row.value, evaluate_character(*one_var, chi)) ? "match" : "mismatch";
        if (!in.ell.empty() && pure_power) row.en = evaluate_en(in.ell, in.k0, w, chi.wt, ctx);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

inline std::string format_lfun(const std::vector<LfunRow>& rows) {
  std::ostringstream os;
  for (const auto& r : rows) {
    os << "w=" << r.w << " chi=" << r.chi.tame << ":" << r.chi.wt << " comp=" << r.comp << " value=" << r.value.str();
    if (!r.cross.empty()) os << " dual=" << r.cross;
    if (r.en) os << " en=" << r.en->value.str() << " advisory=" << (r.en->advisory == "guaranteed" ? "guaranteed" : "not-guaranteed");
    os << "\n";
  }
  os << "BEGIN MACHINE\n";
  for (const auto& r : rows) {
    os << "LVAL " << r.w << " " << r.chi.tame << " " << r.chi.wt << " " << r.comp << " " << r.value.str();
    if (!r.cross.empty()) os << " " << r.cross;
    os << "\n";
  }
  os << "END MACHINE\n";
  return os.str();
}

inline std::string run_lfun(std::istream& input, const std::string& grid) {
  const textio::LfunInput in = textio::parse_lfun(textio::tokenize(input));
  return format_lfun(compute_lfun(in, textio::parse_grid(grid)));
}

}  // namespace prexp::cli
