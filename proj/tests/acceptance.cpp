// Acceptance run: one PASS/FAIL line per criterion, for p = 3 and p = 5 at the
// default precisions. Criterion 12 drives the built `prexp` binary.

#include <array>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include "prexp/checks.hpp"

namespace {

// Wall-clock limits in seconds, per prime.
const std::map<int, double> kLimits{{1, 30}, {2, 10}, {3, 30}, {4, 60}, {5, 60}, {6, 60},
                                    {7, 30}, {8, 30}, {9, 10}, {10, 30}, {11, 60}};
constexpr double kCliLimit = 300;

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

struct Run {
  std::string output;
  int status = -1;
};

Run run_command(const std::string& cmd) {
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

}  // namespace

int main() {
  using prexp::CheckConfig;
  bool all_ok = true;
  for (const auto& [id, limit] : kLimits) {
    bool ok = true;
    std::string note;
    double worst = 0;
    for (int p : {3, 5}) {
      CheckConfig cfg;
      cfg.p = p;
      const auto start = std::chrono::steady_clock::now();
      const auto results = prexp::checks::run_criterion(id, cfg);
      const double t = seconds_since(start);
      worst = std::max(worst, t);
      if (t > limit) {
        ok = false;
        note += " p=" + std::to_string(p) + ":timeout";
      }
      for (const auto& r : results)
        if (!r.pass) {
          ok = false;
          note += " p=" + std::to_string(p) + ":" + r.name + "(" + r.detail + ")";
        }
    }
    all_ok = all_ok && ok;
    std::printf("criterion %2d %s  max_wall=%.2fs limit=%.0fs%s\n", id, ok ? "PASS" : "FAIL", worst, limit,
                note.c_str());
  }

  bool cli_ok = true;
  std::string note;
  const auto start = std::chrono::steady_clock::now();
  for (int p : {3, 5}) {
    const std::string cmd = std::string("\"") + PREXP_BIN + "\" check --suite all --prime " + std::to_string(p) +
                            " --prec 12 --pi-deg 60 --seed 1 --emit machine";
    const Run a = run_command(cmd), b = run_command(cmd);
    if (a.status != 0 || b.status != 0) {
      cli_ok = false;
      note += " p=" + std::to_string(p) + ":exit=" + std::to_string(a.status);
    }
    if (a.output != b.output || a.output.empty()) {
      cli_ok = false;
      note += " p=" + std::to_string(p) + ":nondeterministic";
    }
  }
  const double t = seconds_since(start);
  if (t > kCliLimit) {
    cli_ok = false;
    note += " timeout";
  }
  all_ok = all_ok && cli_ok;
  std::printf("criterion 12 %s  max_wall=%.2fs limit=%.0fs%s\n", cli_ok ? "PASS" : "FAIL", t, kCliLimit, note.c_str());
  return all_ok ? 0 : 1;
}
