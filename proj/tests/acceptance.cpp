// One PASS/FAIL line per acceptance criterion; exits non-zero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "flipmix/bounds.hpp"
#include "flipmix/cli.hpp"
#include "flipmix/coupling.hpp"
#include "flipmix/exactdist.hpp"
#include "flipmix/kn_reduced.hpp"
#include "flipmix/parallel.hpp"
#include "flipmix/spectrum.hpp"
#include "suite.hpp"

using namespace flipmix;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

std::int64_t binom(std::int64_t n, std::int64_t k) {
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

const unsigned kThreads = resolve_threads();

Outcome spectrum_traces() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [name, g] : testing::reference_suite()) {
    for (double p : testing::kSuiteP) {
      for (const auto& r : spectrum::trace_residuals(g, FlipParams(p), 4, kThreads)) {
        worst = std::max(worst, r.residual);
        if (!(r.residual <= 1e-9)) o.fail(name + " k=" + std::to_string(r.k));
      }
    }
  }
  if (o.pass) o.detail = fmt("max trace residual %.3g over 7 graphs, p in {0.3,0.5}, k=1..4", worst);
  return o;
}

Outcome worked_examples() {
  Outcome o;
  for (std::int64_t n = 2; n <= 8; ++n) {
    std::map<spectrum::Rational, std::int64_t> expected;
    for (std::int64_t k = 0; k <= n; ++k) {
      expected[spectrum::Rational::make(binom(k, 2), binom(n, 2))] += binom(n, k);
    }
    if (spectrum::aggregate(spectrum::full_spectrum(complete_graph(n))) != expected) {
      o.fail("K_" + std::to_string(n) + " aggregate mismatch");
    }
  }
  std::map<spectrum::Rational, std::int64_t> expected;
  for (std::int64_t k = 0; k <= 2; ++k) {
    for (std::int64_t l = 0; l <= 3; ++l) {
      expected[spectrum::Rational::make(k * l, 6)] += binom(2, k) * binom(3, l);
    }
  }
  if (spectrum::aggregate(spectrum::full_spectrum(complete_bipartite(2, 3))) != expected) {
    o.fail("K_{2,3} aggregate mismatch");
  }
  if (o.pass) o.detail = "K_2..K_8 and K_{2,3} match exactly as rationals";
  return o;
}

Outcome bound_dominance() {
  Outcome o;
  std::size_t rows = 0;
  for (const auto& [name, g] : testing::reference_suite()) {
    for (double p : testing::kSuiteP) {
      const auto report = bounds::dominance_check(g, FlipParams(p), 100, exact::Starts::all, 1e-9, kThreads);
      rows += report.rows.size();
      if (!report.ok()) o.fail(name + ": " + report.violations.front());
    }
  }
  if (o.pass) o.detail = std::to_string(rows) + " (graph, p, t) rows, all starts, t <= 100";
  return o;
}

Outcome reduction_identity() {
  Outcome o;
  double worst = 0.0;
  std::vector<std::pair<std::size_t, double>> jobs;
  for (std::size_t n = 4; n <= 10; ++n) {
    for (double p : {0.3, 0.5}) jobs.emplace_back(n, p);
  }
  std::vector<double> residual(jobs.size(), 0.0);
  parallel_for(jobs.size(), kThreads, [&](std::size_t i) {
    const auto [n, p] = jobs[i];
    const Graph g = complete_graph(n);
    const FlipParams params(p);
    const auto pi = exact::stationary(g, params);
    const auto rpi = kn::reduced_stationary(n, params);
    for (bool blue : {false, true}) {
      const auto full = exact::tv_curve(g, params, blue ? Coloring::all_blue(n) : Coloring::all_red(n), 200, pi);
      const auto reduced = kn::reduced_tv_curve(n, params, blue ? n : 0, 200, rpi);
      for (std::size_t t = 0; t <= 200; ++t) {
        residual[i] = std::max(residual[i], std::abs(full.points[t].d - reduced.points[t].d));
      }
    }
  });
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    worst = std::max(worst, residual[i]);
    if (!(residual[i] <= 1e-9)) o.fail("n=" + std::to_string(jobs[i].first) + fmt(" residual %.3g", residual[i]));
  }
  if (o.pass) o.detail = fmt("max |reduced - full| = %.3g over n=4..10, both p, t <= 200", worst);
  return o;
}

Outcome sandwich_validity() {
  Outcome o;
  std::ostringstream detail;
  for (std::size_t n : {8, 10, 12}) {
    const FlipParams params(0.5);
    const auto pi = kn::reduced_stationary(n, params);
    const bounds::BhrSeries series(complete_graph(n));
    for (double eps : {0.25, 0.1}) {
      const double lower = bounds::wilson_lower_bound(n, params, eps);
      const auto t = kn::reduced_mixing_time(n, params, eps, pi);
      const auto upper = bounds::first_time_at_most(series, eps, 1'000'000);
      detail << "K" << n << "@" << eps << ":" << fmt("%.2f", lower) << "<=" << t << "<=" << upper.value_or(0) << " ";
      if (!upper || !(lower <= static_cast<double>(t)) || t > *upper) {
        o.fail("K_" + std::to_string(n) + fmt(" eps=%.2f", eps));
      }
    }
  }
  for (const auto& [name, g] : testing::reference_suite()) {
    for (double p : testing::kSuiteP) {
      const FlipParams params(p);
      const auto s = bounds::general_sandwich(g, params, 1.0);
      const auto t = static_cast<double>(exact::mixing_time(g, params, s.eps, exact::Starts::all, exact::stationary(g, params), kThreads));
      if (!(s.lower <= t && t <= s.upper)) o.fail(name + fmt(" general c=1: %.3g <= %.3g <= %.3g", s.lower, t, s.upper));
    }
  }
  if (o.pass) o.detail = detail.str() + "; general c=1 holds on suite";
  return o;
}

Outcome cutoff_trend() {
  Outcome o;
  const FlipParams params(0.5);
  const std::vector<std::size_t> ns{512, 1024, 2048, 4096};
  const std::vector<double> no_gamma;
  const auto mix = kn::cutoff_profile(ns, params, no_gamma, kn::kProfileEps, exact::kDefaultTol, kThreads);
  auto t_mix = [&](std::size_t n, double eps) {
    for (const auto& r : mix.mixing) {
      if (r.n == n && r.eps == eps) return static_cast<double>(r.t_mix);
    }
    return std::nan("");
  };
  const double r512 = t_mix(512, 0.25) / kn::cutoff_time(512);
  const double r4096 = t_mix(4096, 0.25) / kn::cutoff_time(4096);
  if (!(r4096 >= 0.85 && r4096 <= 1.15)) o.fail(fmt("(a) ratio %.4f at n=4096", r4096));
  if (!(std::abs(r4096 - 1) < std::abs(r512 - 1))) o.fail(fmt("(a) ratio %.4f not closer than %.4f", r4096, r512));
  std::vector<double> windows;
  for (std::size_t n : ns) windows.push_back((t_mix(n, 0.1) - t_mix(n, 0.9)) / static_cast<double>(n));
  for (std::size_t i = 1; i < windows.size(); ++i) {
    if (!(windows[i] <= windows[i - 1] * 1.10)) o.fail(fmt("(b) window %.4f after %.4f", windows[i], windows[i - 1]));
  }
  const std::vector<std::size_t> big{16384};
  const std::vector<double> gammas{-2, -1, 0, 1, 2, 4, 8};
  const auto profile = kn::cutoff_profile(big, params, gammas, std::vector<double>{}, exact::kDefaultTol, kThreads);
  for (std::size_t i = 1; i < profile.rows.size(); ++i) {
    if (!(profile.rows[i].d < profile.rows[i - 1].d)) o.fail(fmt("(c) d not decreasing at gamma=%.0f", profile.rows[i].gamma));
  }
  if (o.pass) {
    o.detail = fmt("ratio %.4f (n=512) -> %.4f (n=4096); ", r512, r4096) +
               fmt("windows %.3f %.3f ", windows[0], windows[1]) + fmt("%.3f %.3f; ", windows[2], windows[3]) +
               fmt("profile n=16384 from %.4f to %.3g", profile.rows.front().d, profile.rows.back().d);
  }
  return o;
}

Outcome moments() {
  Outcome o;
  const std::size_t n = 4096;
  const auto report = kn::moment_checks(n, FlipParams(0.5), static_cast<std::size_t>(std::ceil(n * std::log(n))));
  if (!report.ok()) o.fail(report.violations.front());
  if (o.pass) o.detail = fmt("max mean residual %.3g, max variance %.1f (bound %.0f)", report.max_mean_residual, report.max_variance, 2.0 * n);
  return o;
}

Outcome coupling_tails() {
  Outcome o;
  const FlipParams params(0.5);
  const std::size_t n = 1024;
  const auto traces = coupling::run_replicas(n, params, 10000, 20240501, kThreads);
  auto t_at = [&](double gamma) {
    return static_cast<std::uint64_t>(std::ceil(kn::cutoff_time(n) + gamma * static_cast<double>(n)));
  };
  std::vector<std::uint64_t> ts;
  for (double gamma : {1.0, 4.0, 16.0, 64.0}) ts.push_back(t_at(gamma));
  const auto rows = coupling::tail_table(traces, ts);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const bool ok = rows[i].p_tail <= rows[i - 1].p_tail && (rows[i - 1].p_tail == 0.0 || rows[i].p_tail < rows[i - 1].p_tail);
    if (!ok) o.fail("tail not decreasing at index " + std::to_string(i));
  }
  std::vector<std::uint64_t> grid;
  std::vector<double> gammas;
  for (double gamma = 4.0; gamma <= 100.0; gamma += 1.0) {
    gammas.push_back(gamma);
    grid.push_back(t_at(gamma));
  }
  const auto envelope = coupling::tail_table(traces, grid);
  double c_fit = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) c_fit = std::max(c_fit, envelope[i].p_tail * std::sqrt(gammas[i]));
  if (!(c_fit <= 10.0)) o.fail(fmt("fitted C = %.3f", c_fit));

  std::size_t checked = 0;
  for (std::size_t small : {4, 6, 8, 10}) {
    const Graph g = complete_graph(small);
    const auto pi = exact::stationary(g, params);
    const std::size_t tmax = 400;
    const auto red = exact::tv_curve(g, params, Coloring::all_red(small), tmax, pi);
    const auto blue = exact::tv_curve(g, params, Coloring::all_blue(small), tmax, pi);
    const auto small_traces = coupling::run_replicas(small, params, 10000, 777 + small, kThreads);
    std::vector<std::uint64_t> all_t(tmax + 1);
    for (std::size_t t = 0; t <= tmax; ++t) all_t[t] = t;
    const auto tail = coupling::tail_table(small_traces, all_t);
    for (std::size_t t = 0; t <= tmax; ++t) {
      const double d = std::max(red.points[t].d, blue.points[t].d);
      ++checked;
      if (!(tail[t].p_tail + 3 * tail[t].std_error >= d)) {
        o.fail("K_" + std::to_string(small) + " t=" + std::to_string(t) + fmt(": %.4f + 3*%.4f < %.4f", tail[t].p_tail, tail[t].std_error, d));
      }
    }
  }
  if (o.pass) {
    o.detail = fmt("P(tau > t) at gamma=1,4,16: %.4f %.4f %.4f; ", rows[0].p_tail, rows[1].p_tail, rows[2].p_tail) +
               fmt("gamma=64: %.4f; fitted C = %.3f; ", rows[3].p_tail, c_fit) +
               std::to_string(checked) + " (n<=10, t) points dominate exact d(t)";
  }
  return o;
}

Outcome eigenfunctions() {
  Outcome o;
  double worst = 0.0;
  for (const auto& [name, g] : testing::reference_suite()) {
    for (double p : testing::kSuiteP) {
      for (const auto& r : spectrum::eigenfunction_residuals(g, FlipParams(p))) {
        worst = std::max(worst, r.max_residual);
        if (!(r.max_residual <= 1e-12)) o.fail(name + " vertex " + std::to_string(r.vertex));
      }
    }
  }
  if (o.pass) o.detail = fmt("max residual %.3g over every vertex of the suite", worst);
  return o;
}

std::string csv_body(std::vector<std::string> args) {
  args.insert(args.begin(), "flipmix");
  std::ostringstream out, err;
  if (cli::run(args, out, err) != 0) return "<exit " + err.str() + ">";
  std::istringstream in(out.str());
  std::string line, body;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '#') body += line + "\n";
  }
  return body;
}

Outcome determinism() {
  Outcome o;
  const std::vector<std::vector<std::string>> commands{
      {"spectrum", "--graph", "random_connected:7,10,7"},
      {"tv-exact", "--graph", "cycle:5", "--tmax", "40", "--p", "0.3"},
      {"bounds", "--graph", "bipartite:2,3", "--tmax", "50"},
      {"sandwich", "--graph", "complete:6"},
      {"kn-profile", "--n", "256,512", "--table", "mixing"},
      {"couple", "--n", "512", "--replicas", "2000", "--seed", "17"},
      {"couple", "--n", "512", "--replicas", "2000", "--seed", "17", "--gamma", "0,1,4"},
      {"walk-check", "--graph", "path:4"},
  };
  for (const auto& command : commands) {
    auto threaded = command;
    threaded.insert(threaded.end(), {"--threads", "3"});
    const auto a = csv_body(command);
    if (a.rfind("<exit", 0) == 0) o.fail(command.front() + " failed");
    if (csv_body(command) != a || csv_body(threaded) != a) o.fail(command.front() + " body differs between runs");
  }
  if (o.pass) o.detail = std::to_string(commands.size()) + " invocations byte-identical across repeats and thread counts";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"spectrum traces", spectrum_traces},
      {"worked spectra", worked_examples},
      {"bound dominance", bound_dominance},
      {"reduction identity", reduction_identity},
      {"sandwich validity", sandwich_validity},
      {"cutoff trend", cutoff_trend},
      {"moment identities", moments},
      {"coupling tails", coupling_tails},
      {"eigenfunctions", eigenfunctions},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2zu %-20s %s  (%.1fs) %s\n", i + 1, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
