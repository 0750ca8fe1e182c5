#include "flipmix/bounds.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <ostream>

#include "flipmix/csv.hpp"
#include "flipmix/errors.hpp"
#include "flipmix/exactdist.hpp"
#include "flipmix/parallel.hpp"
#include "flipmix/spectrum.hpp"

namespace flipmix::bounds {

namespace {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double value = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    value = value * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(value);
}

double power(double base, std::size_t t) { return std::pow(base, static_cast<double>(t)); }

double alternating_binomial_sum(std::size_t s, std::size_t t) {
  double sum = 0.0;
  for (std::size_t j = 0; j <= s; ++j) {
    const double term = binomial(s, j) * power(1.0 - static_cast<double>(j) / static_cast<double>(s), t);
    sum += (j % 2 == 0) ? term : -term;
  }
  return sum;
}

}  // namespace

BhrSeries::BhrSeries(const Graph& g) {
  const std::size_t n = g.num_vertices();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  std::map<spectrum::Rational, std::int64_t> coefficients;
  for (const auto& entry : spectrum::full_spectrum(g)) {
    if (entry.flat.mask == full) continue;
    const auto size = static_cast<std::size_t>(std::popcount(entry.flat.mask));
    // -mu(X, V) = -(-1)^(n - |X|)
    coefficients[entry.eigenvalue] += ((n - size) % 2 == 0) ? -1 : 1;
  }
  for (const auto& [lambda, coefficient] : coefficients) {
    if (coefficient != 0) terms_.emplace_back(lambda.value(), static_cast<double>(coefficient));
  }
}

double BhrSeries::operator()(std::size_t t) const {
  double sum = 0.0;
  for (const auto& [lambda, coefficient] : terms_) sum += coefficient * power(lambda, t);
  return sum;
}

double bhr_bound(const Graph& g, std::size_t t) { return BhrSeries(g)(t); }

double bhr_bound_complete(std::size_t n, std::size_t t) {
  if (n < 2) throw InputError("K_n needs n >= 2");
  const double pairs = binomial(n, 2);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double term = binomial(n, k) * power(binomial(k, 2) / pairs, t);
    sum += ((n - k) % 2 == 0) ? -term : term;
  }
  return sum;
}

double bhr_bound_bipartite(std::size_t a, std::size_t b, std::size_t t) {
  if (a < 1 || b < 1) throw InputError("K_{a,b} needs a, b >= 1");
  return 1.0 - alternating_binomial_sum(a, t) * alternating_binomial_sum(b, t);
}

double comaximal_bound(const Graph& g, std::size_t t) {
  const auto m = static_cast<double>(g.num_edges());
  double sum = 0.0;
  for (Vertex v = 0; v < g.num_vertices(); ++v) {
    sum += power((m - static_cast<double>(g.degree(v))) / m, t);
  }
  return sum;
}

BoundCurve bhr_curve(const Graph& g, std::size_t tmax) {
  const BhrSeries series(g);
  BoundCurve curve{"bhr", BoundKind::upper, {}};
  for (std::size_t t = 0; t <= tmax; ++t) curve.points.emplace_back(t, std::max(0.0, series(t)));
  return curve;
}

BoundCurve comaximal_curve(const Graph& g, std::size_t tmax) {
  BoundCurve curve{"comaximal", BoundKind::upper, {}};
  for (std::size_t t = 0; t <= tmax; ++t) curve.points.emplace_back(t, comaximal_bound(g, t));
  return curve;
}

std::optional<std::size_t> first_time_at_most(const BhrSeries& series, double eps,
                                              std::size_t tmax) {
  for (std::size_t t = 0; t <= tmax; ++t) {
    if (series(t) <= eps) return t;
  }
  return std::nullopt;
}

DominanceReport dominance_check(const Graph& g, const FlipParams& params, std::size_t tmax,
                                exact::Starts starts, double slack, unsigned threads) {
  const std::size_t n = g.num_vertices();
  if (n > kDominanceVertexCap) throw GuardExceeded("dominance_check vertex count", n, kDominanceVertexCap);

  const auto pi = exact::stationary(g, params);
  std::vector<Coloring> inits;
  if (starts == exact::Starts::monochromatic) {
    inits = {Coloring::all_blue(n), Coloring::all_red(n)};
  } else {
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) inits.push_back(Coloring::from_index(n, s));
  }
  std::vector<exact::TvCurve> curves(inits.size());
  parallel_for(inits.size(), threads,
               [&](std::size_t i) { curves[i] = exact::tv_curve(g, params, inits[i], tmax, pi); });

  const BhrSeries series(g);
  DominanceReport report;
  for (std::size_t t = 0; t <= tmax; ++t) {
    double worst = 0.0;
    for (const auto& curve : curves) worst = std::max(worst, curve.points[t].d);
    const DominanceRow row{t, worst, series(t), comaximal_bound(g, t)};
    report.rows.push_back(row);
    if (!(row.exact <= row.bhr + slack)) {
      report.violations.push_back("t=" + std::to_string(t) + ": exact " + csv::num(row.exact) +
                                  " > bhr " + csv::num(row.bhr));
    }
    if (!(row.bhr <= row.comaximal + slack)) {
      report.violations.push_back("t=" + std::to_string(t) + ": bhr " + csv::num(row.bhr) +
                                  " > comaximal " + csv::num(row.comaximal));
    }
  }
  return report;
}

void write_csv(std::ostream& out, const DominanceReport& report) {
  csv::row(out, "t", "exact_dtv", "bhr", "comaximal");
  for (const auto& r : report.rows) {
    csv::row(out, r.t, csv::num(r.exact), csv::num(r.bhr), csv::num(r.comaximal));
  }
}

Sandwich general_sandwich(const Graph& g, const FlipParams& params, double c) {
  if (!(c > 0.0)) throw InputError("sandwich needs c > 0");
  if (!(params.q() > 0.0)) throw InputError("sandwich needs q > 0 (log q undefined)");
  const double ratio = static_cast<double>(g.num_edges()) / static_cast<double>(min_degree(g));
  const double n = static_cast<double>(g.num_vertices());
  return {"general", c * ratio, ratio * (std::log(n) + 2.0 * c - std::log(params.q())),
          params.q() * std::exp(-2.0 * c)};
}

double wilson_lower_bound(std::size_t n, const FlipParams& params, double eps) {
  if (n < 3) throw InputError("wilson bound needs n >= 3");
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("wilson bound needs 0 < eps < 1");
  if (!(params.q() > 0.0)) throw InputError("wilson bound needs q > 0");
  constexpr double kR = 4.0;
  const double size = static_cast<double>(n);
  const double gap = 2.0 / size;
  const double start = params.q() * size;
  return (std::log(gap * start * start / (2.0 * kR)) + std::log((1.0 - eps) / eps)) /
         (-2.0 * std::log1p(-gap));
}

double regular_upper_bound(std::size_t n, double c) {
  if (n < 3) throw InputError("regular upper bound needs n >= 3");
  if (!(c > 0.0)) throw InputError("regular upper bound needs c > 0");
  const double size = static_cast<double>(n);
  return size * std::log(size) / 2.0 + c * size / 2.0;
}

void write_csv(std::ostream& out, std::span<const Sandwich> rows) {
  csv::row(out, "name", "lower", "upper", "eps");
  for (const auto& r : rows) csv::row(out, r.name, csv::num(r.lower), csv::num(r.upper), csv::num(r.eps));
}

}  // namespace flipmix::bounds
