#include "flipmix/spectrum.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "flipmix/csv.hpp"
#include "flipmix/errors.hpp"
#include "flipmix/exactdist.hpp"

namespace flipmix::spectrum {

namespace {

std::vector<std::uint64_t> neighbor_masks(const Graph& g) {
  std::vector<std::uint64_t> masks(g.num_vertices(), 0);
  for (const Edge& e : g.edges()) {
    masks[e.u] |= std::uint64_t{1} << e.v;
    masks[e.v] |= std::uint64_t{1} << e.u;
  }
  return masks;
}

}  // namespace

Rational Rational::make(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InputError("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t divisor = std::gcd(num, den);
  return {num / divisor, den / divisor};
}

Rational eigenvalue_of_flat(const Graph& g, Flat flat) {
  std::int64_t inside = 0;
  for (const Edge& e : g.edges()) {
    if (((flat.mask >> e.u) & 1U) && ((flat.mask >> e.v) & 1U)) ++inside;
  }
  return Rational::make(inside, static_cast<std::int64_t>(g.num_edges()));
}

std::vector<SpectrumEntry> full_spectrum(const Graph& g) {
  const std::size_t n = g.num_vertices();
  if (n > kSpectrumVertexCap) throw GuardExceeded("full_spectrum vertex count", n, kSpectrumVertexCap);
  const std::size_t subsets = std::size_t{1} << n;
  const auto m = static_cast<std::int64_t>(g.num_edges());
  const auto neighbors = neighbor_masks(g);

  // e(X) = e(X minus its lowest vertex v) + |N(v) ∩ X|
  std::vector<std::int64_t> inside(subsets, 0);
  for (std::uint64_t x = 1; x < subsets; ++x) {
    const int v = std::countr_zero(x);
    const std::uint64_t rest = x & (x - 1);
    inside[x] = inside[rest] + std::popcount(neighbors[v] & rest);
  }

  // Superset Moebius transform of c_Y = 2^(n-|Y|).
  std::vector<std::int64_t> multiplicity(subsets);
  for (std::uint64_t y = 0; y < subsets; ++y) {
    multiplicity[y] = std::int64_t{1} << (n - static_cast<std::size_t>(std::popcount(y)));
  }
  for (std::size_t bit = 0; bit < n; ++bit) {
    const std::uint64_t b = std::uint64_t{1} << bit;
    for (std::uint64_t x = 0; x < subsets; ++x) {
      if (!(x & b)) multiplicity[x] -= multiplicity[x | b];
    }
  }

  std::int64_t total = 0;
  std::vector<SpectrumEntry> spectrum;
  spectrum.reserve(subsets);
  for (std::uint64_t x = 0; x < subsets; ++x) {
    total += multiplicity[x];
    spectrum.push_back({Flat{x}, Rational::make(inside[x], m), multiplicity[x]});
  }
  if (total != static_cast<std::int64_t>(subsets)) {
    throw CheckFailure("multiplicities sum to " + std::to_string(total) + ", expected 2^n = " +
                       std::to_string(subsets));
  }
  return spectrum;
}

std::map<Rational, std::int64_t> aggregate(std::span<const SpectrumEntry> spectrum) {
  std::map<Rational, std::int64_t> out;
  for (const SpectrumEntry& entry : spectrum) out[entry.eigenvalue] += entry.multiplicity;
  return out;
}

void write_csv(std::ostream& out, std::span<const SpectrumEntry> spectrum) {
  csv::row(out, "flat_bitmask", "eigenvalue_num", "eigenvalue_den", "multiplicity");
  for (const SpectrumEntry& e : spectrum) {
    csv::row(out, e.flat.mask, e.eigenvalue.num, e.eigenvalue.den, e.multiplicity);
  }
}

std::vector<TraceResidual> trace_residuals(const Graph& g, const FlipParams& params,
                                           std::size_t kmax, unsigned threads) {
  if (g.num_vertices() > kTraceCheckVertexCap) {
    throw GuardExceeded("trace_check vertex count", g.num_vertices(), kTraceCheckVertexCap);
  }
  const auto grouped = aggregate(full_spectrum(g));
  const auto direct = exact::trace_powers(g, params, kmax, threads);
  std::vector<TraceResidual> out;
  for (std::size_t k = 1; k <= kmax; ++k) {
    double spectral = 0.0;
    for (const auto& [lambda, mult] : grouped) {
      spectral += static_cast<double>(mult) * std::pow(lambda.value(), static_cast<double>(k));
    }
    out.push_back({k, spectral, direct[k - 1], std::abs(spectral - direct[k - 1])});
  }
  return out;
}

std::vector<TraceResidual> trace_check(const Graph& g, const FlipParams& params,
                                       std::size_t kmax, double tolerance, unsigned threads) {
  auto residuals = trace_residuals(g, params, kmax, threads);
  for (const TraceResidual& r : residuals) {
    if (!(r.residual <= tolerance)) {
      throw CheckFailure("trace identity violated at k=" + std::to_string(r.k) +
                         ": residual " + csv::num(r.residual));
    }
  }
  return residuals;
}

std::vector<EigenfunctionResidual> eigenfunction_residuals(const Graph& g,
                                                           const FlipParams& params) {
  const std::size_t n = g.num_vertices();
  exact::check_state_cap(g, exact::kDefaultStateCap);
  const std::size_t states = std::size_t{1} << n;
  const auto m = static_cast<std::int64_t>(g.num_edges());
  std::vector<EigenfunctionResidual> out;
  std::vector<double> f(states);
  for (Vertex v = 0; v < n; ++v) {
    for (std::uint64_t state = 0; state < states; ++state) {
      f[state] = phi_i(Coloring::from_index(n, state), v, params);
    }
    const auto pf = exact::expected_next(g, params, f);
    const Rational lambda = Rational::make(m - static_cast<std::int64_t>(g.degree(v)), m);
    double worst = 0.0;
    for (std::uint64_t state = 0; state < states; ++state) {
      worst = std::max(worst, std::abs(pf[state] - lambda.value() * f[state]));
    }
    out.push_back({v, lambda, worst});
  }
  return out;
}

}  // namespace flipmix::spectrum
