#pragma once

#include "flipmix/int128.hpp"
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "flipmix/chain.hpp"
#include "flipmix/graph.hpp"

namespace flipmix::spectrum {

/// Exact fraction in lowest terms with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational make(std::int64_t num, std::int64_t den);
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<int128>(a.num) * b.den <=> static_cast<int128>(b.num) * a.den;
  }
};

/// A flat of the Boolean arrangement: a vertex subset as a bitmask.
struct Flat {
  std::uint64_t mask = 0;

  friend bool operator==(const Flat&, const Flat&) = default;
};

struct SpectrumEntry {
  Flat flat;
  Rational eigenvalue;
  std::int64_t multiplicity = 0;
};

inline constexpr std::size_t kSpectrumVertexCap = 24;
inline constexpr std::size_t kTraceCheckVertexCap = 12;

/// e(X)/m, where e(X) counts edges with both endpoints in X.
Rational eigenvalue_of_flat(const Graph& g, Flat flat);

/**
 * One entry per vertex subset X, in increasing mask order.
 *
 * Multiplicities come from Moebius inversion over the Boolean lattice of the
 * chamber counts c_Y = 2^(n-|Y|); the result is checked to sum to 2^n.
 */
std::vector<SpectrumEntry> full_spectrum(const Graph& g);

/// Total multiplicity per distinct eigenvalue.
std::map<Rational, std::int64_t> aggregate(std::span<const SpectrumEntry> spectrum);

void write_csv(std::ostream& out, std::span<const SpectrumEntry> spectrum);

struct TraceResidual {
  std::size_t k;
  double spectral;  // sum_X m_X lambda_X^k
  double direct;    // trace(P^k) from exact evolution
  double residual;
};

std::vector<TraceResidual> trace_residuals(const Graph& g, const FlipParams& params,
                                           std::size_t kmax, unsigned threads = 1);

/// Throws CheckFailure naming the first k whose residual exceeds `tolerance`.
std::vector<TraceResidual> trace_check(const Graph& g, const FlipParams& params,
                                       std::size_t kmax, double tolerance = 1e-9,
                                       unsigned threads = 1);

struct EigenfunctionResidual {
  Vertex vertex;
  Rational eigenvalue;  // (m - deg v)/m
  double max_residual;  // max_C |(P phi_v)(C) - lambda phi_v(C)|
};

/// Checks that phi_v is a right eigenfunction for every vertex v.
std::vector<EigenfunctionResidual> eigenfunction_residuals(const Graph& g,
                                                           const FlipParams& params);

}  // namespace flipmix::spectrum
