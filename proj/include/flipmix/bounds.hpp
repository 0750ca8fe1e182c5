#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flipmix/chain.hpp"
#include "flipmix/graph.hpp"

namespace flipmix::exact {
enum class Starts;
}

namespace flipmix::bounds {

/**
 * The alternating flat sum -sum_{X != V} mu(X, V) lambda_X^t, with flats
 * grouped by exact eigenvalue so each t costs one pow per distinct value.
 * Built from spectrum::full_spectrum, so the same vertex cap applies.
 */
class BhrSeries {
 public:
  explicit BhrSeries(const Graph& g);

  double operator()(std::size_t t) const;

  /// (eigenvalue, integer coefficient) pairs in increasing eigenvalue order.
  std::span<const std::pair<double, double>> terms() const noexcept { return terms_; }

 private:
  std::vector<std::pair<double, double>> terms_;
};

/// Values may exceed 1 only through rounding; they are never clamped here.
double bhr_bound(const Graph& g, std::size_t t);

/// Closed form for K_n: -sum_{k=2}^{n-1} (-1)^(n-k) C(n,k) (C(k,2)/C(n,2))^t.
double bhr_bound_complete(std::size_t n, std::size_t t);

/// Closed form for K_{a,b}: 1 - A_a(t) A_b(t), A_s(t) = sum_j (-1)^j C(s,j) (1-j/s)^t.
double bhr_bound_bipartite(std::size_t a, std::size_t b, std::size_t t);

/// sum_v ((m - deg v)/m)^t over the co-maximal flats V \ {v}.
double comaximal_bound(const Graph& g, std::size_t t);

enum class BoundKind { upper, lower };

struct BoundCurve {
  std::string label;
  BoundKind kind = BoundKind::upper;
  std::vector<std::pair<std::size_t, double>> points;
};

BoundCurve bhr_curve(const Graph& g, std::size_t tmax);
BoundCurve comaximal_curve(const Graph& g, std::size_t tmax);

/// First t <= tmax with series(t) <= eps.
std::optional<std::size_t> first_time_at_most(const BhrSeries& series, double eps,
                                              std::size_t tmax);

struct DominanceRow {
  std::size_t t;
  double exact;
  double bhr;
  double comaximal;
};

struct DominanceReport {
  std::vector<DominanceRow> rows;
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

inline constexpr std::size_t kDominanceVertexCap = 12;

/// Checks exact d(t) <= bhr(t) <= comaximal(t), each with `slack`, for t <= tmax.
/// d(t) is the max over the requested starts.
DominanceReport dominance_check(const Graph& g, const FlipParams& params, std::size_t tmax,
                                exact::Starts starts, double slack = 1e-9,
                                unsigned threads = 1);

void write_csv(std::ostream& out, const DominanceReport& report);

struct Sandwich {
  std::string name;
  double lower;
  double upper;
  double eps;
};

/// c m/delta <= t_mix(q e^{-2c}) <= (m/delta)(log n + 2c - log q).
Sandwich general_sandwich(const Graph& g, const FlipParams& params, double c);

/// Lower bound from the blue-count eigenfunction on a regular graph:
/// lambda = 1 - 2/n, Phi(all blue) = qn, R = 4.
double wilson_lower_bound(std::size_t n, const FlipParams& params, double eps);

/// n log n / 2 + c n / 2, where n (1 - 2/n)^t <= e^{-c}.
double regular_upper_bound(std::size_t n, double c);

void write_csv(std::ostream& out, std::span<const Sandwich> rows);

}  // namespace flipmix::bounds
