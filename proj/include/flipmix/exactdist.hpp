#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "flipmix/chain.hpp"
#include "flipmix/graph.hpp"

namespace flipmix::exact {

inline constexpr std::size_t kDefaultStateCap = 20;
inline constexpr double kDefaultTol = 1e-12;

/// Probability vector over all 2^n colorings, indexed by the coloring's bit pattern.
class ChamberDistribution {
 public:
  static ChamberDistribution point_mass(std::size_t n, std::uint64_t index);
  /// Takes ownership of `probs`; its length must be 2^n.
  static ChamberDistribution from_probs(std::size_t n, std::vector<double> probs);

  std::size_t num_vertices() const noexcept { return n_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::uint64_t index) const { return probs_.at(index); }
  double total_mass() const noexcept;

 private:
  ChamberDistribution(std::size_t n, std::vector<double> probs)
      : n_(n), probs_(std::move(probs)) {}

  std::size_t n_;
  std::vector<double> probs_;
};

/// Throws GuardExceeded if 2^n states exceed the cap.
void check_state_cap(const Graph& g, std::size_t cap);

/// One transition: each state's mass is scattered over its 2m face outcomes.
ChamberDistribution evolve(const Graph& g, const FlipParams& params,
                           const ChamberDistribution& dist,
                           std::size_t cap = kDefaultStateCap);

/// Half the L1 distance. Throws InputError on length mismatch.
double tv(std::span<const double> a, std::span<const double> b);
inline double tv(const ChamberDistribution& a, const ChamberDistribution& b) {
  return tv(a.probs(), b.probs());
}

/// Stationary distribution with its total-variation error budget `tol`.
struct Stationary {
  ChamberDistribution dist;
  double tol;
  std::size_t steps;
};

/// Evolves the all-blue point mass until the co-maximal bound certifies
/// tol/10, then until successive steps differ by less than tol/10.
Stationary stationary(const Graph& g, const FlipParams& params, double tol = kDefaultTol,
                      std::size_t cap = kDefaultStateCap);

struct TvPoint {
  std::size_t t;
  double d;
};

/// d(t) for t = 0..tmax; every value carries +-slack from the stationary budget.
struct TvCurve {
  std::vector<TvPoint> points;
  double slack = 0.0;
};

TvCurve tv_curve(const Graph& g, const FlipParams& params, const Coloring& init,
                 std::size_t tmax, const Stationary& pi);
TvCurve tv_curve(const Graph& g, const FlipParams& params, const Coloring& init,
                 std::size_t tmax, double tol = kDefaultTol,
                 std::size_t cap = kDefaultStateCap);

void write_csv(std::ostream& out, const TvCurve& curve);

enum class Starts { monochromatic, all };

/// First t with ||P^t_start - pi|| <= eps.
std::size_t mixing_time_from(const Graph& g, const FlipParams& params, double eps,
                             std::uint64_t start, const Stationary& pi);

/// Smallest t with the max-over-starts distance <= eps. Each start's distance
/// is non-increasing, so this is the max of the per-start times.
std::size_t mixing_time(const Graph& g, const FlipParams& params, double eps, Starts starts,
                        const Stationary& pi, unsigned threads = 1);
std::size_t mixing_time(const Graph& g, const FlipParams& params, double eps,
                        Starts starts = Starts::monochromatic, double tol = kDefaultTol,
                        std::size_t cap = kDefaultStateCap, unsigned threads = 1);

inline constexpr std::size_t kTraceStateCap = 14;
inline constexpr std::size_t kTraceMaxPower = 6;

/// trace(P^k) for k = 1..kmax, summing the return mass of each point mass.
std::vector<double> trace_powers(const Graph& g, const FlipParams& params, std::size_t kmax,
                                 unsigned threads = 1);

/// (P f)(C) = E[f(X_1) | X_0 = C] for a function f on chambers.
std::vector<double> expected_next(const Graph& g, const FlipParams& params,
                                  std::span<const double> f, std::size_t cap = kDefaultStateCap);

}  // namespace flipmix::exact
