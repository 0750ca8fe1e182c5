#include "flipmix/exactdist.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "flipmix/bounds.hpp"
#include "flipmix/csv.hpp"
#include "flipmix/errors.hpp"
#include "flipmix/parallel.hpp"

namespace flipmix::exact {

namespace {

constexpr std::size_t kMaxEvolveSteps = 10'000'000;

std::vector<std::uint64_t> edge_masks(const Graph& g) {
  std::vector<std::uint64_t> masks;
  masks.reserve(g.num_edges());
  for (const Edge& e : g.edges()) masks.push_back((std::uint64_t{1} << e.u) | (std::uint64_t{1} << e.v));
  return masks;
}

/// Scatter kernel shared by every exact evolution. `out` is overwritten.
class Kernel {
 public:
  Kernel(const Graph& g, const FlipParams& params)
      : masks_(edge_masks(g)),
        blue_weight_(params.p() / static_cast<double>(g.num_edges())),
        red_weight_(params.q() / static_cast<double>(g.num_edges())) {}

  void apply(std::span<const double> in, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::uint64_t state = 0; state < in.size(); ++state) {
      const double mass = in[state];
      if (mass == 0.0) continue;
      const double blue = blue_weight_ * mass;
      const double red = red_weight_ * mass;
      for (std::uint64_t mask : masks_) {
        out[state | mask] += blue;
        out[state & ~mask] += red;
      }
    }
  }

  std::span<const std::uint64_t> masks() const noexcept { return masks_; }
  double blue_weight() const noexcept { return blue_weight_; }
  double red_weight() const noexcept { return red_weight_; }

 private:
  std::vector<std::uint64_t> masks_;
  double blue_weight_;
  double red_weight_;
};

std::uint64_t all_blue_index(std::size_t n) {
  return n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
}

}  // namespace

ChamberDistribution ChamberDistribution::point_mass(std::size_t n, std::uint64_t index) {
  if (n >= 64) throw GuardExceeded("chamber distribution", n, 63);
  std::vector<double> probs(std::size_t{1} << n, 0.0);
  probs.at(index) = 1.0;
  return ChamberDistribution(n, std::move(probs));
}

ChamberDistribution ChamberDistribution::from_probs(std::size_t n, std::vector<double> probs) {
  if (n >= 64 || probs.size() != (std::size_t{1} << n)) {
    throw InputError("distribution length must be 2^n");
  }
  return ChamberDistribution(n, std::move(probs));
}

double ChamberDistribution::total_mass() const noexcept {
  double sum = 0.0;
  for (double x : probs_) sum += x;
  return sum;
}

void check_state_cap(const Graph& g, std::size_t cap) {
  if (g.num_vertices() > cap) {
    throw GuardExceeded("exact state space 2^n exceeds cap on n", g.num_vertices(), cap);
  }
}

ChamberDistribution evolve(const Graph& g, const FlipParams& params,
                           const ChamberDistribution& dist, std::size_t cap) {
  check_state_cap(g, cap);
  if (dist.num_vertices() != g.num_vertices()) throw InputError("distribution/graph size mismatch");
  std::vector<double> out(dist.size());
  Kernel(g, params).apply(dist.probs(), out);
  return ChamberDistribution::from_probs(g.num_vertices(), std::move(out));
}

double tv(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("total variation of vectors with different lengths");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return 0.5 * sum;
}

Stationary stationary(const Graph& g, const FlipParams& params, double tol, std::size_t cap) {
  check_state_cap(g, cap);
  if (!(tol > 0.0)) throw InputError("stationary tolerance must be positive");
  const double target = tol / 10.0;

  std::size_t certified = 0;
  while (bounds::comaximal_bound(g, certified) > target) {
    if (++certified > kMaxEvolveSteps) throw CheckFailure("co-maximal bound never reached tol/10");
  }

  const Kernel kernel(g, params);
  const std::size_t n = g.num_vertices();
  std::vector<double> current(std::size_t{1} << n, 0.0);
  std::vector<double> next(current.size());
  current[all_blue_index(n)] = 1.0;
  std::size_t steps = 0;
  for (; steps < certified; ++steps) {
    kernel.apply(current, next);
    current.swap(next);
  }
  const std::size_t limit = certified + 100'000;
  while (true) {
    kernel.apply(current, next);
    ++steps;
    const double change = tv(current, next);
    current.swap(next);
    if (change < target) break;
    if (steps > limit) throw CheckFailure("stationary iteration did not settle within limit");
  }
  return {ChamberDistribution::from_probs(n, std::move(current)), tol, steps};
}

TvCurve tv_curve(const Graph& g, const FlipParams& params, const Coloring& init,
                 std::size_t tmax, const Stationary& pi) {
  if (init.size() != g.num_vertices()) throw InputError("initial coloring has wrong length");
  const Kernel kernel(g, params);
  auto current = ChamberDistribution::point_mass(g.num_vertices(), init.index());
  std::vector<double> state(current.probs().begin(), current.probs().end());
  std::vector<double> next(state.size());
  TvCurve curve;
  curve.slack = pi.tol;
  curve.points.reserve(tmax + 1);
  for (std::size_t t = 0;; ++t) {
    curve.points.push_back({t, tv(state, pi.dist.probs())});
    if (t == tmax) break;
    kernel.apply(state, next);
    state.swap(next);
  }
  return curve;
}

TvCurve tv_curve(const Graph& g, const FlipParams& params, const Coloring& init,
                 std::size_t tmax, double tol, std::size_t cap) {
  return tv_curve(g, params, init, tmax, stationary(g, params, tol, cap));
}

void write_csv(std::ostream& out, const TvCurve& curve) {
  csv::row(out, "t", "d_tv");
  for (const TvPoint& point : curve.points) csv::row(out, point.t, csv::num(point.d));
}

std::size_t mixing_time_from(const Graph& g, const FlipParams& params, double eps,
                             std::uint64_t start, const Stationary& pi) {
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  const Kernel kernel(g, params);
  std::vector<double> state(std::size_t{1} << g.num_vertices(), 0.0);
  std::vector<double> next(state.size());
  state.at(start) = 1.0;
  for (std::size_t t = 0; t <= kMaxEvolveSteps; ++t) {
    if (tv(state, pi.dist.probs()) <= eps) return t;
    kernel.apply(state, next);
    state.swap(next);
  }
  throw CheckFailure("mixing time exceeds the evolution step limit");
}

std::size_t mixing_time(const Graph& g, const FlipParams& params, double eps, Starts starts,
                        const Stationary& pi, unsigned threads) {
  const std::size_t n = g.num_vertices();
  std::vector<std::uint64_t> start_states;
  if (starts == Starts::monochromatic) {
    start_states = {all_blue_index(n), 0};
  } else {
    start_states.resize(std::size_t{1} << n);
    for (std::uint64_t s = 0; s < start_states.size(); ++s) start_states[s] = s;
  }
  std::vector<std::size_t> times(start_states.size());
  parallel_for(start_states.size(), threads, [&](std::size_t i) {
    times[i] = mixing_time_from(g, params, eps, start_states[i], pi);
  });
  return *std::max_element(times.begin(), times.end());
}

std::size_t mixing_time(const Graph& g, const FlipParams& params, double eps, Starts starts,
                        double tol, std::size_t cap, unsigned threads) {
  return mixing_time(g, params, eps, starts, stationary(g, params, tol, cap), threads);
}

std::vector<double> trace_powers(const Graph& g, const FlipParams& params, std::size_t kmax,
                                 unsigned threads) {
  if (g.num_vertices() > kTraceStateCap) {
    throw GuardExceeded("trace_powers vertex count", g.num_vertices(), kTraceStateCap);
  }
  if (kmax > kTraceMaxPower) throw GuardExceeded("trace_powers power", kmax, kTraceMaxPower);

  const Kernel kernel(g, params);
  const std::size_t states = std::size_t{1} << g.num_vertices();
  // returns[start * kmax + (k-1)] = (P^k delta_start)(start)
  std::vector<double> returns(states * kmax, 0.0);

  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(states)));
  const std::size_t chunk = (states + workers - 1) / workers;
  parallel_for(workers, workers, [&](std::size_t w) {
    std::vector<double> current(states, 0.0);
    std::vector<double> next(states, 0.0);
    std::vector<std::uint64_t> support;
    std::vector<std::uint64_t> next_support;
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(states, begin + chunk);
    for (std::uint64_t start = begin; start < end; ++start) {
      current[start] = 1.0;
      support.assign(1, start);
      for (std::size_t k = 1; k <= kmax; ++k) {
        next_support.clear();
        auto add = [&](std::uint64_t target, double mass) {
          if (next[target] == 0.0) next_support.push_back(target);
          next[target] += mass;
        };
        for (std::uint64_t state : support) {
          const double mass = current[state];
          current[state] = 0.0;
          for (std::uint64_t mask : kernel.masks()) {
            if (kernel.blue_weight() > 0.0) add(state | mask, kernel.blue_weight() * mass);
            if (kernel.red_weight() > 0.0) add(state & ~mask, kernel.red_weight() * mass);
          }
        }
        returns[start * kmax + (k - 1)] = next[start];
        support.swap(next_support);
        current.swap(next);
      }
      for (std::uint64_t state : support) current[state] = 0.0;
    }
  });

  std::vector<double> traces(kmax, 0.0);
  for (std::uint64_t start = 0; start < states; ++start) {
    for (std::size_t k = 0; k < kmax; ++k) traces[k] += returns[start * kmax + k];
  }
  return traces;
}

std::vector<double> expected_next(const Graph& g, const FlipParams& params,
                                  std::span<const double> f, std::size_t cap) {
  check_state_cap(g, cap);
  const std::size_t states = std::size_t{1} << g.num_vertices();
  if (f.size() != states) throw InputError("function on chambers must have length 2^n");
  const Kernel kernel(g, params);
  std::vector<double> out(states, 0.0);
  for (std::uint64_t state = 0; state < states; ++state) {
    double sum = 0.0;
    for (std::uint64_t mask : kernel.masks()) {
      sum += kernel.blue_weight() * f[state | mask] + kernel.red_weight() * f[state & ~mask];
    }
    out[state] = sum;
  }
  return out;
}

}  // namespace flipmix::exact
