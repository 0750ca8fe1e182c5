#include "flipmix/int128.hpp"
#include "flipmix/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "flipmix/csv.hpp"
#include "flipmix/errors.hpp"
#include "flipmix/graph.hpp"
#include "flipmix/parallel.hpp"

namespace flipmix::coupling {

namespace {

using u128 = uint128;

constexpr std::uint64_t kMaxCouplingSteps = 1'000'000'000;

struct Pair {
  std::uint64_t a;
  std::uint64_t b;
};

/// Two distinct uniform vertices: the second draw skips the first.
Pair draw_pair(std::size_t n, RngStream& rng) {
  const std::uint64_t a = rng.uniform_below(n);
  std::uint64_t b = rng.uniform_below(n - 1);
  if (b >= a) ++b;
  return {a, b};
}

/// How many of the pair fall below `threshold` (vertices are laid out with
/// the counted class first).
std::int64_t count_below(const Pair& pair, std::int64_t threshold) {
  return (static_cast<std::int64_t>(pair.a) < threshold) +
         (static_cast<std::int64_t>(pair.b) < threshold);
}

u128 choose2(std::int64_t x) {
  return x < 2 ? 0 : static_cast<u128>(x) * static_cast<u128>(x - 1) / 2;
}

void validate(std::size_t n) {
  if (n < 2) throw InputError("coupling needs n >= 2");
}

}  // namespace

std::int64_t stage_one_threshold(std::size_t n) {
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (s * s < static_cast<std::int64_t>(n)) ++s;
  while (s > 0 && (s - 1) * (s - 1) >= static_cast<std::int64_t>(n)) --s;
  return s;
}

CoupledState advance_stage(std::size_t n, CoupledState state) {
  if (state.stage == Stage::one && state.delta() <= stage_one_threshold(n)) state.stage = Stage::two;
  if (state.stage == Stage::two && std::abs(state.delta()) <= 1) state.stage = Stage::three;
  if (state.stage == Stage::three && state.delta() == 0) state.stage = Stage::coupled;
  return state;
}

CoupledState initial_state(std::size_t n) {
  validate(n);
  return advance_stage(n, {0, static_cast<std::int64_t>(n), Stage::one});
}

CoupledState stage1_step(std::size_t n, const FlipParams& params, CoupledState state,
                         RngStream& rng) {
  // Vertex layout: [0, Delta) disagree, then W agreeing blue, then agreeing red.
  const std::int64_t delta = state.delta();
  const Pair pair = draw_pair(n, rng);
  const bool blue = rng.bernoulli(params.p());
  const std::int64_t disagree = count_below(pair, delta);
  const std::int64_t agree_blue = count_below(pair, delta + state.w) - disagree;
  const std::int64_t agree_red = 2 - disagree - agree_blue;
  if (blue) {
    state.w += agree_red + disagree;
    state.z += agree_red;
  } else {
    state.w -= agree_blue;
    state.z -= agree_blue + disagree;
  }
  return advance_stage(n, state);
}

CoupledState stage2or3_step(std::size_t n, const FlipParams& params, CoupledState state,
                            RngStream& rng) {
  const Pair x_pair = draw_pair(n, rng);
  const Pair y_pair = draw_pair(n, rng);
  const bool blue = rng.bernoulli(params.p());
  const std::int64_t x_blue = count_below(x_pair, state.w);
  const std::int64_t y_blue = count_below(y_pair, state.z);
  if (blue) {
    state.w += 2 - x_blue;
    state.z += 2 - y_blue;
  } else {
    state.w -= x_blue;
    state.z -= y_blue;
  }
  return advance_stage(n, state);
}

CoupledState coupled_step(std::size_t n, const FlipParams& params, CoupledState state,
                          RngStream& rng) {
  const Pair pair = draw_pair(n, rng);
  const bool blue = rng.bernoulli(params.p());
  const std::int64_t chosen_blue = count_below(pair, state.w);
  state.w += blue ? 2 - chosen_blue : -chosen_blue;
  state.z = state.w;
  return state;
}

CouplingTrace coupling_time(std::size_t n, const FlipParams& params, RngStream& rng,
                            bool record_path) {
  CoupledState state = initial_state(n);
  CouplingTrace trace;
  if (record_path) trace.delta_path.push_back(state.delta());
  for (std::uint64_t t = 0; state.stage != Stage::coupled; ++t) {
    if (t > kMaxCouplingSteps) throw CheckFailure("coupling did not complete within the step limit");
    switch (state.stage) {
      case Stage::one:
        ++trace.tau1;
        state = stage1_step(n, params, state, rng);
        break;
      case Stage::two:
        ++trace.tau2;
        state = stage2or3_step(n, params, state, rng);
        break;
      case Stage::three:
        ++trace.tau3;
        state = stage2or3_step(n, params, state, rng);
        break;
      case Stage::coupled:
        break;
    }
    if (record_path) trace.delta_path.push_back(state.delta());
  }
  return trace;
}

CouplingTrace coupling_time(std::size_t n, const FlipParams& params, std::uint64_t seed,
                            bool record_path) {
  RngStream rng(seed);
  return coupling_time(n, params, rng, record_path);
}

CouplingTrace coupling_time_full(std::size_t n, const FlipParams& params, std::uint64_t seed) {
  if (n > kFullColoringVertexCap) throw GuardExceeded("full-coloring coupling", n, kFullColoringVertexCap);
  const Graph g = complete_graph(n);
  RngStream rng(seed);
  Coloring x = Coloring::all_red(n);
  Coloring y = Coloring::all_blue(n);
  auto state_of = [&](Stage stage) {
    return advance_stage(n, {static_cast<std::int64_t>(x.blue_count()),
                             static_cast<std::int64_t>(y.blue_count()), stage});
  };
  CoupledState state = state_of(Stage::one);
  CouplingTrace trace;
  for (std::uint64_t t = 0; state.stage != Stage::coupled; ++t) {
    if (t > kMaxCouplingSteps) throw CheckFailure("coupling did not complete within the step limit");
    if (state.stage == Stage::one) {
      ++trace.tau1;
      const Edge& e = g.edges()[rng.uniform_below(g.num_edges())];
      const Color color = rng.bernoulli(params.p()) ? Color::blue : Color::red;
      x = apply_face({e, color}, std::move(x));
      y = apply_face({e, color}, std::move(y));
    } else {
      ++(state.stage == Stage::two ? trace.tau2 : trace.tau3);
      const Edge& ex = g.edges()[rng.uniform_below(g.num_edges())];
      const Edge& ey = g.edges()[rng.uniform_below(g.num_edges())];
      const Color color = rng.bernoulli(params.p()) ? Color::blue : Color::red;
      x = apply_face({ex, color}, std::move(x));
      y = apply_face({ey, color}, std::move(y));
    }
    state = state_of(state.stage);
  }
  return trace;
}

std::array<double, 5> delta_probabilities(std::size_t n, std::int64_t w, std::int64_t z) {
  validate(n);
  const auto size = static_cast<std::int64_t>(n);
  if (w < 0 || w > size || z < 0 || z > size) throw InputError("blue counts must lie in [0, n]");
  const u128 pairs = choose2(size);
  const u128 total = pairs * pairs;
  const u128 x_mixed = static_cast<u128>(w) * static_cast<u128>(size - w);
  const u128 y_mixed = static_cast<u128>(z) * static_cast<u128>(size - z);
  const u128 down2 = choose2(size - w) * choose2(z);
  const u128 down1 = choose2(size - w) * y_mixed + x_mixed * choose2(z);
  const u128 up1 = x_mixed * choose2(size - z) + choose2(w) * y_mixed;
  const u128 up2 = choose2(w) * choose2(size - z);
  const u128 hold = total - down2 - down1 - up1 - up2;
  const double denom = static_cast<double>(total);
  return {static_cast<double>(down2) / denom, static_cast<double>(down1) / denom,
          static_cast<double>(hold) / denom, static_cast<double>(up1) / denom,
          static_cast<double>(up2) / denom};
}

std::array<double, 3> delta_tilde_probabilities(std::size_t n, std::int64_t delta) {
  validate(n);
  const auto size = static_cast<std::int64_t>(n);
  if (delta < 0 || delta > size) throw InputError("Delta must lie in [0, n]");
  const double pairs = static_cast<double>(choose2(size));
  return {static_cast<double>(choose2(delta)) / pairs,
          static_cast<double>(delta) * static_cast<double>(size - delta) / pairs,
          static_cast<double>(choose2(size - delta)) / pairs};
}

std::vector<CouplingTrace> run_replicas(std::size_t n, const FlipParams& params,
                                        std::size_t replicas, std::uint64_t base_seed,
                                        unsigned threads) {
  std::vector<CouplingTrace> traces(replicas);
  parallel_for(replicas, threads, [&](std::size_t i) {
    RngStream rng = RngStream::for_replica(base_seed, i);
    traces[i] = coupling_time(n, params, rng);
  });
  return traces;
}

std::vector<TailRow> tail_table(std::span<const CouplingTrace> traces,
                                std::span<const std::uint64_t> t_list) {
  if (traces.empty()) throw InputError("tail table needs at least one replica");
  const double replicas = static_cast<double>(traces.size());
  std::vector<TailRow> rows;
  for (std::uint64_t t : t_list) {
    const auto count = std::count_if(traces.begin(), traces.end(),
                                     [t](const CouplingTrace& trace) { return trace.tau() > t; });
    const double p = static_cast<double>(count) / replicas;
    const double floored = std::clamp(p, 1.0 / replicas, 1.0 - 1.0 / replicas);
    rows.push_back({t, p, std::sqrt(floored * (1.0 - floored) / replicas)});
  }
  return rows;
}

std::vector<TailRow> tail_estimate(std::size_t n, const FlipParams& params, std::size_t replicas,
                                   std::span<const std::uint64_t> t_list, std::uint64_t base_seed,
                                   unsigned threads) {
  if (replicas < 100) throw InputError("tail_estimate needs at least 100 replicas");
  const auto traces = run_replicas(n, params, replicas, base_seed, threads);
  return tail_table(traces, t_list);
}

void write_traces_csv(std::ostream& out, std::span<const CouplingTrace> traces) {
  csv::row(out, "replica", "tau1", "tau2", "tau3", "tau");
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto& tr = traces[i];
    csv::row(out, i, tr.tau1, tr.tau2, tr.tau3, tr.tau());
  }
}

void write_tail_csv(std::ostream& out, std::span<const TailRow> rows) {
  csv::row(out, "t", "p_tail", "stderr");
  for (const auto& r : rows) csv::row(out, r.t, csv::num(r.p_tail), csv::num(r.std_error));
}

LazyWalk::LazyWalk(std::int64_t position, double r) : position_(position) {
  if (!(r > 0.0 && r < 1.0)) throw InputError("lazy walk needs r in (0, 1)");
  const double s = 1.0 - r;
  big_ = r * r * s * s;
  small_ = 2.0 * r * s * (r * r + s * s);
}

std::array<double, 5> LazyWalk::step_probabilities() const noexcept {
  return {big_, small_, 1.0 - 2.0 * (big_ + small_), small_, big_};
}

void LazyWalk::step(RngStream& rng) {
  const double u = rng.uniform01();
  if (u < big_) {
    position_ -= 2;
  } else if (u < big_ + small_) {
    position_ -= 1;
  } else if (u < big_ + 2.0 * small_) {
    position_ += 1;
  } else if (u < 2.0 * (big_ + small_)) {
    position_ += 2;
  }
}

std::optional<std::uint64_t> lazy_walk_hitting(std::size_t n, double r, std::int64_t start,
                                               std::uint64_t seed, std::uint64_t max_steps) {
  validate(n);
  LazyWalk walk(start, r);
  RngStream rng(seed);
  for (std::uint64_t t = 0; t <= max_steps; ++t) {
    if (std::abs(walk.position()) <= 1) return t;
    walk.step(rng);
  }
  return std::nullopt;
}

}  // namespace flipmix::coupling
