#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "flipmix/chain.hpp"
#include "flipmix/rng.hpp"

namespace flipmix::coupling {

enum class Stage : std::uint8_t { one = 1, two = 2, three = 3, coupled = 4 };

/**
 * Blue counts of two K_n chains: W started all red, Z started all blue.
 *
 * During stage one both chains use the same vertex pair and colour, so the
 * disagreement set has exactly Delta = Z - W vertices (red in the W chain,
 * blue in the Z chain) and by exchangeability only its size matters.
 */
struct CoupledState {
  std::int64_t w = 0;
  std::int64_t z = 0;
  Stage stage = Stage::one;

  std::int64_t delta() const noexcept { return z - w; }
};

/// ceil(sqrt(n)), the stage-one exit level.
std::int64_t stage_one_threshold(std::size_t n);

/// Applies every stage transition the current Delta already satisfies.
CoupledState advance_stage(std::size_t n, CoupledState state);

/// (0, n) advanced to its stage.
CoupledState initial_state(std::size_t n);

/// Shared vertex pair and colour coin; Delta drops by the number of chosen
/// disagreeing vertices.
CoupledState stage1_step(std::size_t n, const FlipParams& params, CoupledState state,
                         RngStream& rng);

/// Independent vertex pairs (W chain drawn first), shared colour coin.
CoupledState stage2or3_step(std::size_t n, const FlipParams& params, CoupledState state,
                            RngStream& rng);

/// After coupling both chains make the identical move.
CoupledState coupled_step(std::size_t n, const FlipParams& params, CoupledState state,
                          RngStream& rng);

struct CouplingTrace {
  std::uint64_t tau1 = 0;
  std::uint64_t tau2 = 0;
  std::uint64_t tau3 = 0;
  std::vector<std::int64_t> delta_path;  // Delta_0..Delta_tau when recorded

  std::uint64_t tau() const noexcept { return tau1 + tau2 + tau3; }
};

CouplingTrace coupling_time(std::size_t n, const FlipParams& params, RngStream& rng,
                            bool record_path = false);
CouplingTrace coupling_time(std::size_t n, const FlipParams& params, std::uint64_t seed,
                            bool record_path = false);

inline constexpr std::size_t kFullColoringVertexCap = 20;

/// Same three-stage rule simulated on full K_n colorings (cross-check mode).
CouplingTrace coupling_time_full(std::size_t n, const FlipParams& params, std::uint64_t seed);

/// Probabilities of Delta moves -2, -1, 0, +1, +2 under independent pairs.
std::array<double, 5> delta_probabilities(std::size_t n, std::int64_t w, std::int64_t z);

/// Stage-one law of Delta: moves -2, -1, 0.
std::array<double, 3> delta_tilde_probabilities(std::size_t n, std::int64_t delta);

/// Replica i uses RngStream::for_replica(base_seed, i).
std::vector<CouplingTrace> run_replicas(std::size_t n, const FlipParams& params,
                                        std::size_t replicas, std::uint64_t base_seed,
                                        unsigned threads = 1);

struct TailRow {
  std::uint64_t t;
  double p_tail;
  double std_error;
};

/// Empirical P(tau > t). The standard error uses max(p, 1/R) in place of p so
/// an empty tail still reports one pseudo-count of uncertainty.
std::vector<TailRow> tail_table(std::span<const CouplingTrace> traces,
                                std::span<const std::uint64_t> t_list);

std::vector<TailRow> tail_estimate(std::size_t n, const FlipParams& params, std::size_t replicas,
                                   std::span<const std::uint64_t> t_list, std::uint64_t base_seed,
                                   unsigned threads = 1);

void write_traces_csv(std::ostream& out, std::span<const CouplingTrace> traces);
void write_tail_csv(std::ostream& out, std::span<const TailRow> rows);

/// Lazy walk with moves +-2 w.p. r^2(1-r)^2 and +-1 w.p. 2r(1-r)(r^2+(1-r)^2).
class LazyWalk {
 public:
  LazyWalk(std::int64_t position, double r);

  std::int64_t position() const noexcept { return position_; }
  /// Probabilities of moves -2, -1, 0, +1, +2.
  std::array<double, 5> step_probabilities() const noexcept;
  void step(RngStream& rng);

 private:
  std::int64_t position_;
  double big_;    // each of +-2
  double small_;  // each of +-1
};

/// Steps until the walk from `start` enters {-1, 0, 1}; nullopt if it has
/// not done so after max_steps.
std::optional<std::uint64_t> lazy_walk_hitting(std::size_t n, double r, std::int64_t start,
                                               std::uint64_t seed,
                                               std::uint64_t max_steps = 1'000'000'000);

}  // namespace flipmix::coupling
