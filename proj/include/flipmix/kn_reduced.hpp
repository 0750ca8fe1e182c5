#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "flipmix/chain.hpp"
#include "flipmix/exactdist.hpp"

namespace flipmix::kn {

/**
 * Transition law of the blue count W on K_n.
 *
 * With C(n,2) equally likely vertex pairs split into both-blue C(W,2),
 * mixed W(n-W) and both-red C(n-W,2), a blue coin moves W by +2 (both red)
 * or +1 (mixed) and a red coin by -2 (both blue) or -1 (mixed). Pair counts
 * are formed exactly in 128-bit integers before conversion.
 */
class ReducedKernel {
 public:
  ReducedKernel(std::size_t n, const FlipParams& params);

  std::size_t n() const noexcept { return n_; }
  double p() const noexcept { return p_; }

  /// Probabilities of moves -2, -1, 0, +1, +2 from blue count k.
  std::array<double, 5> moves(std::size_t k) const;

  /// out = in * K (pull form; out is overwritten).
  void apply(std::span<const double> in, std::span<double> out) const;

 private:
  std::size_t n_;
  double p_;
  std::vector<double> down2_, down1_, hold_, up1_, up2_;
};

/// Law of the blue count, index k = number of blue vertices.
class BlueCountDist {
 public:
  static BlueCountDist point_mass(std::size_t n, std::size_t k);
  static BlueCountDist from_probs(std::vector<double> probs);

  std::size_t n() const noexcept { return probs_.size() - 1; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::span<double> probs() noexcept { return probs_; }
  double operator[](std::size_t k) const { return probs_.at(k); }

  double total_mass() const noexcept;
  double mean() const noexcept;
  double variance() const noexcept;
  /// P(|W - center| > radius).
  double mass_outside(double center, double radius) const noexcept;

 private:
  explicit BlueCountDist(std::vector<double> probs) : probs_(std::move(probs)) {}
  std::vector<double> probs_;
};

BlueCountDist reduced_step(const ReducedKernel& kernel, const BlueCountDist& dist);

/// Evolves the point mass at round(pn) for the certified number of steps
/// (n (1-2/n)^t <= tol/10) and then until successive steps differ by < tol/10.
BlueCountDist reduced_stationary(std::size_t n, const FlipParams& params,
                                 double tol = exact::kDefaultTol);

/// d(t) from the point mass at init_k in {0, n}; slack = tol.
exact::TvCurve reduced_tv_curve(std::size_t n, const FlipParams& params, std::size_t init_k,
                                std::size_t tmax, const BlueCountDist& pi,
                                double tol = exact::kDefaultTol);
exact::TvCurve reduced_tv_curve(std::size_t n, const FlipParams& params, std::size_t init_k,
                                std::size_t tmax, double tol = exact::kDefaultTol);

/// Pointwise max of the curves from both monochromatic starts.
exact::TvCurve reduced_worst_tv_curve(std::size_t n, const FlipParams& params, std::size_t tmax,
                                      const BlueCountDist& pi, double tol = exact::kDefaultTol);

/// Worst-of-both-monochromatic-starts mixing time.
std::size_t reduced_mixing_time(std::size_t n, const FlipParams& params, double eps,
                                const BlueCountDist& pi);

/// 1/4 n ln n.
double cutoff_time(std::size_t n);

struct ProfileRow {
  std::size_t n;
  double gamma;
  std::size_t t;
  double d;
};

struct MixingRow {
  std::size_t n;
  double eps;
  std::size_t t_mix;
};

struct CutoffProfile {
  std::vector<ProfileRow> rows;
  std::vector<MixingRow> mixing;
};

inline constexpr std::array<double, 5> kProfileEps{0.9, 0.75, 0.5, 0.25, 0.1};

/// Rows (n, gamma, round(1/4 n ln n + gamma n) clamped at 0, d) using the
/// worst monochromatic start, plus t_mix(eps) for each eps. One job per n.
CutoffProfile cutoff_profile(std::span<const std::size_t> n_list, const FlipParams& params,
                             std::span<const double> gammas,
                             std::span<const double> eps_list = kProfileEps,
                             double tol = exact::kDefaultTol, unsigned threads = 1);

void write_profile_csv(std::ostream& out, const CutoffProfile& profile);
void write_mixing_csv(std::ostream& out, const CutoffProfile& profile);

/// E[W_t] from W_0 = 0: pn (1 - (1 - 2/n)^t).
double mean_closed_form(std::size_t n, const FlipParams& params, std::size_t t);

struct MomentReport {
  std::size_t n;
  std::size_t tmax;
  double max_mean_residual = 0.0;
  double max_variance = 0.0;
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Exact check of the mean closed form (to mean_tol) and Var(W_t) <= 2n for t <= tmax.
MomentReport moment_checks(std::size_t n, const FlipParams& params, std::size_t tmax,
                           double mean_tol = 1e-9);

}  // namespace flipmix::kn
