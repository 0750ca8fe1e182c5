#include "flipmix/int128.hpp"
#include "flipmix/kn_reduced.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "flipmix/csv.hpp"
#include "flipmix/errors.hpp"
#include "flipmix/parallel.hpp"

namespace flipmix::kn {

namespace {

constexpr std::size_t kMaxSteps = 100'000'000;

std::size_t certified_steps(std::size_t n, double tol) {
  const double lambda = 1.0 - 2.0 / static_cast<double>(n);
  const double target = tol / 10.0;
  const double size = static_cast<double>(n);
  if (lambda <= 0.0) return 1;
  auto t = static_cast<std::size_t>(std::ceil(std::log(target / size) / std::log(lambda)));
  while (size * std::pow(lambda, static_cast<double>(t)) > target) ++t;
  return t;
}

}  // namespace

ReducedKernel::ReducedKernel(std::size_t n, const FlipParams& params)
    : n_(n), p_(params.p()) {
  if (n < 2) throw InputError("reduced chain needs n >= 2");
  using u128 = uint128;
  const u128 pairs = static_cast<u128>(n) * (n - 1) / 2;
  const double total = static_cast<double>(pairs);
  const double p = params.p();
  const double q = params.q();
  down2_.resize(n + 1);
  down1_.resize(n + 1);
  hold_.resize(n + 1);
  up1_.resize(n + 1);
  up2_.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double both_blue = static_cast<double>(static_cast<u128>(k) * (k == 0 ? 0 : k - 1) / 2);
    const double mixed = static_cast<double>(static_cast<u128>(k) * (n - k));
    const double both_red =
        static_cast<double>(static_cast<u128>(n - k) * (n - k == 0 ? 0 : n - k - 1) / 2);
    down2_[k] = q * both_blue / total;
    down1_[k] = q * mixed / total;
    up1_[k] = p * mixed / total;
    up2_[k] = p * both_red / total;
    hold_[k] = (p * both_blue + q * both_red) / total;
  }
}

std::array<double, 5> ReducedKernel::moves(std::size_t k) const {
  return {down2_.at(k), down1_.at(k), hold_.at(k), up1_.at(k), up2_.at(k)};
}

void ReducedKernel::apply(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = n_;
  auto at = [&](std::size_t k) {
    double sum = hold_[k] * in[k];
    if (k + 2 <= n) sum += down2_[k + 2] * in[k + 2];
    if (k + 1 <= n) sum += down1_[k + 1] * in[k + 1];
    if (k >= 1) sum += up1_[k - 1] * in[k - 1];
    if (k >= 2) sum += up2_[k - 2] * in[k - 2];
    return sum;
  };
  if (n < 4) {
    for (std::size_t k = 0; k <= n; ++k) out[k] = at(k);
    return;
  }
  out[0] = at(0);
  out[1] = at(1);
  const double* h = hold_.data();
  const double* d2 = down2_.data();
  const double* d1 = down1_.data();
  const double* u1 = up1_.data();
  const double* u2 = up2_.data();
  const double* x = in.data();
  double* y = out.data();
  for (std::size_t k = 2; k + 2 <= n; ++k) {
    y[k] = h[k] * x[k] + d2[k + 2] * x[k + 2] + d1[k + 1] * x[k + 1] + u1[k - 1] * x[k - 1] +
           u2[k - 2] * x[k - 2];
  }
  out[n - 1] = at(n - 1);
  out[n] = at(n);
}

BlueCountDist BlueCountDist::point_mass(std::size_t n, std::size_t k) {
  if (k > n) throw InputError("blue count exceeds n");
  std::vector<double> probs(n + 1, 0.0);
  probs[k] = 1.0;
  return BlueCountDist(std::move(probs));
}

BlueCountDist BlueCountDist::from_probs(std::vector<double> probs) {
  if (probs.size() < 3) throw InputError("blue-count distribution needs n >= 2");
  return BlueCountDist(std::move(probs));
}

double BlueCountDist::total_mass() const noexcept {
  double sum = 0.0;
  for (double x : probs_) sum += x;
  return sum;
}

double BlueCountDist::mean() const noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) sum += static_cast<double>(k) * probs_[k];
  return sum;
}

double BlueCountDist::variance() const noexcept {
  const double mu = mean();
  double sum = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    const double diff = static_cast<double>(k) - mu;
    sum += diff * diff * probs_[k];
  }
  return sum;
}

double BlueCountDist::mass_outside(double center, double radius) const noexcept {
  double sum = 0.0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    if (std::abs(static_cast<double>(k) - center) > radius) sum += probs_[k];
  }
  return sum;
}

BlueCountDist reduced_step(const ReducedKernel& kernel, const BlueCountDist& dist) {
  if (dist.n() != kernel.n()) throw InputError("distribution/kernel size mismatch");
  std::vector<double> out(kernel.n() + 1);
  kernel.apply(dist.probs(), out);
  return BlueCountDist::from_probs(std::move(out));
}

BlueCountDist reduced_stationary(std::size_t n, const FlipParams& params, double tol) {
  if (!(tol > 0.0)) throw InputError("stationary tolerance must be positive");
  const ReducedKernel kernel(n, params);
  const auto start = static_cast<std::size_t>(std::llround(params.p() * static_cast<double>(n)));
  std::vector<double> current(n + 1, 0.0);
  std::vector<double> next(n + 1);
  current[start] = 1.0;
  const std::size_t certified = certified_steps(n, tol);
  for (std::size_t t = 0; t < certified; ++t) {
    kernel.apply(current, next);
    current.swap(next);
  }
  const std::size_t limit = certified + 1'000'000;
  for (std::size_t t = certified;; ++t) {
    kernel.apply(current, next);
    const double change = exact::tv(current, next);
    current.swap(next);
    if (change < tol / 10.0) break;
    if (t > limit) throw CheckFailure("reduced stationary iteration did not settle");
  }
  return BlueCountDist::from_probs(std::move(current));
}

exact::TvCurve reduced_tv_curve(std::size_t n, const FlipParams& params, std::size_t init_k,
                                std::size_t tmax, const BlueCountDist& pi, double tol) {
  if (init_k != 0 && init_k != n) throw InputError("reduced_tv_curve needs a monochromatic start");
  if (pi.n() != n) throw InputError("stationary distribution has wrong size");
  const ReducedKernel kernel(n, params);
  std::vector<double> state(n + 1, 0.0);
  std::vector<double> next(n + 1);
  state[init_k] = 1.0;
  exact::TvCurve curve;
  curve.slack = tol;
  curve.points.reserve(tmax + 1);
  for (std::size_t t = 0;; ++t) {
    curve.points.push_back({t, exact::tv(state, pi.probs())});
    if (t == tmax) break;
    kernel.apply(state, next);
    state.swap(next);
  }
  return curve;
}

exact::TvCurve reduced_tv_curve(std::size_t n, const FlipParams& params, std::size_t init_k,
                                std::size_t tmax, double tol) {
  return reduced_tv_curve(n, params, init_k, tmax, reduced_stationary(n, params, tol), tol);
}

exact::TvCurve reduced_worst_tv_curve(std::size_t n, const FlipParams& params, std::size_t tmax,
                                      const BlueCountDist& pi, double tol) {
  auto worst = reduced_tv_curve(n, params, 0, tmax, pi, tol);
  const auto other = reduced_tv_curve(n, params, n, tmax, pi, tol);
  for (std::size_t t = 0; t <= tmax; ++t) {
    worst.points[t].d = std::max(worst.points[t].d, other.points[t].d);
  }
  return worst;
}

std::size_t reduced_mixing_time(std::size_t n, const FlipParams& params, double eps,
                                const BlueCountDist& pi) {
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  const ReducedKernel kernel(n, params);
  std::vector<double> red(n + 1, 0.0), blue(n + 1, 0.0), scratch(n + 1);
  red[0] = 1.0;
  blue[n] = 1.0;
  for (std::size_t t = 0; t <= kMaxSteps; ++t) {
    if (std::max(exact::tv(red, pi.probs()), exact::tv(blue, pi.probs())) <= eps) return t;
    kernel.apply(red, scratch);
    red.swap(scratch);
    kernel.apply(blue, scratch);
    blue.swap(scratch);
  }
  throw CheckFailure("reduced mixing time exceeds the step limit");
}

double cutoff_time(std::size_t n) {
  const double size = static_cast<double>(n);
  return 0.25 * size * std::log(size);
}

CutoffProfile cutoff_profile(std::span<const std::size_t> n_list, const FlipParams& params,
                             std::span<const double> gammas, std::span<const double> eps_list,
                             double tol, unsigned threads) {
  std::vector<CutoffProfile> parts(n_list.size());
  parallel_for(n_list.size(), threads, [&](std::size_t job) {
    const std::size_t n = n_list[job];
    if (n < 16) throw InputError("cutoff_profile needs n >= 16");
    const double size = static_cast<double>(n);
    std::vector<std::size_t> grid;
    std::size_t horizon = 0;
    for (double gamma : gammas) {
      const double t = std::round(cutoff_time(n) + gamma * size);
      grid.push_back(t <= 0.0 ? 0 : static_cast<std::size_t>(t));
      horizon = std::max(horizon, grid.back());
    }

    const auto pi = reduced_stationary(n, params, tol);
    const ReducedKernel kernel(n, params);
    // At p = 1/2 the two monochromatic curves coincide by colour symmetry.
    const bool symmetric = params.p() == 0.5;
    std::vector<double> red(n + 1, 0.0), blue(n + 1, 0.0), scratch(n + 1);
    red[0] = 1.0;
    blue[n] = 1.0;

    CutoffProfile& part = parts[job];
    std::vector<std::size_t> t_mix(eps_list.size(), 0);
    std::vector<bool> found(eps_list.size(), false);
    std::size_t remaining = eps_list.size();
    std::vector<double> d_at_grid(grid.size(), 0.0);
    for (std::size_t t = 0;; ++t) {
      double d = exact::tv(red, pi.probs());
      if (!symmetric) d = std::max(d, exact::tv(blue, pi.probs()));
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] == t) d_at_grid[i] = d;
      }
      for (std::size_t i = 0; i < eps_list.size(); ++i) {
        if (!found[i] && d <= eps_list[i]) {
          found[i] = true;
          t_mix[i] = t;
          --remaining;
        }
      }
      if (t >= horizon && remaining == 0) break;
      if (t > kMaxSteps) throw CheckFailure("cutoff profile exceeded the step limit");
      kernel.apply(red, scratch);
      red.swap(scratch);
      if (!symmetric) {
        kernel.apply(blue, scratch);
        blue.swap(scratch);
      }
    }
    for (std::size_t i = 0; i < grid.size(); ++i) part.rows.push_back({n, gammas[i], grid[i], d_at_grid[i]});
    for (std::size_t i = 0; i < eps_list.size(); ++i) part.mixing.push_back({n, eps_list[i], t_mix[i]});
  });

  CutoffProfile merged;
  for (auto& part : parts) {
    merged.rows.insert(merged.rows.end(), part.rows.begin(), part.rows.end());
    merged.mixing.insert(merged.mixing.end(), part.mixing.begin(), part.mixing.end());
  }
  return merged;
}

void write_profile_csv(std::ostream& out, const CutoffProfile& profile) {
  csv::row(out, "n", "gamma", "t", "d_tv");
  for (const auto& r : profile.rows) csv::row(out, r.n, csv::num(r.gamma), r.t, csv::num(r.d));
}

void write_mixing_csv(std::ostream& out, const CutoffProfile& profile) {
  csv::row(out, "n", "eps", "t_mix");
  for (const auto& r : profile.mixing) csv::row(out, r.n, csv::num(r.eps), r.t_mix);
}

double mean_closed_form(std::size_t n, const FlipParams& params, std::size_t t) {
  const double size = static_cast<double>(n);
  return params.p() * size * (1.0 - std::pow(1.0 - 2.0 / size, static_cast<double>(t)));
}

MomentReport moment_checks(std::size_t n, const FlipParams& params, std::size_t tmax,
                           double mean_tol) {
  if (n < 4) throw InputError("moment_checks needs n >= 4");
  const ReducedKernel kernel(n, params);
  std::vector<double> state(n + 1, 0.0), next(n + 1);
  state[0] = 1.0;
  MomentReport report{};
  report.n = n;
  report.tmax = tmax;
  const double variance_bound = 2.0 * static_cast<double>(n);
  for (std::size_t t = 0;; ++t) {
    const auto dist = BlueCountDist::from_probs(state);
    const double residual = std::abs(dist.mean() - mean_closed_form(n, params, t));
    const double variance = dist.variance();
    report.max_mean_residual = std::max(report.max_mean_residual, residual);
    report.max_variance = std::max(report.max_variance, variance);
    if (!(residual <= mean_tol)) {
      report.violations.push_back("t=" + std::to_string(t) + ": mean residual " + csv::num(residual));
    }
    if (!(variance <= variance_bound)) {
      report.violations.push_back("t=" + std::to_string(t) + ": variance " + csv::num(variance) +
                                  " > 2n");
    }
    if (t == tmax) break;
    kernel.apply(state, next);
    state.swap(next);
  }
  return report;
}

}  // namespace flipmix::kn
