#include <doctest.h>

#include <cmath>
#include <functional>

#include "flipmix/bounds.hpp"
#include "flipmix/errors.hpp"
#include "flipmix/exactdist.hpp"
#include "flipmix/kn_reduced.hpp"
#include "suite.hpp"

using namespace flipmix;
using namespace flipmix::bounds;

namespace {

// P(the first t uniformly drawn edges miss some vertex), by enumerating all m^t sequences.
double uncovered_probability(const Graph& g, std::size_t t) {
  const std::size_t m = g.num_edges();
  const std::uint64_t full = (std::uint64_t{1} << g.num_vertices()) - 1;
  std::size_t missed = 0, total = 0;
  std::function<void(std::size_t, std::uint64_t)> walk = [&](std::size_t depth, std::uint64_t cover) {
    if (depth == t) {
      ++total;
      if (cover != full) ++missed;
      return;
    }
    for (const Edge& e : g.edges()) walk(depth + 1, cover | (1ULL << e.u) | (1ULL << e.v));
  };
  walk(0, 0);
  (void)m;
  return static_cast<double>(missed) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("flat-sum bound equals the probability that edges miss a vertex") {
  for (const Graph& g : {complete_graph(4), cycle_graph(5), path_graph(4), complete_bipartite(2, 3)}) {
    const BhrSeries series(g);
    for (std::size_t t = 0; t <= 6; ++t) {
      CHECK(series(t) == doctest::Approx(uncovered_probability(g, t)).epsilon(1e-12));
    }
  }
}

TEST_CASE("closed forms for complete and complete bipartite graphs") {
  for (std::size_t n = 2; n <= 10; ++n) {
    const Graph g = complete_graph(n);
    for (std::size_t t : {0, 1, 3, 10, 40}) {
      CHECK(bhr_bound(g, t) == doctest::Approx(bhr_bound_complete(n, t)).epsilon(1e-10));
    }
  }
  for (auto [a, b] : {std::pair{2, 3}, {3, 3}, {2, 5}, {4, 3}}) {
    const Graph g = complete_bipartite(a, b);
    for (std::size_t t : {0, 1, 2, 5, 20, 60}) {
      CHECK(bhr_bound(g, t) ==
            doctest::Approx(bhr_bound_bipartite(a, b, t)).epsilon(1e-10));
    }
  }
  CHECK(bhr_bound(complete_graph(6), 2000) == doctest::Approx(0.0));
}

TEST_CASE("co-maximal bound") {
  for (std::size_t n : {4, 7, 10}) {
    const Graph g = cycle_graph(n);
    for (std::size_t t : {0, 1, 5, 30}) {
      CHECK(comaximal_bound(g, t) ==
            doctest::Approx(n * std::pow(1.0 - 2.0 / n, static_cast<double>(t))).epsilon(1e-12));
    }
    CHECK(comaximal_bound(g, 0) == doctest::Approx(static_cast<double>(n)));
  }
  CHECK(comaximal_bound(complete_graph(2), 1) == 0.0);
  for (const auto& [name, g] : testing::reference_suite()) {
    for (std::size_t t = 0; t <= 50; ++t) CHECK(bhr_bound(g, t) <= comaximal_bound(g, t) + 1e-12);
  }
}

TEST_CASE("exact distance lies below both bounds") {
  struct Case {
    Graph g;
    double p;
    std::size_t tmax;
  };
  for (const auto& c : {Case{complete_graph(4), 0.5, 60}, Case{complete_bipartite(2, 3), 0.3, 80},
                        Case{cycle_graph(5), 0.7, 80}}) {
    const auto report = dominance_check(c.g, FlipParams(c.p), c.tmax, exact::Starts::all);
    CHECK(report.ok());
    CHECK(report.rows.size() == c.tmax + 1);
  }
  CHECK_THROWS_AS(dominance_check(complete_graph(13), FlipParams(0.5), 5, exact::Starts::all),
                  GuardExceeded);
}

TEST_CASE("first crossing time") {
  const BhrSeries series(complete_graph(6));
  const auto t = first_time_at_most(series, 0.25, 1000);
  REQUIRE(t.has_value());
  CHECK(series(*t) <= 0.25);
  CHECK(series(*t - 1) > 0.25);
}

TEST_CASE("general sandwich") {
  const auto k2 = general_sandwich(complete_graph(2), FlipParams(0.5), 1.0);
  CHECK(k2.eps == doctest::Approx(std::exp(-2.0) / 2));
  CHECK(k2.lower == doctest::Approx(1.0));
  CHECK(k2.upper == doctest::Approx(3.386294361).epsilon(1e-9));
  CHECK(exact::mixing_time(complete_graph(2), FlipParams(0.5), k2.eps) == 1);

  for (std::size_t n : {4, 8, 12}) {
    const auto s = general_sandwich(cycle_graph(n), FlipParams(0.3), 2.0);
    CHECK(s.lower == doctest::Approx(2.0 * n / 2));
    CHECK(s.upper == doctest::Approx(n / 2.0 * (std::log(n) + 4.0 - std::log(0.7))));
  }
  for (const auto& [name, g] : testing::reference_suite()) {
    for (double c : {0.1, 1.0, 3.0}) {
      const auto s = general_sandwich(g, FlipParams(0.4), c);
      CHECK(s.lower < s.upper);
    }
  }
  CHECK_THROWS_AS(general_sandwich(complete_graph(3), FlipParams(0.5), 0.0), InputError);
  CHECK_THROWS_AS(general_sandwich(complete_graph(3), FlipParams(1.0), 1.0), InputError);
}

TEST_CASE("Wilson lower bound") {
  const double b = wilson_lower_bound(16, FlipParams(0.5), 0.25);
  CHECK(b == doctest::Approx(4.1134).epsilon(1e-4));
  const auto pi = kn::reduced_stationary(16, FlipParams(0.5));
  CHECK(b <= static_cast<double>(kn::reduced_mixing_time(16, FlipParams(0.5), 0.25, pi)));
  CHECK(wilson_lower_bound(16, FlipParams(0.5), 0.1) > b);
  double previous = 0.0;
  for (std::size_t n : {100, 1000, 10000, 100000, 1000000}) {
    const double ratio = wilson_lower_bound(n, FlipParams(0.5), 0.25) / (n * std::log(n) / 4);
    CHECK(ratio > previous);
    CHECK(ratio < 1.0);
    previous = ratio;
  }
  // Leading order: ratio = 1 - ln(16/3)/ln n + O(1/n) at p = 1/2, eps = 1/4.
  for (double n : {1e6, 1e9, 1e12}) {
    const double ratio = wilson_lower_bound(static_cast<std::size_t>(n), FlipParams(0.5), 0.25) / (n * std::log(n) / 4);
    CHECK(ratio == doctest::Approx(1.0 - std::log(16.0 / 3.0) / std::log(n)).epsilon(1e-5));
  }
  CHECK(wilson_lower_bound(1'000'000'000'000, FlipParams(0.5), 0.25) / (1e12 * std::log(1e12) / 4) > 0.93);
}

TEST_CASE("regular upper bound") {
  for (std::size_t n : {10, 100, 1000}) {
    for (double c : {1.0, 5.0}) {
      const double t = regular_upper_bound(n, c);
      CHECK(n * std::pow(1.0 - 2.0 / n, t) <= std::exp(-c) * (1 + 1e-12));
    }
  }
  CHECK(regular_upper_bound(50, 1e-12) == doctest::Approx(50 * std::log(50) / 2).epsilon(1e-9));
}
