#include "flipmix/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "flipmix/bounds.hpp"
#include "flipmix/coupling.hpp"
#include "flipmix/csv.hpp"
#include "flipmix/errors.hpp"
#include "flipmix/exactdist.hpp"
#include "flipmix/kn_reduced.hpp"
#include "flipmix/parallel.hpp"
#include "flipmix/spectrum.hpp"

namespace flipmix::cli {

namespace {

struct RunConfig {
  std::string graph;
  double p = 0.5;
  std::uint64_t seed = 1;
  double tol = exact::kDefaultTol;
  std::size_t tmax = 100;
  std::size_t kmax = 4;
  std::vector<double> eps{0.25, 0.1};
  std::vector<double> gamma{-2, -1, 0, 1, 2, 4, 8};
  std::vector<double> c{1.0};
  std::vector<std::size_t> n_list;
  std::vector<std::uint64_t> t_list;
  std::size_t replicas = 1000;
  std::string out_path;
  std::string start = "blue";
  std::string starts = "auto";
  std::string table = "profile";
  bool aggregate = false;
  std::optional<unsigned> threads;
};

/// Body writer; returns the exit code it wants (0 or kExitCheckFailed).
using Command = std::function<int(const RunConfig&, std::ostream&, std::ostream&)>;

void validate(const RunConfig& cfg) {
  if (!(cfg.p >= 0.0 && cfg.p <= 1.0)) throw InputError("--p must lie in [0, 1]");
  if (!(cfg.tol > 0.0 && cfg.tol < 1.0)) throw InputError("--tol must lie in (0, 1)");
  for (double e : cfg.eps) {
    if (!(e > 0.0 && e < 1.0)) throw InputError("--eps values must lie in (0, 1)");
  }
  for (double c : cfg.c) {
    if (!(c > 0.0)) throw InputError("--c values must be positive");
  }
}

exact::Starts resolve_starts(const RunConfig& cfg, std::size_t n) {
  if (cfg.starts == "all") return exact::Starts::all;
  if (cfg.starts == "mono") return exact::Starts::monochromatic;
  return n <= 8 ? exact::Starts::all : exact::Starts::monochromatic;
}

Coloring resolve_start(const std::string& text, std::size_t n) {
  if (text == "blue") return Coloring::all_blue(n);
  if (text == "red") return Coloring::all_red(n);
  if (text.size() != n || text.find_first_not_of("01") != std::string::npos) {
    throw InputError("--start must be blue, red, or an n-character 0/1 string");
  }
  Coloring c(n);
  for (Vertex v = 0; v < n; ++v) c.set(v, text[v] == '1' ? Color::blue : Color::red);
  return c;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Graph g = load_graph(cfg.graph);
  const auto spectrum = spectrum::full_spectrum(g);
  if (!cfg.aggregate) {
    spectrum::write_csv(out, spectrum);
    return kExitOk;
  }
  csv::row(out, "eigenvalue_num", "eigenvalue_den", "multiplicity");
  for (const auto& [lambda, mult] : spectrum::aggregate(spectrum)) {
    csv::row(out, lambda.num, lambda.den, mult);
  }
  return kExitOk;
}

int cmd_tv_exact(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Graph g = load_graph(cfg.graph);
  const FlipParams params(cfg.p);
  const auto pi = exact::stationary(g, params, cfg.tol);
  out << "# stationary_error_budget: " << csv::num(pi.tol) << '\n';
  exact::write_csv(out, exact::tv_curve(g, params, resolve_start(cfg.start, g.num_vertices()),
                                        cfg.tmax, pi));
  return kExitOk;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Graph g = load_graph(cfg.graph);
  const auto report =
      bounds::dominance_check(g, FlipParams(cfg.p), cfg.tmax, resolve_starts(cfg, g.num_vertices()),
                              1e-9, resolve_threads(cfg.threads));
  bounds::write_csv(out, report);
  for (const auto& v : report.violations) err << "violation: " << v << '\n';
  return report.ok() ? kExitOk : kExitCheckFailed;
}

int cmd_sandwich(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const Graph g = load_graph(cfg.graph);
  const FlipParams params(cfg.p);
  const std::size_t n = g.num_vertices();
  const bool exact_ok = n <= bounds::kDominanceVertexCap;
  const unsigned threads = resolve_threads(cfg.threads);
  std::optional<exact::Stationary> pi;
  if (exact_ok) pi = exact::stationary(g, params, cfg.tol);
  auto measured = [&](double eps) {
    return static_cast<double>(
        exact::mixing_time(g, params, eps, resolve_starts(cfg, n), *pi, threads));
  };

  std::vector<bounds::Sandwich> rows;
  for (double c : cfg.c) {
    auto general = bounds::general_sandwich(g, params, c);
    general.name = "general_c=" + csv::num(c);
    rows.push_back(general);
    if (exact_ok) {
      const double t = measured(general.eps);
      rows.push_back({"tmix_c=" + csv::num(c), t, t, general.eps});
    }
  }
  if (regular_degree(g) && n >= 3) {
    std::optional<bounds::BhrSeries> series;
    if (n <= spectrum::kSpectrumVertexCap) series.emplace(g);
    for (double eps : cfg.eps) {
      const double lower = bounds::wilson_lower_bound(n, params, eps);
      rows.push_back({"regular_eps=" + csv::num(eps), lower,
                      bounds::regular_upper_bound(n, -std::log(eps)), eps});
      if (series) {
        const auto crossing = bounds::first_time_at_most(*series, eps, 10'000'000);
        rows.push_back({"wilson_bhr_eps=" + csv::num(eps), lower,
                        crossing ? static_cast<double>(*crossing) : INFINITY, eps});
      }
      if (exact_ok) {
        const double t = measured(eps);
        rows.push_back({"tmix_eps=" + csv::num(eps), t, t, eps});
      }
    }
  }
  bounds::write_csv(out, rows);
  return kExitOk;
}

int cmd_kn_profile(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.n_list.empty()) throw InputError("kn-profile needs --n");
  const auto profile = kn::cutoff_profile(cfg.n_list, FlipParams(cfg.p), cfg.gamma,
                                          kn::kProfileEps, cfg.tol, resolve_threads(cfg.threads));
  if (cfg.table == "mixing") {
    kn::write_mixing_csv(out, profile);
  } else if (cfg.table == "profile") {
    kn::write_profile_csv(out, profile);
  } else {
    throw InputError("--table must be profile or mixing");
  }
  return kExitOk;
}

int cmd_couple(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.n_list.size() != 1) throw InputError("couple needs exactly one --n");
  const std::size_t n = cfg.n_list.front();
  if (n < 4) throw InputError("couple needs n >= 4");
  const FlipParams params(cfg.p);
  const auto traces = coupling::run_replicas(n, params, cfg.replicas, cfg.seed,
                                             resolve_threads(cfg.threads));
  if (cfg.t_list.empty() && cfg.table != "tail") {
    coupling::write_traces_csv(out, traces);
    return kExitOk;
  }
  if (cfg.replicas < 100) throw InputError("tail tables need --replicas >= 100");
  std::vector<std::uint64_t> t_list = cfg.t_list;
  if (t_list.empty()) {
    for (double gamma : cfg.gamma) {
      const double t = std::round(kn::cutoff_time(n) + gamma * static_cast<double>(n));
      t_list.push_back(t <= 0.0 ? 0 : static_cast<std::uint64_t>(t));
    }
  }
  coupling::write_tail_csv(out, coupling::tail_table(traces, t_list));
  return kExitOk;
}

int cmd_walk_check(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Graph g = load_graph(cfg.graph);
  const FlipParams params(cfg.p);
  const auto traces = spectrum::trace_residuals(g, params, cfg.kmax, resolve_threads(cfg.threads));
  const auto eigen = spectrum::eigenfunction_residuals(g, params);
  int code = kExitOk;
  csv::row(out, "check", "index", "residual");
  for (const auto& r : traces) {
    csv::row(out, "trace", r.k, csv::num(r.residual));
    if (!(r.residual <= 1e-9)) {
      err << "trace identity violated at k=" << r.k << '\n';
      code = kExitCheckFailed;
    }
  }
  for (const auto& r : eigen) {
    csv::row(out, "eigenfunction", r.vertex, csv::num(r.max_residual));
    if (!(r.max_residual <= 1e-12)) {
      err << "eigenfunction check failed at vertex " << r.vertex << '\n';
      code = kExitCheckFailed;
    }
  }
  return code;
}

std::string join_command(std::span<const std::string> args) {
  std::string line = "flipmix";
  for (std::size_t i = 1; i < args.size(); ++i) line += " " + args[i];
  return line;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Edge-flipping Markov chain: exact spectra, distances, bounds and couplings", "flipmix"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  RunConfig cfg;
  Command selected;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "blue probability")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "base seed")->capture_default_str();
    sub->add_option("--tol", cfg.tol, "stationary error budget")->capture_default_str();
    sub->add_option("--out", cfg.out_path, "output CSV path (default stdout)");
    sub->add_option("--threads", cfg.threads, "worker cap (fallback FLIPMIX_THREADS)");
  };
  auto graph_option = [&](CLI::App* sub) {
    sub->add_option("--graph", cfg.graph, "generator spec or graph file")->required();
  };

  auto* spectrum_cmd = app.add_subcommand("spectrum", "eigenvalues and multiplicities over all flats");
  common(spectrum_cmd);
  graph_option(spectrum_cmd);
  spectrum_cmd->add_flag("--aggregate", cfg.aggregate, "group flats by eigenvalue");
  spectrum_cmd->callback([&] { selected = cmd_spectrum; });

  auto* tv_cmd = app.add_subcommand("tv-exact", "exact total-variation curve from one start");
  common(tv_cmd);
  graph_option(tv_cmd);
  tv_cmd->add_option("--tmax", cfg.tmax)->required();
  tv_cmd->add_option("--start", cfg.start, "blue, red, or a 0/1 string")->capture_default_str();
  tv_cmd->callback([&] { selected = cmd_tv_exact; });

  auto* bounds_cmd = app.add_subcommand("bounds", "exact d(t) against the flat-sum and co-maximal bounds");
  common(bounds_cmd);
  graph_option(bounds_cmd);
  bounds_cmd->add_option("--tmax", cfg.tmax)->capture_default_str();
  bounds_cmd->add_option("--starts", cfg.starts, "all, mono, or auto (all for n <= 8)")
      ->check(CLI::IsMember({"all", "mono", "auto"}));
  bounds_cmd->callback([&] { selected = cmd_bounds; });

  auto* sandwich_cmd = app.add_subcommand("sandwich", "mixing-time lower/upper bounds with measured values");
  common(sandwich_cmd);
  graph_option(sandwich_cmd);
  sandwich_cmd->add_option("--c", cfg.c)->delimiter(',');
  sandwich_cmd->add_option("--eps", cfg.eps)->delimiter(',');
  sandwich_cmd->add_option("--starts", cfg.starts)->check(CLI::IsMember({"all", "mono", "auto"}));
  sandwich_cmd->callback([&] { selected = cmd_sandwich; });

  auto* profile_cmd = app.add_subcommand("kn-profile", "cutoff profile of the K_n blue-count chain");
  common(profile_cmd);
  profile_cmd->add_option("--n", cfg.n_list)->delimiter(',')->required();
  profile_cmd->add_option("--gamma", cfg.gamma)->delimiter(',');
  profile_cmd->add_option("--table", cfg.table, "profile or mixing")->capture_default_str();
  profile_cmd->callback([&] { selected = cmd_kn_profile; });

  auto* couple_cmd = app.add_subcommand("couple", "three-stage coupling replicas on K_n");
  common(couple_cmd);
  couple_cmd->add_option("--n", cfg.n_list)->required();
  couple_cmd->add_option("--replicas", cfg.replicas)->capture_default_str();
  couple_cmd->add_option("--t", cfg.t_list, "tail times")->delimiter(',');
  couple_cmd->add_option("--gamma", cfg.gamma, "tail times 1/4 n ln n + gamma n")->delimiter(',');
  couple_cmd->add_option("--table", cfg.table, "traces or tail");
  couple_cmd->callback([&] {
    selected = cmd_couple;
    if (cfg.table == "profile") cfg.table = couple_cmd->count("--gamma") ? "tail" : "traces";
  });

  auto* walk_cmd = app.add_subcommand("walk-check", "trace identity and eigenfunction checks");
  common(walk_cmd);
  graph_option(walk_cmd);
  walk_cmd->add_option("--kmax", cfg.kmax)->capture_default_str();
  walk_cmd->callback([&] { selected = cmd_walk_check; });

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    validate(cfg);
    std::ostringstream body;
    const int code = selected(cfg, body, err);
    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.out_path.empty()) {
      file.open(cfg.out_path);
      if (!file) throw InputError("cannot open --out path '" + cfg.out_path + "'");
      sink = &file;
    }
    *sink << "# flipmix " << kVersion << '\n'
          << "# command: " << join_command(args) << '\n'
          << "# seed: " << cfg.seed << '\n'
          << body.str();
    return code;
  } catch (const CheckFailure& e) {
    err << "check failed: " << e.what() << '\n';
    return kExitCheckFailed;
  } catch (const InputError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const GuardExceeded& e) {
    err << "size guard exceeded: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace flipmix::cli
