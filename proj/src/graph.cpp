#include "flipmix/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "flipmix/errors.hpp"
#include "flipmix/rng.hpp"

namespace flipmix {

namespace {

bool is_connected(std::size_t n, const std::vector<std::vector<Vertex>>& adjacency) {
  std::vector<bool> seen(n, false);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    for (Vertex w : adjacency[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

std::vector<std::uint64_t> parse_uints(std::string_view text, std::string_view what) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view field = text.substr(pos, comma - pos);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      throw InputError("invalid " + std::string(what) + " parameter '" + std::string(field) + "'");
    }
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::uint64_t parse_token(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw InputError("line " + std::to_string(line_no) + ": malformed integer '" +
                     std::string(token) + "'");
  }
  return value;
}

}  // namespace

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ < 2) throw InputError("graph needs at least 2 vertices");
  if (edges_.empty()) throw InputError("graph needs at least 1 edge");
  for (Edge& e : edges_) {
    if (e.u == e.v) throw InputError("self-loop at vertex " + std::to_string(e.u));
    if (e.u >= n_ || e.v >= n_) {
      throw InputError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                       ") out of range for n=" + std::to_string(n_));
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw InputError("duplicate edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) +
                     ")");
  }
  adjacency_.assign(n_, {});
  for (const Edge& e : edges_) {
    adjacency_[e.u].push_back(e.v);
    adjacency_[e.v].push_back(e.u);
  }
  for (auto& list : adjacency_) std::sort(list.begin(), list.end());
  if (!is_connected(n_, adjacency_)) throw InputError("graph is disconnected");
}

Graph parse_graph(std::string_view text) {
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> lines;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    ++line_no;
    auto tokens = split_whitespace(text.substr(pos, end - pos));
    if (!tokens.empty()) lines.emplace_back(line_no, std::move(tokens));
    pos = end + 1;
  }
  if (lines.empty()) throw InputError("empty graph text");

  const auto& [header_no, header] = lines.front();
  if (header.size() != 2) throw InputError("line " + std::to_string(header_no) + ": expected 'n m'");
  const std::uint64_t n = parse_token(header[0], header_no);
  const std::uint64_t m = parse_token(header[1], header_no);
  if (lines.size() - 1 != m) {
    throw InputError("header declares " + std::to_string(m) + " edges, found " +
                     std::to_string(lines.size() - 1));
  }

  std::vector<Edge> edges;
  edges.reserve(m);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto& [no, tokens] = lines[i];
    if (tokens.size() != 2) throw InputError("line " + std::to_string(no) + ": expected 'u v'");
    const std::uint64_t u = parse_token(tokens[0], no);
    const std::uint64_t v = parse_token(tokens[1], no);
    if (u >= n || v >= n) {
      throw InputError("line " + std::to_string(no) + ": vertex out of range for n=" +
                       std::to_string(n));
    }
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v)});
  }
  return Graph(n, std::move(edges));
}

std::string render_graph(const Graph& g) {
  std::ostringstream out;
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
  return out.str();
}

Graph complete_graph(std::size_t n) {
  if (n < 2) throw InputError("complete:n needs n >= 2");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v});
  return Graph(n, std::move(edges));
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw InputError("cycle:n needs n >= 3");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) edges.push_back({u, static_cast<Vertex>((u + 1) % n)});
  return Graph(n, std::move(edges));
}

Graph path_graph(std::size_t n) {
  if (n < 2) throw InputError("path:n needs n >= 2");
  std::vector<Edge> edges;
  for (Vertex u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1});
  return Graph(n, std::move(edges));
}

Graph complete_bipartite(std::size_t a, std::size_t b) {
  if (a < 1 || b < 1) throw InputError("bipartite:a,b needs a, b >= 1");
  std::vector<Edge> edges;
  for (Vertex u = 0; u < a; ++u)
    for (std::size_t j = 0; j < b; ++j) edges.push_back({u, static_cast<Vertex>(a + j)});
  return Graph(a + b, std::move(edges));
}

Graph random_regular(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (n < 2 || k < 1 || k >= n) throw InputError("random_regular:n,k needs 1 <= k < n");
  if ((n * k) % 2 != 0) throw InputError("random_regular:n,k needs n*k even");
  if (k == 1 && n > 2) throw InputError("random_regular with k=1 is disconnected for n > 2");

  constexpr int kMaxAttempts = 100000;
  RngStream rng(seed);
  std::vector<Vertex> points(n * k);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<Vertex>(i / k);
    for (std::size_t i = points.size() - 1; i > 0; --i) {
      std::swap(points[i], points[rng.uniform_below(i + 1)]);
    }
    std::vector<Edge> edges;
    bool ok = true;
    for (std::size_t i = 0; i < points.size() && ok; i += 2) {
      Edge e{std::min(points[i], points[i + 1]), std::max(points[i], points[i + 1])};
      ok = e.u != e.v;
      edges.push_back(e);
    }
    if (!ok) continue;
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) continue;
    try {
      return Graph(n, std::move(edges));
    } catch (const InputError&) {
      // disconnected pairing; draw again
    }
  }
  throw InputError("random_regular: no simple connected pairing found");
}

Graph random_connected(std::size_t n, std::size_t m, std::uint64_t seed) {
  const std::size_t max_edges = n * (n - 1) / 2;
  if (n < 2 || m + 1 < n || m > max_edges) {
    throw InputError("random_connected:n,m,seed needs n-1 <= m <= n(n-1)/2");
  }
  constexpr int kMaxAttempts = 100000;
  RngStream rng(seed);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::vector<Edge> edges;
    while (edges.size() < m) {
      auto u = static_cast<Vertex>(rng.uniform_below(n));
      auto v = static_cast<Vertex>(rng.uniform_below(n - 1));
      if (v >= u) ++v;
      Edge e{std::min(u, v), std::max(u, v)};
      if (std::find(edges.begin(), edges.end(), e) == edges.end()) edges.push_back(e);
    }
    try {
      return Graph(n, std::move(edges));
    } catch (const InputError&) {
    }
  }
  throw InputError("random_connected: no connected graph found");
}

Graph generate(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) throw InputError("generator spec needs 'family:params'");
  const std::string_view family = spec.substr(0, colon);
  const auto args = parse_uints(spec.substr(colon + 1), family);
  auto expect = [&](std::size_t count) {
    if (args.size() != count) {
      throw InputError(std::string(family) + " takes " + std::to_string(count) + " parameter(s)");
    }
  };
  if (family == "complete") {
    expect(1);
    return complete_graph(args[0]);
  }
  if (family == "cycle") {
    expect(1);
    return cycle_graph(args[0]);
  }
  if (family == "path") {
    expect(1);
    return path_graph(args[0]);
  }
  if (family == "bipartite") {
    expect(2);
    return complete_bipartite(args[0], args[1]);
  }
  if (family == "random_regular") {
    expect(3);
    return random_regular(args[0], args[1], args[2]);
  }
  if (family == "random_connected") {
    expect(3);
    return random_connected(args[0], args[1], args[2]);
  }
  throw InputError("unknown graph family '" + std::string(family) + "'");
}

Graph load_graph(std::string_view spec_or_path) {
  static constexpr std::string_view kFamilies[] = {"complete:",  "cycle:",          "path:",
                                                   "bipartite:", "random_regular:", "random_connected:"};
  for (std::string_view prefix : kFamilies) {
    if (spec_or_path.starts_with(prefix)) return generate(spec_or_path);
  }
  std::ifstream in{std::string(spec_or_path)};
  if (!in) throw InputError("cannot open graph file '" + std::string(spec_or_path) + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_graph(buffer.str());
}

std::size_t min_degree(const Graph& g) {
  std::size_t best = g.degree(0);
  for (Vertex v = 1; v < g.num_vertices(); ++v) best = std::min(best, g.degree(v));
  return best;
}

std::optional<std::size_t> regular_degree(const Graph& g) {
  const std::size_t k = g.degree(0);
  for (Vertex v = 1; v < g.num_vertices(); ++v) {
    if (g.degree(v) != k) return std::nullopt;
  }
  return k;
}

}  // namespace flipmix
