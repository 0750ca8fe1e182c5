#include "flipmix/chain.hpp"

#include <bit>
#include <cmath>

#include "flipmix/errors.hpp"

namespace flipmix {

FlipParams::FlipParams(double p) : p_(p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0, 1]");
}

Coloring::Coloring(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

Coloring Coloring::all_blue(std::size_t n) {
  Coloring c(n);
  for (Vertex v = 0; v < n; ++v) c.set(v, Color::blue);
  return c;
}

Coloring Coloring::from_index(std::size_t n, std::uint64_t index) {
  if (n > 64) throw InputError("index form needs n <= 64");
  if (n < 64 && (index >> n) != 0) throw InputError("index has bits beyond n");
  Coloring c(n);
  if (n > 0) c.words_[0] = index;
  return c;
}

void Coloring::set(Vertex v, Color c) {
  const std::uint64_t bit = std::uint64_t{1} << (v % 64);
  if (c == Color::blue) {
    words_[v / 64] |= bit;
  } else {
    words_[v / 64] &= ~bit;
  }
}

std::uint64_t Coloring::index() const {
  if (n_ > 64) throw InputError("index form needs n <= 64");
  return words_.empty() ? 0 : words_[0];
}

std::size_t Coloring::blue_count() const noexcept {
  std::size_t count = 0;
  for (std::uint64_t w : words_) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

std::string Coloring::to_string() const {
  std::string s(n_, '0');
  for (Vertex v = 0; v < n_; ++v) s[v] = is_blue(v) ? '1' : '0';
  return s;
}

double face_weight(const Graph& g, const FlipParams& params, const Face& face) {
  const double m = static_cast<double>(g.num_edges());
  return (face.color == Color::blue ? params.p() : params.q()) / m;
}

Coloring apply_face(const Face& face, Coloring c) {
  c.set(face.edge.u, face.color);
  c.set(face.edge.v, face.color);
  return c;
}

Coloring step(const Graph& g, const FlipParams& params, Coloring c, RngStream& rng) {
  const Edge& e = g.edges()[rng.uniform_below(g.num_edges())];
  const Color color = rng.bernoulli(params.p()) ? Color::blue : Color::red;
  return apply_face({e, color}, std::move(c));
}

Coloring simulate(const Graph& g, const FlipParams& params, Coloring init, std::size_t t,
                  RngStream& rng) {
  for (std::size_t s = 0; s < t; ++s) init = step(g, params, std::move(init), rng);
  return init;
}

double phi(const Coloring& c, const FlipParams& params) {
  return static_cast<double>(c.blue_count()) - params.p() * static_cast<double>(c.size());
}

double phi_i(const Coloring& c, Vertex i, const FlipParams& params) {
  if (i >= c.size()) throw InputError("vertex out of range");
  return c.is_blue(i) ? params.q() : -params.p();
}

double expected_squared_phi_increment(const Graph& g, const FlipParams& params,
                                      const Coloring& c) {
  const double before = phi(c, params);
  double total = 0.0;
  for (const Edge& e : g.edges()) {
    for (Color color : {Color::blue, Color::red}) {
      const Face face{e, color};
      const double diff = phi(apply_face(face, c), params) - before;
      total += face_weight(g, params, face) * diff * diff;
    }
  }
  return total;
}

}  // namespace flipmix
