#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "flipmix/graph.hpp"
#include "flipmix/rng.hpp"

namespace flipmix {

/// Blue probability p; q = 1 - p is always derived, never stored.
class FlipParams {
 public:
  explicit FlipParams(double p);

  double p() const noexcept { return p_; }
  double q() const noexcept { return 1.0 - p_; }

 private:
  double p_;
};

enum class Color : std::uint8_t { red = 0, blue = 1 };

/// Vertex 2-coloring; bit i set means vertex i is blue.
class Coloring {
 public:
  /// All red.
  explicit Coloring(std::size_t n);

  static Coloring all_red(std::size_t n) { return Coloring(n); }
  static Coloring all_blue(std::size_t n);
  /// Coloring whose bit pattern is `index` (n <= 64).
  static Coloring from_index(std::size_t n, std::uint64_t index);

  std::size_t size() const noexcept { return n_; }
  bool is_blue(Vertex v) const { return (words_[v / 64] >> (v % 64)) & 1U; }
  void set(Vertex v, Color c);
  /// Bit pattern as an integer (n <= 64).
  std::uint64_t index() const;
  std::size_t blue_count() const noexcept;
  /// '1' for blue, vertex 0 first.
  std::string to_string() const;

  bool operator==(const Coloring&) const = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> words_;
};

/// A colored edge: applying it paints both endpoints.
struct Face {
  Edge edge;
  Color color;
};

/// w(F): p/m for blue faces, q/m for red ones.
double face_weight(const Graph& g, const FlipParams& params, const Face& face);

Coloring apply_face(const Face& face, Coloring c);

/// One edge-flip: a uniform edge index, then the colour coin (blue iff u < p).
Coloring step(const Graph& g, const FlipParams& params, Coloring c, RngStream& rng);

Coloring simulate(const Graph& g, const FlipParams& params, Coloring init, std::size_t t,
                  RngStream& rng);

inline std::size_t blue_count(const Coloring& c) noexcept { return c.blue_count(); }

/// Phi(C) = k - p n for k blue vertices.
double phi(const Coloring& c, const FlipParams& params);

/// phi_i(C) = q if vertex i is blue, -p otherwise.
double phi_i(const Coloring& c, Vertex i, const FlipParams& params);

/// E[(Phi(X_1) - Phi(c))^2 | X_0 = c], by enumerating all 2m faces.
double expected_squared_phi_increment(const Graph& g, const FlipParams& params,
                                      const Coloring& c);

}  // namespace flipmix
