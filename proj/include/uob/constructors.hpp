#pragma once

// Explicit coloring constructions: the one-color minimum, the recursive
// maximum-count recipe, the dominant/non-dominant pattern solver with its
// derived coloring, the cone and doubling combinators, and the printed
// example colorings.

#include <deque>
#include <string>

#include "uob/coloring.hpp"

namespace uob {

inline EdgeColoring minimal_coloring(int n) {
  return EdgeColoring::single_color(n);
}

// Glue two admissible colorings of Q_{n-1} into Q_n: one slice per input
// with palettes made disjoint, and all edges of the joining direction in a
// single fresh color.
inline EdgeColoring construct_max_from(const EdgeColoring& c0,
                                       const EdgeColoring& c1, int dir) {
  if (c0.n() != c1.n()) throw std::invalid_argument("dimension mismatch");
  require_admissible(c0, "construct_max_from");
  require_admissible(c1, "construct_max_from");
  int n = c0.n() + 1;
  require_dimension(n, 2);
  if (dir < 0 || dir >= n) throw std::out_of_range("direction out of range");

  int shift = 0;
  for (int v : c0.word()) shift = std::max(shift, v + 1);
  int fresh = shift;
  for (int v : c1.word()) fresh = std::max(fresh, shift + v + 1);

  auto [lo, hi] = split(Hypercube{n}, dir);
  std::vector<int> word(static_cast<std::size_t>(n) << (n - 1));
  for (std::size_t i = 0; i < c0.edge_count(); ++i) {
    Edge e = edge_at(n - 1, i);
    word[edge_index(n, lo.embed_edge(e))] = c0.color_at(i);
    word[edge_index(n, hi.embed_edge(e))] = shift + c1.color_at(i);
  }
  std::size_t half = std::size_t{1} << (n - 1);
  for (std::size_t b = 0; b < half; ++b) word[dir * half + b] = fresh;
  return canonical_form(EdgeColoring(n, word));
}

inline EdgeColoring construct_max(int n) {
  require_dimension(n);
  EdgeColoring c = minimal_coloring(1);
  for (int k = 2; k <= n; ++k) {
    c = construct_max_from(c, c, k - 1);
  }
  return c;
}

// Same gluing with the fresh direction on top; named for the geometric
// picture of coning two bases over a new shared vector.
inline EdgeColoring cone(const EdgeColoring& c0, const EdgeColoring& c1) {
  return construct_max_from(c0, c1, c0.n());
}

// Both slices reuse the input coloring verbatim; every joining edge gets
// its own fresh color, adding 2^{n-1} colors.
inline EdgeColoring doubling(const EdgeColoring& c) {
  require_admissible(c, "doubling");
  int n = c.n() + 1;
  require_dimension(n, 2);
  int fresh = 0;
  for (int v : c.word()) fresh = std::max(fresh, v + 1);

  auto [lo, hi] = split(Hypercube{n}, n - 1);
  std::vector<int> word(static_cast<std::size_t>(n) << (n - 1));
  for (std::size_t i = 0; i < c.edge_count(); ++i) {
    Edge e = edge_at(n - 1, i);
    word[edge_index(n, lo.embed_edge(e))] = c.color_at(i);
    word[edge_index(n, hi.embed_edge(e))] = c.color_at(i);
  }
  std::size_t half = std::size_t{1} << (n - 1);
  for (std::size_t b = 0; b < half; ++b) {
    word[(n - 1) * half + b] = fresh + static_cast<int>(b);
  }
  return canonical_form(EdgeColoring(n, word));
}

// A two-class edge labeling where every 2-face carries exactly one
// non-dominant edge; the seed of the generalized construction below.
struct DominantPattern {
  int n = 3;
  std::set<Edge> nondominant;

  friend auto operator<=>(const DominantPattern&, const DominantPattern&) = default;
};

inline void validate_pattern(const DominantPattern& p) {
  require_dimension(p.n, 3);
  Hypercube cube{p.n};
  for (const auto& e : p.nondominant) {
    if (e.dir < 0 || e.dir >= p.n || e.base >= cube.vertices() ||
        bit(e.base, e.dir)) {
      throw std::invalid_argument("pattern contains a malformed edge");
    }
  }
  for (const auto& f : two_faces(cube)) {
    auto p1 = f.pair_along_d1();
    auto p2 = f.pair_along_d2();
    int count = 0;
    for (const auto& e : {p1[0], p1[1], p2[0], p2[1]}) {
      count += p.nondominant.count(e) ? 1 : 0;
    }
    if (count != 1) {
      throw std::invalid_argument(
          "pattern violates the one-non-dominant-edge-per-face rule");
    }
  }
  std::size_t per_direction = std::size_t{1} << (p.n - 3);
  std::vector<std::size_t> counts(p.n, 0);
  for (const auto& e : p.nondominant) ++counts[e.dir];
  for (std::size_t c : counts) {
    if (c != per_direction) {
      throw std::invalid_argument("pattern direction counts are uneven");
    }
  }
}

// Complete the one-per-face rule from a seeded non-dominant edge by unit
// propagation on faces plus branching, returning every completion rather
// than trusting that mirrors are the only freedom.
inline std::vector<DominantPattern> dominant_pattern(int n, const Edge& seed) {
  require_dimension(n, 3);
  Hypercube cube{n};
  if (seed.dir < 0 || seed.dir >= n || bit(seed.base, seed.dir) ||
      seed.base >= cube.vertices()) {
    throw std::invalid_argument("seed is not a canonical edge");
  }

  auto faces = two_faces(cube);
  std::vector<std::array<std::size_t, 4>> face_edges;
  std::vector<std::vector<std::size_t>> edge_faces(cube.edge_count());
  for (std::size_t f = 0; f < faces.size(); ++f) {
    auto p1 = faces[f].pair_along_d1();
    auto p2 = faces[f].pair_along_d2();
    std::array<std::size_t, 4> ids{
        edge_index(n, p1[0]), edge_index(n, p1[1]), edge_index(n, p2[0]),
        edge_index(n, p2[1])};
    face_edges.push_back(ids);
    for (auto id : ids) edge_faces[id].push_back(f);
  }

  // -1 undecided, 0 dominant, 1 non-dominant
  std::vector<signed char> state(cube.edge_count(), -1);
  std::vector<DominantPattern> found;

  auto propagate = [&](std::size_t start_edge,
                       std::vector<std::size_t>& trail) -> bool {
    std::deque<std::size_t> queue{start_edge};
    auto assign = [&](std::size_t e, signed char v) -> bool {
      if (state[e] == v) return true;
      if (state[e] != -1) return false;
      state[e] = v;
      trail.push_back(e);
      queue.push_back(e);
      return true;
    };
    while (!queue.empty()) {
      std::size_t e = queue.front();
      queue.pop_front();
      for (std::size_t f : edge_faces[e]) {
        int nd = 0, unknown = 0;
        for (auto id : face_edges[f]) {
          if (state[id] == 1) ++nd;
          if (state[id] == -1) ++unknown;
        }
        if (nd > 1) return false;
        if (nd == 1) {
          for (auto id : face_edges[f]) {
            if (state[id] == -1 && !assign(id, 0)) return false;
          }
        } else if (unknown == 0) {
          return false;  // all four dominant
        } else if (unknown == 1) {
          for (auto id : face_edges[f]) {
            if (state[id] == -1 && !assign(id, 1)) return false;
          }
        }
      }
    }
    return true;
  };

  auto undo = [&](const std::vector<std::size_t>& trail) {
    for (std::size_t e : trail) state[e] = -1;
  };

  auto rec = [&](auto&& self) -> void {
    std::size_t next = cube.edge_count();
    for (std::size_t e = 0; e < cube.edge_count(); ++e) {
      if (state[e] == -1) {
        next = e;
        break;
      }
    }
    if (next == cube.edge_count()) {
      DominantPattern p{n, {}};
      for (std::size_t e = 0; e < cube.edge_count(); ++e) {
        if (state[e] == 1) p.nondominant.insert(edge_at(n, e));
      }
      validate_pattern(p);  // direction counts are asserted, not assumed
      found.push_back(std::move(p));
      return;
    }
    for (signed char v : {0, 1}) {
      std::vector<std::size_t> trail;
      state[next] = v;
      trail.push_back(next);
      if (propagate(next, trail)) self(self);
      undo(trail);
    }
  };

  std::vector<std::size_t> seed_trail;
  std::size_t seed_id = edge_index(n, seed);
  state[seed_id] = 1;
  seed_trail.push_back(seed_id);
  if (propagate(seed_id, seed_trail)) rec(rec);

  if (found.empty()) {
    throw std::runtime_error("no completion exists for seed edge {" +
                             std::to_string(seed.base) + ", dir " +
                             std::to_string(seed.dir) + "} at n = " +
                             std::to_string(n));
  }
  std::sort(found.begin(), found.end());
  return found;
}

// One direction-wide color per direction's dominant edges, one fresh color
// per non-dominant edge.
inline EdgeColoring generalized_bdf(const DominantPattern& pattern) {
  validate_pattern(pattern);
  int n = pattern.n;
  std::vector<int> word(static_cast<std::size_t>(n) << (n - 1));
  for (std::size_t i = 0; i < word.size(); ++i) {
    word[i] = edge_at(n, i).dir;
  }
  int next = n;
  std::vector<Edge> singles(pattern.nondominant.begin(),
                            pattern.nondominant.end());
  std::sort(singles.begin(), singles.end(),
            [&](const Edge& a, const Edge& b) {
              return edge_index(n, a) < edge_index(n, b);
            });
  for (const auto& e : singles) word[edge_index(n, e)] = next++;
  auto coloring = canonical_form(EdgeColoring(n, word));
  if (!is_admissible(coloring)) {
    throw std::logic_error(
        "pattern satisfied the face rule but its coloring is not admissible");
  }
  return coloring;
}

inline EdgeColoring generalized_bdf(int n) {
  auto completions = dominant_pattern(n, edge_at(n, 0));
  return generalized_bdf(completions.front());
}

namespace detail {

inline EdgeColoring coloring_from_classes(
    int n, const std::vector<std::vector<std::pair<Vertex, Vertex>>>& classes) {
  std::vector<int> word(static_cast<std::size_t>(n) << (n - 1), -1);
  for (std::size_t color = 0; color < classes.size(); ++color) {
    for (auto [a, b] : classes[color]) {
      std::size_t idx = edge_index(n, make_edge(a, b));
      if (word[idx] != -1) throw std::logic_error("duplicate edge in class list");
      word[idx] = static_cast<int>(color);
    }
  }
  for (int v : word) {
    if (v == -1) throw std::logic_error("class list misses an edge");
  }
  return EdgeColoring(n, word);
}

}  // namespace detail

// The printed colorings, transcribed edge list by edge list. Color ids
// follow the captions' listing order; names for the 3-cube ones live in
// fixture_color_names.
inline EdgeColoring fixture(const std::string& name) {
  if (name == "fig1") {
    return detail::coloring_from_classes(
        3, {
               {{0, 4}, {1, 5}, {3, 7}, {2, 6}},  // red
               {{0, 2}, {1, 3}},                  // blue
               {{4, 6}, {5, 7}},                  // violet
               {{0, 1}},                          // green
               {{4, 5}},                          // purple
               {{6, 7}},                          // brown
               {{2, 3}},                          // orange
           });
  }
  if (name == "fig2") {
    return detail::coloring_from_classes(
        3, {
               {{0, 4}, {3, 7}, {2, 6}},  // orange
               {{0, 1}, {4, 5}, {2, 3}},  // red
               {{4, 6}, {5, 7}, {1, 3}},  // violet
               {{1, 5}},                  // purple
               {{0, 2}},                  // green
               {{6, 7}},                  // blue
           });
  }
  if (name == "bdf4") {
    return detail::coloring_from_classes(
        4, {
               {{0, 1}, {2, 3}, {4, 5}, {10, 11}, {12, 13}, {14, 15}},
               {{0, 2}},
               {{0, 4}, {2, 6}, {3, 7}, {8, 12}, {9, 13}, {11, 15}},
               {{0, 8}, {1, 9}, {2, 10}, {5, 13}, {6, 14}, {7, 15}},
               {{1, 3}, {4, 6}, {5, 7}, {8, 10}, {9, 11}, {12, 14}},
               {{1, 5}},
               {{3, 11}},
               {{4, 12}},
               {{6, 7}},
               {{8, 9}},
               {{10, 14}},
               {{13, 15}},
           });
  }
  throw std::invalid_argument("unknown fixture: " + name);
}

inline std::vector<std::string> fixture_color_names(const std::string& name) {
  if (name == "fig1") {
    return {"red", "blue", "violet", "green", "purple", "brown", "orange"};
  }
  if (name == "fig2") {
    return {"orange", "red", "violet", "purple", "green", "blue"};
  }
  if (name == "bdf4") {
    std::vector<std::string> names;
    for (int i = 1; i <= 12; ++i) names.push_back("u" + std::to_string(i));
    return names;
  }
  throw std::invalid_argument("unknown fixture: " + name);
}

}  // namespace uob
