#pragma once

// Hypercube combinatorics: vertices as bit masks, canonical edges, 2-faces,
// subcube splits, and the signed-permutation symmetry group.

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace uob {

using Vertex = std::uint32_t;

inline constexpr int kMaxDimension = 10;

inline void require_dimension(int n, int lo = 1, int hi = kMaxDimension) {
  if (n < lo || n > hi) {
    throw std::out_of_range("dimension " + std::to_string(n) +
                            " outside supported range [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]");
  }
}

inline constexpr Vertex vertex_count(int n) { return Vertex{1} << n; }

inline constexpr bool bit(Vertex v, int i) { return (v >> i) & 1u; }

// Remove bit position d, shifting higher bits down.
inline constexpr Vertex drop_bit(Vertex v, int d) {
  return (v & ((Vertex{1} << d) - 1)) | ((v >> (d + 1)) << d);
}

// Inverse of drop_bit: reinsert bit value b at position d.
inline constexpr Vertex insert_bit(Vertex v, int d, bool b) {
  return ((v >> d) << (d + 1)) | (Vertex{b} << d) | (v & ((Vertex{1} << d) - 1));
}

struct Hypercube {
  int n;

  explicit Hypercube(int dim) : n(dim) { require_dimension(n); }

  Vertex vertices() const { return vertex_count(n); }
  std::size_t edge_count() const {
    return static_cast<std::size_t>(n) << (n - 1);
  }
  std::size_t two_face_count() const {
    return (static_cast<std::size_t>(n) * (n - 1) / 2) << (n >= 2 ? n - 2 : 0);
  }
};

// Canonical edge: base has a 0-bit in dir, endpoints are base and base|2^dir.
struct Edge {
  Vertex base = 0;
  int dir = 0;

  Vertex other() const { return base | (Vertex{1} << dir); }
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

inline Edge make_edge(Vertex a, Vertex b) {
  Vertex diff = a ^ b;
  if (diff == 0 || (diff & (diff - 1)) != 0) {
    throw std::invalid_argument("vertices " + std::to_string(a) + " and " +
                                std::to_string(b) +
                                " are not at Hamming distance 1");
  }
  int dir = std::countr_zero(diff);
  return Edge{a & ~diff, dir};
}

inline Edge incident_edge(const Hypercube& cube, Vertex v, int dir) {
  if (v >= cube.vertices() || dir < 0 || dir >= cube.n) {
    throw std::out_of_range("vertex or direction out of range");
  }
  return Edge{v & ~(Vertex{1} << dir), dir};
}

// Dense edge numbering in (dir-major, base-minor) order; the base component
// is compacted by dropping the always-zero dir bit.
inline std::size_t edge_index(int n, const Edge& e) {
  return (std::size_t{static_cast<unsigned>(e.dir)} << (n - 1)) +
         drop_bit(e.base, e.dir);
}

inline Edge edge_at(int n, std::size_t index) {
  int dir = static_cast<int>(index >> (n - 1));
  Vertex packed = static_cast<Vertex>(index & ((std::size_t{1} << (n - 1)) - 1));
  return Edge{insert_bit(packed, dir, false), dir};
}

inline std::vector<Edge> edges(const Hypercube& cube) {
  std::vector<Edge> out;
  out.reserve(cube.edge_count());
  for (std::size_t i = 0; i < cube.edge_count(); ++i) {
    out.push_back(edge_at(cube.n, i));
  }
  return out;
}

// A 2-face is fixed by a base vertex with zero bits in both spanned
// directions. It carries two parallel edge pairs, one per direction.
struct TwoFace {
  Vertex base = 0;
  int d1 = 0;
  int d2 = 1;  // invariant: d1 < d2

  std::array<Edge, 2> pair_along_d1() const {
    return {Edge{base, d1}, Edge{base | (Vertex{1} << d2), d1}};
  }
  std::array<Edge, 2> pair_along_d2() const {
    return {Edge{base, d2}, Edge{base | (Vertex{1} << d1), d2}};
  }
  friend auto operator<=>(const TwoFace&, const TwoFace&) = default;
};

inline std::vector<TwoFace> two_faces(const Hypercube& cube) {
  require_dimension(cube.n, 2);
  std::vector<TwoFace> out;
  out.reserve(cube.two_face_count());
  for (int d1 = 0; d1 < cube.n; ++d1) {
    for (int d2 = d1 + 1; d2 < cube.n; ++d2) {
      Vertex span = (Vertex{1} << d1) | (Vertex{1} << d2);
      for (Vertex v = 0; v < cube.vertices(); ++v) {
        if ((v & span) == 0) out.push_back(TwoFace{v, d1, d2});
      }
    }
  }
  return out;
}

// Injection of Q_{n-1} into Q_n as the slice with a fixed bit in one
// direction. Subcube direction j maps to parent direction j, skipping dir.
struct SubcubeEmbedding {
  int parent_n = 2;
  int dir = 0;
  bool fixed_bit = false;

  int sub_n() const { return parent_n - 1; }

  Vertex embed_vertex(Vertex v) const { return insert_bit(v, dir, fixed_bit); }
  Vertex restrict_vertex(Vertex v) const { return drop_bit(v, dir); }
  bool contains(Vertex v) const { return bit(v, dir) == fixed_bit; }

  int embed_direction(int d) const { return d < dir ? d : d + 1; }
  int restrict_direction(int d) const { return d < dir ? d : d - 1; }

  Edge embed_edge(const Edge& e) const {
    return Edge{embed_vertex(e.base), embed_direction(e.dir)};
  }
  Edge restrict_edge(const Edge& e) const {
    return Edge{restrict_vertex(e.base), restrict_direction(e.dir)};
  }
};

inline std::pair<SubcubeEmbedding, SubcubeEmbedding> split(const Hypercube& cube,
                                                           int dir) {
  require_dimension(cube.n, 2);
  if (dir < 0 || dir >= cube.n) throw std::out_of_range("direction out of range");
  return {SubcubeEmbedding{cube.n, dir, false}, SubcubeEmbedding{cube.n, dir, true}};
}

// Signed permutation of coordinates: permute directions, then XOR a flip
// mask. These are exactly the graph automorphisms of Q_n.
struct CubeAutomorphism {
  int n = 1;
  std::vector<int> perm;  // direction i goes to perm[i]
  Vertex flips = 0;

  static CubeAutomorphism identity(int dim) {
    CubeAutomorphism g;
    g.n = dim;
    g.perm.resize(dim);
    std::iota(g.perm.begin(), g.perm.end(), 0);
    return g;
  }

  Vertex apply(Vertex v) const {
    Vertex w = 0;
    for (int i = 0; i < n; ++i) {
      if (bit(v, i)) w |= Vertex{1} << perm[i];
    }
    return w ^ flips;
  }

  Edge apply(const Edge& e) const {
    Vertex image = apply(e.base);
    return Edge{image & ~(Vertex{1} << perm[e.dir]), perm[e.dir]};
  }

  CubeAutomorphism then(const CubeAutomorphism& g2) const {
    if (n != g2.n) throw std::invalid_argument("dimension mismatch");
    CubeAutomorphism out;
    out.n = n;
    out.perm.resize(n);
    Vertex scattered = 0;
    for (int i = 0; i < n; ++i) {
      out.perm[i] = g2.perm[perm[i]];
      if (bit(flips, i)) scattered |= Vertex{1} << g2.perm[i];
    }
    out.flips = scattered ^ g2.flips;
    return out;
  }

  friend bool operator==(const CubeAutomorphism&, const CubeAutomorphism&) = default;
};

// Explicit listing is intentionally capped: the group has n!*2^n elements
// and is only ever enumerated for symmetry reduction at small n.
inline std::vector<CubeAutomorphism> automorphism_group(int n) {
  require_dimension(n, 1, 4);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<CubeAutomorphism> group;
  do {
    for (Vertex flips = 0; flips < vertex_count(n); ++flips) {
      group.push_back(CubeAutomorphism{n, perm, flips});
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return group;
}

}  // namespace uob
