#pragma once

// Edge colorings of the hypercube and the combinatorial machinery around
// them: the admissibility predicates, the coarsening order with its
// refinement search, forest extraction, and the recognizers for colorings
// of maximum color count.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "uob/cube.hpp"

namespace uob {

class EdgeColoring {
 public:
  EdgeColoring(int dim, std::vector<int> word)
      : n_(dim), word_(std::move(word)) {
    require_dimension(n_);
    if (word_.size() != (static_cast<std::size_t>(n_) << (n_ - 1))) {
      throw std::invalid_argument("color word length " +
                                  std::to_string(word_.size()) +
                                  " does not match the edge count of Q_" +
                                  std::to_string(n_));
    }
    for (int c : word_) {
      if (c < 0) throw std::invalid_argument("negative color id");
    }
  }

  static EdgeColoring single_color(int dim) {
    require_dimension(dim);
    return EdgeColoring(
        dim, std::vector<int>(static_cast<std::size_t>(dim) << (dim - 1), 0));
  }

  int n() const { return n_; }
  std::size_t edge_count() const { return word_.size(); }
  const std::vector<int>& word() const { return word_; }

  int color(const Edge& e) const { return word_[edge_index(n_, e)]; }
  int color_at(std::size_t index) const { return word_.at(index); }

  int color_count() const {
    std::set<int> distinct(word_.begin(), word_.end());
    return static_cast<int>(distinct.size());
  }

  std::vector<int> palette() const {
    std::set<int> distinct(word_.begin(), word_.end());
    return std::vector<int>(distinct.begin(), distinct.end());
  }

  friend bool operator==(const EdgeColoring&, const EdgeColoring&) = default;

 private:
  int n_;
  std::vector<int> word_;
};

struct VertexTuple {
  Vertex vertex = 0;
  std::vector<int> tuple;  // tuple[i] = color of the direction-i edge at vertex
};

namespace detail {

// Flat 2^n-by-n table of incident edge colors; row v is vertex v's tuple.
inline std::vector<int> tuple_table(const EdgeColoring& c) {
  int n = c.n();
  Vertex count = vertex_count(n);
  std::size_t half = std::size_t{1} << (n - 1);
  std::vector<int> table(static_cast<std::size_t>(count) * n);
  for (Vertex v = 0; v < count; ++v) {
    for (int i = 0; i < n; ++i) {
      table[static_cast<std::size_t>(v) * n + i] =
          c.word()[i * half + drop_bit(v, i)];
    }
  }
  return table;
}

// Rename colors to 0..k-1 in order of first occurrence.
inline std::vector<int> normalize_word(const std::vector<int>& word) {
  std::vector<int> out(word.size());
  std::map<int, int> rename;
  for (std::size_t i = 0; i < word.size(); ++i) {
    auto [it, fresh] = rename.try_emplace(word[i], static_cast<int>(rename.size()));
    out[i] = it->second;
  }
  return out;
}

}  // namespace detail

inline VertexTuple vertex_tuple(const EdgeColoring& c, Vertex v) {
  if (v >= vertex_count(c.n())) throw std::out_of_range("vertex out of range");
  VertexTuple out{v, std::vector<int>(c.n())};
  for (int i = 0; i < c.n(); ++i) {
    out.tuple[i] = c.color(incident_edge(Hypercube{c.n()}, v, i));
  }
  return out;
}

// Ground-truth predicate: every vertex pair must differ in some direction
// whose two incident edges share a color. Adjacent pairs hold trivially
// (the differing direction's edge is one and the same), so only pairs at
// distance 2 or more are scanned.
inline bool is_admissible(const EdgeColoring& c) {
  int n = c.n();
  Vertex count = vertex_count(n);
  auto table = detail::tuple_table(c);
  for (Vertex a = 0; a < count; ++a) {
    for (Vertex b = a + 1; b < count; ++b) {
      Vertex diff = a ^ b;
      if ((diff & (diff - 1)) == 0) continue;
      bool ok = false;
      for (Vertex rest = diff; rest; rest &= rest - 1) {
        int i = std::countr_zero(rest);
        if (table[static_cast<std::size_t>(a) * n + i] ==
            table[static_cast<std::size_t>(b) * n + i]) {
          ok = true;
          break;
        }
      }
      if (!ok) return false;
    }
  }
  return true;
}

// Weaker face-local predicate: every 2-face needs at least one of its two
// parallel edge pairs monochromatic. Necessary for admissibility; kept
// separate because the converse is not settled here.
inline bool is_two_face_admissible(const EdgeColoring& c) {
  Hypercube cube{c.n()};
  for (const auto& f : two_faces(cube)) {
    auto p1 = f.pair_along_d1();
    auto p2 = f.pair_along_d2();
    if (c.color(p1[0]) != c.color(p1[1]) && c.color(p2[0]) != c.color(p2[1])) {
      return false;
    }
  }
  return true;
}

inline int color_count(const EdgeColoring& c) { return c.color_count(); }

inline std::vector<std::set<int>> direction_classes(const EdgeColoring& c) {
  int n = c.n();
  std::size_t half = std::size_t{1} << (n - 1);
  std::vector<std::set<int>> classes(n);
  for (int i = 0; i < n; ++i) {
    for (std::size_t b = 0; b < half; ++b) {
      classes[i].insert(c.word()[i * half + b]);
    }
  }
  return classes;
}

inline std::map<int, std::vector<Edge>> color_classes(const EdgeColoring& c) {
  std::map<int, std::vector<Edge>> classes;
  for (std::size_t i = 0; i < c.edge_count(); ++i) {
    classes[c.color_at(i)].push_back(edge_at(c.n(), i));
  }
  return classes;
}

inline void require_admissible(const EdgeColoring& c, const char* who) {
  if (!is_admissible(c)) {
    throw std::invalid_argument(std::string(who) +
                                ": input coloring is not admissible");
  }
}

// Recolor so that no color spans two directions, keeping each direction's
// partition of its own edges. Witness pairs in the admissibility predicate
// always compare edges of one direction, so the result stays admissible.
inline EdgeColoring separate_directions(const EdgeColoring& c) {
  require_admissible(c, "separate_directions");
  int n = c.n();
  std::size_t half = std::size_t{1} << (n - 1);
  int stride = 0;
  for (int v : c.word()) stride = std::max(stride, v + 1);
  std::vector<int> word(c.word().size());
  for (int i = 0; i < n; ++i) {
    for (std::size_t b = 0; b < half; ++b) {
      word[i * half + b] = i * stride + c.word()[i * half + b];
    }
  }
  return EdgeColoring(n, detail::normalize_word(word));
}

// Coarsening order: c1 precedes c2 when every color class of c2 sits inside
// a single class of c1 (c1 arises from c2 by merging classes, names aside).
inline bool precedes(const EdgeColoring& c1, const EdgeColoring& c2) {
  if (c1.n() != c2.n()) throw std::invalid_argument("dimension mismatch");
  std::map<int, int> merged;  // c2 color -> c1 color
  for (std::size_t i = 0; i < c1.edge_count(); ++i) {
    auto [it, fresh] = merged.try_emplace(c2.color_at(i), c1.color_at(i));
    if (!fresh && it->second != c1.color_at(i)) return false;
  }
  return true;
}

struct RefinementWitness {
  EdgeColoring finer;
  std::map<int, int> merged_from;  // finer color id -> input color id
};

namespace detail {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t size) : parent(size) {
    for (std::size_t i = 0; i < size; ++i) parent[i] = static_cast<int>(i);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // keep the smaller index as root for determinism
    return true;
  }
};

// Shared view of the constraints driving the refinement search: for every
// vertex pair at distance >= 2, the directions whose incident edge pair is
// currently monochromatic. Refinements only split classes, so these pairs
// are the only places a refinement can go wrong.
struct WitnessPair {
  std::vector<std::pair<int, int>> atom_edges;  // (atom of a-side, atom of b-side)
};

}  // namespace detail

// Search for an admissible coloring strictly finer than c. Pairs whose only
// monochromatic direction is a single edge pair force those two edges
// together in any refinement; the forced atoms are then recolored by
// backtracking. Returns the lexicographically least witness, or nullopt if
// the search exhausts (c is maximal).
inline std::optional<RefinementWitness> find_refinement(const EdgeColoring& c) {
  require_admissible(c, "find_refinement");
  const int n = c.n();
  const Vertex count = vertex_count(n);
  const std::size_t half = std::size_t{1} << (n - 1);
  const std::size_t m = c.edge_count();
  const auto table = detail::tuple_table(c);

  auto edge_of = [&](Vertex v, int i) {
    return static_cast<int>(i * half + drop_bit(v, i));
  };

  // Collect witness directions per distant pair; single-witness pairs force
  // their edge pair into one atom.
  std::vector<std::vector<std::pair<int, int>>> pair_edges;
  detail::UnionFind uf(m);
  for (Vertex a = 0; a < count; ++a) {
    for (Vertex b = a + 1; b < count; ++b) {
      Vertex diff = a ^ b;
      if ((diff & (diff - 1)) == 0) continue;
      std::vector<std::pair<int, int>> witnesses;
      for (Vertex rest = diff; rest; rest &= rest - 1) {
        int i = std::countr_zero(rest);
        if (table[static_cast<std::size_t>(a) * n + i] ==
            table[static_cast<std::size_t>(b) * n + i]) {
          witnesses.emplace_back(edge_of(a, i), edge_of(b, i));
        }
      }
      if (witnesses.size() == 1) {
        uf.unite(witnesses[0].first, witnesses[0].second);
      }
      pair_edges.push_back(std::move(witnesses));
    }
  }

  // Atoms in order of their smallest member edge; that makes the later
  // lexicographic search scan whole-word prefixes in order.
  std::vector<int> atom_of_edge(m);
  std::vector<int> atom_color;
  std::vector<int> roots;
  {
    std::map<int, int> atom_id;
    for (std::size_t e = 0; e < m; ++e) {
      int root = uf.find(static_cast<int>(e));
      auto [it, fresh] = atom_id.try_emplace(root, static_cast<int>(roots.size()));
      if (fresh) {
        roots.push_back(root);
        atom_color.push_back(c.color_at(e));
      }
      atom_of_edge[e] = it->second;
    }
  }
  const int atom_count = static_cast<int>(roots.size());

  // Per-pair constraint rows in atom terms. Rows satisfied already (same
  // atom on both sides) are dropped.
  struct Row {
    int open = 0;       // witnesses with at least one side unassigned
    int satisfied = 0;  // witnesses with both sides equal
  };
  std::vector<Row> rows;
  std::vector<std::vector<std::pair<int, int>>> atom_watch(atom_count);
  for (const auto& witnesses : pair_edges) {
    bool always = false;
    std::vector<std::pair<int, int>> in_atoms;
    for (auto [ea, eb] : witnesses) {
      int ta = atom_of_edge[ea];
      int tb = atom_of_edge[eb];
      if (ta == tb) {
        always = true;
        break;
      }
      in_atoms.emplace_back(ta, tb);
    }
    if (always) continue;
    int row_id = static_cast<int>(rows.size());
    rows.push_back(Row{static_cast<int>(in_atoms.size()), 0});
    for (auto [ta, tb] : in_atoms) {
      atom_watch[ta].emplace_back(row_id, tb);
      atom_watch[tb].emplace_back(row_id, ta);
    }
  }

  const int original_colors = c.color_count();
  std::vector<int> assigned(atom_count, -1);
  std::vector<std::vector<int>> used_by_class;  // per original color id
  {
    int max_id = 0;
    for (int v : c.word()) max_id = std::max(max_id, v + 1);
    used_by_class.resize(max_id);
  }
  int next_fresh = 0;
  int distinct = 0;

  // Depth-first over atoms; undo log entries are (row, which counter).
  struct Undo {
    int row;
    bool satisfied;
  };

  std::optional<std::vector<int>> solution;

  auto rec = [&](auto&& self, int atom) -> bool {
    if (atom == atom_count) {
      if (distinct > original_colors) {
        solution = assigned;
        return true;
      }
      return false;
    }
    // Even giving every remaining atom a fresh color cannot beat the
    // original count: prune.
    if (distinct + (atom_count - atom) <= original_colors) return false;

    auto& used = used_by_class[atom_color[atom]];
    std::vector<int> candidates = used;
    candidates.push_back(next_fresh);
    for (int color : candidates) {
      bool fresh = color == next_fresh;
      std::vector<Undo> undo;
      bool dead = false;
      for (auto [row, other] : atom_watch[atom]) {
        if (assigned[other] == -1) continue;
        if (assigned[other] == color) {
          ++rows[row].satisfied;
          undo.push_back({row, true});
        } else {
          --rows[row].open;
          undo.push_back({row, false});
          if (rows[row].open == 0 && rows[row].satisfied == 0) {
            dead = true;
            break;
          }
        }
      }
      if (!dead) {
        assigned[atom] = color;
        if (fresh) {
          used.push_back(color);
          ++next_fresh;
          ++distinct;
        }
        if (self(self, atom + 1)) return true;
        assigned[atom] = -1;
        if (fresh) {
          used.pop_back();
          --next_fresh;
          --distinct;
        }
      }
      for (auto [row, satisfied] : undo) {
        if (satisfied) {
          --rows[row].satisfied;
        } else {
          ++rows[row].open;
        }
      }
    }
    return false;
  };

  if (!rec(rec, 0)) return std::nullopt;

  std::vector<int> word(m);
  for (std::size_t e = 0; e < m; ++e) word[e] = (*solution)[atom_of_edge[e]];
  EdgeColoring finer(n, word);  // fresh ids were allocated in first-use order
  std::map<int, int> merged;
  for (std::size_t e = 0; e < m; ++e) {
    merged.emplace(finer.color_at(e), c.color_at(e));
  }
  return RefinementWitness{std::move(finer), std::move(merged)};
}

inline bool is_maximal(const EdgeColoring& c) {
  return !find_refinement(c).has_value();
}

inline std::optional<int> uniform_direction(const EdgeColoring& c) {
  int n = c.n();
  std::size_t half = std::size_t{1} << (n - 1);
  for (int i = 0; i < n; ++i) {
    bool mono = true;
    for (std::size_t b = 1; b < half && mono; ++b) {
      mono = c.word()[i * half + b] == c.word()[i * half];
    }
    if (mono) return i;
  }
  return std::nullopt;
}

// General subcube selection: fix a bit in some directions, keep the rest
// free. Free directions in increasing order become the subcube's axes.
struct SubcubeSpec {
  int n = 1;
  std::vector<std::optional<bool>> fixed;  // size n

  static SubcubeSpec slice(int n, int dir, bool value) {
    SubcubeSpec s;
    s.n = n;
    s.fixed.resize(n);
    s.fixed.at(dir) = value;
    return s;
  }

  std::vector<int> free_directions() const {
    std::vector<int> dirs;
    for (int i = 0; i < n; ++i) {
      if (!fixed[i].has_value()) dirs.push_back(i);
    }
    return dirs;
  }

  Vertex embed_vertex(Vertex v) const {
    Vertex out = 0;
    int sub = 0;
    for (int i = 0; i < n; ++i) {
      if (fixed[i].has_value()) {
        if (*fixed[i]) out |= Vertex{1} << i;
      } else {
        if (bit(v, sub)) out |= Vertex{1} << i;
        ++sub;
      }
    }
    return out;
  }
};

inline EdgeColoring restrict_to_subcube(const EdgeColoring& c,
                                        const SubcubeSpec& spec) {
  require_admissible(c, "restrict_to_subcube");
  if (spec.n != c.n() || spec.fixed.size() != static_cast<std::size_t>(c.n())) {
    throw std::invalid_argument("subcube spec does not match the coloring");
  }
  auto free_dirs = spec.free_directions();
  int m = static_cast<int>(free_dirs.size());
  if (m < 1) throw std::invalid_argument("subcube must keep at least one direction");
  std::size_t sub_half = std::size_t{1} << (m - 1);
  std::vector<int> word(static_cast<std::size_t>(m) << (m - 1));
  for (int j = 0; j < m; ++j) {
    for (std::size_t b = 0; b < sub_half; ++b) {
      Edge sub = edge_at(m, j * sub_half + b);
      Edge parent{spec.embed_vertex(sub.base), free_dirs[sub.dir]};
      word[j * sub_half + b] = c.color(parent);
    }
  }
  // Parent color ids are kept on purpose so restrictions of one coloring
  // can be compared against each other and the parent palette.
  return EdgeColoring(m, word);
}

inline EdgeColoring restrict_to_subcube(const EdgeColoring& c,
                                        const SubcubeEmbedding& emb) {
  SubcubeSpec spec;
  spec.n = emb.parent_n;
  spec.fixed.resize(emb.parent_n);
  spec.fixed[emb.dir] = emb.fixed_bit;
  return restrict_to_subcube(c, spec);
}

inline EdgeColoring apply_automorphism(const CubeAutomorphism& g,
                                       const EdgeColoring& c) {
  if (g.n != c.n()) throw std::invalid_argument("dimension mismatch");
  std::vector<int> word(c.edge_count());
  for (std::size_t i = 0; i < c.edge_count(); ++i) {
    word[edge_index(c.n(), g.apply(edge_at(c.n(), i)))] = c.color_at(i);
  }
  return EdgeColoring(c.n(), word);
}

// Name-independent canonical form; with use_symmetry also quotient by the
// cube's automorphism group (explicitly enumerated, so small n only).
inline EdgeColoring canonical_form(const EdgeColoring& c,
                                   bool use_symmetry = false) {
  if (!use_symmetry) {
    return EdgeColoring(c.n(), detail::normalize_word(c.word()));
  }
  if (c.n() > 4) {
    throw std::invalid_argument(
        "symmetry canonicalization enumerates the automorphism group and is "
        "limited to n <= 4");
  }
  std::optional<std::vector<int>> best;
  for (const auto& g : automorphism_group(c.n())) {
    auto word = detail::normalize_word(apply_automorphism(g, c).word());
    if (!best || word < *best) best = std::move(word);
  }
  return EdgeColoring(c.n(), *best);
}

struct ColorForest {
  int n = 1;
  std::vector<Edge> edges;
};

namespace detail {

inline bool pick_forest_edges(const EdgeColoring& c,
                              const std::vector<int>& missing, std::size_t at,
                              std::vector<Edge>& chosen, UnionFind& uf) {
  if (at == missing.size()) return true;
  int want = missing[at];
  int n = c.n();
  std::size_t half = std::size_t{1} << (n - 1);
  for (std::size_t b = 0; b < half; ++b) {
    Edge e = edge_at(n, (n - 1) * half + b);
    if (c.color(e) != want) continue;
    int va = static_cast<int>(e.base);
    int vb = static_cast<int>(e.other());
    if (uf.find(va) == uf.find(vb)) continue;
    UnionFind saved = uf;
    uf.unite(va, vb);
    chosen.push_back(e);
    if (pick_forest_edges(c, missing, at + 1, chosen, uf)) return true;
    chosen.pop_back();
    uf = saved;
  }
  return false;
}

}  // namespace detail

// Build an acyclic edge set containing every color exactly once, by the
// split-and-merge recursion: forest of the bottom slice, forest of the top
// slice minus colors already present, then vertical edges for colors that
// only occur vertically.
inline ColorForest extract_forest(const EdgeColoring& c) {
  require_admissible(c, "extract_forest");
  int n = c.n();
  if (n == 1) return ColorForest{1, {Edge{0, 0}}};

  auto [bottom, top] = split(Hypercube{n}, n - 1);
  auto forest_bottom = extract_forest(restrict_to_subcube(c, bottom));
  auto forest_top = extract_forest(restrict_to_subcube(c, top));

  std::vector<Edge> edges;
  std::set<int> covered;
  for (const auto& e : forest_bottom.edges) {
    edges.push_back(bottom.embed_edge(e));
    covered.insert(c.color(edges.back()));
  }
  for (const auto& e : forest_top.edges) {
    Edge parent = top.embed_edge(e);
    if (covered.insert(c.color(parent)).second) edges.push_back(parent);
  }

  std::set<int> missing_set;
  std::size_t half = std::size_t{1} << (n - 1);
  for (std::size_t b = 0; b < half; ++b) {
    int color = c.word()[(n - 1) * half + b];
    if (!covered.count(color)) missing_set.insert(color);
  }
  std::vector<int> missing(missing_set.begin(), missing_set.end());

  detail::UnionFind uf(vertex_count(n));
  for (const auto& e : edges) {
    uf.unite(static_cast<int>(e.base), static_cast<int>(e.other()));
  }
  std::vector<Edge> vertical;
  if (!detail::pick_forest_edges(c, missing, 0, vertical, uf)) {
    throw std::logic_error("forest extraction failed to cover all colors");
  }
  edges.insert(edges.end(), vertical.begin(), vertical.end());
  std::sort(edges.begin(), edges.end(), [&](const Edge& a, const Edge& b) {
    return edge_index(n, a) < edge_index(n, b);
  });
  return ColorForest{n, std::move(edges)};
}

// Recognizer for the recursive construction that realizes 2^n - 1 colors:
// some direction is monochromatic in a color used nowhere else, the two
// slices use disjoint palettes, and both slices recurse.
inline bool is_max_family(const EdgeColoring& c) {
  require_admissible(c, "is_max_family");
  struct Rec {
    static bool check(const EdgeColoring& c) {
      int n = c.n();
      if (n == 1) return true;
      std::size_t half = std::size_t{1} << (n - 1);
      for (int d = 0; d < n; ++d) {
        int color = c.word()[d * half];
        bool mono = true;
        for (std::size_t b = 1; b < half && mono; ++b) {
          mono = c.word()[d * half + b] == color;
        }
        if (!mono) continue;
        bool exclusive = true;
        for (int other = 0; other < n && exclusive; ++other) {
          if (other == d) continue;
          for (std::size_t b = 0; b < half && exclusive; ++b) {
            exclusive = c.word()[other * half + b] != color;
          }
        }
        if (!exclusive) continue;
        auto [lo, hi] = split(Hypercube{n}, d);
        auto cl = restrict_to_subcube(c, lo);
        auto ch = restrict_to_subcube(c, hi);
        auto pl = cl.palette();
        auto ph = ch.palette();
        std::vector<int> shared;
        std::set_intersection(pl.begin(), pl.end(), ph.begin(), ph.end(),
                              std::back_inserter(shared));
        if (!shared.empty()) continue;
        if (check(cl) && check(ch)) return true;
      }
      return false;
    }
  };
  return Rec::check(c);
}

}  // namespace uob
