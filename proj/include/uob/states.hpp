#pragma once

// Product states over n qubits, synthesis of an orthonormal product basis
// from an admissible coloring, Gram verification, and the inverse problem of
// recovering the coloring from the bare list of states.

#include <map>
#include <vector>

#include "uob/coloring.hpp"
#include "uob/ray.hpp"

namespace uob {

// tensor factors from left to right; the factor at position p carries the
// cube direction n - 1 - p, so the leftmost factor matches the highest bit
struct ProductState {
  std::vector<QubitRay> factors;
};

struct Uob {
  int n = 1;
  std::vector<ProductState> states;  // indexed by vertex when synthesized
};

inline int direction_of_position(int n, int position) {
  return n - 1 - position;
}

struct ColorAssignment {
  std::map<int, QubitRay> rays;
};

// Build the basis: state v takes, at each position, the ray assigned to the
// color of the edge leaving v in that direction, hatted when the vertex sits
// on the upper side of the edge.
inline Uob synthesize(const EdgeColoring& c, const ColorAssignment& assignment) {
  require_admissible(c, "synthesize");
  for (int color : c.palette()) {
    if (!assignment.rays.count(color)) {
      throw std::invalid_argument("assignment is missing color " +
                                  std::to_string(color));
    }
  }
  Hypercube cube{c.n()};
  Uob uob;
  uob.n = c.n();
  uob.states.reserve(cube.vertices());
  for (Vertex v = 0; v < cube.vertices(); ++v) {
    ProductState state;
    state.factors.reserve(c.n());
    for (int p = 0; p < c.n(); ++p) {
      int d = direction_of_position(c.n(), p);
      const QubitRay& ray = assignment.rays.at(c.color(incident_edge(cube, v, d)));
      state.factors.push_back(bit(v, d) ? ray.hat() : ray);
    }
    uob.states.push_back(std::move(state));
  }
  return uob;
}

struct VerifyReport {
  bool pass = true;
  int n = 1;
  double max_overlap = 0;              // largest off-diagonal Gram magnitude
  std::array<std::size_t, 2> worst_pair{0, 0};
  int worst_position = -1;             // most nearly orthogonal factor there
};

namespace detail {

inline int checked_qubit_count(const Uob& uob) {
  require_dimension(uob.n);
  if (uob.states.size() != vertex_count(uob.n)) {
    throw std::invalid_argument("state count does not match the dimension");
  }
  for (const auto& state : uob.states) {
    if (static_cast<int>(state.factors.size()) != uob.n) {
      throw std::invalid_argument("every state needs one factor per qubit");
    }
  }
  return uob.n;
}

}  // namespace detail

// Pairwise orthogonality via the factored inner product. Norms are unit by
// construction of QubitRay, so the Gram diagonal needs no check.
inline VerifyReport verify_uob(const Uob& uob,
                               const Tolerances& tolerances = {}) {
  int n = detail::checked_qubit_count(uob);
  VerifyReport report;
  report.n = n;
  for (std::size_t i = 0; i < uob.states.size(); ++i) {
    for (std::size_t j = i + 1; j < uob.states.size(); ++j) {
      Complex product = 1;
      int closest_position = 0;
      double closest = 2;
      for (int p = 0; p < n; ++p) {
        Complex factor =
            inner(uob.states[i].factors[p], uob.states[j].factors[p]);
        product *= factor;
        if (std::abs(factor) < closest) {
          closest = std::abs(factor);
          closest_position = p;
        }
      }
      if (std::abs(product) > report.max_overlap) {
        report.max_overlap = std::abs(product);
        report.worst_pair = {i, j};
        report.worst_position = closest_position;
      }
    }
  }
  report.pass = report.max_overlap <= tolerances.gram_pass;
  return report;
}

struct SampledAssignment {
  ColorAssignment assignment;
  int rejections = 0;
};

// One Haar-random ray per color, redrawn until every assigned ray and every
// hat sits at least min_separation from all the others. The global gap keeps
// distinct colors recoverable from the states alone.
inline SampledAssignment sample_assignment(const EdgeColoring& c,
                                           std::uint64_t seed,
                                           double min_separation = 0.1,
                                           int max_rejections = 10000) {
  if (min_separation < 0 || min_separation >= 1) {
    throw std::invalid_argument("min_separation must lie in [0, 1)");
  }
  std::mt19937_64 rng(seed);
  SampledAssignment out;
  std::vector<QubitRay> taken;
  for (int color : c.palette()) {
    while (true) {
      QubitRay ray = random_ray(rng);
      QubitRay hatted = ray.hat();
      bool clear = true;
      for (const auto& other : taken) {
        if (fs_distance(ray, other) < min_separation ||
            fs_distance(hatted, other) < min_separation) {
          clear = false;
          break;
        }
      }
      if (clear) {
        out.assignment.rays.emplace(color, ray);
        taken.push_back(ray);
        taken.push_back(hatted);
        break;
      }
      if (++out.rejections > max_rejections) {
        throw std::runtime_error(
            "could not place separated rays for every color; lower "
            "min_separation or change the seed");
      }
    }
  }
  return out;
}

// Which member of each orthogonal ray pair plays the unhatted role during
// recovery. The anchored rule aligns each pair's first appearance with the
// corresponding bit of that state's index, so a basis listed in vertex order
// recovers with the identity relabeling. The lexicographic rule orders the
// two rays by their canonical components and is input-order independent.
enum class T0Rule { anchored, lexicographic };

class RecoveryError : public std::runtime_error {
 public:
  explicit RecoveryError(const std::string& what) : std::runtime_error(what) {}
};

struct RecoveryResult {
  EdgeColoring coloring;
  std::vector<Vertex> state_to_vertex;  // input index -> recovered vertex
  std::vector<std::pair<QubitRay, QubitRay>> color_rays;  // per color id
};

namespace detail {

inline bool lex_before(const QubitRay& x, const QubitRay& y) {
  auto key = [](const QubitRay& r) {
    return std::array<double, 4>{r.amp0().real(), r.amp0().imag(),
                                 r.amp1().real(), r.amp1().imag()};
  };
  return key(x) < key(y);
}

}  // namespace detail

// Reconstruct the edge coloring behind a list of unentangled states. The
// steps mirror the structure of a synthesized basis: cluster the factor rays
// at each position, match clusters into orthogonal pairs, orient each pair
// by the chosen rule, read the resulting bits as vertex labels, and name one
// color per distinct ray pair. Fails loudly when the input does not carry
// that structure.
inline RecoveryResult recover_coloring(const Uob& uob,
                                       T0Rule rule = T0Rule::anchored,
                                       const Tolerances& tolerances = {}) {
  int n = detail::checked_qubit_count(uob);
  std::size_t count = uob.states.size();
  double band = tolerances.cluster_ambiguity_factor * tolerances.ray_eq;

  std::vector<std::vector<QubitRay>> reps(n);      // cluster representatives
  std::vector<std::vector<int>> member(n);         // state -> cluster
  std::vector<std::vector<int>> pair_of(n);        // cluster -> pair index
  std::vector<std::vector<std::array<int, 2>>> pair_members(n);
  std::vector<std::vector<int>> side(n);           // cluster -> 0 or 1

  for (int p = 0; p < n; ++p) {
    member[p].resize(count, -1);
    for (std::size_t i = 0; i < count; ++i) {
      const QubitRay& ray = uob.states[i].factors[p];
      int best = -1;
      double best_distance = 2;
      bool banded = false;
      for (std::size_t k = 0; k < reps[p].size(); ++k) {
        double d = fs_distance(ray, reps[p][k]);
        if (d < best_distance) {
          best_distance = d;
          best = static_cast<int>(k);
        }
        if (d > tolerances.ray_eq && d < band) banded = true;
      }
      if (banded || (best >= 0 && best_distance > tolerances.ray_eq &&
                     best_distance < band)) {
        throw RecoveryError("factor rays at position " + std::to_string(p) +
                            " fall inside the cluster ambiguity band");
      }
      if (best >= 0 && best_distance <= tolerances.ray_eq) {
        member[p][i] = best;
      } else {
        reps[p].push_back(ray);
        member[p][i] = static_cast<int>(reps[p].size()) - 1;
      }
    }

    // each cluster must see exactly one orthogonal partner cluster
    std::size_t clusters = reps[p].size();
    std::vector<int> partner(clusters, -1);
    for (std::size_t k = 0; k < clusters; ++k) {
      QubitRay hatted = reps[p][k].hat();
      for (std::size_t j = 0; j < clusters; ++j) {
        if (fs_distance(hatted, reps[p][j]) <= tolerances.hat_pair) {
          if (partner[k] != -1) {
            throw RecoveryError("two clusters at position " +
                                std::to_string(p) +
                                " both match the same orthogonal partner");
          }
          partner[k] = static_cast<int>(j);
        }
      }
      if (partner[k] == -1) {
        throw RecoveryError("cluster at position " + std::to_string(p) +
                            " has no orthogonal partner cluster");
      }
    }
    pair_of[p].resize(clusters, -1);
    for (std::size_t k = 0; k < clusters; ++k) {
      if (pair_of[p][k] != -1) continue;
      int mate = partner[k];
      if (partner[mate] != static_cast<int>(k)) {
        throw RecoveryError("cluster pairing at position " +
                            std::to_string(p) + " is not symmetric");
      }
      int id = static_cast<int>(pair_members[p].size());
      pair_of[p][k] = id;
      pair_of[p][mate] = id;
      pair_members[p].push_back({static_cast<int>(k), mate});
    }

    // orient every pair
    side[p].assign(clusters, -1);
    int d = direction_of_position(n, p);
    if (rule == T0Rule::lexicographic) {
      for (const auto& [k, mate] : pair_members[p]) {
        bool k_first = detail::lex_before(reps[p][k], reps[p][mate]);
        side[p][k] = k_first ? 0 : 1;
        side[p][mate] = k_first ? 1 : 0;
      }
    } else {
      for (std::size_t i = 0; i < count; ++i) {
        int k = member[p][i];
        if (side[p][k] != -1) continue;
        int mate = pair_members[p][pair_of[p][k]][0] == k
                       ? pair_members[p][pair_of[p][k]][1]
                       : pair_members[p][pair_of[p][k]][0];
        int b = bit(static_cast<Vertex>(i), d) ? 1 : 0;
        side[p][k] = b;
        side[p][mate] = 1 - b;
      }
    }
  }

  // bits to vertex labels; orthogonality of distinct states forces these to
  // be distinct, so a collision means the input was not orthonormal
  std::vector<Vertex> state_to_vertex(count, 0);
  std::vector<int> vertex_to_state(count, -1);
  for (std::size_t i = 0; i < count; ++i) {
    Vertex v = 0;
    for (int p = 0; p < n; ++p) {
      if (side[p][member[p][i]]) {
        v |= Vertex{1} << direction_of_position(n, p);
      }
    }
    state_to_vertex[i] = v;
    if (vertex_to_state[v] != -1) {
      throw RecoveryError("states " + std::to_string(vertex_to_state[v]) +
                          " and " + std::to_string(i) +
                          " receive the same vertex label; the input is not "
                          "an orthonormal product family");
    }
    vertex_to_state[v] = static_cast<int>(i);
  }

  // one color per distinct ray pair, shared across positions when the pairs
  // coincide as sets of rays
  std::vector<std::pair<QubitRay, QubitRay>> registry;
  auto global_color = [&](const QubitRay& t0, const QubitRay& t1) {
    for (std::size_t g = 0; g < registry.size(); ++g) {
      const auto& [u0, u1] = registry[g];
      bool straight = fs_distance(t0, u0) <= tolerances.ray_eq &&
                      fs_distance(t1, u1) <= tolerances.ray_eq;
      bool crossed = fs_distance(t0, u1) <= tolerances.ray_eq &&
                     fs_distance(t1, u0) <= tolerances.ray_eq;
      if (straight || crossed) return static_cast<int>(g);
    }
    registry.emplace_back(t0, t1);
    return static_cast<int>(registry.size()) - 1;
  };

  Hypercube cube{n};
  std::vector<int> word(cube.edge_count(), -1);
  for (const auto& e : edges(cube)) {
    int p = n - 1 - e.dir;
    int lo = vertex_to_state[e.base];
    int hi = vertex_to_state[e.other()];
    int lo_cluster = member[p][lo];
    int hi_cluster = member[p][hi];
    if (pair_of[p][lo_cluster] != pair_of[p][hi_cluster]) {
      throw RecoveryError(
          "edge endpoints disagree on their ray pair at position " +
          std::to_string(p));
    }
    const QubitRay& t0 =
        reps[p][side[p][lo_cluster] == 0 ? lo_cluster : hi_cluster];
    const QubitRay& t1 =
        reps[p][side[p][lo_cluster] == 0 ? hi_cluster : lo_cluster];
    word[edge_index(n, e)] = global_color(t0, t1);
  }

  auto normalized = detail::normalize_word(word);
  std::vector<std::pair<QubitRay, QubitRay>> color_rays;
  color_rays.reserve(registry.size());
  {
    std::map<int, int> rename;  // raw registry id -> normalized id
    for (std::size_t i = 0; i < word.size(); ++i) rename[word[i]] = normalized[i];
    color_rays.assign(registry.size(), registry.front());
    for (const auto& [raw, renamed] : rename) {
      color_rays[renamed] = registry[raw];
    }
  }

  RecoveryResult result{EdgeColoring(n, normalized), std::move(state_to_vertex),
                        std::move(color_rays)};
  if (!is_admissible(result.coloring)) {
    throw RecoveryError(
        "the recovered edge coloring is not admissible; the input is not a "
        "valid unentangled orthonormal basis");
  }
  return result;
}

}  // namespace uob
