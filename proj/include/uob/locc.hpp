#pragma once

// Local distinguishability: the coloring-level classifier, the first-step
// measurement test on concrete bases, and extraction plus simulation of the
// adaptive single-qubit measurement protocol.

#include "uob/states.hpp"

namespace uob {

// A basis family admits a perfect local protocol exactly when its coloring
// carries the full 2^n - 1 colors. The count and the recursive recognizer
// must agree on admissible inputs, so a mismatch is a fatal internal error.
inline bool is_locc_distinguishable(const EdgeColoring& c) {
  require_admissible(c, "is_locc_distinguishable");
  bool at_bound = c.color_count() == (1 << c.n()) - 1;
  if (at_bound != is_max_family(c)) {
    throw std::logic_error(
        "color count and the recursive recognizer disagree on an admissible "
        "coloring");
  }
  return at_bound;
}

// All valid opening moves: positions whose factors across the whole basis
// fall inside a single orthogonal pair {a, hat(a)}, reported with a taken
// from the first state. Empty means no first measurement can be certain.
inline std::vector<std::pair<int, QubitRay>> wh_first_choices(
    const Uob& uob, const Tolerances& tolerances = {}) {
  int n = detail::checked_qubit_count(uob);
  std::vector<std::pair<int, QubitRay>> choices;
  for (int p = 0; p < n; ++p) {
    const QubitRay& a = uob.states[0].factors[p];
    QubitRay hatted = a.hat();
    bool all_in_pair = true;
    for (const auto& state : uob.states) {
      const QubitRay& f = state.factors[p];
      if (fs_distance(f, a) > tolerances.ray_eq &&
          fs_distance(f, hatted) > tolerances.ray_eq) {
        all_in_pair = false;
        break;
      }
    }
    if (all_in_pair) choices.emplace_back(p, a);
  }
  return choices;
}

struct ProtocolNode {
  bool leaf = false;
  Vertex vertex = 0;               // meaningful at leaves
  int position = -1;               // tensor position measured here
  std::optional<QubitRay> ray;     // outcome 0 projects on ray, 1 on its hat
  std::array<int, 2> children{-1, -1};
};

struct ProtocolTree {
  int n = 1;
  std::vector<ProtocolNode> nodes;
  int root = -1;
};

namespace detail {

inline void validate_protocol_walk(const ProtocolTree& t, int node,
                                   std::vector<bool>& measured,
                                   std::vector<bool>& seen_vertex,
                                   std::size_t& leaves) {
  if (node < 0 || node >= static_cast<int>(t.nodes.size())) {
    throw std::invalid_argument("protocol tree child index out of range");
  }
  const ProtocolNode& record = t.nodes[node];
  if (record.leaf) {
    if (record.vertex >= vertex_count(t.n)) {
      throw std::invalid_argument("protocol leaf vertex out of range");
    }
    if (seen_vertex[record.vertex]) {
      throw std::invalid_argument("protocol tree repeats a leaf vertex");
    }
    seen_vertex[record.vertex] = true;
    ++leaves;
    return;
  }
  if (record.position < 0 || record.position >= t.n) {
    throw std::invalid_argument("protocol node position out of range");
  }
  if (measured[record.position]) {
    throw std::invalid_argument(
        "protocol tree measures a position twice on one path");
  }
  if (!record.ray) {
    throw std::invalid_argument("protocol node lacks a measurement ray");
  }
  measured[record.position] = true;
  validate_protocol_walk(t, record.children[0], measured, seen_vertex, leaves);
  validate_protocol_walk(t, record.children[1], measured, seen_vertex, leaves);
  measured[record.position] = false;
}

}  // namespace detail

// Structural invariants: positions measured at most once per path, and
// exactly one leaf per vertex.
inline void validate_protocol(const ProtocolTree& t) {
  require_dimension(t.n);
  std::vector<bool> measured(t.n, false);
  std::vector<bool> seen_vertex(vertex_count(t.n), false);
  std::size_t leaves = 0;
  detail::validate_protocol_walk(t, t.root, measured, seen_vertex, leaves);
  if (leaves != vertex_count(t.n)) {
    throw std::invalid_argument("protocol tree does not cover every vertex");
  }
}

namespace detail {

inline int build_protocol(const EdgeColoring& c,
                          const ColorAssignment& assignment, SubcubeSpec& spec,
                          Vertex fixed_bits, ProtocolTree& tree) {
  std::vector<int> free_dirs = spec.free_directions();
  if (free_dirs.empty()) {
    tree.nodes.push_back(
        ProtocolNode{true, fixed_bits, -1, std::nullopt, {-1, -1}});
    return static_cast<int>(tree.nodes.size()) - 1;
  }
  EdgeColoring restricted = restrict_to_subcube(c, spec);

  // of all directions running through one color, take the largest, which is
  // the smallest tensor position
  int chosen_global = -1;
  int chosen_color = -1;
  Hypercube cube{restricted.n()};
  for (std::size_t local = 0; local < free_dirs.size(); ++local) {
    int color = -1;
    bool uniform = true;
    for (Vertex base = 0; base < cube.vertices(); ++base) {
      if (bit(base, static_cast<int>(local))) continue;
      int here = restricted.color(Edge{base, static_cast<int>(local)});
      if (color == -1) color = here;
      uniform = uniform && here == color;
    }
    if (uniform && free_dirs[local] > chosen_global) {
      chosen_global = free_dirs[local];
      chosen_color = color;
    }
  }
  if (chosen_global < 0) {
    throw std::logic_error(
        "subcube of a maximal family lost its uniform direction");
  }

  const QubitRay& ray = assignment.rays.at(chosen_color);
  int position = c.n() - 1 - chosen_global;
  spec.fixed[chosen_global] = false;
  int low = build_protocol(c, assignment, spec, fixed_bits, tree);
  spec.fixed[chosen_global] = true;
  int high = build_protocol(c, assignment, spec,
                            fixed_bits | (Vertex{1} << chosen_global), tree);
  spec.fixed[chosen_global].reset();
  tree.nodes.push_back(
      ProtocolNode{false, 0, position, ray, {low, high}});
  return static_cast<int>(tree.nodes.size()) - 1;
}

}  // namespace detail

// Build the adaptive decision tree for a full-color family: each node
// measures the position of a direction whose edges all share one color in
// the current subcube, and the two outcomes recurse into the two slices.
inline ProtocolTree extract_protocol(const EdgeColoring& c,
                                     const ColorAssignment& assignment) {
  if (!is_locc_distinguishable(c)) {
    throw std::invalid_argument(
        "no uniform direction to measure first; protocol extraction is "
        "refused for colorings below the full color count");
  }
  for (int color : c.palette()) {
    if (!assignment.rays.count(color)) {
      throw std::invalid_argument("assignment is missing color " +
                                  std::to_string(color));
    }
  }
  ProtocolTree tree;
  tree.n = c.n();
  tree.nodes.reserve(2 * vertex_count(c.n()));
  SubcubeSpec spec;
  spec.n = c.n();
  spec.fixed.resize(c.n());
  tree.root = detail::build_protocol(c, assignment, spec, 0, tree);
  return tree;
}

struct SimulationStep {
  int position;
  int outcome;
  double probability;  // Born probability of the branch actually taken
};

struct SimulationResult {
  Vertex secret = 0;
  std::vector<SimulationStep> steps;
  Vertex identified = 0;
  bool certain = false;
};

// Walk the tree holding the secret state: at each node the measured factor
// picks its likelier outcome, with probability |<outcome ray | factor>|^2.
// The run counts as certain when every branch taken was deterministic up to
// tolerance and the leaf names the secret.
inline SimulationResult simulate(const Uob& uob, const ProtocolTree& tree,
                                 Vertex secret,
                                 const Tolerances& tolerances = {}) {
  int n = detail::checked_qubit_count(uob);
  if (tree.n != n) {
    throw std::invalid_argument("protocol tree dimension does not match");
  }
  if (secret >= vertex_count(n)) {
    throw std::invalid_argument("secret vertex out of range");
  }
  const ProductState& state = uob.states[secret];

  SimulationResult result;
  result.secret = secret;
  std::vector<bool> measured(n, false);
  int node = tree.root;
  while (true) {
    if (node < 0 || node >= static_cast<int>(tree.nodes.size())) {
      throw std::invalid_argument("protocol tree child index out of range");
    }
    const ProtocolNode& record = tree.nodes[node];
    if (record.leaf) {
      result.identified = record.vertex;
      break;
    }
    if (record.position < 0 || record.position >= n) {
      throw std::invalid_argument("protocol node position out of range");
    }
    if (measured[record.position]) {
      throw std::invalid_argument(
          "protocol tree measures a position twice on one path");
    }
    if (!record.ray) {
      throw std::invalid_argument("protocol node lacks a measurement ray");
    }
    measured[record.position] = true;

    const QubitRay& factor = state.factors[record.position];
    double p0 = std::norm(inner(*record.ray, factor));
    double p1 = std::norm(inner(record.ray->hat(), factor));
    if (std::abs(p0 + p1 - 1.0) > tolerances.prob_sum) {
      throw std::logic_error("outcome probabilities do not sum to one");
    }
    int outcome = p1 > p0 ? 1 : 0;
    result.steps.push_back(SimulationStep{
        record.position, outcome, std::min(1.0, outcome ? p1 : p0)});
    node = record.children[outcome];
  }

  result.certain = result.identified == secret;
  for (const auto& step : result.steps) {
    result.certain =
        result.certain && step.probability >= 1.0 - tolerances.certainty;
  }
  return result;
}

}  // namespace uob
