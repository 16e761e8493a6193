#pragma once

// Exhaustive enumeration of admissible colorings up to renaming (and
// optionally up to cube symmetry), the derived extremal statistics, and the
// minimum-colors-over-maximal-colorings computation.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <thread>

#include <json.hpp>

#include "uob/constructors.hpp"

namespace uob {

struct CensusOptions {
  bool maximal_count_only = false;  // keep only colorings with 2^n - 1 colors
  bool symmetry_stats = true;       // also count classes up to cube symmetry
  bool classify_maximal = true;     // run the refinement search per coloring
  int workers = 1;
  double time_budget_seconds = 0;   // 0 = unlimited
  std::uint64_t node_budget = 0;    // 0 = unlimited
  std::string checkpoint_path;      // written when a budget interrupts the run
};

struct CensusReport {
  int n = 2;
  bool maximal_count_only = false;
  std::uint64_t total_two_face_admissible = 0;
  std::uint64_t total_admissible = 0;
  std::uint64_t total_up_to_symmetry = 0;
  std::uint64_t orbit_size_sum = 0;  // sanity: must equal total_admissible
  int max_colors_seen = 0;
  std::map<int, std::uint64_t> by_color_count;
  std::map<int, std::uint64_t> maximal_by_color_count;
  std::map<int, std::uint64_t> symmetry_classes_by_color_count;
  std::map<int, std::uint64_t> maximal_symmetry_classes_by_color_count;
  int c_n = 0;  // minimum colors among maximal colorings; 0 when not derived
  std::uint64_t search_nodes = 0;
  double wall_seconds = 0;  // informational; excluded from canonical output
};

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

// Per-edge list of 2-faces that become fully colored once that edge is
// assigned, with the two parallel pairs by edge index.
struct FaceCheck {
  std::array<std::size_t, 2> pair1;
  std::array<std::size_t, 2> pair2;
};

inline std::vector<std::vector<FaceCheck>> face_checks_by_last_edge(int n) {
  Hypercube cube{n};
  std::vector<std::vector<FaceCheck>> out(cube.edge_count());
  for (const auto& f : two_faces(cube)) {
    auto p1 = f.pair_along_d1();
    auto p2 = f.pair_along_d2();
    FaceCheck check{{edge_index(n, p1[0]), edge_index(n, p1[1])},
                    {edge_index(n, p2[0]), edge_index(n, p2[1])}};
    std::size_t last =
        std::max(std::max(check.pair1[0], check.pair1[1]),
                 std::max(check.pair2[0], check.pair2[1]));
    out[last].push_back(check);
  }
  return out;
}

struct CensusSample {
  std::vector<int> word;
  bool maximal = false;
};

struct CensusTally {
  std::uint64_t two_face = 0;
  std::uint64_t admissible = 0;
  std::uint64_t nodes = 0;
  std::map<int, std::uint64_t> by_count;
  std::map<int, std::uint64_t> maximal_by_count;
  std::vector<CensusSample> samples;
};

struct SearchCancelled {};

// Depth-first search over restricted-growth color words with face pruning.
// Calls leaf() for every 2-face-admissible complete word. A poll callback,
// when given, is consulted every few thousand nodes with the running node
// count; returning true abandons the search via SearchCancelled.
inline void census_dfs(std::vector<int>& word, std::size_t at, int used_colors,
                       int color_cap,
                       const std::vector<std::vector<FaceCheck>>& checks,
                       std::uint64_t& nodes,
                       const std::function<void(const std::vector<int>&, int)>& leaf,
                       const std::function<bool(std::uint64_t)>& poll = {}) {
  std::size_t m = word.size();
  if (at == m) {
    leaf(word, used_colors);
    return;
  }
  // even opening a fresh color at every remaining edge cannot reach the cap
  if (color_cap > 0 && used_colors + static_cast<int>(m - at) < color_cap) {
    return;
  }
  int limit = used_colors;
  if (color_cap > 0 && used_colors == color_cap) limit = color_cap - 1;
  for (int c = 0; c <= limit; ++c) {
    word[at] = c;
    ++nodes;
    if (poll && (nodes & 0x1FFF) == 0 && poll(nodes)) throw SearchCancelled{};
    bool ok = true;
    for (const auto& f : checks[at]) {
      if (word[f.pair1[0]] != word[f.pair1[1]] &&
          word[f.pair2[0]] != word[f.pair2[1]]) {
        ok = false;
        break;
      }
    }
    if (ok) {
      census_dfs(word, at + 1, used_colors + (c == used_colors ? 1 : 0),
                 color_cap, checks, nodes, leaf, poll);
    }
  }
  word[at] = 0;
}

// All 2-face-valid restricted-growth prefixes of the given depth, in
// lexicographic order; the parallel census shards the tree by these.
inline std::vector<std::pair<std::vector<int>, int>> census_prefixes(
    std::size_t total_edges, std::size_t depth,
    const std::vector<std::vector<FaceCheck>>& checks) {
  (void)total_edges;
  std::vector<std::pair<std::vector<int>, int>> out;
  std::vector<int> word(depth, 0);
  auto rec = [&](auto&& self, std::size_t at, int used) -> void {
    if (at == depth) {
      out.emplace_back(word, used);
      return;
    }
    for (int c = 0; c <= used; ++c) {
      word[at] = c;
      bool ok = true;
      for (const auto& f : checks[at]) {
        if (f.pair1[0] >= depth || f.pair1[1] >= depth || f.pair2[0] >= depth ||
            f.pair2[1] >= depth) {
          continue;  // face reaches past the prefix
        }
        if (word[f.pair1[0]] != word[f.pair1[1]] &&
            word[f.pair2[0]] != word[f.pair2[1]]) {
          ok = false;
          break;
        }
      }
      if (ok) self(self, at + 1, used + (c == used ? 1 : 0));
    }
    word[at] = 0;
  };
  rec(rec, 0, 0);
  return out;
}

inline std::vector<int> symmetry_canonical_word(
    int n, const std::vector<int>& word,
    const std::vector<CubeAutomorphism>& group) {
  std::vector<int> best;
  std::vector<int> image(word.size());
  for (const auto& g : group) {
    for (std::size_t i = 0; i < word.size(); ++i) {
      image[edge_index(n, g.apply(edge_at(n, i)))] = word[i];
    }
    auto normalized = normalize_word(image);
    if (best.empty() || normalized < best) best = std::move(normalized);
  }
  return best;
}

}  // namespace detail

// Stream every admissible coloring of Q_n exactly once up to renaming, in
// lexicographic restricted-growth order. With up_to_symmetry, only orbit
// representatives (the lex-least member) are yielded. Return false from the
// sink to stop early. n = 4 is only reachable with the maximal-count filter.
inline void enumerate_admissible(
    int n, bool up_to_symmetry,
    const std::function<bool(const EdgeColoring&)>& yield,
    bool maximal_count_only = false) {
  require_dimension(n, 1, 4);
  if (n == 4 && !maximal_count_only) {
    throw std::invalid_argument(
        "full enumeration at n = 4 is out of scale; set the maximal-count "
        "filter");
  }
  if (n == 1) {
    yield(EdgeColoring::single_color(1));
    return;
  }
  auto checks = detail::face_checks_by_last_edge(n);
  std::vector<CubeAutomorphism> group;
  if (up_to_symmetry) group = automorphism_group(n);
  const int cap = maximal_count_only ? (1 << n) - 1 : 0;
  std::vector<int> word(static_cast<std::size_t>(n) << (n - 1), 0);
  std::uint64_t nodes = 0;
  struct Stop {};
  auto leaf = [&](const std::vector<int>& w, int used) {
    if (cap > 0 && used != cap) return;
    EdgeColoring c(n, w);
    if (!is_admissible(c)) return;
    if (up_to_symmetry && detail::symmetry_canonical_word(n, w, group) != w) {
      return;
    }
    if (!yield(c)) throw Stop{};
  };
  try {
    detail::census_dfs(word, 0, 0, cap, checks, nodes, leaf);
  } catch (const Stop&) {
  }
}

inline std::vector<EdgeColoring> collect_admissible(
    int n, bool up_to_symmetry = false, bool maximal_count_only = false) {
  std::vector<EdgeColoring> out;
  enumerate_admissible(
      n, up_to_symmetry,
      [&](const EdgeColoring& c) {
        out.push_back(c);
        return true;
      },
      maximal_count_only);
  return out;
}

// Full census with both predicate counts, color-count histograms, maximality
// classification, and optional symmetry statistics. Parallelized by fixed
// depth prefix sharding; results are merged in prefix order so the worker
// count never changes the output.
inline CensusReport run_census(int n, const CensusOptions& options = {}) {
  require_dimension(n, 1, 4);
  if (n == 4 && !options.maximal_count_only) {
    throw std::invalid_argument(
        "full enumeration at n = 4 is out of scale; use the "
        "maximal-count-only mode");
  }
  auto start = std::chrono::steady_clock::now();

  CensusReport report;
  report.n = n;
  report.maximal_count_only = options.maximal_count_only;

  if (n == 1) {
    report.total_two_face_admissible = 1;
    report.total_admissible = 1;
    report.total_up_to_symmetry = 1;
    report.orbit_size_sum = 1;
    report.max_colors_seen = 1;
    report.by_color_count[1] = 1;
    report.maximal_by_color_count[1] = 1;
    report.symmetry_classes_by_color_count[1] = 1;
    report.maximal_symmetry_classes_by_color_count[1] = 1;
    report.c_n = 1;
    return report;
  }

  const int bound = (1 << n) - 1;
  const int color_cap = options.maximal_count_only ? bound : 0;
  const auto checks = detail::face_checks_by_last_edge(n);
  const std::size_t m = static_cast<std::size_t>(n) << (n - 1);
  const std::size_t prefix_depth = std::min<std::size_t>(m, 6);
  const auto prefixes = detail::census_prefixes(m, prefix_depth, checks);

  const bool need_samples = options.symmetry_stats;
  std::vector<detail::CensusTally> tallies(prefixes.size());
  std::vector<char> done(prefixes.size(), 0);

  // resume from an earlier interrupted run if a matching checkpoint exists
  if (!options.checkpoint_path.empty()) {
    std::ifstream in(options.checkpoint_path);
    if (in) {
      nlohmann::json doc = nlohmann::json::parse(in);
      if (doc.value("version", 0) != 1 || doc.value("n", -1) != n ||
          doc.value("maximal_count_only", false) !=
              options.maximal_count_only ||
          doc.value("prefix_depth", std::size_t{0}) != prefix_depth) {
        throw std::runtime_error("checkpoint does not match this census run");
      }
      for (const auto& entry : doc.at("completed")) {
        std::size_t idx = entry.at("prefix").get<std::size_t>();
        auto& tally = tallies.at(idx);
        tally.two_face = entry.at("two_face").get<std::uint64_t>();
        tally.admissible = entry.at("admissible").get<std::uint64_t>();
        tally.nodes = entry.at("nodes").get<std::uint64_t>();
        for (const auto& [k, v] : entry.at("by_count").items()) {
          tally.by_count[std::stoi(k)] = v.get<std::uint64_t>();
        }
        for (const auto& [k, v] : entry.at("maximal_by_count").items()) {
          tally.maximal_by_count[std::stoi(k)] = v.get<std::uint64_t>();
        }
        for (const auto& sample : entry.at("samples")) {
          tally.samples.push_back(
              detail::CensusSample{sample.at("word").get<std::vector<int>>(),
                                   sample.at("maximal").get<bool>()});
        }
        done[idx] = 1;
      }
    }
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> interrupted{false};
  std::atomic<std::uint64_t> nodes_done{0};

  auto over_budget = [&]() {
    if (options.time_budget_seconds > 0) {
      std::chrono::duration<double> elapsed =
          std::chrono::steady_clock::now() - start;
      if (elapsed.count() > options.time_budget_seconds) return true;
    }
    if (options.node_budget > 0 && nodes_done.load() > options.node_budget) {
      return true;
    }
    return false;
  };

  auto work = [&]() {
    while (true) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= prefixes.size()) return;
      if (done[idx]) continue;
      if (over_budget()) {
        interrupted.store(true);
        return;
      }
      auto& tally = tallies[idx];
      std::vector<int> word(m, 0);
      const auto& [prefix, used] = prefixes[idx];
      std::copy(prefix.begin(), prefix.end(), word.begin());
      auto leaf = [&](const std::vector<int>& w, int used_colors) {
        if (color_cap > 0 && used_colors != color_cap) return;
        ++tally.two_face;
        EdgeColoring c(n, w);
        if (!is_admissible(c)) return;
        ++tally.admissible;
        tally.by_count[used_colors]++;
        bool maximal = false;
        if (options.classify_maximal) {
          maximal = used_colors == bound || !find_refinement(c).has_value();
          if (maximal) tally.maximal_by_count[used_colors]++;
        }
        if (need_samples) tally.samples.push_back({w, maximal});
      };
      // shards are all-or-nothing: a cancelled shard is dropped so the
      // checkpoint only ever records fully finished work
      auto poll = [&](std::uint64_t local) {
        if (options.node_budget > 0 &&
            nodes_done.load() + local > options.node_budget) {
          return true;
        }
        if (options.time_budget_seconds > 0) {
          std::chrono::duration<double> elapsed =
              std::chrono::steady_clock::now() - start;
          if (elapsed.count() > options.time_budget_seconds) return true;
        }
        return false;
      };
      try {
        detail::census_dfs(word, prefix_depth, used, color_cap, checks,
                           tally.nodes, leaf, poll);
      } catch (const detail::SearchCancelled&) {
        tally = detail::CensusTally{};
        interrupted.store(true);
        return;
      }
      nodes_done.fetch_add(tally.nodes);
      done[idx] = 1;
    }
  };

  int workers = std::max(1, options.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  if (interrupted.load()) {
    if (!options.checkpoint_path.empty()) {
      nlohmann::json doc;
      doc["version"] = 1;
      doc["n"] = n;
      doc["maximal_count_only"] = options.maximal_count_only;
      doc["prefix_depth"] = prefix_depth;
      auto completed = nlohmann::json::array();
      for (std::size_t i = 0; i < prefixes.size(); ++i) {
        if (!done[i]) continue;
        nlohmann::json entry;
        entry["prefix"] = i;
        entry["two_face"] = tallies[i].two_face;
        entry["admissible"] = tallies[i].admissible;
        entry["nodes"] = tallies[i].nodes;
        auto by = nlohmann::json::object();
        for (auto [k, v] : tallies[i].by_count) by[std::to_string(k)] = v;
        entry["by_count"] = std::move(by);
        auto mby = nlohmann::json::object();
        for (auto [k, v] : tallies[i].maximal_by_count) {
          mby[std::to_string(k)] = v;
        }
        entry["maximal_by_count"] = std::move(mby);
        auto samples = nlohmann::json::array();
        for (const auto& s : tallies[i].samples) {
          samples.push_back({{"word", s.word}, {"maximal", s.maximal}});
        }
        entry["samples"] = std::move(samples);
        completed.push_back(std::move(entry));
      }
      doc["completed"] = std::move(completed);
      std::ofstream out(options.checkpoint_path + ".tmp");
      out << doc.dump(1) << "\n";
      out.close();
      std::rename((options.checkpoint_path + ".tmp").c_str(),
                  options.checkpoint_path.c_str());
    }
    throw BudgetExceeded("census budget exceeded; progress " +
                         (options.checkpoint_path.empty()
                              ? std::string("discarded (no checkpoint path)")
                              : "checkpointed to " + options.checkpoint_path));
  }

  // a finished run owes nothing to its checkpoint
  if (!options.checkpoint_path.empty()) {
    std::remove(options.checkpoint_path.c_str());
  }

  for (const auto& tally : tallies) {
    report.total_two_face_admissible += tally.two_face;
    report.total_admissible += tally.admissible;
    report.search_nodes += tally.nodes;
    for (auto [k, v] : tally.by_count) report.by_color_count[k] += v;
    for (auto [k, v] : tally.maximal_by_count) {
      report.maximal_by_color_count[k] += v;
    }
  }
  for (const auto& [k, v] : report.by_color_count) {
    report.max_colors_seen = std::max(report.max_colors_seen, k);
  }
  if (report.max_colors_seen > bound) {
    throw std::logic_error("census found a coloring exceeding the color bound");
  }
  if (options.classify_maximal && !report.maximal_by_color_count.empty()) {
    report.c_n = report.maximal_by_color_count.begin()->first;
  }

  if (options.symmetry_stats) {
    auto group = automorphism_group(n);
    struct OrbitInfo {
      std::uint64_t members = 0;
      int colors = 0;
      bool maximal = false;
    };
    std::map<std::vector<int>, OrbitInfo> orbits;
    for (const auto& tally : tallies) {
      for (const auto& sample : tally.samples) {
        auto canon = detail::symmetry_canonical_word(n, sample.word, group);
        auto& info = orbits[canon];
        info.members++;
        info.colors = static_cast<int>(
            std::set<int>(sample.word.begin(), sample.word.end()).size());
        info.maximal = info.maximal || sample.maximal;
      }
    }
    report.total_up_to_symmetry = orbits.size();
    for (const auto& [canon, info] : orbits) {
      report.orbit_size_sum += info.members;
      report.symmetry_classes_by_color_count[info.colors]++;
      if (info.maximal) {
        report.maximal_symmetry_classes_by_color_count[info.colors]++;
      }
    }
  }

  std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - start;
  report.wall_seconds = elapsed.count();
  return report;
}

struct MinColorsResult {
  int n = 2;
  bool exact = false;
  int value = 0;               // set when exact
  int lower = 0, upper = 0;    // set when bounds
  int constructive_upper = 0;  // color count of the witness below
  std::string witness_description;
  std::optional<EdgeColoring> witness;
};

// Minimum colors over maximal colorings: exact by census for n <= 3, the
// printed interval with the best constructive witness for n >= 4.
inline MinColorsResult min_colors(int n) {
  require_dimension(n, 2);
  MinColorsResult result;
  result.n = n;
  if (n <= 3) {
    CensusOptions options;
    options.symmetry_stats = false;
    auto report = run_census(n, options);
    result.exact = true;
    result.value = report.c_n;
    return result;
  }
  result.exact = false;
  result.lower = 2 * n;
  result.upper = 13 * (1 << (n - 4)) - 1;
  EdgeColoring witness = generalized_bdf(4);
  std::string description = "generalized_bdf(4)";
  for (int k = 5; k <= n; ++k) {
    witness = cone(witness, witness);
    description = "cone(w, w) of " + description;
  }
  result.constructive_upper = witness.color_count();
  result.witness_description = description;
  result.witness = std::move(witness);
  return result;
}

struct TheoremCheckEntry {
  std::string name;
  bool pass = false;
  std::uint64_t checked = 0;
  std::string counterexample;  // empty when pass
};

struct TheoremChecks {
  int n = 2;
  std::vector<TheoremCheckEntry> entries;
  bool all_pass = false;
};

namespace detail {

inline std::string word_string(const EdgeColoring& c) {
  std::string s = "[";
  for (std::size_t i = 0; i < c.edge_count(); ++i) {
    if (i) s += ",";
    s += std::to_string(c.color_at(i));
  }
  return s + "]";
}

}  // namespace detail

// Battery over the full census: the color bound, and for every coloring at
// the bound a uniform direction, a spanning tree with every color exactly
// once, full subcube restriction counts, and the recursive recognizer.
inline TheoremChecks verify_extremal_theorems(int n) {
  require_dimension(n, 2, 3);
  TheoremChecks checks;
  checks.n = n;
  const int bound = (1 << n) - 1;

  TheoremCheckEntry color_bound{"color_bound", true, 0, ""};
  TheoremCheckEntry uniform{"uniform_direction_at_bound", true, 0, ""};
  TheoremCheckEntry tree{"spanning_tree_at_bound", true, 0, ""};
  TheoremCheckEntry subcube{"subcube_restriction_at_bound", true, 0, ""};
  TheoremCheckEntry recognizer{"recognizer_matches_color_count", true, 0, ""};

  enumerate_admissible(n, false, [&](const EdgeColoring& c) {
    ++color_bound.checked;
    if (c.color_count() > bound) {
      color_bound.pass = false;
      color_bound.counterexample = detail::word_string(c);
    }
    ++recognizer.checked;
    if (is_max_family(c) != (c.color_count() == bound)) {
      recognizer.pass = false;
      recognizer.counterexample = detail::word_string(c);
    }
    if (c.color_count() != bound) return true;

    ++uniform.checked;
    if (!uniform_direction(c).has_value()) {
      uniform.pass = false;
      uniform.counterexample = detail::word_string(c);
    }

    ++tree.checked;
    auto forest = extract_forest(c);
    std::set<int> colors;
    detail::UnionFind uf(vertex_count(n));
    bool acyclic = true;
    for (const auto& e : forest.edges) {
      colors.insert(c.color(e));
      acyclic =
          uf.unite(static_cast<int>(e.base), static_cast<int>(e.other())) &&
          acyclic;
    }
    bool spanning = forest.edges.size() == vertex_count(n) - 1;
    if (!acyclic || !spanning ||
        colors.size() != static_cast<std::size_t>(bound)) {
      tree.pass = false;
      tree.counterexample = detail::word_string(c);
    }

    // every proper subcube: fix any nonempty proper subset of directions
    ++subcube.checked;
    for (Vertex mask = 1; mask + 1 < vertex_count(n); ++mask) {
      int fixed_count = std::popcount(mask);
      for (Vertex bits = 0; bits < (Vertex{1} << fixed_count); ++bits) {
        SubcubeSpec spec;
        spec.n = n;
        spec.fixed.resize(n);
        int at = 0;
        for (int i = 0; i < n; ++i) {
          if (bit(mask, i)) spec.fixed[i] = bit(bits, at++);
        }
        int free = n - fixed_count;
        auto restricted = restrict_to_subcube(c, spec);
        if (restricted.color_count() != (1 << free) - 1) {
          subcube.pass = false;
          subcube.counterexample = detail::word_string(c);
        }
      }
    }
    return true;
  });

  checks.entries = {color_bound, uniform, tree, subcube, recognizer};
  checks.all_pass = true;
  for (const auto& entry : checks.entries) {
    checks.all_pass = checks.all_pass && entry.pass;
  }
  return checks;
}

}  // namespace uob
