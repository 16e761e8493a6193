#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "uob/census.hpp"

using namespace uob;

namespace {

// Reference counts established by a direct sweep over all set partitions of
// the edge set, filtered with the public predicates. Small enough to recheck
// here for n = 2; recorded for n = 3.
struct KnownCensus {
  std::uint64_t two_face, admissible, symmetry;
  std::map<int, std::uint64_t> by_count, sym_by_count;
  std::map<int, std::uint64_t> maximal_by_count, maximal_sym_by_count;
  int c_n;
};

KnownCensus known_q2() {
  return {8, 8, 4, {{1, 1}, {2, 5}, {3, 2}}, {{1, 1}, {2, 2}, {3, 1}},
          {{3, 2}}, {{3, 1}}, 3};
}

KnownCensus known_q3() {
  return {8510,
          8336,
          349,
          {{1, 1}, {2, 371}, {3, 2594}, {4, 3559}, {5, 1554}, {6, 245}, {7, 12}},
          {{1, 1}, {2, 21}, {3, 105}, {4, 137}, {5, 68}, {6, 15}, {7, 2}},
          {{6, 8}, {7, 12}},
          {{6, 1}, {7, 2}},
          6};
}

void check_report(const CensusReport& report, const KnownCensus& known) {
  CHECK(report.total_two_face_admissible == known.two_face);
  CHECK(report.total_admissible == known.admissible);
  CHECK(report.total_up_to_symmetry == known.symmetry);
  CHECK(report.orbit_size_sum == report.total_admissible);
  CHECK(report.by_color_count == known.by_count);
  CHECK(report.symmetry_classes_by_color_count == known.sym_by_count);
  CHECK(report.maximal_by_color_count == known.maximal_by_count);
  CHECK(report.maximal_symmetry_classes_by_color_count ==
        known.maximal_sym_by_count);
  CHECK(report.c_n == known.c_n);
  CHECK(report.max_colors_seen == (1 << report.n) - 1);
}

struct TempPath {
  std::string path;
  explicit TempPath(const std::string& name) : path("/tmp/uob_" + name) {
    std::remove(path.c_str());
  }
  ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("trivial census of the segment") {
  auto report = run_census(1);
  CHECK(report.total_admissible == 1);
  CHECK(report.total_two_face_admissible == 1);
  CHECK(report.by_color_count == std::map<int, std::uint64_t>{{1, 1}});
  CHECK(report.c_n == 1);
}

TEST_CASE("census of the square matches the partition sweep") {
  auto report = run_census(2);
  check_report(report, known_q2());

  // independent recount: every admissible square coloring via the stream
  std::uint64_t count = 0;
  enumerate_admissible(2, false, [&](const EdgeColoring& c) {
    REQUIRE(is_admissible(c));
    ++count;
    return true;
  });
  CHECK(count == report.total_admissible);
}

TEST_CASE("census of the cube") {
  auto report = run_census(3);
  check_report(report, known_q3());
  CHECK(report.search_nodes > 0);
  CHECK(report.wall_seconds > 0);
}

TEST_CASE("worker count does not change the report") {
  CensusOptions serial;
  serial.workers = 1;
  CensusOptions parallel;
  parallel.workers = 4;
  auto a = run_census(3, serial);
  auto b = run_census(3, parallel);
  CHECK(a.total_two_face_admissible == b.total_two_face_admissible);
  CHECK(a.total_admissible == b.total_admissible);
  CHECK(a.total_up_to_symmetry == b.total_up_to_symmetry);
  CHECK(a.by_color_count == b.by_color_count);
  CHECK(a.maximal_by_color_count == b.maximal_by_color_count);
  CHECK(a.symmetry_classes_by_color_count == b.symmetry_classes_by_color_count);
  CHECK(a.maximal_symmetry_classes_by_color_count ==
        b.maximal_symmetry_classes_by_color_count);
  CHECK(a.search_nodes == b.search_nodes);
  CHECK(a.c_n == b.c_n);
}

TEST_CASE("enumeration is deduplicated, ordered, and stoppable") {
  std::vector<std::vector<int>> words;
  enumerate_admissible(2, false, [&](const EdgeColoring& c) {
    std::vector<int> w(c.word().begin(), c.word().end());
    words.push_back(w);
    return true;
  });
  REQUIRE(words.size() == 8);
  CHECK(std::is_sorted(words.begin(), words.end()));
  CHECK(std::adjacent_find(words.begin(), words.end()) == words.end());
  CHECK(words.front() == std::vector<int>{0, 0, 0, 0});

  auto reps = collect_admissible(2, true);
  REQUIRE(reps.size() == 4);
  for (const auto& rep : reps) {
    // a representative is the least renamed word over its whole orbit
    CHECK(canonical_form(rep, true) == rep);
  }

  std::size_t seen = 0;
  enumerate_admissible(3, false, [&](const EdgeColoring&) {
    ++seen;
    return seen < 3;
  });
  CHECK(seen == 3);
}

TEST_CASE("maximal-count-only mode keeps just the top color counts") {
  CensusOptions options;
  options.maximal_count_only = true;
  auto report = run_census(3, options);
  CHECK(report.total_admissible == 12);
  CHECK(report.by_color_count == std::map<int, std::uint64_t>{{7, 12}});
  CHECK(report.maximal_by_color_count == std::map<int, std::uint64_t>{{7, 12}});
  CHECK(report.total_up_to_symmetry == 2);

  auto words = collect_admissible(3, false, true);
  CHECK(words.size() == 12);
  for (const auto& c : words) CHECK(c.color_count() == 7);
}

TEST_CASE("full enumeration beyond the cube is refused") {
  CHECK_THROWS_AS(run_census(4), std::invalid_argument);
  CHECK_THROWS_AS(run_census(5), std::out_of_range);
  CHECK_THROWS_AS(enumerate_admissible(4, false, [](const EdgeColoring&) {
                    return true;
                  }),
                  std::invalid_argument);
}

TEST_CASE("a node budget interrupts and the checkpoint resumes the run") {
  TempPath checkpoint("census_checkpoint.json");

  CensusOptions interrupted;
  interrupted.node_budget = 1;  // the first completed shard already exceeds it
  interrupted.checkpoint_path = checkpoint.path;
  CHECK_THROWS_AS(run_census(3, interrupted), BudgetExceeded);

  std::ifstream in(checkpoint.path);
  REQUIRE(in.good());
  auto doc = nlohmann::json::parse(in);
  CHECK(doc.at("version") == 1);
  CHECK(doc.at("n") == 3);
  CHECK(doc.at("completed").size() >= 1);
  auto completed_before = doc.at("completed").size();

  CensusOptions resumed;
  resumed.checkpoint_path = checkpoint.path;
  auto report = run_census(3, resumed);
  check_report(report, known_q3());
  CHECK(completed_before >= 1);

  // the finished run cleans its checkpoint up
  std::ifstream gone(checkpoint.path);
  CHECK_FALSE(gone.good());
}

TEST_CASE("a mismatched checkpoint is rejected") {
  TempPath checkpoint("census_checkpoint_mismatch.json");
  CensusOptions interrupted;
  interrupted.node_budget = 1;
  interrupted.checkpoint_path = checkpoint.path;
  CHECK_THROWS_AS(run_census(3, interrupted), BudgetExceeded);

  CensusOptions other;
  other.maximal_count_only = true;
  other.checkpoint_path = checkpoint.path;
  CHECK_THROWS_WITH(run_census(3, other),
                    Catch::Matchers::ContainsSubstring("does not match"));
}

TEST_CASE("a budget without a checkpoint path reports the loss") {
  CensusOptions options;
  options.node_budget = 1;
  CHECK_THROWS_WITH(run_census(3, options),
                    Catch::Matchers::ContainsSubstring("discarded"));
}

TEST_CASE("a tight time budget interrupts the experimental tesseract mode") {
  TempPath checkpoint("census_q4_checkpoint.json");
  CensusOptions options;
  options.maximal_count_only = true;
  options.symmetry_stats = false;
  options.time_budget_seconds = 0.2;
  options.workers = 4;
  options.checkpoint_path = checkpoint.path;
  CHECK_THROWS_AS(run_census(4, options), BudgetExceeded);
  std::ifstream in(checkpoint.path);
  REQUIRE(in.good());
  auto doc = nlohmann::json::parse(in);
  CHECK(doc.at("n") == 4);
  CHECK(doc.at("maximal_count_only") == true);
}

TEST_CASE("fewest colors over unrefinable colorings") {
  auto q2 = min_colors(2);
  CHECK(q2.exact);
  CHECK(q2.value == 3);

  auto q3 = min_colors(3);
  CHECK(q3.exact);
  CHECK(q3.value == 6);

  auto q4 = min_colors(4);
  CHECK_FALSE(q4.exact);
  CHECK(q4.lower == 8);
  CHECK(q4.upper == 12);
  CHECK(q4.constructive_upper == 12);
  CHECK(q4.witness_description == "generalized_bdf(4)");
  REQUIRE(q4.witness.has_value());
  CHECK(q4.witness->color_count() == 12);
  CHECK(is_admissible(*q4.witness));
  CHECK(is_maximal(*q4.witness));

  auto q5 = min_colors(5);
  CHECK(q5.lower == 10);
  CHECK(q5.upper == 25);
  CHECK(q5.constructive_upper == 25);
  CHECK(q5.witness_description == "cone(w, w) of generalized_bdf(4)");
  CHECK(q5.witness->color_count() == 25);
  CHECK(is_admissible(*q5.witness));

  auto q6 = min_colors(6);
  CHECK(q6.lower == 12);
  CHECK(q6.upper == 51);
  CHECK(q6.constructive_upper == 51);
  CHECK(q6.witness->color_count() == 51);

  CHECK_THROWS_AS(min_colors(1), std::out_of_range);
}

TEST_CASE("extremal structure holds across the whole census") {
  for (int n : {2, 3}) {
    auto checks = verify_extremal_theorems(n);
    CHECK(checks.n == n);
    REQUIRE(checks.entries.size() == 5);
    for (const auto& entry : checks.entries) {
      INFO(entry.name << " on n=" << n << ": " << entry.counterexample);
      CHECK(entry.pass);
      CHECK(entry.checked > 0);
      CHECK(entry.counterexample.empty());
    }
    CHECK(checks.all_pass);
    CHECK(checks.entries[0].name == "color_bound");
    CHECK(checks.entries[4].name == "recognizer_matches_color_count");
  }

  auto q3 = verify_extremal_theorems(3);
  CHECK(q3.entries[0].checked == 8336);  // every admissible coloring
  CHECK(q3.entries[1].checked == 12);    // every coloring at the bound
  CHECK_THROWS_AS(verify_extremal_theorems(4), std::out_of_range);
}
