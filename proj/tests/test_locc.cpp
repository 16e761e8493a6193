#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "uob/census.hpp"
#include "uob/constructors.hpp"
#include "uob/locc.hpp"

using namespace uob;

namespace {

// any full-color family arises by gluing two smaller ones along some axis,
// so random gluing directions give varied shapes for protocol trials
EdgeColoring random_max_family(int n, std::mt19937_64& rng) {
  if (n == 1) return EdgeColoring::single_color(1);
  int d = static_cast<int>(rng() % static_cast<std::uint64_t>(n));
  auto c0 = random_max_family(n - 1, rng);
  auto c1 = random_max_family(n - 1, rng);
  return construct_max_from(c0, c1, d);
}

int depth_of(const ProtocolTree& t, int node) {
  const auto& record = t.nodes.at(node);
  if (record.leaf) return 0;
  return 1 + std::max(depth_of(t, record.children[0]),
                      depth_of(t, record.children[1]));
}

// follow a fixed outcome string from the root and report the leaf vertex
Vertex walk(const ProtocolTree& t, const std::vector<int>& outcomes) {
  int node = t.root;
  std::size_t used = 0;
  while (!t.nodes.at(node).leaf) {
    node = t.nodes.at(node).children[outcomes.at(used++)];
  }
  REQUIRE(used == outcomes.size());
  return t.nodes.at(node).vertex;
}

}  // namespace

TEST_CASE("distinguishability is exactly the full color count") {
  CHECK(is_locc_distinguishable(fixture("fig1")));
  CHECK_FALSE(is_locc_distinguishable(fixture("fig2")));
  CHECK_FALSE(is_locc_distinguishable(fixture("bdf4")));
  CHECK_FALSE(is_locc_distinguishable(EdgeColoring::single_color(3)));
  CHECK_FALSE(is_locc_distinguishable(generalized_bdf(4)));
  for (int n = 1; n <= 6; ++n) CHECK(is_locc_distinguishable(construct_max(n)));

  // gluing two full families adds the one missing color
  auto m2 = construct_max(2);
  CHECK(is_locc_distinguishable(cone(m2, m2)));
  CHECK(is_locc_distinguishable(doubling(fixture("fig1"))));
  CHECK_FALSE(is_locc_distinguishable(doubling(fixture("fig2"))));

  CHECK_THROWS_AS(is_locc_distinguishable(EdgeColoring(2, {0, 1, 2, 3})),
                  std::invalid_argument);
}

TEST_CASE("classifier, recognizer, and color count agree everywhere") {
  // the classifier itself cross-checks the recursive recognizer and throws
  // on any disagreement, so this sweep is the full three-way agreement
  for (int n : {2, 3}) {
    const int bound = (1 << n) - 1;
    enumerate_admissible(n, false, [&](const EdgeColoring& c) {
      CHECK(is_locc_distinguishable(c) == (c.color_count() == bound));
      return true;
    });
  }
  std::mt19937_64 rng(404);
  for (int n = 2; n <= 6; ++n) {
    auto c = random_max_family(n, rng);
    CHECK(is_locc_distinguishable(c) == (c.color_count() == (1 << n) - 1));
  }
}

TEST_CASE("first-measurement choices mirror uniform directions") {
  auto fig1 = fixture("fig1");
  auto sampled = sample_assignment(fig1, 21);
  auto uob = synthesize(fig1, sampled.assignment);
  auto choices = wh_first_choices(uob);
  REQUIRE(choices.size() == 1);
  CHECK(choices[0].first == 0);  // the all-red direction is the highest bit
  CHECK(same_ray(choices[0].second, sampled.assignment.rays.at(0)));

  auto fig2 = fixture("fig2");
  auto uob2 = synthesize(fig2, sample_assignment(fig2, 21).assignment);
  CHECK(wh_first_choices(uob2).empty());

  // the standard basis opens on any qubit
  ColorAssignment zeros;
  zeros.rays.emplace(0, QubitRay::zero());
  auto standard = synthesize(EdgeColoring::single_color(3), zeros);
  auto all = wh_first_choices(standard);
  REQUIRE(all.size() == 3);
  for (int p = 0; p < 3; ++p) {
    CHECK(all[p].first == p);
    CHECK(same_ray(all[p].second, QubitRay::zero()));
  }
}

TEST_CASE("the extracted protocol follows the coloring structure") {
  auto c = fixture("fig1");
  auto assignment = sample_assignment(c, 5).assignment;
  auto tree = extract_protocol(c, assignment);
  validate_protocol(tree);
  CHECK(depth_of(tree, tree.root) == 3);

  const auto& root = tree.nodes.at(tree.root);
  CHECK(root.position == 0);  // red direction, highest bit, first position
  CHECK(same_ray(*root.ray, assignment.rays.at(0)));

  const auto& low = tree.nodes.at(root.children[0]);
  const auto& high = tree.nodes.at(root.children[1]);
  CHECK(low.position == 1);
  CHECK(same_ray(*low.ray, assignment.rays.at(1)));   // blue slice
  CHECK(high.position == 1);
  CHECK(same_ray(*high.ray, assignment.rays.at(2)));  // violet slice

  // outcome bits spell the vertex from the highest direction down
  CHECK(walk(tree, {1, 0, 1}) == 5);
  CHECK(walk(tree, {0, 0, 0}) == 0);
  CHECK(walk(tree, {1, 1, 1}) == 7);
}

TEST_CASE("five qubits give a full depth-five tree") {
  auto c = construct_max(5);
  auto tree = extract_protocol(c, sample_assignment(c, 17).assignment);
  validate_protocol(tree);
  CHECK(depth_of(tree, tree.root) == 5);
  std::size_t leaves = 0;
  for (const auto& node : tree.nodes) leaves += node.leaf;
  CHECK(leaves == 32);
}

TEST_CASE("extraction refuses colorings below the bound") {
  auto fig2 = fixture("fig2");
  CHECK_THROWS_WITH(
      extract_protocol(fig2, sample_assignment(fig2, 1).assignment),
      Catch::Matchers::ContainsSubstring("refused"));

  // even though a standard basis has an obvious protocol, the classifier
  // gate is what the extraction contract promises
  ColorAssignment zeros;
  zeros.rays.emplace(0, QubitRay::zero());
  CHECK_THROWS_AS(extract_protocol(EdgeColoring::single_color(3), zeros),
                  std::invalid_argument);

  auto c = fixture("fig1");
  ColorAssignment partial = sample_assignment(c, 2).assignment;
  partial.rays.erase(4);
  CHECK_THROWS_WITH(extract_protocol(c, partial),
                    Catch::Matchers::ContainsSubstring("missing color"));
}

TEST_CASE("simulation identifies the worked example with certainty") {
  auto c = fixture("fig1");
  auto assignment = sample_assignment(c, 5).assignment;
  auto uob = synthesize(c, assignment);
  auto tree = extract_protocol(c, assignment);

  auto run = simulate(uob, tree, 2);
  CHECK(run.secret == 2);
  CHECK(run.identified == 2);
  CHECK(run.certain);
  REQUIRE(run.steps.size() == 3);
  CHECK(run.steps[0].position == 0);
  CHECK(run.steps[0].outcome == 0);
  CHECK(run.steps[1].position == 1);
  CHECK(run.steps[1].outcome == 1);
  CHECK(run.steps[2].position == 2);
  CHECK(run.steps[2].outcome == 0);
  for (const auto& step : run.steps) {
    CHECK(step.probability == Catch::Approx(1.0).margin(1e-12));
  }

  for (Vertex secret = 0; secret < 8; ++secret) {
    auto r = simulate(uob, tree, secret);
    CHECK(r.identified == secret);
    CHECK(r.certain);
  }
}

TEST_CASE("measuring out of order leaves a genuinely mixed outcome") {
  auto c = fixture("fig1");
  auto assignment = sample_assignment(c, 5).assignment;
  auto uob = synthesize(c, assignment);

  // open on the last position, whose direction carries four colors; the
  // secret's factor there is not in the measured pair, so no outcome is
  // anywhere near certain
  ProtocolTree bad;
  bad.n = 3;
  bad.nodes.push_back(ProtocolNode{true, 0, -1, std::nullopt, {-1, -1}});
  bad.nodes.push_back(ProtocolNode{true, 1, -1, std::nullopt, {-1, -1}});
  bad.nodes.push_back(
      ProtocolNode{false, 0, 2, assignment.rays.at(6), {0, 1}});
  bad.root = 2;

  auto run = simulate(uob, bad, 0);
  REQUIRE(run.steps.size() == 1);
  CHECK(run.steps[0].probability >= 0.5);
  CHECK(run.steps[0].probability <= 0.995);
  CHECK_FALSE(run.certain);
}

TEST_CASE("random full families are identified across dimensions") {
  std::mt19937_64 rng(909);
  int trials = 0;
  for (int n = 2; n <= 5; ++n) {
    for (int t = 0; t < (n <= 3 ? 15 : 10); ++t) {
      auto c = random_max_family(n, rng);
      auto sampled = sample_assignment(c, rng());
      auto uob = synthesize(c, sampled.assignment);
      auto tree = extract_protocol(c, sampled.assignment);
      validate_protocol(tree);
      for (Vertex secret = 0; secret < vertex_count(n); ++secret) {
        auto run = simulate(uob, tree, secret);
        CHECK(run.identified == secret);
        CHECK(run.certain);
      }
      ++trials;
    }
  }
  CHECK(trials == 50);
}

TEST_CASE("malformed trees are rejected") {
  auto c = fixture("fig1");
  auto assignment = sample_assignment(c, 5).assignment;
  auto uob = synthesize(c, assignment);
  auto tree = extract_protocol(c, assignment);

  SECTION("repeated position on one path") {
    ProtocolTree twice;
    twice.n = 3;
    twice.nodes.push_back(ProtocolNode{true, 0, -1, std::nullopt, {-1, -1}});
    twice.nodes.push_back(ProtocolNode{true, 1, -1, std::nullopt, {-1, -1}});
    twice.nodes.push_back(
        ProtocolNode{false, 0, 1, assignment.rays.at(1), {0, 1}});
    twice.nodes.push_back(
        ProtocolNode{false, 0, 1, assignment.rays.at(1), {2, 0}});
    twice.root = 3;
    CHECK_THROWS_WITH(simulate(uob, twice, 0),
                      Catch::Matchers::ContainsSubstring("twice"));
    CHECK_THROWS_AS(validate_protocol(twice), std::invalid_argument);
  }

  SECTION("dimension mismatch") {
    auto c2 = construct_max(2);
    auto uob2 = synthesize(c2, sample_assignment(c2, 3).assignment);
    CHECK_THROWS_AS(simulate(uob2, tree, 0), std::invalid_argument);
  }

  SECTION("secret out of range") {
    CHECK_THROWS_AS(simulate(uob, tree, 8), std::invalid_argument);
  }

  SECTION("leaf cover enforced by the validator") {
    ProtocolTree sparse = tree;
    // graft one subtree over another so a vertex repeats
    sparse.nodes[sparse.root].children[1] =
        sparse.nodes[sparse.root].children[0];
    CHECK_THROWS_WITH(validate_protocol(sparse),
                      Catch::Matchers::ContainsSubstring("repeats"));
  }
}
