#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "uob/census.hpp"
#include "uob/constructors.hpp"
#include "uob/states.hpp"

using namespace uob;

namespace {

bool bit_equal(const QubitRay& x, const QubitRay& y) {
  return x.amp0() == y.amp0() && x.amp1() == y.amp1();
}

Uob shuffled(const Uob& uob, const std::vector<std::size_t>& order) {
  Uob out;
  out.n = uob.n;
  for (std::size_t i : order) out.states.push_back(uob.states[i]);
  return out;
}

}  // namespace

TEST_CASE("rays are stored in canonical form") {
  QubitRay scaled(2, 0);
  CHECK(scaled.amp0() == Complex(1, 0));
  CHECK(scaled.amp1() == Complex(0, 0));

  // a global phase on the input does not survive
  QubitRay phased(Complex(0, 2), 0);
  CHECK(phased.amp0() == Complex(1, 0));

  // when the first component vanishes the second anchors the phase
  QubitRay anchored(0, Complex(0, -3));
  CHECK(anchored.amp0() == Complex(0, 0));
  CHECK(anchored.amp1() == Complex(1, 0));

  QubitRay tiny(1e-15, 1);
  CHECK(tiny.amp0() == Complex(0, 0));

  QubitRay mixed(Complex(1, 1), Complex(0, 1));
  CHECK(std::norm(mixed.amp0()) + std::norm(mixed.amp1()) ==
        Catch::Approx(1.0).margin(1e-14));
  CHECK(mixed.amp0().imag() == Catch::Approx(0.0).margin(1e-15));
  CHECK(mixed.amp0().real() > 0);

  CHECK_THROWS_AS(QubitRay(0, 0), std::invalid_argument);
}

TEST_CASE("the hat of a ray is its exact orthogonal complement") {
  CHECK(bit_equal(QubitRay::zero().hat(), QubitRay::one()));
  CHECK(bit_equal(QubitRay::one().hat(), QubitRay::zero()));

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    QubitRay r = random_ray(rng);
    CHECK(overlap(r, r.hat()) < 1e-15);
    CHECK(same_ray(r.hat().hat(), r, 1e-14));
    CHECK(fs_distance(r, r.hat()) == Catch::Approx(1.0).margin(1e-12));
    CHECK(fs_distance(r, r) < 1e-15);
  }
}

TEST_CASE("overlap and distance behave on known rays") {
  QubitRay plus(1, 1);
  CHECK(overlap(plus, QubitRay::zero()) == Catch::Approx(std::sqrt(0.5)));
  CHECK(fs_distance(plus, QubitRay::zero()) == Catch::Approx(std::sqrt(0.5)));
  CHECK(fs_distance(plus, plus) < 1e-15);
  CHECK(same_ray(plus, QubitRay(2, 2)));
  CHECK_FALSE(same_ray(plus, QubitRay::zero()));
}

TEST_CASE("random rays are reproducible and roughly uniform") {
  std::mt19937_64 a(99), b(99), c(100);
  QubitRay ra = random_ray(a);
  CHECK(bit_equal(ra, random_ray(b)));
  CHECK_FALSE(same_ray(ra, random_ray(c), 1e-3));

  // Haar average of the squared overlap between independent rays is 1/2
  std::mt19937_64 rng(5);
  double total = 0;
  const int pairs = 400;
  for (int i = 0; i < pairs; ++i) {
    double o = overlap(random_ray(rng), random_ray(rng));
    total += o * o;
  }
  CHECK(total / pairs == Catch::Approx(0.5).margin(0.05));
}

TEST_CASE("synthesis places the assigned ray or its hat at every factor") {
  auto c = fixture("fig1");
  auto sampled = sample_assignment(c, 7);
  auto uob = synthesize(c, sampled.assignment);
  REQUIRE(uob.states.size() == 8);
  for (const auto& state : uob.states) CHECK(state.factors.size() == 3);

  // vertex 2 sits at the low end of its direction-2 and direction-0 edges
  // and the high end of its direction-1 edge
  const auto& f = uob.states[2].factors;
  CHECK(bit_equal(f[0], sampled.assignment.rays.at(0)));
  CHECK(bit_equal(f[1], sampled.assignment.rays.at(1).hat()));
  CHECK(bit_equal(f[2], sampled.assignment.rays.at(6)));

  ColorAssignment missing;
  missing.rays.emplace(0, QubitRay::zero());
  CHECK_THROWS_AS(synthesize(c, missing), std::invalid_argument);
}

TEST_CASE("a single color yields the computational basis pattern") {
  ColorAssignment zeros;
  zeros.rays.emplace(0, QubitRay::zero());
  auto uob = synthesize(EdgeColoring::single_color(2), zeros);
  // vertex bits read off the hats: highest bit first
  CHECK(bit_equal(uob.states[0].factors[0], QubitRay::zero()));
  CHECK(bit_equal(uob.states[0].factors[1], QubitRay::zero()));
  CHECK(bit_equal(uob.states[1].factors[0], QubitRay::zero()));
  CHECK(bit_equal(uob.states[1].factors[1], QubitRay::one()));
  CHECK(bit_equal(uob.states[2].factors[0], QubitRay::one()));
  CHECK(bit_equal(uob.states[2].factors[1], QubitRay::zero()));
  CHECK(bit_equal(uob.states[3].factors[0], QubitRay::one()));
  CHECK(bit_equal(uob.states[3].factors[1], QubitRay::one()));
}

TEST_CASE("synthesized bases pass verification with a tiny Gram residue") {
  for (const char* name : {"fig1", "fig2", "bdf4"}) {
    auto c = fixture(name);
    auto uob = synthesize(c, sample_assignment(c, 123).assignment);
    auto report = verify_uob(uob);
    INFO(name);
    CHECK(report.pass);
    // every off-diagonal pair differs through a hatted factor, so only
    // rounding noise survives, orders of magnitude under the tolerance
    CHECK(report.max_overlap < 1e-14);
  }
}

TEST_CASE("verification flags a broken basis and names the worst pair") {
  auto c = fixture("fig2");
  auto uob = synthesize(c, sample_assignment(c, 9).assignment);
  uob.states[5] = uob.states[3];
  auto report = verify_uob(uob);
  CHECK_FALSE(report.pass);
  CHECK(report.max_overlap == Catch::Approx(1.0));
  CHECK(report.worst_pair == std::array<std::size_t, 2>{3, 5});

  Uob short_list{2, {uob.states[0], uob.states[1]}};
  CHECK_THROWS_AS(verify_uob(short_list), std::invalid_argument);

  Uob ragged = synthesize(c, sample_assignment(c, 9).assignment);
  ragged.states[4].factors.pop_back();
  CHECK_THROWS_AS(verify_uob(ragged), std::invalid_argument);
}

TEST_CASE("sampled assignments keep every ray and hat separated") {
  auto c = fixture("fig2");
  auto sampled = sample_assignment(c, 2026, 0.1);
  REQUIRE(sampled.assignment.rays.size() == 6);
  CHECK(sampled.rejections <= 1000);

  std::vector<QubitRay> all;
  for (const auto& [color, ray] : sampled.assignment.rays) {
    all.push_back(ray);
    all.push_back(ray.hat());
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      CHECK(fs_distance(all[i], all[j]) >= 0.1);
    }
  }

  auto again = sample_assignment(c, 2026, 0.1);
  for (const auto& [color, ray] : sampled.assignment.rays) {
    CHECK(bit_equal(ray, again.assignment.rays.at(color)));
  }

  CHECK_THROWS_AS(sample_assignment(c, 1, 1.5), std::invalid_argument);
  // twelve rays pairwise almost-orthogonal do not fit in one qubit
  CHECK_THROWS_AS(sample_assignment(c, 1, 0.99, 50), std::runtime_error);
}

TEST_CASE("recovery round-trips a synthesized basis exactly") {
  std::vector<EdgeColoring> cases = {
      fixture("fig1"), fixture("fig2"), fixture("bdf4"), construct_max(4),
      doubling(fixture("fig2"))};
  std::uint64_t seed = 31;
  for (const auto& c : cases) {
    auto sampled = sample_assignment(c, seed++);
    auto uob = synthesize(c, sampled.assignment);
    auto rec = recover_coloring(uob);
    INFO("colors: " << c.color_count());
    CHECK(rec.coloring == canonical_form(c));

    // vertex order in, identity labels out: that is the anchored rule
    for (std::size_t i = 0; i < uob.states.size(); ++i) {
      CHECK(rec.state_to_vertex[i] == i);
    }

    // recovered ray pairs line up with the assignment, base ray unhatted
    Hypercube cube{c.n()};
    for (const auto& e : edges(cube)) {
      const auto& [t0, t1] = rec.color_rays[rec.coloring.color(e)];
      const QubitRay& r = sampled.assignment.rays.at(c.color(e));
      CHECK(same_ray(t0, r, 1e-12));
      CHECK(same_ray(t1, r.hat(), 1e-12));
    }
  }
}

TEST_CASE("one shared ray pair across positions recovers as one color") {
  std::mt19937_64 rng(4);
  ColorAssignment one;
  one.rays.emplace(0, random_ray(rng));
  auto uob = synthesize(EdgeColoring::single_color(3), one);
  auto rec = recover_coloring(uob);
  CHECK(rec.coloring == EdgeColoring::single_color(3));
  CHECK(rec.color_rays.size() == 1);
}

TEST_CASE("recovery of a permuted basis lands in the same symmetry class") {
  auto c = fixture("fig2");
  auto uob = synthesize(c, sample_assignment(c, 77).assignment);
  std::vector<std::size_t> order = {5, 2, 7, 0, 3, 6, 1, 4};
  auto rec = recover_coloring(shuffled(uob, order));

  std::vector<Vertex> labels = rec.state_to_vertex;
  std::sort(labels.begin(), labels.end());
  for (Vertex v = 0; v < 8; ++v) CHECK(labels[v] == v);

  CHECK(is_admissible(rec.coloring));
  CHECK(canonical_form(rec.coloring, true) == canonical_form(c, true));
}

TEST_CASE("the lexicographic rule ignores input order") {
  auto c = fixture("fig1");
  auto uob = synthesize(c, sample_assignment(c, 15).assignment);
  auto ordered = recover_coloring(uob, T0Rule::lexicographic);
  CHECK(canonical_form(ordered.coloring, true) == canonical_form(c, true));

  std::vector<std::size_t> order = {3, 6, 0, 5, 1, 7, 4, 2};
  auto permuted = recover_coloring(shuffled(uob, order), T0Rule::lexicographic);
  CHECK(permuted.coloring == ordered.coloring);
  for (std::size_t i = 0; i < order.size(); ++i) {
    CHECK(permuted.state_to_vertex[i] == ordered.state_to_vertex[order[i]]);
  }
}

TEST_CASE("recovery errors name the failure") {
  // two colors in the same direction with nearly equal rays: clustering
  // cannot tell them apart and must say so rather than guess
  EdgeColoring c(2, {0, 1, 2, 2});
  REQUIRE(is_admissible(c));
  ColorAssignment squeezed;
  squeezed.rays.emplace(0, QubitRay(1, 0));
  squeezed.rays.emplace(1, QubitRay(1, 5e-8));
  squeezed.rays.emplace(2, QubitRay(1, 1));
  auto uob = synthesize(c, squeezed);
  CHECK_THROWS_WITH(recover_coloring(uob),
                    Catch::Matchers::ContainsSubstring("ambiguity band"));

  // a duplicated state collides on its vertex label
  auto good = synthesize(fixture("fig2"),
                         sample_assignment(fixture("fig2"), 8).assignment);
  auto broken = good;
  broken.states[3] = broken.states[5];
  CHECK_THROWS_WITH(recover_coloring(broken),
                    Catch::Matchers::ContainsSubstring("same vertex label"));

  // a factor with no orthogonal mate anywhere cannot be paired
  Uob lonely{1, {ProductState{{QubitRay::zero()}},
                 ProductState{{QubitRay(1, 1)}}}};
  CHECK_THROWS_WITH(recover_coloring(lonely),
                    Catch::Matchers::ContainsSubstring("orthogonal partner"));
}

TEST_CASE("distinct colorings synthesize distinct bases") {
  auto c1 = fixture("fig1");
  auto c2 = construct_max(3);
  auto assignment = sample_assignment(c1, 3).assignment;
  ColorAssignment shared;
  for (const auto& [color, ray] : assignment.rays) shared.rays.emplace(color, ray);
  auto u1 = synthesize(c1, shared);
  auto u2 = synthesize(c2, shared);
  bool differ = false;
  for (std::size_t v = 0; v < u1.states.size(); ++v) {
    for (int p = 0; p < 3; ++p) {
      differ = differ ||
               !bit_equal(u1.states[v].factors[p], u2.states[v].factors[p]);
    }
  }
  CHECK(differ);
}
