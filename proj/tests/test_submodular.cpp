#include <random>

#include "doctest.h"
#include "lkm/errors.hpp"
#include "lkm/submodular.hpp"
#include "support.hpp"

using namespace lkm;

TEST_CASE("set evaluation") {
  const auto perm = SubmodularFunction::permutahedron(3);
  const std::vector<int> empty, two{0, 2}, all{0, 1, 2};
  CHECK(perm.evaluate(empty) == 0.0);
  CHECK(perm.evaluate(two) == 5.0);
  CHECK(perm.evaluate(all) == 6.0);
  CHECK(perm.kind() == "permutahedron");

  const auto trunc = SubmodularFunction::cardinality_truncation(4, 2);
  const std::vector<int> three{0, 1, 3};
  CHECK(trunc.evaluate(three) == 2.0);

  const auto maxel = SubmodularFunction::maximal_element({1.0, 4.0, 2.5});
  const std::vector<int> a{0, 2}, b{1};
  CHECK(maxel.evaluate(empty) == 0.0);
  CHECK(maxel.evaluate(a) == doctest::Approx(1.5));
  CHECK(maxel.evaluate(b) == doctest::Approx(3.0));

  const auto table = SubmodularFunction::explicit_table(2, {0.0, 1.0, 1.0, 1.5});
  CHECK(table.evaluate_mask(3) == 1.5);
  const std::vector<int> bad{2};
  CHECK_THROWS_AS(table.evaluate(bad), InvalidInput);
  CHECK_THROWS_AS(SubmodularFunction::explicit_table(2, {1.0, 1.0, 1.0, 1.5}), InvalidInput);
  CHECK_THROWS_AS(SubmodularFunction::explicit_table(2, {0.0, 1.0}), InvalidInput);
}

TEST_CASE("greedy vertex on the permutahedron") {
  const auto f = SubmodularFunction::permutahedron(3);
  Vector x(3);
  x << 0.5, 0.2, 0.9;
  const GreedyResult r = greedy_vertex(f, x);
  CHECK(r.permutation == std::vector<int>{2, 0, 1});
  CHECK(r.vertex == (Vector(3) << 2, 1, 3).finished());
  CHECK(r.value == doctest::Approx(3.9).epsilon(1e-15));
  CHECK(lovasz_value(f, x) == doctest::Approx(3.9).epsilon(1e-15));

  const GreedyResult z = greedy_vertex(f, Vector::Zero(3));
  CHECK(z.value == 0.0);
  CHECK(z.permutation == std::vector<int>{0, 1, 2});
  CHECK(greedy_vertex(f, Vector::Zero(3), TieRule::DescendingIndex).permutation == std::vector<int>{2, 1, 0});

  Vector ind(3);
  ind << 1, 0, 1;
  CHECK(lovasz_value(f, ind) == 5.0);

  Vector nan = Vector::Zero(3);
  nan[1] = std::nan("");
  CHECK_THROWS_AS(greedy_vertex(f, nan), InvalidInput);
  CHECK_THROWS_AS(greedy_vertex(f, Vector::Zero(2)), InvalidInput);
}

TEST_CASE("vertex enumeration") {
  const auto p2 = enumerate_vertices(SubmodularFunction::permutahedron(2));
  REQUIRE(p2.size() == 2);
  CHECK(((p2[0] == (Vector(2) << 2, 1).finished() && p2[1] == (Vector(2) << 1, 2).finished()) ||
         (p2[1] == (Vector(2) << 2, 1).finished() && p2[0] == (Vector(2) << 1, 2).finished())));
  CHECK(enumerate_vertices(SubmodularFunction::permutahedron(3)).size() == 6);
  const auto modular = enumerate_vertices(SubmodularFunction::cardinality_truncation(2, 2));
  REQUIRE(modular.size() == 1);
  CHECK(modular[0] == Vector::Ones(2));
  CHECK_THROWS_AS(enumerate_vertices(SubmodularFunction::permutahedron(9)), ResourceLimit);
}

TEST_CASE("base polytope membership") {
  const auto f = SubmodularFunction::permutahedron(2);
  CHECK(check_membership(f, (Vector(2) << 1.5, 1.5).finished(), 1e-9));
  CHECK_FALSE(check_membership(f, (Vector(2) << 3, 0).finished(), 1e-9));
  CHECK_FALSE(check_membership(f, (Vector(2) << 1, 1).finished(), 1e-9));  // w(V) != F(V)
}

TEST_CASE("submodularity check") {
  CHECK(check_submodular(SubmodularFunction::permutahedron(4)));
  CHECK(check_submodular(SubmodularFunction::cardinality_truncation(3, 1)));
  CHECK_FALSE(check_submodular(SubmodularFunction::explicit_table(2, {0.0, 0.0, 0.0, 1.0})));
  CHECK(check_submodular(SubmodularFunction::maximal_element({0.3, -1.0, 2.0, 0.7})));
  CHECK_THROWS_AS(check_submodular(SubmodularFunction::permutahedron(11)), ResourceLimit);
}

TEST_CASE("greedy properties against brute force") {
  std::mt19937_64 rng(42);
  for (int n = 1; n <= 6; ++n) {
    std::vector<double> h(static_cast<std::size_t>(n));
    for (double& v : h) v = std::uniform_real_distribution<double>(-2, 2)(rng);
    const std::vector<SubmodularFunction> fams = {SubmodularFunction::permutahedron(n),
                                                  SubmodularFunction::cardinality_truncation(n, (n + 1) / 2),
                                                  SubmodularFunction::maximal_element(h)};
    for (const auto& f : fams) {
      for (int k = 0; k < 30; ++k) {
        Vector x = testing::random_vector(rng, n, -3, 3);
        if (k % 3 == 0) x = x.array().round();
        const double ref = testing::brute_support(f, x);
        for (TieRule tie : {TieRule::AscendingIndex, TieRule::DescendingIndex}) {
          const GreedyResult r = greedy_vertex(f, x, tie);
          CHECK(r.value == doctest::Approx(ref).epsilon(1e-12));
          CHECK(check_membership(f, r.vertex, 1e-9));
        }
        // Positive homogeneity.
        CHECK(lovasz_value(f, 2.5 * x) == doctest::Approx(2.5 * lovasz_value(f, x)).epsilon(1e-12));
      }
      // Agreement with F on indicator vectors.
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        Vector ind(n);
        for (int i = 0; i < n; ++i) ind[i] = (mask >> i) & 1U;
        CHECK(lovasz_value(f, ind) == doctest::Approx(f.evaluate_mask(mask)).epsilon(1e-12));
      }
    }
  }
}
