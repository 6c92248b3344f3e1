#include <doctest.h>

#include <cmath>

#include "xoscc/errors.hpp"
#include "xoscc/family.hpp"

using namespace xoscc;

namespace {

Params params(int p, int q, int t, int l) {
  Params out;
  out.p = p;
  out.q = q;
  out.t = t;
  out.l = l;
  return out;
}

}  // namespace

TEST_CASE("hand-built family is accepted") {
  IntersectingFamily f{4, 6, 2, 1, {{0, 1}, {2, 3}, {4, 5}, {0, 2}}};
  const auto rep = verify_family(f);
  CHECK(rep.ok);
  CHECK(rep.worst_intersection == 1);
}

TEST_CASE("duplicate sets are rejected") {
  IntersectingFamily f{2, 4, 2, 1, {{0, 1}, {0, 1}}};
  const auto rep = verify_family(f);
  CHECK_FALSE(rep.ok);
  CHECK(rep.worst_intersection == 2);
  REQUIRE(rep.worst_pair);
  CHECK(rep.worst_pair->first == 0);
  CHECK(rep.worst_pair->second == 1);
}

TEST_CASE("generated families verify") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto f = generate_family(params(8, 20, 4, 2), seed);
    CHECK(f.sets.size() == 8);
    CHECK(verify_family(f).ok);
  }
  CHECK(verify_family(generate_family(params(1, 5, 3, 0), 1)).ok);
  CHECK(verify_family(generate_family(params(6, 6, 3, 3), 2)).ok);
}

TEST_CASE("generation is deterministic") {
  const auto a = generate_family(params(8, 20, 4, 2), 42);
  const auto b = generate_family(params(8, 20, 4, 2), 42);
  CHECK(a.sets == b.sets);
}

TEST_CASE("infeasible parameters throw") {
  CHECK(provably_infeasible(2, 4, 4, 1));
  CHECK_THROWS_AS(generate_family(params(2, 4, 4, 1), 0), FamilyInfeasible);
  CHECK(provably_infeasible(3, 32, 16, 5));
  CHECK_THROWS_AS(generate_family(params(3, 32, 16, 5), 0), FamilyInfeasible);
  CHECK_FALSE(provably_infeasible(2, 32, 16, 5));
}

TEST_CASE("empirical Chernoff check") {
  CHECK(empirical_chernoff_check(6, 2, 2, 1000, 1) == 0.0);
  const double rate = empirical_chernoff_check(6, 2, 0, 20000, 7);
  CHECK(std::abs(rate - 0.6) < 0.02);
}
