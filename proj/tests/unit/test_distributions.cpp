#include <doctest.h>

#include <algorithm>
#include <set>

#include "xoscc/distributions.hpp"
#include "xoscc/errors.hpp"

using namespace xoscc;

namespace {

bool contains_clause(const XOSValuation& v, const ItemSet& clause) {
  return std::find(v.clauses.begin(), v.clauses.end(), clause) != v.clauses.end();
}

}  // namespace

TEST_CASE("simultaneous distribution shape") {
  const auto fam = make_families(1, 2, 0.5, std::nullopt, 3);
  const auto s = sample_d1(2, 0.5, fam[0], 9);
  CHECK(s.instance.n == 4);
  CHECK(s.instance.m == 16);
  CHECK_NOTHROW(s.instance.validate());
  for (const auto& v : s.instance.valuations) {
    for (const auto& c : v.clauses) CHECK(c.size() == 2);
    CHECK(v.provenance.size() == v.clauses.size());
  }
  CHECK(s.truth.x_vectors.size() == 4);
  CHECK(s.truth.special_items.size() == 4);
  const auto& perm = s.truth.sigma;
  CHECK(std::set<Item>(perm.begin(), perm.end()).size() == 16);
}

TEST_CASE("theta one keeps the special clause") {
  const auto fam = make_families(1, 3, 0.5, 8, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample_d1(3, 0.5, fam[0], seed, 1);
    CHECK(s.truth.theta_star == 1);
    for (int i = 0; i < s.instance.n; ++i) {
      CHECK(contains_clause(s.instance.valuations[i], s.truth.special_items[s.truth.group_of(i)]));
    }
  }
}

TEST_CASE("theta zero drops the special clause") {
  const auto fam = make_families(1, 3, 0.5, 8, 3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample_d1(3, 0.5, fam[0], seed, 0);
    for (int i = 0; i < s.instance.n; ++i) {
      CHECK_FALSE(contains_clause(s.instance.valuations[i], s.truth.special_items[s.truth.group_of(i)]));
    }
  }
}

TEST_CASE("recursive distribution shape") {
  const auto fam = make_families(2, 2, 0.5, 2, 4);
  const auto s = sample_dr(2, 2, 0.5, fam, 17);
  CHECK(s.instance.n == 16);
  CHECK(s.instance.m == 96);
  CHECK_NOTHROW(s.instance.validate());
  REQUIRE(s.truth.groups.size() == 4);
  for (const auto& g : s.truth.groups) CHECK(g.size() == 4);
  REQUIRE(s.truth.special_trace);
  CHECK(s.truth.special_trace->level == 1);
  CHECK(s.truth.t == items_at(1, 2));
}

TEST_CASE("labeling functions") {
  const auto fam = make_families(2, 2, 0.5, 2, 4);
  const auto s = sample_dr(2, 2, 0.5, fam, 23);
  const auto& special = s.truth.special_slots;
  const auto in_special = [&](Item slot) { return std::binary_search(special.begin(), special.end(), slot); };
  const auto a = labeling_function(s.truth, s.truth.groups[0][0]);
  const auto b = labeling_function(s.truth, s.truth.groups[0][1]);
  const auto c = labeling_function(s.truth, s.truth.groups[1][0]);
  CHECK(a == b);
  std::set<Item> special_a;
  std::set<Item> special_c;
  for (Item slot = 0; slot < static_cast<Item>(s.truth.q); ++slot) {
    if (in_special(slot)) {
      special_a.insert(a[slot]);
      special_c.insert(c[slot]);
    } else {
      CHECK(a[slot] == c[slot]);
    }
  }
  for (Item it : special_a) CHECK(special_c.count(it) == 0);
  CHECK(s.truth.group_of(s.truth.groups[2][3]) == 2);
}

TEST_CASE("theta one at level two keeps every special image") {
  const auto fam = make_families(2, 2, 0.5, 2, 4);
  const auto s = sample_dr(2, 2, 0.5, fam, 5, 1);
  CHECK(s.truth.theta_star == 1);
  CHECK(s.truth.special_items.size() == 4);
  for (std::size_t g = 0; g < s.truth.special_items.size(); ++g) {
    for (std::size_t h = g + 1; h < s.truth.special_items.size(); ++h) {
      CHECK(intersection_size(s.truth.special_items[g], s.truth.special_items[h]) == 0);
    }
  }
}

TEST_CASE("sampling is deterministic") {
  const auto fam = make_families(2, 2, 0.5, 2, 4);
  const auto a = sample_dr(2, 2, 0.5, fam, 31);
  const auto b = sample_dr(2, 2, 0.5, fam, 31);
  for (int i = 0; i < a.instance.n; ++i) CHECK(a.instance.valuations[i].clauses == b.instance.valuations[i].clauses);
  CHECK(a.truth.sigma == b.truth.sigma);
}

TEST_CASE("resampling a player's view keeps her special part") {
  const auto fam = make_families(2, 2, 0.5, 2, 4);
  const auto s = sample_dr(2, 2, 0.5, fam, 41);
  const int player = 5;
  const auto& view = s.instance.valuations[player];
  const int js = s.truth.j_star;
  const auto special = extract_subview(view, s.truth, player, js, fam[1]);
  ViewConditioning cond{s.truth.sigma, js, special};
  bool fooling_changed = false;
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const auto fresh = sample_player_view(2, 2, 0.5, fam, seed, player, cond);
    CHECK(extract_subview(fresh, s.truth, player, js, fam[1]).clauses == special.clauses);
    for (int j = 0; j < fam[1].p; ++j) {
      if (j == js) continue;
      if (extract_subview(fresh, s.truth, player, j, fam[1]).clauses !=
          extract_subview(view, s.truth, player, j, fam[1]).clauses) {
        fooling_changed = true;
      }
    }
  }
  CHECK(fooling_changed);
}

TEST_CASE("single views live on the right item range") {
  const auto fam = make_families(2, 2, 0.5, 2, 4);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto v = sample_single_view(2, 2, fam, 3, seed);
    for (const auto& c : v.clauses) {
      for (Item it : c) CHECK(it < 96);
    }
  }
  const auto base = sample_single_view(0, 3, fam, 0, 1);
  CHECK(base.clauses.size() <= 1);
}

TEST_CASE("ladder checks") {
  const auto fam = make_families(2, 2, 0.5, 2, 4);
  CHECK_NOTHROW(check_ladder(2, 2, 0.5, fam));
  CHECK_THROWS_AS(check_ladder(2, 3, 0.5, fam), DimensionMismatch);
  CHECK_THROWS_AS(make_families(2, 2, 0.5, 3, 4), FamilyInfeasible);
  CHECK_THROWS_AS(sample_d1(2, 0.5, fam[0], 1, 2), InvalidArgument);
}
