#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "xoscc/model.hpp"

namespace xoscc {

/// p subsets of [q], each of size t, with pairwise intersections at most l.
struct IntersectingFamily {
  int p = 0;
  int q = 0;
  int t = 0;
  int l = 0;
  std::vector<ItemSet> sets;
};

struct FamilyReport {
  bool ok = true;
  std::optional<std::pair<int, int>> worst_pair;  // lexicographically first maximizer
  int worst_intersection = 0;
};

/// Draws p uniform t-subsets of [q]; any set that intersects an earlier one
/// in more than l slots is redrawn, up to `max_retries` times per set, after
/// which the whole draw restarts. When random search fails, the stride-block
/// layout is tried. The result always passes verify_family.
///
/// Throws FamilyInfeasible when p t - C(p,2) l > q (no such family exists) or
/// when every construction attempt fails.
IntersectingFamily generate_family(const Params& params, std::uint64_t seed, int max_retries = 256);

FamilyReport verify_family(const IntersectingFamily& family);

/// True when inclusion-exclusion already rules the parameters out.
bool provably_infeasible(int p, int q, int t, int l);

/// Fraction of `trials` independent pairs of uniform t-subsets of [q] whose
/// intersection exceeds l.
double empirical_chernoff_check(int q, int t, int l, long trials, std::uint64_t seed);

}  // namespace xoscc
