#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "xoscc/family.hpp"
#include "xoscc/model.hpp"

namespace xoscc {

/// Intersecting families for levels 1..r; ladder[l - 1] serves level l.
using FamilyLadder = std::vector<IntersectingFamily>;

struct Sample {
  Instance instance;
  GroundTruth truth;
};

/// Builds families for levels 1..r from derive_params(level, k, eps, p).
/// Throws FamilyInfeasible when some level cannot be built.
FamilyLadder make_families(int r, int k, double eps, std::optional<int> p, std::uint64_t seed,
                           int max_retries = 256);

/// Throws DimensionMismatch unless ladder[l-1] has the (q, t, l) of
/// derive_params(l, k, eps) for every l in 1..r. p may differ from the default.
void check_ladder(int r, int k, double eps, const FamilyLadder& ladder);

/// Samples the simultaneous hard distribution: k^2 players, 2k^3 items.
/// `force_theta` fixes θ instead of drawing it.
Sample sample_d1(int k, double eps, const IntersectingFamily& family, std::uint64_t seed,
                 std::optional<int> force_theta = std::nullopt);

/// Samples the recursive r-round hard distribution (r >= 2). `force_theta`
/// fixes θ* of the innermost simultaneous instance.
Sample sample_dr(int r, int k, double eps, const FamilyLadder& families, std::uint64_t seed,
                 std::optional<int> force_theta = std::nullopt);

/// sample_d1 for r == 1, sample_dr otherwise.
Sample sample_instance(int r, int k, double eps, const FamilyLadder& families, std::uint64_t seed,
                       std::optional<int> force_theta = std::nullopt);

/// One player's input in a fresh level-`level` instance, over items
/// [m_level]. This is the marginal of that player's view under the full
/// sampler and costs O(p^level) instead of a whole instance. Level 0 is the
/// base coin: the single clause [0, k) with probability 1/2, else nothing.
XOSValuation sample_single_view(int level, int k, const FamilyLadder& families, int local_player,
                                std::uint64_t seed);

/// Maps per-sub-instance views into a level-`level` player's input. The
/// a-th item of sub-instance j is slot S_j[a], which lands on the shared
/// block if outside S_{j*} and on group g's private block otherwise.
/// Provenance paths gain j as their new outermost entry.
XOSValuation assemble_player(int level, int k, const IntersectingFamily& family,
                             std::span<const Item> sigma, int j_star, int group,
                             std::span<const XOSValuation> subviews);

/// Player's view of sub-instance j, expressed back over [m_{level-1}].
XOSValuation extract_subview(const XOSValuation& view, const GroundTruth& truth, int player, int j,
                             const IntersectingFamily& family);

/// A level-`level` input for `local_player` whose provenance pattern is
/// `canonical` (p^level presence bits, base-p paths outermost first). Item
/// labels of the top level come from `sigma` and `j_star`, or from
/// `label_seed` when `sigma` is empty; nested levels always use `label_seed`.
XOSValuation view_from_canonical(int level, int k, const FamilyLadder& families, std::span<const Item> sigma,
                                 int j_star, int local_player, const std::vector<bool>& canonical,
                                 std::uint64_t label_seed);

struct ViewConditioning {
  std::vector<Item> sigma;
  int j_star = 0;
  XOSValuation special_view;  // the player's input in the special instance
};

/// Resamples only the fooling sub-instances of `player` given (σ, j*) and
/// her special view, using private randomness `seed`.
XOSValuation sample_player_view(int r, int k, double eps, const FamilyLadder& families,
                                std::uint64_t seed, int player, const ViewConditioning& conditioned);

}  // namespace xoscc
