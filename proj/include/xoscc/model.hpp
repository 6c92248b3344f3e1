#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace xoscc {

using Item = std::uint32_t;

/// Sorted, duplicate-free set of item (or slot) indices.
using ItemSet = std::vector<Item>;

/// Sorts and removes duplicates.
ItemSet normalize(ItemSet items);
std::size_t intersection_size(std::span<const Item> a, std::span<const Item> b);
bool is_normalized(std::span<const Item> items);

// ---------------------------------------------------------------------------
// Level arithmetic. Level r >= 1 has n_r = k^{2r} players, m_r = (r+1) k^{2r+1}
// items, and uses an intersecting family over q_r = k^{2r} + t_r slots with
// sets of size t_r = r k^{2r-1}. Note t_r = m_{r-1}.

std::int64_t ipow(std::int64_t base, int exponent);
std::int64_t players_at(int level, int k);
std::int64_t items_at(int level, int k);
std::int64_t set_size_at(int level, int k);
std::int64_t shared_block_at(int level, int k);
std::int64_t slots_at(int level, int k);

/// Intersecting-family parameters for one level.
struct Params {
  int r = 1;
  int k = 2;
  double eps = 0.5;
  int p = 2;
  int q = 0;
  int t = 0;
  int l = 0;
  std::uint64_t seed = 0;
};

inline constexpr int kDefaultPCap = 64;

/// Default p = max(2, floor(exp(k^eps))), capped at `p_cap`.
int default_p(int k, double eps, int p_cap = kDefaultPCap);

/// Level-r family parameters: q = k^{2r} + r k^{2r-1}, t = r k^{2r-1},
/// l = max(1, floor(k^{2r-2+eps})). `p` overrides the default.
Params derive_params(int r, int k, double eps, std::optional<int> p = std::nullopt,
                     int p_cap = kDefaultPCap);

/// Where a clause came from: the sub-instance index at each recursion depth,
/// outermost first. A level-1 clause has path {j}; level-r clauses have r entries.
struct Provenance {
  std::vector<int> path;

  int depth() const noexcept { return static_cast<int>(path.size()); }
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// XOS valuation whose clauses are 0/1 indicator vectors over item sets:
/// v(S) = max_T |S ∩ T|. An empty clause list means v ≡ 0.
struct XOSValuation {
  std::vector<ItemSet> clauses;
  std::vector<Provenance> provenance;  // empty, or one entry per clause

  std::int64_t value(std::span<const Item> bundle) const;
  std::size_t max_clause_size() const;
};

struct Instance {
  int level = 0;  // 0: free-form instance with no level-shape invariant
  int k = 0;
  int n = 0;
  int m = 0;
  std::vector<XOSValuation> valuations;

  /// Checks clause normalization, item bounds and (for level >= 1) the
  /// n = k^{2r}, m = (r+1) k^{2r+1} shape. Throws InvalidArgument.
  void validate() const;
};

/// Hidden sampling state of a hard instance.
struct GroundTruth {
  int level = 1;
  int k = 2;
  int q = 0;
  int t = 0;
  int theta_star = 0;
  int j_star = 0;
  ItemSet special_slots;             // S_{j*} as a subset of [q]
  std::vector<Item> sigma;           // permutation of [m]
  std::vector<std::vector<int>> groups;
  std::vector<ItemSet> special_items;  // per group: image of S_{j*}
  std::vector<std::vector<std::uint8_t>> x_vectors;  // level 1 only
  std::shared_ptr<const GroundTruth> special_trace;  // level >= 2 only

  int group_of(int player) const;
};

/// Labeling function of `player`: slot s in [q] maps to item result[s].
/// Slots outside S_{j*} go to the shared block σ(0..k^{2r}-1); the a-th slot
/// of S_{j*} goes to σ(k^{2r} + g t + a) for the player's group g.
std::vector<Item> labeling_function(const GroundTruth& gt, int player);

class Allocation {
 public:
  Allocation() = default;

  /// Throws InvalidArgument unless the bundles are pairwise disjoint
  /// subsets of [m].
  static Allocation make(std::vector<ItemSet> bundles, int m);

  const std::vector<ItemSet>& bundles() const noexcept { return bundles_; }

 private:
  explicit Allocation(std::vector<ItemSet> bundles) : bundles_(std::move(bundles)) {}
  std::vector<ItemSet> bundles_;
};

}  // namespace xoscc
