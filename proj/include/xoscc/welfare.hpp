#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xoscc/model.hpp"

namespace xoscc {

struct WelfareResult {
  std::int64_t value = 0;
  Allocation witness;
  std::vector<int> witness_clauses;  // per player: chosen clause index, -1 for none
  std::string oracle;
  std::uint64_t nodes_expanded = 0;
};

inline constexpr std::uint64_t kDefaultBruteforceBudget = std::uint64_t{1} << 24;
inline constexpr std::uint64_t kDefaultNodeCap = 500'000'000;

/// max over clauses of |S ∩ T|; 0 for an empty clause list.
std::int64_t evaluate(const XOSValuation& v, std::span<const Item> bundle);

/// Σ_i v_i(A_i).
std::int64_t allocation_welfare(const Instance& inst, const Allocation& allocation);

/// Exact optimum by enumerating every assignment of each used item to one
/// of the n players or to nobody. Throws BudgetExceeded when
/// (n+1)^{used items} exceeds `budget`.
WelfareResult sw_bruteforce(const Instance& inst, std::uint64_t budget = kDefaultBruteforceBudget);

/// Exact optimum as max over per-player clause choices T_i ∈ F_i ∪ {∅} of
/// |∪ T_i|, by depth-first branch and bound. Each covered item goes to the
/// lowest-indexed player whose chosen clause contains it. Throws
/// BudgetExceeded after `node_cap` search nodes.
WelfareResult sw_clause_union(const Instance& inst, std::uint64_t node_cap = kDefaultNodeCap);

struct ApproxCheck {
  double ratio = 1.0;  // truth / estimate; +inf when estimate = 0 < truth
  bool valid = false;  // truth / alpha <= estimate <= truth
};

ApproxCheck approx_ratio(double estimate, std::int64_t truth, double alpha);

}  // namespace xoscc
