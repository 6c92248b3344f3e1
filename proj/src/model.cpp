#include "xoscc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "xoscc/errors.hpp"

namespace xoscc {

ItemSet normalize(ItemSet items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return items;
}

bool is_normalized(std::span<const Item> items) {
  return std::adjacent_find(items.begin(), items.end(),
                            [](Item a, Item b) { return a >= b; }) == items.end();
}

std::size_t intersection_size(std::span<const Item> a, std::span<const Item> b) {
  std::size_t count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++count;
      ++ia;
      ++ib;
    }
  }
  return count;
}

std::int64_t ipow(std::int64_t base, int exponent) {
  if (exponent < 0) throw InvalidArgument("ipow: negative exponent");
  constexpr std::int64_t kLimit = std::int64_t{1} << 40;
  std::int64_t out = 1;
  for (int i = 0; i < exponent; ++i) {
    out *= base;
    if (out > kLimit) throw InvalidArgument("level parameters overflow desk-scale limits");
  }
  return out;
}

std::int64_t players_at(int level, int k) { return ipow(k, 2 * level); }

std::int64_t items_at(int level, int k) { return (level + 1) * ipow(k, 2 * level + 1); }

std::int64_t set_size_at(int level, int k) { return level * ipow(k, 2 * level - 1); }

std::int64_t shared_block_at(int level, int k) { return ipow(k, 2 * level); }

std::int64_t slots_at(int level, int k) { return shared_block_at(level, k) + set_size_at(level, k); }

int default_p(int k, double eps, int p_cap) {
  const double raw = std::floor(std::exp(std::pow(static_cast<double>(k), eps)));
  const double capped = std::min(raw, static_cast<double>(p_cap));
  return std::max(2, static_cast<int>(capped));
}

Params derive_params(int r, int k, double eps, std::optional<int> p, int p_cap) {
  if (r < 1) throw InvalidArgument("derive_params: r must be >= 1, got " + std::to_string(r));
  if (k < 2) throw InvalidArgument("derive_params: k must be >= 2, got " + std::to_string(k));
  if (!(eps > 0.0 && eps < 1.0)) {
    throw InvalidArgument("derive_params: eps must lie in (0,1), got " + std::to_string(eps));
  }
  if (p && *p < 1) throw InvalidArgument("derive_params: p must be >= 1");

  Params out;
  out.r = r;
  out.k = k;
  out.eps = eps;
  out.p = p ? *p : default_p(k, eps, p_cap);
  out.q = static_cast<int>(slots_at(r, k));
  out.t = static_cast<int>(set_size_at(r, k));
  // The tolerance keeps floor() from dropping an exact power by one ulp.
  const double l = std::floor(std::pow(static_cast<double>(k), 2.0 * r - 2.0 + eps) + 1e-9);
  out.l = std::max(1, static_cast<int>(l));
  return out;
}

std::int64_t XOSValuation::value(std::span<const Item> bundle) const {
  std::size_t best = 0;
  for (const auto& clause : clauses) {
    best = std::max(best, intersection_size(bundle, clause));
  }
  return static_cast<std::int64_t>(best);
}

std::size_t XOSValuation::max_clause_size() const {
  std::size_t best = 0;
  for (const auto& clause : clauses) best = std::max(best, clause.size());
  return best;
}

void Instance::validate() const {
  if (n < 0 || m < 0) throw InvalidArgument("instance: negative dimensions");
  if (static_cast<int>(valuations.size()) != n) {
    throw InvalidArgument("instance: expected " + std::to_string(n) + " valuations, got " +
                          std::to_string(valuations.size()));
  }
  if (level >= 1) {
    if (players_at(level, k) != n || items_at(level, k) != m) {
      throw InvalidArgument("instance: level-" + std::to_string(level) +
                            " shape requires n = k^{2r} and m = (r+1) k^{2r+1}");
    }
  }
  for (int i = 0; i < n; ++i) {
    const auto& v = valuations[static_cast<std::size_t>(i)];
    if (!v.provenance.empty() && v.provenance.size() != v.clauses.size()) {
      throw InvalidArgument("instance: provenance/clause count mismatch for player " +
                            std::to_string(i));
    }
    for (const auto& clause : v.clauses) {
      if (!is_normalized(clause)) {
        throw InvalidArgument("instance: clause of player " + std::to_string(i) +
                              " is not sorted/duplicate-free");
      }
      if (!clause.empty() && clause.back() >= static_cast<Item>(m)) {
        throw InvalidArgument("instance: clause item out of range for player " + std::to_string(i));
      }
    }
  }
}

int GroundTruth::group_of(int player) const {
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (std::find(groups[g].begin(), groups[g].end(), player) != groups[g].end()) {
      return static_cast<int>(g);
    }
  }
  throw InvalidArgument("ground truth: player " + std::to_string(player) + " is in no group");
}

std::vector<Item> labeling_function(const GroundTruth& gt, int player) {
  const auto n = players_at(gt.level, gt.k);
  if (player < 0 || player >= n) {
    throw InvalidArgument("labeling_function: player index out of range");
  }
  const int g = gt.group_of(player);
  const auto shared = static_cast<std::size_t>(shared_block_at(gt.level, gt.k));
  const auto offset = shared + static_cast<std::size_t>(g) * static_cast<std::size_t>(gt.t);

  std::vector<Item> phi(static_cast<std::size_t>(gt.q));
  std::size_t shared_pos = 0;
  std::size_t special_pos = 0;
  for (Item slot = 0; slot < static_cast<Item>(gt.q); ++slot) {
    if (std::binary_search(gt.special_slots.begin(), gt.special_slots.end(), slot)) {
      phi[slot] = gt.sigma.at(offset + special_pos++);
    } else {
      phi[slot] = gt.sigma.at(shared_pos++);
    }
  }
  return phi;
}

Allocation Allocation::make(std::vector<ItemSet> bundles, int m) {
  std::vector<std::uint8_t> owned(static_cast<std::size_t>(std::max(m, 0)), 0);
  for (auto& bundle : bundles) {
    bundle = normalize(std::move(bundle));
    for (Item item : bundle) {
      if (item >= static_cast<Item>(m)) throw InvalidArgument("allocation: item out of range");
      if (owned[item]) {
        throw InvalidArgument("allocation: item " + std::to_string(item) +
                              " assigned to more than one bundle");
      }
      owned[item] = 1;
    }
  }
  return Allocation(std::move(bundles));
}

}  // namespace xoscc
