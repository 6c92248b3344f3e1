#include "xoscc/welfare.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

#include "xoscc/errors.hpp"

namespace xoscc {
namespace {

ItemSet used_items(const Instance& inst) {
  ItemSet used;
  for (const auto& v : inst.valuations) {
    for (const auto& clause : v.clauses) used.insert(used.end(), clause.begin(), clause.end());
  }
  return normalize(std::move(used));
}

std::vector<int> best_clauses(const Instance& inst, const Allocation& allocation) {
  std::vector<int> out(inst.valuations.size(), -1);
  for (std::size_t i = 0; i < inst.valuations.size(); ++i) {
    const auto& bundle = allocation.bundles()[i];
    std::size_t best = 0;
    const auto& clauses = inst.valuations[i].clauses;
    for (std::size_t c = 0; c < clauses.size(); ++c) {
      const auto got = intersection_size(bundle, clauses[c]);
      if (got > best) {
        best = got;
        out[i] = static_cast<int>(c);
      }
    }
  }
  return out;
}

// Fixed-width bitset over the compressed used-item universe.
class Mask {
 public:
  explicit Mask(std::size_t words = 0) : bits_(words, 0) {}

  void set(std::size_t i) { bits_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::size_t i) const { return (bits_[i >> 6] >> (i & 63)) & 1U; }
  std::size_t words() const { return bits_.size(); }
  std::uint64_t word(std::size_t w) const { return bits_[w]; }
  std::uint64_t& word(std::size_t w) { return bits_[w]; }

  int count() const {
    int c = 0;
    for (auto w : bits_) c += std::popcount(w);
    return c;
  }
  bool subset_of(const Mask& other) const {
    for (std::size_t w = 0; w < bits_.size(); ++w) {
      if (bits_[w] & ~other.bits_[w]) return false;
    }
    return true;
  }
  friend bool operator==(const Mask&, const Mask&) = default;

 private:
  std::vector<std::uint64_t> bits_;
};

int count_and_not(const Mask& a, const Mask& covered) {
  int c = 0;
  for (std::size_t w = 0; w < a.words(); ++w) c += std::popcount(a.word(w) & ~covered.word(w));
  return c;
}

int count_and_and_not(const Mask& a, const Mask& b, const Mask& covered) {
  int c = 0;
  for (std::size_t w = 0; w < a.words(); ++w) {
    c += std::popcount(a.word(w) & b.word(w) & ~covered.word(w));
  }
  return c;
}

struct Option {
  Mask mask;
  int clause = -1;  // index in the player's original clause list
};

struct SearchPlayer {
  int player = 0;
  std::vector<Option> options;
};

class ClauseUnionSearch {
 public:
  ClauseUnionSearch(std::vector<SearchPlayer> players, std::size_t words, std::uint64_t node_cap)
      : players_(std::move(players)), words_(words), node_cap_(node_cap) {
    const std::size_t n = players_.size();
    suffix_union_.assign(n + 1, Mask(words_));
    multi_.assign(n + 1, Mask(words_));
    exclusive_.assign(n + 1, std::vector<Mask>(n, Mask(words_)));

    std::vector<Mask> player_union(n, Mask(words_));
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& opt : players_[i].options) {
        for (std::size_t w = 0; w < words_; ++w) player_union[i].word(w) |= opt.mask.word(w);
      }
    }
    // Items covered by >= 2 suffix players, and items owned by exactly one.
    for (std::size_t d = n; d-- > 0;) {
      for (std::size_t w = 0; w < words_; ++w) {
        const auto mine = player_union[d].word(w);
        multi_[d].word(w) = multi_[d + 1].word(w) | (suffix_union_[d + 1].word(w) & mine);
        suffix_union_[d].word(w) = suffix_union_[d + 1].word(w) | mine;
      }
      for (std::size_t i = d; i < n; ++i) {
        for (std::size_t w = 0; w < words_; ++w) {
          exclusive_[d][i].word(w) = player_union[i].word(w) & ~multi_[d].word(w);
        }
      }
    }
    for (const auto& sp : players_) {
      std::size_t best = 0;
      for (const auto& opt : sp.options) best = std::max(best, static_cast<std::size_t>(opt.mask.count()));
      trivial_bound_ += static_cast<int>(best);
    }
    trivial_bound_ = std::min(trivial_bound_, suffix_union_[0].count());
    best_choice_.assign(n, -1);
  }

  void run() {
    greedy_seed();
    if (best_ < trivial_bound_) search();
  }

  int best() const { return best_; }
  const std::vector<int>& best_choice() const { return best_choice_; }
  std::uint64_t nodes() const { return nodes_; }
  const std::vector<SearchPlayer>& players() const { return players_; }

 private:
  void greedy_seed() {
    const std::size_t n = players_.size();
    Mask covered(words_);
    std::vector<int> pick(n, -1);
    std::vector<bool> done(n, false);
    int total = 0;
    for (;;) {
      int best_gain = 0;
      std::size_t best_i = n;
      int best_o = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        for (std::size_t o = 0; o < players_[i].options.size(); ++o) {
          const int gain = count_and_not(players_[i].options[o].mask, covered);
          if (gain > best_gain) {
            best_gain = gain;
            best_i = i;
            best_o = static_cast<int>(o);
          }
        }
      }
      if (best_i == n) break;
      done[best_i] = true;
      pick[best_i] = best_o;
      const auto& m = players_[best_i].options[static_cast<std::size_t>(best_o)].mask;
      for (std::size_t w = 0; w < words_; ++w) covered.word(w) |= m.word(w);
      total += best_gain;
    }
    best_ = total;
    best_choice_ = pick;
  }

  int upper_bound(std::size_t d, const Mask& covered) const {
    int per_player = 0;
    int exclusive = count_and_not(multi_[d], covered);
    for (std::size_t i = d; i < players_.size(); ++i) {
      int best_new = 0;
      int best_excl = 0;
      for (const auto& opt : players_[i].options) {
        best_new = std::max(best_new, count_and_not(opt.mask, covered));
        best_excl = std::max(best_excl, count_and_and_not(opt.mask, exclusive_[d][i], covered));
      }
      per_player += best_new;
      exclusive += best_excl;
    }
    const int remaining = count_and_not(suffix_union_[d], covered);
    return std::min({per_player, exclusive, remaining});
  }

  struct MaskHash {
    std::size_t operator()(const Mask& m) const noexcept {
      std::uint64_t h = 0x9E3779B97F4A7C15ULL;
      for (std::size_t w = 0; w < m.words(); ++w) h = (h ^ m.word(w)) * 0x100000001B3ULL + (h >> 29);
      return static_cast<std::size_t>(h);
    }
  };
  struct Entry {
    int value = 0;
    int choice = -1;
  };

  // Best welfare obtainable from players d.. given the items already
  // covered; only covered items some later player can still reach matter.
  int solve(std::size_t d, const Mask& covered) {
    if (d == players_.size()) return 0;
    Mask key(words_);
    for (std::size_t w = 0; w < words_; ++w) key.word(w) = covered.word(w) & suffix_union_[d].word(w);
    auto& memo = memo_[d];
    if (const auto it = memo.find(key); it != memo.end()) return it->second.value;
    if (++nodes_ > node_cap_) {
      throw BudgetExceeded("sw_clause_union: node cap of " + std::to_string(node_cap_) + " exceeded");
    }
    Entry best{solve(d + 1, key), -1};
    const auto& options = players_[d].options;
    Mask next(words_);
    for (std::size_t o = 0; o < options.size(); ++o) {
      const int gain = count_and_not(options[o].mask, key);
      if (gain == 0) continue;
      if (gain + upper_bound(d + 1, key) <= best.value) continue;
      for (std::size_t w = 0; w < words_; ++w) next.word(w) = key.word(w) | options[o].mask.word(w);
      const int value = gain + solve(d + 1, next);
      if (value > best.value) best = Entry{value, static_cast<int>(o)};
    }
    memo.emplace(std::move(key), best);
    return best.value;
  }

  void search() {
    memo_.assign(players_.size(), {});
    Mask covered(words_);
    const int value = solve(0, covered);
    if (value <= best_) return;
    best_ = value;
    for (std::size_t d = 0; d < players_.size(); ++d) {
      Mask key(words_);
      for (std::size_t w = 0; w < words_; ++w) key.word(w) = covered.word(w) & suffix_union_[d].word(w);
      const int pick = memo_[d].at(key).choice;
      best_choice_[d] = pick;
      if (pick >= 0) {
        const auto& m = players_[d].options[static_cast<std::size_t>(pick)].mask;
        for (std::size_t w = 0; w < words_; ++w) covered.word(w) |= m.word(w);
      }
    }
  }

  std::vector<SearchPlayer> players_;
  std::size_t words_;
  std::uint64_t node_cap_;
  std::vector<Mask> suffix_union_;
  std::vector<Mask> multi_;
  std::vector<std::vector<Mask>> exclusive_;
  std::vector<std::unordered_map<Mask, Entry, MaskHash>> memo_;
  std::vector<int> best_choice_;
  int best_ = 0;
  int trivial_bound_ = 0;
  std::uint64_t nodes_ = 0;
};

WelfareResult witness_from_selection(const Instance& inst, const std::vector<int>& selection,
                                     std::string oracle, std::uint64_t nodes) {
  std::vector<ItemSet> bundles(static_cast<std::size_t>(inst.n));
  std::vector<std::uint8_t> taken(static_cast<std::size_t>(inst.m), 0);
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    if (selection[i] < 0) continue;
    for (Item item : inst.valuations[i].clauses[static_cast<std::size_t>(selection[i])]) {
      if (!taken[item]) {
        taken[item] = 1;
        bundles[i].push_back(item);
      }
    }
  }
  WelfareResult out;
  out.witness = Allocation::make(std::move(bundles), inst.m);
  out.value = allocation_welfare(inst, out.witness);
  out.witness_clauses = selection;
  for (std::size_t i = 0; i < out.witness_clauses.size(); ++i) {
    if (out.witness_clauses[i] >= 0 && out.witness.bundles()[i].empty()) out.witness_clauses[i] = -1;
  }
  out.oracle = std::move(oracle);
  out.nodes_expanded = nodes;
  return out;
}

}  // namespace

std::int64_t evaluate(const XOSValuation& v, std::span<const Item> bundle) { return v.value(bundle); }

std::int64_t allocation_welfare(const Instance& inst, const Allocation& allocation) {
  if (allocation.bundles().size() != inst.valuations.size()) {
    throw DimensionMismatch("allocation has a different number of bundles than players");
  }
  std::int64_t total = 0;
  for (std::size_t i = 0; i < inst.valuations.size(); ++i) {
    total += inst.valuations[i].value(allocation.bundles()[i]);
  }
  return total;
}

WelfareResult sw_bruteforce(const Instance& inst, std::uint64_t budget) {
  inst.validate();
  const auto used = used_items(inst);
  const std::uint64_t base = static_cast<std::uint64_t>(inst.n) + 1;
  std::uint64_t states = 1;
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (states > budget / base) {
      throw BudgetExceeded("sw_bruteforce: (n+1)^" + std::to_string(used.size()) +
                           " assignments exceed the enumeration budget of " + std::to_string(budget));
    }
    states *= base;
  }

  // digit[u] = 0 leaves used item u unassigned, d > 0 gives it to player d-1.
  std::vector<std::uint64_t> digit(used.size(), 0);
  std::vector<ItemSet> bundles(static_cast<std::size_t>(inst.n));
  std::int64_t best = -1;
  std::vector<ItemSet> best_bundles;
  for (std::uint64_t s = 0; s < states; ++s) {
    for (auto& b : bundles) b.clear();
    for (std::size_t u = 0; u < used.size(); ++u) {
      if (digit[u] > 0) bundles[digit[u] - 1].push_back(used[u]);
    }
    std::int64_t total = 0;
    for (std::size_t i = 0; i < bundles.size(); ++i) total += inst.valuations[i].value(bundles[i]);
    if (total > best) {
      best = total;
      best_bundles = bundles;
    }
    for (std::size_t u = 0; u < digit.size(); ++u) {
      if (++digit[u] < base) break;
      digit[u] = 0;
    }
  }

  WelfareResult out;
  out.witness = Allocation::make(std::move(best_bundles), inst.m);
  out.value = std::max<std::int64_t>(best, 0);
  out.witness_clauses = best_clauses(inst, out.witness);
  out.oracle = "bruteforce";
  out.nodes_expanded = states;
  return out;
}

WelfareResult sw_clause_union(const Instance& inst, std::uint64_t node_cap) {
  inst.validate();
  const auto used = used_items(inst);
  std::vector<int> index(static_cast<std::size_t>(inst.m), -1);
  for (std::size_t u = 0; u < used.size(); ++u) index[used[u]] = static_cast<int>(u);
  const std::size_t words = std::max<std::size_t>(1, (used.size() + 63) / 64);

  std::vector<SearchPlayer> players;
  for (int i = 0; i < inst.n; ++i) {
    const auto& clauses = inst.valuations[static_cast<std::size_t>(i)].clauses;
    std::vector<Option> options;
    for (std::size_t c = 0; c < clauses.size(); ++c) {
      if (clauses[c].empty()) continue;
      Mask mask(words);
      for (Item item : clauses[c]) mask.set(static_cast<std::size_t>(index[item]));
      options.push_back(Option{std::move(mask), static_cast<int>(c)});
    }
    // Drop duplicates and clauses dominated by a superset clause of the same
    // player; the first of equal clauses survives.
    std::vector<Option> kept;
    for (std::size_t a = 0; a < options.size(); ++a) {
      bool dominated = false;
      for (std::size_t b = 0; b < options.size() && !dominated; ++b) {
        if (a == b || !options[a].mask.subset_of(options[b].mask)) continue;
        dominated = !(options[a].mask == options[b].mask) || b < a;
      }
      if (!dominated) kept.push_back(options[a]);
    }
    if (!kept.empty()) players.push_back(SearchPlayer{i, std::move(kept)});
  }
  std::stable_sort(players.begin(), players.end(), [](const SearchPlayer& a, const SearchPlayer& b) {
    auto biggest = [](const SearchPlayer& p) {
      int best = 0;
      for (const auto& o : p.options) best = std::max(best, o.mask.count());
      return best;
    };
    const int ba = biggest(a);
    const int bb = biggest(b);
    if (ba != bb) return ba > bb;
    return a.options.size() < b.options.size();
  });

  ClauseUnionSearch search(std::move(players), words, node_cap);
  search.run();

  std::vector<int> selection(static_cast<std::size_t>(inst.n), -1);
  const auto& order = search.players();
  for (std::size_t d = 0; d < order.size(); ++d) {
    const int pick = search.best_choice()[d];
    if (pick >= 0) {
      selection[static_cast<std::size_t>(order[d].player)] = order[d].options[static_cast<std::size_t>(pick)].clause;
    }
  }
  auto out = witness_from_selection(inst, selection, "clause_union", search.nodes());
  if (out.value != search.best()) {
    throw Error("sw_clause_union: witness welfare " + std::to_string(out.value) +
                " disagrees with search optimum " + std::to_string(search.best()));
  }
  return out;
}

ApproxCheck approx_ratio(double estimate, std::int64_t truth, double alpha) {
  if (truth < 0) throw InvalidArgument("approx_ratio: truth must be non-negative");
  const auto t = static_cast<double>(truth);
  ApproxCheck out;
  if (estimate == 0.0) {
    out.ratio = truth == 0 ? 1.0 : std::numeric_limits<double>::infinity();
  } else {
    out.ratio = t / estimate;
  }
  out.valid = estimate <= t && estimate >= t / alpha;
  return out;
}

}  // namespace xoscc
