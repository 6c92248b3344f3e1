#include "xoscc/family.hpp"

#include <string>

#include "xoscc/errors.hpp"
#include "xoscc/rng.hpp"

namespace xoscc {
namespace {

constexpr int kRestarts = 16;

bool conflicts(const ItemSet& candidate, const std::vector<ItemSet>& accepted, int l) {
  for (const auto& other : accepted) {
    if (intersection_size(candidate, other) > static_cast<std::size_t>(l)) return true;
  }
  return false;
}

std::optional<IntersectingFamily> random_family(const Params& params, Rng& rng, int max_retries) {
  IntersectingFamily out{params.p, params.q, params.t, params.l, {}};
  out.sets.reserve(static_cast<std::size_t>(params.p));
  const auto q = static_cast<std::uint32_t>(params.q);
  const auto t = static_cast<std::uint32_t>(params.t);
  for (int i = 0; i < params.p; ++i) {
    ItemSet candidate = rng.subset(q, t);
    int retries = 0;
    while (conflicts(candidate, out.sets, params.l)) {
      if (++retries > max_retries) return std::nullopt;
      candidate = rng.subset(q, t);
    }
    out.sets.push_back(std::move(candidate));
  }
  return out;
}

// S_i = [i (t - l), i (t - l) + t): consecutive sets overlap in exactly l
// slots and sets further apart overlap less.
std::optional<IntersectingFamily> stride_family(const Params& params) {
  const std::int64_t stride = params.t - params.l;
  if (stride <= 0 && params.p > 1) {
    // l >= t: any family works, so reuse the first t slots.
    IntersectingFamily out{params.p, params.q, params.t, params.l, {}};
    ItemSet first;
    for (int a = 0; a < params.t; ++a) first.push_back(static_cast<Item>(a));
    out.sets.assign(static_cast<std::size_t>(params.p), first);
    return out;
  }
  if ((params.p - 1) * stride + params.t > params.q) return std::nullopt;
  IntersectingFamily out{params.p, params.q, params.t, params.l, {}};
  for (int i = 0; i < params.p; ++i) {
    ItemSet set;
    for (int a = 0; a < params.t; ++a) set.push_back(static_cast<Item>(i * stride + a));
    out.sets.push_back(std::move(set));
  }
  return out;
}

}  // namespace

bool provably_infeasible(int p, int q, int t, int l) {
  if (t > q) return true;
  // Bonferroni: |S_1 ∪ ... ∪ S_s| >= s t - C(s,2) l for every sub-family of
  // size s, and each sub-family must fit in [q].
  for (std::int64_t s = 2; s <= p; ++s) {
    if (s * t - s * (s - 1) / 2 * l > q) return true;
  }
  return false;
}

IntersectingFamily generate_family(const Params& params, std::uint64_t seed, int max_retries) {
  if (params.p < 1 || params.q < 1 || params.t < 1 || params.l < 0) {
    throw InvalidArgument("generate_family: p, q, t must be positive and l non-negative");
  }
  if (params.t > params.q) throw InvalidArgument("generate_family: t must not exceed q");
  if (max_retries < 1) throw InvalidArgument("generate_family: max_retries must be >= 1");

  const std::string label = "(p=" + std::to_string(params.p) + ",q=" + std::to_string(params.q) +
                            ",t=" + std::to_string(params.t) + ",l=" + std::to_string(params.l) + ")";
  if (provably_infeasible(params.p, params.q, params.t, params.l)) {
    throw FamilyInfeasible("no " + label +
                           "-intersecting family exists: inclusion-exclusion needs more than q slots");
  }

  Rng rng(derive_seed(seed, {tag(Stream::kFamily)}));
  for (int attempt = 0; attempt < kRestarts; ++attempt) {
    if (auto family = random_family(params, rng, max_retries)) {
      if (verify_family(*family).ok) return *std::move(family);
    }
  }
  if (auto family = stride_family(params)) {
    if (verify_family(*family).ok) return *std::move(family);
  }
  throw FamilyInfeasible("could not construct a " + label + "-intersecting family after " +
                         std::to_string(kRestarts) + " restarts of " + std::to_string(max_retries) +
                         " retries; parameters too tight for random construction");
}

FamilyReport verify_family(const IntersectingFamily& family) {
  FamilyReport report;
  for (const auto& set : family.sets) {
    if (static_cast<int>(set.size()) != family.t || !is_normalized(set) ||
        (!set.empty() && set.back() >= static_cast<Item>(family.q))) {
      report.ok = false;
    }
  }
  if (static_cast<int>(family.sets.size()) != family.p) report.ok = false;

  int worst = -1;
  for (std::size_t i = 0; i < family.sets.size(); ++i) {
    for (std::size_t j = i + 1; j < family.sets.size(); ++j) {
      const int inter = static_cast<int>(intersection_size(family.sets[i], family.sets[j]));
      if (inter > worst) {
        worst = inter;
        report.worst_pair = std::pair{static_cast<int>(i), static_cast<int>(j)};
      }
    }
  }
  report.worst_intersection = std::max(worst, 0);
  if (worst > family.l) report.ok = false;
  return report;
}

double empirical_chernoff_check(int q, int t, int l, long trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("empirical_chernoff_check: trials must be >= 1");
  if (t < 0 || t > q) throw InvalidArgument("empirical_chernoff_check: need 0 <= t <= q");
  Rng rng(seed);
  long violations = 0;
  for (long i = 0; i < trials; ++i) {
    const auto a = rng.subset(static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(t));
    const auto b = rng.subset(static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(t));
    if (intersection_size(a, b) > static_cast<std::size_t>(l)) ++violations;
  }
  return static_cast<double>(violations) / static_cast<double>(trials);
}

}  // namespace xoscc
