#include "xoscc/distributions.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include "xoscc/errors.hpp"
#include "xoscc/rng.hpp"

namespace xoscc {
namespace {

const IntersectingFamily& family_at(const FamilyLadder& families, int level) {
  if (level < 1 || static_cast<std::size_t>(level) > families.size()) {
    throw DimensionMismatch("no intersecting family supplied for level " + std::to_string(level));
  }
  return families[static_cast<std::size_t>(level - 1)];
}

XOSValuation base_view(int k, bool present) {
  XOSValuation v;
  if (present) {
    ItemSet all(static_cast<std::size_t>(k));
    for (int a = 0; a < k; ++a) all[static_cast<std::size_t>(a)] = static_cast<Item>(a);
    v.clauses.push_back(std::move(all));
    v.provenance.push_back(Provenance{});
  }
  return v;
}

std::vector<Item> slot_labels(int level, int k, const IntersectingFamily& family,
                              std::span<const Item> sigma, int j_star, int group) {
  const auto& special = family.sets.at(static_cast<std::size_t>(j_star));
  const auto offset = static_cast<std::size_t>(shared_block_at(level, k)) +
                      static_cast<std::size_t>(group) * static_cast<std::size_t>(family.t);
  std::vector<Item> phi(static_cast<std::size_t>(family.q));
  std::size_t shared_pos = 0;
  std::size_t special_pos = 0;
  for (Item slot = 0; slot < static_cast<Item>(family.q); ++slot) {
    if (std::binary_search(special.begin(), special.end(), slot)) {
      phi[slot] = sigma[offset + special_pos++];
    } else {
      phi[slot] = sigma[shared_pos++];
    }
  }
  return phi;
}

struct LevelShape {
  int n = 0;
  int m = 0;
  int groups = 0;
  int group_size = 0;
};

LevelShape shape_of(int level, int k) {
  return LevelShape{static_cast<int>(players_at(level, k)), static_cast<int>(items_at(level, k)),
                    k * k, static_cast<int>(players_at(level - 1, k))};
}

Sample sample_level(int level, int k, const FamilyLadder& families, std::uint64_t seed,
                    std::optional<int> force_theta) {
  const auto& family = family_at(families, level);
  const auto shape = shape_of(level, k);

  Rng top(derive_seed(seed, {tag(Stream::kTop), static_cast<std::uint64_t>(level)}));
  const int j_star = static_cast<int>(top.below(static_cast<std::uint64_t>(family.p)));
  const auto sigma = top.permutation(static_cast<std::uint32_t>(shape.m));

  const auto special_seed = derive_seed(seed, {tag(Stream::kSpecial), static_cast<std::uint64_t>(level)});
  std::optional<Sample> inner;
  int theta = 0;
  if (level == 1) {
    theta = force_theta ? *force_theta : (Rng(special_seed).coin() ? 1 : 0);
  } else {
    inner = sample_level(level - 1, k, families, special_seed, force_theta);
    theta = inner->truth.theta_star;
  }

  Sample out;
  out.instance.level = level;
  out.instance.k = k;
  out.instance.n = shape.n;
  out.instance.m = shape.m;
  out.instance.valuations.resize(static_cast<std::size_t>(shape.n));

  auto& truth = out.truth;
  truth.level = level;
  truth.k = k;
  truth.q = family.q;
  truth.t = family.t;
  truth.theta_star = theta;
  truth.j_star = j_star;
  truth.special_slots = family.sets[static_cast<std::size_t>(j_star)];
  truth.sigma = sigma;
  if (level == 1) truth.x_vectors.resize(static_cast<std::size_t>(shape.n));

  std::vector<XOSValuation> subviews(static_cast<std::size_t>(family.p));
  for (int g = 0; g < shape.groups; ++g) {
    std::vector<int> members;
    for (int local = 0; local < shape.group_size; ++local) {
      const int player = g * shape.group_size + local;
      members.push_back(player);
      for (int j = 0; j < family.p; ++j) {
        if (j == j_star) {
          subviews[static_cast<std::size_t>(j)] =
              level == 1 ? base_view(k, theta == 1)
                         : inner->instance.valuations[static_cast<std::size_t>(local)];
        } else {
          const auto fooling_seed =
              derive_seed(seed, {tag(Stream::kFooling), static_cast<std::uint64_t>(level),
                                 static_cast<std::uint64_t>(g), static_cast<std::uint64_t>(local),
                                 static_cast<std::uint64_t>(j)});
          subviews[static_cast<std::size_t>(j)] =
              sample_single_view(level - 1, k, families, local, fooling_seed);
        }
      }
      if (level == 1) {
        auto& x = truth.x_vectors[static_cast<std::size_t>(player)];
        for (const auto& sub : subviews) x.push_back(sub.clauses.empty() ? 0 : 1);
      }
      out.instance.valuations[static_cast<std::size_t>(player)] =
          assemble_player(level, k, family, sigma, j_star, g, subviews);
    }
    truth.groups.push_back(std::move(members));

    const auto offset = static_cast<std::size_t>(shared_block_at(level, k)) +
                        static_cast<std::size_t>(g) * static_cast<std::size_t>(family.t);
    ItemSet special(sigma.begin() + static_cast<std::ptrdiff_t>(offset),
                    sigma.begin() + static_cast<std::ptrdiff_t>(offset + static_cast<std::size_t>(family.t)));
    truth.special_items.push_back(normalize(std::move(special)));
  }
  if (inner) truth.special_trace = std::make_shared<const GroundTruth>(std::move(inner->truth));
  return out;
}

void check_force_theta(std::optional<int> force_theta) {
  if (force_theta && *force_theta != 0 && *force_theta != 1) {
    throw InvalidArgument("force_theta must be 0 or 1");
  }
}

}  // namespace

FamilyLadder make_families(int r, int k, double eps, std::optional<int> p, std::uint64_t seed,
                           int max_retries) {
  FamilyLadder out;
  for (int level = 1; level <= r; ++level) {
    const auto params = derive_params(level, k, eps, p);
    out.push_back(generate_family(params, derive_seed(seed, {static_cast<std::uint64_t>(level)}),
                                  max_retries));
  }
  return out;
}

void check_ladder(int r, int k, double eps, const FamilyLadder& ladder) {
  if (ladder.size() < static_cast<std::size_t>(r)) {
    throw DimensionMismatch("need families for levels 1.." + std::to_string(r) + ", got " +
                            std::to_string(ladder.size()));
  }
  for (int level = 1; level <= r; ++level) {
    const auto expected = derive_params(level, k, eps, 2);
    const auto& f = ladder[static_cast<std::size_t>(level - 1)];
    if (f.q != expected.q || f.t != expected.t || f.l != expected.l ||
        static_cast<int>(f.sets.size()) != f.p || f.p < 1) {
      throw DimensionMismatch("family for level " + std::to_string(level) +
                              " does not match (q,t,l) = (" + std::to_string(expected.q) + "," +
                              std::to_string(expected.t) + "," + std::to_string(expected.l) + ")");
    }
  }
}

Sample sample_d1(int k, double eps, const IntersectingFamily& family, std::uint64_t seed,
                 std::optional<int> force_theta) {
  check_force_theta(force_theta);
  FamilyLadder ladder{family};
  check_ladder(1, k, eps, ladder);
  return sample_level(1, k, ladder, seed, force_theta);
}

Sample sample_dr(int r, int k, double eps, const FamilyLadder& families, std::uint64_t seed,
                 std::optional<int> force_theta) {
  if (r < 2) throw InvalidArgument("sample_dr: r must be >= 2 (use sample_d1 for r = 1)");
  check_force_theta(force_theta);
  check_ladder(r, k, eps, families);
  return sample_level(r, k, families, seed, force_theta);
}

Sample sample_instance(int r, int k, double eps, const FamilyLadder& families, std::uint64_t seed,
                       std::optional<int> force_theta) {
  if (r == 1) return sample_d1(k, eps, family_at(families, 1), seed, force_theta);
  return sample_dr(r, k, eps, families, seed, force_theta);
}

XOSValuation sample_single_view(int level, int k, const FamilyLadder& families, int local_player,
                                std::uint64_t seed) {
  if (level == 0) return base_view(k, Rng(seed).coin());

  const auto& family = family_at(families, level);
  const auto shape = shape_of(level, k);
  Rng top(derive_seed(seed, {tag(Stream::kTop)}));
  const int j_star = static_cast<int>(top.below(static_cast<std::uint64_t>(family.p)));
  const auto sigma = top.permutation(static_cast<std::uint32_t>(shape.m));
  const int group = local_player / shape.group_size;
  const int local = local_player % shape.group_size;

  std::vector<XOSValuation> subviews(static_cast<std::size_t>(family.p));
  for (int j = 0; j < family.p; ++j) {
    const auto sub_seed = j == j_star
                              ? derive_seed(seed, {tag(Stream::kSpecial)})
                              : derive_seed(seed, {tag(Stream::kFooling), static_cast<std::uint64_t>(j)});
    subviews[static_cast<std::size_t>(j)] = sample_single_view(level - 1, k, families, local, sub_seed);
  }
  return assemble_player(level, k, family, sigma, j_star, group, subviews);
}

XOSValuation assemble_player(int level, int k, const IntersectingFamily& family,
                             std::span<const Item> sigma, int j_star, int group,
                             std::span<const XOSValuation> subviews) {
  if (static_cast<int>(subviews.size()) != family.p) {
    throw DimensionMismatch("assemble_player: expected one sub-view per family set");
  }
  if (static_cast<std::int64_t>(sigma.size()) != items_at(level, k)) {
    throw DimensionMismatch("assemble_player: permutation has the wrong length");
  }
  const auto phi = slot_labels(level, k, family, sigma, j_star, group);

  XOSValuation out;
  for (int j = 0; j < family.p; ++j) {
    const auto& sub = subviews[static_cast<std::size_t>(j)];
    const auto& slots = family.sets[static_cast<std::size_t>(j)];
    for (std::size_t c = 0; c < sub.clauses.size(); ++c) {
      ItemSet mapped;
      mapped.reserve(sub.clauses[c].size());
      for (Item a : sub.clauses[c]) mapped.push_back(phi[slots.at(a)]);
      out.clauses.push_back(normalize(std::move(mapped)));
      Provenance prov{{j}};
      if (c < sub.provenance.size()) {
        const auto& tail = sub.provenance[c].path;
        prov.path.insert(prov.path.end(), tail.begin(), tail.end());
      }
      out.provenance.push_back(std::move(prov));
    }
  }
  return out;
}

XOSValuation view_from_canonical(int level, int k, const FamilyLadder& families, std::span<const Item> sigma,
                                 int j_star, int local_player, const std::vector<bool>& canonical,
                                 std::uint64_t label_seed) {
  if (level == 0) {
    if (canonical.size() != 1) throw DimensionMismatch("view_from_canonical: level 0 takes one bit");
    return base_view(k, canonical[0]);
  }
  const auto& family = family_at(families, level);
  const auto shape = shape_of(level, k);
  const auto width = static_cast<std::size_t>(ipow(family.p, level - 1));
  if (canonical.size() != width * static_cast<std::size_t>(family.p)) {
    throw DimensionMismatch("view_from_canonical: expected p^level bits");
  }
  if (local_player < 0 || local_player >= shape.n) throw InvalidArgument("view_from_canonical: bad player");

  std::vector<Item> drawn;
  if (sigma.empty()) {
    Rng top(derive_seed(label_seed, {tag(Stream::kTop)}));
    j_star = static_cast<int>(top.below(static_cast<std::uint64_t>(family.p)));
    drawn = top.permutation(static_cast<std::uint32_t>(shape.m));
    sigma = drawn;
  }
  std::vector<XOSValuation> subviews(static_cast<std::size_t>(family.p));
  for (int j = 0; j < family.p; ++j) {
    const std::vector<bool> slice(canonical.begin() + static_cast<std::ptrdiff_t>(j * width),
                                  canonical.begin() + static_cast<std::ptrdiff_t>((j + 1) * width));
    subviews[static_cast<std::size_t>(j)] =
        view_from_canonical(level - 1, k, families, {}, 0, local_player % shape.group_size, slice,
                            derive_seed(label_seed, {static_cast<std::uint64_t>(j)}));
  }
  return assemble_player(level, k, family, sigma, j_star, local_player / shape.group_size, subviews);
}

XOSValuation extract_subview(const XOSValuation& view, const GroundTruth& truth, int player, int j,
                             const IntersectingFamily& family) {
  const auto phi = labeling_function(truth, player);
  const auto& slots = family.sets.at(static_cast<std::size_t>(j));
  // item -> position of its slot within S_j
  std::vector<int> position(truth.sigma.size(), -1);
  for (std::size_t a = 0; a < slots.size(); ++a) position[phi[slots[a]]] = static_cast<int>(a);

  XOSValuation out;
  for (std::size_t c = 0; c < view.clauses.size(); ++c) {
    const auto& prov = view.provenance.at(c);
    if (prov.path.empty() || prov.path.front() != j) continue;
    ItemSet mapped;
    for (Item item : view.clauses[c]) {
      if (position.at(item) < 0) throw InvalidArgument("extract_subview: clause item outside S_j");
      mapped.push_back(static_cast<Item>(position[item]));
    }
    out.clauses.push_back(normalize(std::move(mapped)));
    out.provenance.push_back(Provenance{{prov.path.begin() + 1, prov.path.end()}});
  }
  return out;
}

XOSValuation sample_player_view(int r, int k, double eps, const FamilyLadder& families,
                                std::uint64_t seed, int player, const ViewConditioning& conditioned) {
  check_ladder(r, k, eps, families);
  const auto& family = family_at(families, r);
  const auto shape = shape_of(r, k);
  if (player < 0 || player >= shape.n) throw InvalidArgument("sample_player_view: bad player index");
  if (conditioned.j_star < 0 || conditioned.j_star >= family.p) {
    throw InvalidArgument("sample_player_view: j_star out of range");
  }
  if (static_cast<int>(conditioned.sigma.size()) != shape.m) {
    throw InvalidArgument("sample_player_view: sigma is not a permutation of [m]");
  }
  std::vector<std::uint8_t> seen(conditioned.sigma.size(), 0);
  for (Item item : conditioned.sigma) {
    if (item >= seen.size() || seen[item]) {
      throw InvalidArgument("sample_player_view: sigma is not a permutation of [m]");
    }
    seen[item] = 1;
  }
  const auto lower_m = static_cast<Item>(items_at(r - 1, k));
  for (std::size_t c = 0; c < conditioned.special_view.clauses.size(); ++c) {
    const auto& clause = conditioned.special_view.clauses[c];
    if (!is_normalized(clause) || (!clause.empty() && clause.back() >= lower_m)) {
      throw InvalidArgument("sample_player_view: special view has items outside the lower universe");
    }
    if (c < conditioned.special_view.provenance.size() &&
        conditioned.special_view.provenance[c].depth() != r - 1) {
      throw InvalidArgument("sample_player_view: special view provenance depth must be r-1");
    }
  }
  if (r == 1) {
    const auto& sv = conditioned.special_view;
    if (sv.clauses.size() > 1 || (sv.clauses.size() == 1 && sv.clauses[0].size() != static_cast<std::size_t>(k))) {
      throw InvalidArgument("sample_player_view: level-1 special view must be empty or the full block");
    }
  }

  const int group = player / shape.group_size;
  const int local = player % shape.group_size;
  std::vector<XOSValuation> subviews(static_cast<std::size_t>(family.p));
  for (int j = 0; j < family.p; ++j) {
    if (j == conditioned.j_star) {
      subviews[static_cast<std::size_t>(j)] = conditioned.special_view;
      if (subviews[static_cast<std::size_t>(j)].provenance.empty()) {
        subviews[static_cast<std::size_t>(j)].provenance.resize(conditioned.special_view.clauses.size());
      }
    } else {
      const auto fooling_seed =
          derive_seed(seed, {tag(Stream::kFooling), static_cast<std::uint64_t>(r),
                             static_cast<std::uint64_t>(group), static_cast<std::uint64_t>(local),
                             static_cast<std::uint64_t>(j)});
      subviews[static_cast<std::size_t>(j)] = sample_single_view(r - 1, k, families, local, fooling_seed);
    }
  }
  return assemble_player(r, k, family, conditioned.sigma, conditioned.j_star, group, subviews);
}

}  // namespace xoscc
