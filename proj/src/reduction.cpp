#include "xoscc/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "xoscc/errors.hpp"
#include "xoscc/protocols.hpp"
#include "xoscc/rng.hpp"

namespace xoscc {
namespace {

// Canonical level-2 views. A player's view is p blocks of p bits; block j
// is the presence vector of her j-th sub-instance. Block j* holds her
// special vector s, the other p - 1 blocks her fooling bits f, packed in
// increasing j.
struct Level2 {
  int k = 0;
  int p = 0;
  int n = 0;        // players at level 2
  int n1 = 0;       // players at level 1 (group size)
  int fool_bits = 0;  // p (p - 1)

  std::uint64_t compose(int j_star, std::uint64_t s, std::uint64_t f) const {
    std::uint64_t out = 0;
    int used = 0;
    const std::uint64_t block = (std::uint64_t{1} << p) - 1;
    for (int j = 0; j < p; ++j) {
      std::uint64_t v = 0;
      if (j == j_star) {
        v = s;
      } else {
        v = (f >> (used * p)) & block;
        ++used;
      }
      out |= v << (j * p);
    }
    return out;
  }

  // Special vector of one lower player: bit J1 is θ, the other p - 1 bits
  // come from `free` in increasing j.
  std::uint64_t special(int theta, int j1, std::uint64_t free) const {
    std::uint64_t out = 0;
    int used = 0;
    for (int j = 0; j < p; ++j) {
      bool bit = false;
      if (j == j1) {
        bit = theta == 1;
      } else {
        bit = ((free >> used) & 1U) != 0;
        ++used;
      }
      if (bit) out |= std::uint64_t{1} << j;
    }
    return out;
  }
};

Level2 level2_shape(int k, int p) {
  Level2 shape;
  shape.k = k;
  shape.p = p;
  shape.n = static_cast<int>(players_at(2, k));
  shape.n1 = static_cast<int>(players_at(1, k));
  shape.fool_bits = p * (p - 1);
  if (shape.n1 * (p - 1) + (shape.n1 + 1) * shape.fool_bits >= 62) {
    throw BudgetExceeded("canonical enumeration does not fit in 62 bits");
  }
  return shape;
}

// Round-1 message codes for every player and canonical view. Throws unless
// messages ignore item labels and private randomness.
std::vector<std::vector<int>> message_table(const ProtocolSpec& pi, const Level2& shape,
                                            const FamilyLadder& ladder, int players,
                                            std::vector<std::map<Bits, int>>* codes_out = nullptr) {
  const PublicInfo pub{shape.n, static_cast<int>(items_at(2, shape.k)), 2, shape.k};
  const std::uint64_t views = std::uint64_t{1} << (shape.p * shape.p);
  std::vector<std::vector<int>> table(static_cast<std::size_t>(players), std::vector<int>(views));
  std::vector<std::map<Bits, int>> codes(static_cast<std::size_t>(players));
  for (int i = 0; i < players; ++i) {
    for (std::uint64_t c = 0; c < views; ++c) {
      std::vector<bool> canon(static_cast<std::size_t>(shape.p * shape.p));
      for (std::size_t w = 0; w < canon.size(); ++w) canon[w] = ((c >> w) & 1U) != 0;
      const auto a = view_from_canonical(2, shape.k, ladder, {}, 0, i, canon, derive_seed(c, {1}));
      const auto b = view_from_canonical(2, shape.k, ladder, {}, 0, i, canon, derive_seed(c, {2}));
      const auto msg = compute_message(pi, pub, a, i, 1, {}, 5, 7);
      if (compute_message(pi, pub, b, i, 1, {}, 5, 13) != msg) {
        throw InvalidArgument("round 1 of '" + pi.name + "' is not a deterministic function of the canonical input");
      }
      auto& dict = codes[static_cast<std::size_t>(i)];
      table[static_cast<std::size_t>(i)][c] = dict.emplace(msg, static_cast<int>(dict.size())).first->second;
    }
  }
  if (codes_out) *codes_out = std::move(codes);
  return table;
}

FamilyLadder toy_ladder(int k, double eps, int p) {
  return make_families(2, k, eps, p, derive_seed(0, {tag(Stream::kFamily)}));
}

}  // namespace

XOSValuation complete_player(const ProtocolSpec& pi, int r, int k, double eps, const FamilyLadder& families,
                             const ViewConditioning& conditioned, int player, const Bits& target,
                             std::uint64_t seed, long cap, long* attempts) {
  if (cap < 1) throw InvalidArgument("rejection cap must be positive");
  const PublicInfo pub{static_cast<int>(players_at(r, k)), static_cast<int>(items_at(r, k)), r, k};
  for (long attempt = 1; attempt <= cap; ++attempt) {
    const auto key = static_cast<std::uint64_t>(attempt);
    auto candidate = sample_player_view(
        r, k, eps, families, derive_seed(seed, {tag(Stream::kPlayer), static_cast<std::uint64_t>(player), key}),
        player, conditioned);
    const auto msg = compute_message(
        pi, pub, candidate, player, 1, {}, seed,
        derive_seed(seed, {tag(Stream::kPrivate), static_cast<std::uint64_t>(player), key}));
    if (msg == target) {
      if (attempts) *attempts = attempt;
      return candidate;
    }
  }
  if (attempts) *attempts = cap;
  throw RejectionCapExceeded("player " + std::to_string(player) + " found no completion matching her round-1 message in " +
                                 std::to_string(cap) + " attempts",
                             player, cap);
}

EmbedResult embed(const ProtocolSpec& pi, const Instance& lower_instance, int k, double eps,
                  const FamilyLadder& families, std::uint64_t seed, long rejection_cap) {
  if (pi.rounds < 2) throw InvalidArgument("embed needs a protocol with at least two rounds");
  const int r = lower_instance.level + 1;
  if (lower_instance.level < 1) throw DimensionMismatch("lower instance must be a level-(r-1) instance, r >= 2");
  if (lower_instance.k != k || lower_instance.n != players_at(r - 1, k) || lower_instance.m != items_at(r - 1, k) ||
      static_cast<int>(lower_instance.valuations.size()) != lower_instance.n) {
    throw DimensionMismatch("lower instance does not have the level-" + std::to_string(r - 1) + " shape for k = " +
                            std::to_string(k));
  }
  lower_instance.validate();
  check_ladder(r, k, eps, families);

  // Step 1: public (Π1, σ, j*) from a throwaway level-r instance.
  const auto throwaway = sample_instance(r, k, eps, families, derive_seed(seed, {tag(Stream::kPublic), 1}));
  const PublicInfo pub = public_info(throwaway.instance);
  EmbedResult out;
  out.sigma = throwaway.truth.sigma;
  out.j_star = throwaway.truth.j_star;
  for (int i = 0; i < pub.n; ++i) {
    out.round_one.push_back(compute_message(pi, pub, throwaway.instance.valuations[static_cast<std::size_t>(i)], i, 1,
                                            {}, seed,
                                            derive_seed(seed, {tag(Stream::kPublic), 2, static_cast<std::uint64_t>(i)})));
  }

  // Steps 2 and 3: special views from the lower instance, private completion.
  const int group_size = static_cast<int>(players_at(r - 1, k));
  out.embedded.level = r;
  out.embedded.k = k;
  out.embedded.n = pub.n;
  out.embedded.m = pub.m;
  out.attempts.assign(static_cast<std::size_t>(pub.n), 0);
  for (int i = 0; i < pub.n; ++i) {
    ViewConditioning cond{out.sigma, out.j_star,
                          lower_instance.valuations[static_cast<std::size_t>(i % group_size)]};
    long attempts = 0;
    try {
      out.embedded.valuations.push_back(complete_player(pi, r, k, eps, families, cond, i,
                                                        out.round_one[static_cast<std::size_t>(i)], seed,
                                                        rejection_cap, &attempts));
    } catch (const RejectionCapExceeded& e) {
      const long done = out.total_attempts + attempts;
      throw RejectionCapExceeded(std::string(e.what()) + "; " + std::to_string(i) + " of " + std::to_string(pub.n) +
                                     " players completed, acceptance rate so far " +
                                     std::to_string(static_cast<double>(i) / static_cast<double>(done)),
                                 i, attempts);
    }
    out.attempts[static_cast<std::size_t>(i)] = attempts;
    out.total_attempts += attempts;
  }
  out.acceptance_rate = static_cast<double>(pub.n) / static_cast<double>(out.total_attempts);

  // Step 4.
  out.transcript = run_from_round(pi, out.embedded, seed, 2, {out.round_one});
  return out;
}

ProductReport verify_product_property(int r, int k, double eps, int p, const ProtocolSpec& pi,
                                      std::uint64_t budget, CompletionSampler sampler, double tol) {
  if (r != 2) throw InvalidArgument("verify_product_property enumerates level 2 only");
  const auto shape = level2_shape(k, p);
  const auto ladder = toy_ladder(k, eps, p);

  std::vector<int> window;
  for (int i = 0; i <= shape.n1; ++i) window.push_back(i);
  const int w_count = static_cast<int>(window.size());
  const int special_bits = shape.n1 * (p - 1);
  const int fooling_draws = sampler == CompletionSampler::kIndependent ? w_count : 1;
  const int fooling_bits = fooling_draws * shape.fool_bits;
  const std::uint64_t outcomes = (static_cast<std::uint64_t>(2 * p * p) << special_bits) << fooling_bits;
  if (outcomes > budget) {
    throw BudgetExceeded("verify_product_property: " + std::to_string(outcomes) + " outcomes exceed the budget of " +
                         std::to_string(budget));
  }
  const auto table = message_table(pi, shape, ladder, w_count);

  std::vector<std::string> axes{"J", "J1"};
  for (int w : window) axes.push_back("S_" + std::to_string(w));
  for (int w : window) axes.push_back("F_" + std::to_string(w));
  for (int w : window) axes.push_back("Pi_" + std::to_string(w));
  JointDistribution jd(axes);
  const double weight = 1.0 / static_cast<double>(outcomes);
  const std::uint64_t fool_mask = (std::uint64_t{1} << shape.fool_bits) - 1;

  JointDistribution::Outcome outcome(axes.size());
  std::vector<std::uint64_t> specials(static_cast<std::size_t>(shape.n1));
  for (int j = 0; j < p; ++j) {
    for (int theta = 0; theta < 2; ++theta) {
      for (int j1 = 0; j1 < p; ++j1) {
        for (std::uint64_t sf = 0; sf < (std::uint64_t{1} << special_bits); ++sf) {
          const std::uint64_t free_mask = (std::uint64_t{1} << (p - 1)) - 1;
          for (int local = 0; local < shape.n1; ++local) {
            specials[static_cast<std::size_t>(local)] = shape.special(theta, j1, (sf >> (local * (p - 1))) & free_mask);
          }
          for (std::uint64_t ff = 0; ff < (std::uint64_t{1} << fooling_bits); ++ff) {
            outcome[0] = j;
            outcome[1] = j1;
            for (int a = 0; a < w_count; ++a) {
              const int w = window[static_cast<std::size_t>(a)];
              const auto s = specials[static_cast<std::size_t>(w % shape.n1)];
              const auto f = sampler == CompletionSampler::kIndependent ? (ff >> (a * shape.fool_bits)) & fool_mask
                                                                         : ff;
              const auto a_index = static_cast<std::size_t>(a);
              outcome[2 + a_index] = static_cast<int>(s);
              outcome[2 + w_count + a_index] = static_cast<int>(f);
              outcome[2 + 2 * w_count + a_index] = table[a_index][shape.compose(j, s, f)];
            }
            jd.add(outcome, weight);
          }
        }
      }
    }
  }

  ProductReport out;
  out.protocol = pi.name;
  out.sampler = sampler == CompletionSampler::kIndependent ? "independent" : "shared-fooling";
  out.r = r;
  out.k = k;
  out.p = p;
  out.window = window;
  out.outcomes = outcomes;
  std::vector<std::string> messages{"J"};
  for (int w : window) messages.push_back("Pi_" + std::to_string(w));
  for (int w : window) {
    std::vector<std::string> others{"J1"};
    for (int v : window) {
      if (v == w) continue;
      others.push_back("F_" + std::to_string(v));
      others.push_back("S_" + std::to_string(v));
    }
    auto given = messages;
    given.push_back("S_" + std::to_string(w));
    const double mi = std::max(0.0, mutual_info(jd, {"F_" + std::to_string(w)}, others, given));
    out.terms.push_back(ProductTerm{w, mi});
    out.max_mi = std::max(out.max_mi, mi);
  }
  out.ok = out.max_mi <= tol;
  return out;
}

EmbeddingLawReport embedding_law_check(int k, double eps, int p, const ProtocolSpec& pi, std::uint64_t seed,
                                       std::uint64_t budget, double tol) {
  const auto shape = level2_shape(k, p);
  const auto ladder = toy_ladder(k, eps, p);
  std::vector<std::map<Bits, int>> codes;
  const auto table = message_table(pi, shape, ladder, shape.n, &codes);

  const int w_count = shape.n1 + 1;
  const int special_bits = shape.n1 * (p - 1);
  const int fooling_bits = w_count * shape.fool_bits;
  const std::uint64_t outcomes = (static_cast<std::uint64_t>(2 * p) << special_bits) << fooling_bits;
  if (outcomes > budget) {
    throw BudgetExceeded("embedding_law_check: " + std::to_string(outcomes) + " outcomes exceed the budget of " +
                         std::to_string(budget));
  }
  const std::uint64_t free_mask = (std::uint64_t{1} << (p - 1)) - 1;
  const std::uint64_t fool_count = std::uint64_t{1} << shape.fool_bits;
  const std::uint64_t special_count = std::uint64_t{1} << p;

  // Public draw of (J, Π1) by forward sampling the canonical level-2 law.
  Rng rng(derive_seed(seed, {tag(Stream::kPublic)}));
  const int j_star = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
  const int theta0 = rng.coin() ? 1 : 0;
  const int j1_0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(p)));
  std::vector<int> target(static_cast<std::size_t>(shape.n));
  {
    std::vector<std::uint64_t> s(static_cast<std::size_t>(shape.n1));
    for (auto& v : s) v = shape.special(theta0, j1_0, rng.below(free_mask + 1));
    for (int i = 0; i < shape.n; ++i) {
      const auto f = rng.below(fool_count);
      target[static_cast<std::size_t>(i)] =
          table[static_cast<std::size_t>(i)][shape.compose(j_star, s[static_cast<std::size_t>(i % shape.n1)], f)];
    }
  }

  // accept[i][s]: probability that a fresh fooling draw reproduces Π1_i.
  std::vector<std::vector<double>> accept(static_cast<std::size_t>(shape.n), std::vector<double>(special_count, 0.0));
  for (int i = 0; i < shape.n; ++i) {
    for (std::uint64_t s = 0; s < special_count; ++s) {
      std::uint64_t hits = 0;
      for (std::uint64_t f = 0; f < fool_count; ++f) {
        hits += table[static_cast<std::size_t>(i)][shape.compose(j_star, s, f)] == target[static_cast<std::size_t>(i)];
      }
      accept[static_cast<std::size_t>(i)][s] = static_cast<double>(hits) / static_cast<double>(fool_count);
    }
  }

  std::vector<std::string> lower_axes{"theta", "J1"};
  for (int local = 0; local < shape.n1; ++local) lower_axes.push_back("S_" + std::to_string(local));
  auto axes = lower_axes;
  for (int w = 0; w < w_count; ++w) axes.push_back("F_" + std::to_string(w));

  JointDistribution prior(lower_axes);
  JointDistribution psi(lower_axes);
  JointDistribution target_law(axes);
  JointDistribution embedded_law(axes);
  const double prior_weight = 1.0 / static_cast<double>(static_cast<std::uint64_t>(2 * p) << special_bits);
  const double fool_weight = 1.0 / static_cast<double>(fool_count);

  std::vector<std::uint64_t> s(static_cast<std::size_t>(shape.n1));
  JointDistribution::Outcome lower(lower_axes.size());
  JointDistribution::Outcome full(axes.size());
  for (int theta = 0; theta < 2; ++theta) {
    for (int j1 = 0; j1 < p; ++j1) {
      for (std::uint64_t sf = 0; sf < (std::uint64_t{1} << special_bits); ++sf) {
        for (int local = 0; local < shape.n1; ++local) {
          s[static_cast<std::size_t>(local)] = shape.special(theta, j1, (sf >> (local * (p - 1))) & free_mask);
        }
        lower[0] = theta;
        lower[1] = j1;
        for (int local = 0; local < shape.n1; ++local) {
          lower[static_cast<std::size_t>(2 + local)] = static_cast<int>(s[static_cast<std::size_t>(local)]);
        }
        double outside = 1.0;
        double everyone = 1.0;
        for (int i = 0; i < shape.n; ++i) {
          const double a = accept[static_cast<std::size_t>(i)][s[static_cast<std::size_t>(i % shape.n1)]];
          everyone *= a;
          if (i >= w_count) outside *= a;
        }
        prior.add(lower, prior_weight);
        psi.add(lower, prior_weight * everyone);

        std::copy(lower.begin(), lower.end(), full.begin());
        for (std::uint64_t ff = 0; ff < (std::uint64_t{1} << fooling_bits); ++ff) {
          bool consistent = true;
          for (int w = 0; w < w_count && consistent; ++w) {
            const auto f = (ff >> (w * shape.fool_bits)) & (fool_count - 1);
            full[lower.size() + static_cast<std::size_t>(w)] = static_cast<int>(f);
            consistent = table[static_cast<std::size_t>(w)][shape.compose(j_star, s[static_cast<std::size_t>(w % shape.n1)], f)] ==
                         target[static_cast<std::size_t>(w)];
          }
          if (!consistent) continue;
          target_law.add(full, prior_weight * std::pow(fool_weight, w_count) * outside);
        }
      }
    }
  }
  target_law.normalize();
  psi.normalize();

  // Embedded law: lower views from ψ, each window player completed by the
  // rejection kernel P(f) 1[msg = Π1_i] / accept_i(s).
  for (const auto& [lower_outcome, mass] : psi.table()) {
    std::copy(lower_outcome.begin(), lower_outcome.end(), full.begin());
    for (std::uint64_t ff = 0; ff < (std::uint64_t{1} << fooling_bits); ++ff) {
      double weight = mass;
      for (int w = 0; w < w_count && weight > 0.0; ++w) {
        const auto f = (ff >> (w * shape.fool_bits)) & (fool_count - 1);
        const auto sv = static_cast<std::uint64_t>(lower_outcome[static_cast<std::size_t>(2 + w % shape.n1)]);
        full[lower_outcome.size() + static_cast<std::size_t>(w)] = static_cast<int>(f);
        if (table[static_cast<std::size_t>(w)][shape.compose(j_star, sv, f)] != target[static_cast<std::size_t>(w)]) {
          weight = 0.0;
        } else {
          weight *= fool_weight / accept[static_cast<std::size_t>(w)][sv];
        }
      }
      if (weight > 0.0) embedded_law.add(full, weight);
    }
  }

  EmbeddingLawReport out;
  out.protocol = pi.name;
  out.k = k;
  out.p = p;
  out.j_star = j_star;
  for (int w = 0; w < w_count; ++w) {
    for (const auto& [bits, code] : codes[static_cast<std::size_t>(w)]) {
      if (code == target[static_cast<std::size_t>(w)]) out.round_one.push_back(bits);
    }
  }
  out.tvd = tvd(embedded_law, target_law) + std::abs(embedded_law.total() - 1.0);
  out.lower_shift = tvd(psi, prior);
  out.ok = out.tvd <= tol;
  return out;
}

OutputLawReport compare_output_laws(const ProtocolSpec& pi, int r, int k, double eps, const FamilyLadder& families,
                                    long trials, std::uint64_t seed, long rejection_cap) {
  if (r < 2) throw InvalidArgument("compare_output_laws needs r >= 2");
  if (trials < 1) throw InvalidArgument("compare_output_laws needs at least one trial");
  std::map<double, long> embedded_counts;
  std::map<double, long> direct_counts;
  double acceptance = 0.0;
  for (long t = 0; t < trials; ++t) {
    const auto tt = static_cast<std::uint64_t>(t);
    const auto lower = sample_instance(r - 1, k, eps, families, derive_seed(seed, {tag(Stream::kTrial), tt, 0}));
    const auto result = embed(pi, lower.instance, k, eps, families, derive_seed(seed, {tag(Stream::kTrial), tt, 1}),
                              rejection_cap);
    ++embedded_counts[result.transcript.output];
    acceptance += result.acceptance_rate;

    const auto direct = sample_instance(r, k, eps, families, derive_seed(seed, {tag(Stream::kTrial), tt, 2}));
    ++direct_counts[run(pi, direct.instance, derive_seed(seed, {tag(Stream::kTrial), tt, 3})).output];
  }

  OutputLawReport out;
  out.protocol = pi.name;
  out.trials = trials;
  out.mean_acceptance = acceptance / static_cast<double>(trials);
  std::map<double, std::pair<long, long>> merged;
  for (const auto& [v, c] : embedded_counts) merged[v].first = c;
  for (const auto& [v, c] : direct_counts) merged[v].second = c;
  for (const auto& [v, c] : merged) {
    out.values.push_back(v);
    out.embedded_law.push_back(static_cast<double>(c.first) / static_cast<double>(trials));
    out.direct_law.push_back(static_cast<double>(c.second) / static_cast<double>(trials));
    out.tvd += std::abs(out.embedded_law.back() - out.direct_law.back()) / 2.0;
  }
  return out;
}

}  // namespace xoscc
