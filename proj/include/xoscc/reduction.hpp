#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xoscc/distributions.hpp"
#include "xoscc/infotools.hpp"
#include "xoscc/simulator.hpp"

namespace xoscc {

inline constexpr long kDefaultRejectionCap = 100'000;

struct EmbedResult {
  Transcript transcript;        // run of the level-r protocol with round 1 forced
  Instance embedded;            // the constructed level-r instance
  std::vector<Item> sigma;
  int j_star = 0;
  std::vector<Bits> round_one;  // publicly sampled Π1
  std::vector<long> attempts;   // per player, attempts until acceptance
  long total_attempts = 0;
  double acceptance_rate = 0.0;  // players / total attempts
};

/// Completes one player's level-r input: draws her fooling sub-instances
/// given (σ, j*) and her special view until her round-1 message equals
/// `target`. Sees nothing of any other player. Throws RejectionCapExceeded
/// after `cap` attempts.
XOSValuation complete_player(const ProtocolSpec& pi, int r, int k, double eps, const FamilyLadder& families,
                             const ViewConditioning& conditioned, int player, const Bits& target,
                             std::uint64_t seed, long cap, long* attempts = nullptr);

/// Runs the level-r protocol `pi` as an (r-1)-round protocol on
/// `lower_instance`: samples (Π1, σ, j*) from a throwaway level-r
/// instance, copies every lower player into each group as her special
/// view, completes fooling views by rejection and then runs pi from round 2
/// with round 1 forced. Needs pi.rounds >= 2 and families for levels 1..r.
EmbedResult embed(const ProtocolSpec& pi, const Instance& lower_instance, int k, double eps,
                  const FamilyLadder& families, std::uint64_t seed, long rejection_cap = kDefaultRejectionCap);

enum class CompletionSampler {
  kIndependent,     // every player draws her own fooling views
  kSharedFooling,   // negative control: one draw reused by every player
};

struct ProductTerm {
  int player = 0;
  double mi = 0.0;
};

struct ProductReport {
  std::string protocol;
  std::string sampler;
  int r = 2;
  int k = 0;
  int p = 0;
  std::vector<int> window;  // players whose views are enumerated
  std::uint64_t outcomes = 0;
  std::vector<ProductTerm> terms;
  double max_mi = 0.0;
  bool ok = false;  // max_mi <= tol
};

/// Exact check that, given (σ, j*), her special view and the round-1
/// messages, a player's fooling views are independent of every other
/// player's views. Computes for each i in the window
///   I(F_i ; F_{-i}, S_{-i}, J1 | S_i, Π, J)
/// where J1 is j* of the special instance and -i ranges over the window.
/// The window is all of group 0 plus the first player of group 1, which
/// shares her special view with player 0. Views are canonical inputs, so the
/// round-1 protocol must depend on its input only through canonical_input.
/// Level 2 only. Throws BudgetExceeded when the enumeration is too large.
ProductReport verify_product_property(int r, int k, double eps, int p, const ProtocolSpec& pi,
                                      std::uint64_t budget = 1u << 24,
                                      CompletionSampler sampler = CompletionSampler::kIndependent,
                                      double tol = 1e-9);

struct EmbeddingLawReport {
  std::string protocol;
  int k = 0;
  int p = 0;
  int j_star = 0;
  std::vector<Bits> round_one;  // window players' coordinates of Π1
  double tvd = 0.0;             // embedded law vs level-2 law given (Π1, σ, j*)
  double lower_shift = 0.0;     // TVD(ψ, D1) on the special views
  bool ok = false;              // tvd <= tol
};

/// Exact law of the embedded level-2 window views (lower instance drawn from
/// ψ = law of the special instance given (Π1, σ, j*), fooling views from
/// the rejection kernel) against the level-2 law conditioned on the same
/// (Π1, σ, j*). Π1 and j* are drawn with `seed`.
EmbeddingLawReport embedding_law_check(int k, double eps, int p, const ProtocolSpec& pi, std::uint64_t seed,
                                       std::uint64_t budget = 1u << 24, double tol = 1e-12);

struct OutputLawReport {
  std::string protocol;
  long trials = 0;
  std::vector<double> values;        // distinct outputs, ascending
  std::vector<double> embedded_law;  // π' on lower instances from D_{r-1}
  std::vector<double> direct_law;    // π on instances from D_r
  double tvd = 0.0;
  double mean_acceptance = 0.0;
};

/// Monte Carlo comparison of π' (embed on lower instances from D_{r-1}) and
/// π (run on fresh D_r instances).
OutputLawReport compare_output_laws(const ProtocolSpec& pi, int r, int k, double eps,
                                    const FamilyLadder& families, long trials, std::uint64_t seed,
                                    long rejection_cap = kDefaultRejectionCap);

}  // namespace xoscc
