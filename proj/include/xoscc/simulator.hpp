#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "xoscc/model.hpp"
#include "xoscc/rng.hpp"

namespace xoscc {

using Bits = std::vector<bool>;

std::string to_string(const Bits& bits);
Bits bits_from_string(const std::string& text);

/// Facts every participant knows before the protocol starts.
struct PublicInfo {
  int n = 0;
  int m = 0;
  int level = 0;
  int k = 0;
};

/// Read-only window onto the blackboard. Only rounds that finished before
/// the current one are visible; touching anything else throws SameRoundRead.
class BlackboardView {
 public:
  BlackboardView(const std::vector<std::vector<Bits>>& rounds, int visible_rounds, int offset = 0)
      : rounds_(&rounds), visible_(visible_rounds), offset_(offset) {}

  int visible_rounds() const noexcept { return visible_; }

  /// View whose round 1 is this view's round `by + 1`; used when one
  /// protocol runs as the tail of another.
  BlackboardView shifted(int by) const { return BlackboardView(*rounds_, visible_ - by, offset_ + by); }

  int players() const;
  const Bits& message(int round, int player) const;  // round is 1-based

 private:
  const std::vector<std::vector<Bits>>* rounds_;
  int visible_;
  int offset_;
};

struct MessageContext {
  int player;
  int round;  // 1-based
  const XOSValuation& input;
  const PublicInfo& pub;
  BlackboardView board;
  std::uint64_t public_seed;
  Rng& private_rng;
};

struct RefereeContext {
  BlackboardView board;
  const PublicInfo& pub;
  std::uint64_t public_seed;
};

using MessageFn = std::function<Bits(const MessageContext&)>;
using RefereeFn = std::function<double(const RefereeContext&)>;
/// Declared per-player per-round bound, computed before the message is sent.
using BoundFn = std::function<std::size_t(int player, int round, const XOSValuation& input,
                                          const PublicInfo& pub)>;

struct ProtocolSpec {
  std::string name;
  int rounds = 1;
  BoundFn max_message_bits;
  MessageFn message_fn;
  RefereeFn referee_fn;
};

struct Transcript {
  std::vector<std::vector<Bits>> messages;  // [round][player]
  double output = 0.0;
  std::uint64_t realized_bits = 0;
  std::uint64_t worst_case_bits = 0;
  std::uint64_t seed = 0;
};

PublicInfo public_info(const Instance& inst);

/// Public-randomness seed a run with `seed` hands to every participant.
std::uint64_t public_seed_for(std::uint64_t seed);

/// The message `player` would write in `round` of a run with `seed`, given
/// her input and the earlier rounds. Uses the same private stream as `run`
/// unless `private_seed` replaces it.
Bits compute_message(const ProtocolSpec& spec, const PublicInfo& pub, const XOSValuation& input,
                     int player, int round, const std::vector<std::vector<Bits>>& earlier,
                     std::uint64_t seed, std::optional<std::uint64_t> private_seed = std::nullopt);

/// Runs all rounds. Within a round every message is computed from the
/// blackboard as it stood at the end of the previous round.
/// Throws MessageTooLong when a message exceeds its declared bound.
Transcript run(const ProtocolSpec& spec, const Instance& inst, std::uint64_t seed);

/// As `run`, but rounds before `start_round` are copied from
/// `forced_blackboard` instead of being computed.
Transcript run_from_round(const ProtocolSpec& spec, const Instance& inst, std::uint64_t seed,
                          int start_round, const std::vector<std::vector<Bits>>& forced_blackboard);

/// Recomputes the referee output from a finished transcript.
double replay_output(const ProtocolSpec& spec, const PublicInfo& pub, const Transcript& transcript);

/// Evaluation order of players within a round; identity by default. Exposed
/// so tests can check that order never matters.
Transcript run_with_order(const ProtocolSpec& spec, const Instance& inst, std::uint64_t seed,
                          const std::vector<int>& player_order);

}  // namespace xoscc
