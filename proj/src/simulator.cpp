#include "xoscc/simulator.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "xoscc/errors.hpp"

namespace xoscc {
namespace {

std::uint64_t public_seed_of(std::uint64_t seed) { return derive_seed(seed, {tag(Stream::kPublic)}); }

Rng private_stream(std::uint64_t seed, int player, int round) {
  return Rng(derive_seed(seed, {tag(Stream::kPrivate), static_cast<std::uint64_t>(player),
                                static_cast<std::uint64_t>(round)}));
}

Transcript execute(const ProtocolSpec& spec, const Instance& inst, std::uint64_t seed, int start_round,
                   const std::vector<std::vector<Bits>>& forced, const std::vector<int>& order) {
  if (spec.rounds < 1) throw InvalidArgument("protocol must have at least one round");
  if (start_round < 1 || start_round > spec.rounds + 1) {
    throw InvalidArgument("start_round must lie in [1, rounds + 1]");
  }
  if (static_cast<int>(forced.size()) != start_round - 1) {
    throw DimensionMismatch("forced blackboard must hold exactly start_round - 1 rounds");
  }
  for (const auto& round : forced) {
    if (static_cast<int>(round.size()) != inst.n) {
      throw DimensionMismatch("forced blackboard round has the wrong number of players");
    }
  }
  const PublicInfo pub = public_info(inst);
  const std::uint64_t public_seed = public_seed_of(seed);

  Transcript out;
  out.seed = seed;
  out.messages = forced;
  out.messages.reserve(static_cast<std::size_t>(spec.rounds));

  for (int round = 1; round <= spec.rounds; ++round) {
    if (round >= start_round) {
      std::vector<Bits> current(static_cast<std::size_t>(inst.n));
      const BlackboardView board(out.messages, round - 1);
      for (int player : order) {
        Rng private_rng = private_stream(seed, player, round);
        const auto& input = inst.valuations[static_cast<std::size_t>(player)];
        MessageContext ctx{player, round, input, pub, board, public_seed, private_rng};
        Bits msg = spec.message_fn(ctx);
        const auto bound = spec.max_message_bits(player, round, input, pub);
        if (msg.size() > bound) {
          throw MessageTooLong("player " + std::to_string(player) + " sent " + std::to_string(msg.size()) +
                               " bits in round " + std::to_string(round) + ", bound is " +
                               std::to_string(bound));
        }
        current[static_cast<std::size_t>(player)] = std::move(msg);
      }
      out.messages.push_back(std::move(current));
    }
    for (int player = 0; player < inst.n; ++player) {
      const auto& input = inst.valuations[static_cast<std::size_t>(player)];
      out.worst_case_bits += spec.max_message_bits(player, round, input, pub);
      out.realized_bits += out.messages[static_cast<std::size_t>(round - 1)][static_cast<std::size_t>(player)].size();
    }
  }

  out.output = spec.referee_fn(RefereeContext{BlackboardView(out.messages, spec.rounds), pub, public_seed});
  return out;
}

std::vector<int> identity_order(int n) {
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  return order;
}

}  // namespace

std::string to_string(const Bits& bits) {
  std::string out;
  out.reserve(bits.size());
  for (bool b : bits) out.push_back(b ? '1' : '0');
  return out;
}

Bits bits_from_string(const std::string& text) {
  Bits out;
  out.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw InvalidArgument("bit strings may only contain '0' and '1'");
    out.push_back(c == '1');
  }
  return out;
}

int BlackboardView::players() const {
  return rounds_->empty() ? 0 : static_cast<int>(rounds_->front().size());
}

const Bits& BlackboardView::message(int round, int player) const {
  if (round < 1 || round > visible_) {
    throw SameRoundRead("round " + std::to_string(round) + " is not on the blackboard yet (" +
                        std::to_string(visible_) + " rounds visible)");
  }
  return rounds_->at(static_cast<std::size_t>(round - 1 + offset_)).at(static_cast<std::size_t>(player));
}

PublicInfo public_info(const Instance& inst) { return PublicInfo{inst.n, inst.m, inst.level, inst.k}; }

std::uint64_t public_seed_for(std::uint64_t seed) { return public_seed_of(seed); }

Bits compute_message(const ProtocolSpec& spec, const PublicInfo& pub, const XOSValuation& input,
                     int player, int round, const std::vector<std::vector<Bits>>& earlier,
                     std::uint64_t seed, std::optional<std::uint64_t> private_seed) {
  if (round < 1 || round > spec.rounds) throw InvalidArgument("round outside the protocol");
  if (static_cast<int>(earlier.size()) != round - 1) {
    throw DimensionMismatch("compute_message needs exactly round - 1 earlier rounds");
  }
  Rng private_rng = private_seed ? Rng(*private_seed) : private_stream(seed, player, round);
  MessageContext ctx{player, round, input, pub, BlackboardView(earlier, round - 1), public_seed_of(seed),
                     private_rng};
  Bits msg = spec.message_fn(ctx);
  if (msg.size() > spec.max_message_bits(player, round, input, pub)) {
    throw MessageTooLong("player " + std::to_string(player) + " exceeded the declared bound in round " +
                         std::to_string(round));
  }
  return msg;
}

Transcript run(const ProtocolSpec& spec, const Instance& inst, std::uint64_t seed) {
  return execute(spec, inst, seed, 1, {}, identity_order(inst.n));
}

Transcript run_from_round(const ProtocolSpec& spec, const Instance& inst, std::uint64_t seed,
                          int start_round, const std::vector<std::vector<Bits>>& forced_blackboard) {
  return execute(spec, inst, seed, start_round, forced_blackboard, identity_order(inst.n));
}

Transcript run_with_order(const ProtocolSpec& spec, const Instance& inst, std::uint64_t seed,
                          const std::vector<int>& player_order) {
  auto sorted = player_order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != identity_order(inst.n)) throw InvalidArgument("player_order must be a permutation of [n]");
  return execute(spec, inst, seed, 1, {}, player_order);
}

double replay_output(const ProtocolSpec& spec, const PublicInfo& pub, const Transcript& transcript) {
  return spec.referee_fn(RefereeContext{BlackboardView(transcript.messages, spec.rounds), pub,
                                        public_seed_of(transcript.seed)});
}

}  // namespace xoscc
