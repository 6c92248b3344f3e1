#include <doctest.h>

#include "xoscc/distributions.hpp"
#include "xoscc/errors.hpp"
#include "xoscc/protocols.hpp"
#include "xoscc/simulator.hpp"

using namespace xoscc;

namespace {

Sample small_sample(std::uint64_t seed) {
  const auto fam = make_families(1, 2, 0.5, std::nullopt, 1);
  return sample_d1(2, 0.5, fam[0], seed);
}

// Two rounds; round 2 echoes the xor of every round-1 bit plus a private coin.
ProtocolSpec echo_protocol() {
  ProtocolSpec spec;
  spec.name = "echo";
  spec.rounds = 2;
  spec.max_message_bits = [](int, int, const XOSValuation&, const PublicInfo&) { return std::size_t{2}; };
  spec.message_fn = [](const MessageContext& ctx) {
    if (ctx.round == 1) return Bits{ctx.input.clauses.size() % 2 == 1, ctx.private_rng.coin()};
    bool acc = false;
    for (int i = 0; i < ctx.board.players(); ++i) acc = acc != ctx.board.message(1, i)[0];
    return Bits{acc};
  };
  spec.referee_fn = [](const RefereeContext& ctx) {
    double total = 0;
    for (int i = 0; i < ctx.board.players(); ++i) total += ctx.board.message(2, i)[0] ? 1 : 0;
    return total;
  };
  return spec;
}

}  // namespace

TEST_CASE("bits round trip") {
  const Bits b{true, false, true, true};
  CHECK(to_string(b) == "1011");
  CHECK(bits_from_string("1011") == b);
  CHECK(bits_from_string("").empty());
  CHECK_THROWS_AS(bits_from_string("102"), InvalidArgument);
}

TEST_CASE("runs are deterministic") {
  const auto s = small_sample(3);
  const auto a = run(echo_protocol(), s.instance, 77);
  const auto b = run(echo_protocol(), s.instance, 77);
  CHECK(a.messages == b.messages);
  CHECK(a.output == b.output);
}

TEST_CASE("player order never matters") {
  const auto s = small_sample(4);
  const auto a = run(echo_protocol(), s.instance, 5);
  const auto b = run_with_order(echo_protocol(), s.instance, 5, {3, 1, 0, 2});
  CHECK(a.messages == b.messages);
  CHECK(a.output == b.output);
}

TEST_CASE("reading the current round throws") {
  ProtocolSpec spec = constant_protocol(1, 1);
  spec.message_fn = [](const MessageContext& ctx) { return ctx.board.message(1, 0); };
  CHECK_THROWS_AS(run(spec, small_sample(1).instance, 0), SameRoundRead);
}

TEST_CASE("messages over the declared bound throw") {
  ProtocolSpec spec = constant_protocol(1, 1);
  spec.message_fn = [](const MessageContext&) { return Bits{true, true}; };
  CHECK_THROWS_AS(run(spec, small_sample(1).instance, 0), MessageTooLong);
}

TEST_CASE("cost of constant protocols") {
  const auto s = small_sample(2);
  const auto t = run(constant_protocol(3, 2), s.instance, 1);
  CHECK(t.worst_case_bits == 4u * 3u * 2u);
  CHECK(t.realized_bits == 4u * 3u * 2u);
  const auto one = run(constant_protocol(), s.instance, 1);
  CHECK(one.realized_bits == 4u);
  CHECK(one.output == 0.0);
}

TEST_CASE("run_from_round") {
  const auto s = small_sample(6);
  const auto spec = echo_protocol();
  const auto base = run(spec, s.instance, 12);
  const auto from_one = run_from_round(spec, s.instance, 12, 1, {});
  CHECK(from_one.messages == base.messages);
  const auto forced = run_from_round(spec, s.instance, 12, 2, {base.messages[0]});
  CHECK(forced.messages == base.messages);
  CHECK(forced.output == base.output);
  std::vector<Bits> off(4, Bits{true, true});
  const auto off_support = run_from_round(spec, s.instance, 12, 2, {off});
  CHECK(off_support.messages.size() == 2);
  CHECK(off_support.messages[0] == off);
}

TEST_CASE("replay reproduces the output") {
  const auto s = small_sample(8);
  const auto spec = echo_protocol();
  const auto t = run(spec, s.instance, 21);
  CHECK(replay_output(spec, public_info(s.instance), t) == t.output);
}

TEST_CASE("compute_message matches run") {
  const auto s = small_sample(9);
  const auto spec = echo_protocol();
  const auto t = run(spec, s.instance, 33);
  const auto pub = public_info(s.instance);
  for (int i = 0; i < 4; ++i) {
    CHECK(compute_message(spec, pub, s.instance.valuations[i], i, 1, {}, 33) == t.messages[0][i]);
    CHECK(compute_message(spec, pub, s.instance.valuations[i], i, 2, {t.messages[0]}, 33) == t.messages[1][i]);
  }
}
