#include <doctest.h>

#include "xoscc/distributions.hpp"
#include "xoscc/errors.hpp"
#include "xoscc/protocols.hpp"
#include "xoscc/rng.hpp"
#include "xoscc/welfare.hpp"

using namespace xoscc;

namespace {

Instance two_player() {
  return Instance{0, 0, 2, 4, {XOSValuation{{{1, 2}}, {}}, XOSValuation{{{2, 3}}, {}}}};
}

}  // namespace

TEST_CASE("gamma code") {
  Bits b;
  append_gamma(b, 1);
  CHECK(to_string(b) == "1");
  b.clear();
  append_gamma(b, 5);
  CHECK(to_string(b) == "00101");
  std::size_t pos = 0;
  CHECK(read_gamma(b, pos) == 5);
  CHECK(pos == 5);
}

TEST_CASE("clause encoding round trip") {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng.below(70));
    std::vector<ItemSet> clauses(rng.below(5));
    for (auto& c : clauses) {
      for (int it = 0; it < m; ++it) {
        if (rng.below(4) == 0) c.push_back(static_cast<Item>(it));
      }
    }
    const auto bits = encode_clauses(clauses, m);
    CHECK(bits.size() == encoding_length(clauses, m));
    CHECK(decode_clauses(bits, m) == clauses);
  }
  CHECK(item_width(1) == 1);
  CHECK(item_width(16) == 4);
  CHECK(item_width(17) == 5);
}

TEST_CASE("decoding is total") {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    Bits junk(rng.below(40));
    for (std::size_t i = 0; i < junk.size(); ++i) junk[i] = rng.coin();
    for (const auto& c : decode_clauses(junk, 10)) {
      for (Item it : c) CHECK(it < 10);
    }
  }
}

TEST_CASE("full revelation") {
  const auto inst = two_player();
  const auto t = run(full_revelation(), inst, 0);
  CHECK(t.output == 3.0);
  std::uint64_t expected = 0;
  for (const auto& v : inst.valuations) expected += encoding_length(v.clauses, inst.m);
  CHECK(t.worst_case_bits == expected);

  const auto fam = make_families(1, 3, 0.5, 8, 2);
  const auto high = sample_d1(3, 0.5, fam[0], 1, 1);
  CHECK(run(full_revelation(), high.instance, 0).output == 27.0);
  const auto any = sample_d1(3, 0.5, fam[0], 2);
  CHECK(run(full_revelation(), any.instance, 0).output == static_cast<double>(sw_clause_union(any.instance).value));
}

TEST_CASE("clause sketch") {
  CHECK(run(clause_sketch(1), two_player(), 0).output == 3.0);
  Instance empty{0, 0, 2, 4, std::vector<XOSValuation>(2)};
  CHECK(run(clause_sketch(2), empty, 0).output == 0.0);
  const auto fam = make_families(1, 2, 0.5, std::nullopt, 2);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = sample_d1(2, 0.5, fam[0], seed);
    CHECK(run(clause_sketch(100), s.instance, 0).output <= static_cast<double>(sw_clause_union(s.instance).value));
  }
}

TEST_CASE("threshold sits between the regimes") {
  CHECK(high_regime_bound(1, 3) == 27.0);
  CHECK(low_regime_bound(1, 3, 0.5) == 18.0);
  const double th = distinguisher_threshold(1, 3, 0.5);
  CHECK(th > 18.0);
  CHECK(th < 27.0);
  CHECK(low_regime_bound(2, 2, 0.5) == 128.0);
  CHECK(distinguisher_threshold(2, 2, 0.5) == 31.5);
}

TEST_CASE("theta distinguisher") {
  const auto fam = make_families(2, 2, 0.5, 2, 3);
  const auto pi = theta_distinguisher(full_revelation(), 2, 2, 0.5);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CHECK(run(pi, sample_dr(2, 2, 0.5, fam, seed, 1).instance, 0).output == 1.0);
  }
  const auto zero = theta_distinguisher(constant_protocol(), 2, 2, 0.5);
  CHECK(run(zero, sample_dr(2, 2, 0.5, fam, 1, 1).instance, 0).output == 0.0);
}

TEST_CASE("composition shifts the board") {
  const ProtocolContext ctx{1, 2, 0.5, 4, 1000000};
  const auto pi = make_protocol("const+full-rev", ctx);
  CHECK(pi.rounds == 2);
  const auto t = run(pi, two_player(), 0);
  CHECK(t.output == 3.0);
  CHECK(t.messages[0].size() == 2);
}

TEST_CASE("canonical input") {
  XOSValuation v{{{0, 1}, {2, 3}}, {Provenance{{1, 0}}, Provenance{{0, 1}}}};
  CHECK(to_string(canonical_input(v, 2, 2)) == "0110");
  CHECK(to_string(canonical_input(v, 2, 1)) == "00");
  CHECK(to_string(canonical_input(v, 3, 2)) == "010100000");
  CHECK(canonical_order({{2, 3}, {0, 5}, {2, 3}}) == std::vector<ItemSet>{{0, 5}, {2, 3}, {2, 3}});
}

TEST_CASE("protocol registry") {
  const ProtocolContext ctx{2, 2, 0.5, 2, 1000000};
  for (const char* name : {"full-rev", "sketch:2", "const", "theta:full-rev", "x-verbatim", "x-bit:1", "x-and", "x-or",
                           "x-parity", "count-parity", "canon-rev", "count-parity+full-rev"}) {
    CHECK_NOTHROW(make_protocol(name, ctx));
  }
  CHECK(protocol_names().size() == 12);
  CHECK(make_protocol("const:3:2", ctx).rounds == 3);
  CHECK(make_protocol("theta:sketch:2", ctx).rounds == 1);
  CHECK_THROWS_AS(make_protocol("nope", ctx), InvalidArgument);
  CHECK_THROWS_AS(make_protocol("x-bit:9", ctx), InvalidArgument);
}
