#include <doctest.h>

#include "xoscc/distributions.hpp"
#include "xoscc/errors.hpp"
#include "xoscc/infotools.hpp"
#include "xoscc/protocols.hpp"
#include "xoscc/reduction.hpp"

using namespace xoscc;

namespace {

const ProtocolContext kCtx{2, 2, 0.5, 2, 1000000};

}  // namespace

TEST_CASE("direct sum terms") {
  const auto constant = direct_sum_report(make_protocol("const", kCtx), 2, 0.5, 2);
  CHECK(constant.ok);
  CHECK(constant.total_mi == doctest::Approx(0.0));
  const auto verbatim = direct_sum_report(make_protocol("x-verbatim", kCtx), 2, 0.5, 2);
  CHECK(verbatim.ok);
  REQUIRE(verbatim.players.size() == 4);
  for (const auto& t : verbatim.players) {
    CHECK(t.mi == doctest::Approx(1.0));
    CHECK(t.bound == doctest::Approx(1.0));
  }
  const auto bit = direct_sum_report(make_protocol("x-bit:0", kCtx), 2, 0.5, 2);
  CHECK(bit.ok);
  for (const auto& t : bit.players) CHECK(t.mi <= 0.5 + 1e-9);
  CHECK_THROWS_AS(direct_sum_report(make_protocol("const", kCtx), 2, 0.5, 2, 4), BudgetExceeded);
  CHECK_THROWS_AS(direct_sum_report(make_protocol("const:2", kCtx), 2, 0.5, 2), InvalidArgument);
}

TEST_CASE("label-dependent protocols are refused") {
  CHECK_THROWS_AS(direct_sum_report(full_revelation(), 2, 0.5, 2), InvalidArgument);
}

TEST_CASE("product property") {
  const auto constant = verify_product_property(2, 2, 0.5, 2, make_protocol("const", kCtx));
  CHECK(constant.ok);
  CHECK(constant.max_mi <= 1e-9);
  const auto reveal = verify_product_property(2, 2, 0.5, 2, make_protocol("canon-rev", kCtx));
  CHECK(reveal.ok);
  const auto shared = verify_product_property(2, 2, 0.5, 2, make_protocol("const", kCtx), 1u << 24,
                                              CompletionSampler::kSharedFooling);
  CHECK(shared.max_mi > 0.01);
  CHECK_THROWS_AS(verify_product_property(2, 2, 0.5, 2, make_protocol("const", kCtx), 16), BudgetExceeded);
}

TEST_CASE("embedding law") {
  const auto constant = embedding_law_check(2, 0.5, 2, make_protocol("const+full-rev", kCtx), 1);
  CHECK(constant.ok);
  CHECK(constant.tvd <= 1e-12);
  const auto parity = embedding_law_check(2, 0.5, 2, make_protocol("count-parity+full-rev", kCtx), 2);
  CHECK(parity.ok);
}

TEST_CASE("embedding with a constant first round accepts at once") {
  const auto fam = make_families(2, 2, 0.5, 2, 1);
  const auto lower = sample_d1(2, 0.5, fam[0], 3, 1);
  const auto pi = make_protocol("theta:const+full-rev", kCtx);
  const auto e = embed(pi, lower.instance, 2, 0.5, fam, 4);
  for (long a : e.attempts) CHECK(a == 1);
  CHECK(e.acceptance_rate == doctest::Approx(1.0));
  CHECK(e.embedded.n == 16);
  CHECK_NOTHROW(e.embedded.validate());
  CHECK(e.transcript.output == 1.0);
}

TEST_CASE("embedding forces the sampled first round") {
  const auto fam = make_families(2, 2, 0.5, 2, 1);
  const auto lower = sample_d1(2, 0.5, fam[0], 5);
  const auto pi = make_protocol("count-parity+full-rev", kCtx);
  const auto e = embed(pi, lower.instance, 2, 0.5, fam, 6);
  CHECK(e.transcript.messages[0] == e.round_one);
  const auto rerun = run(pi, e.embedded, e.transcript.seed);
  CHECK(rerun.messages[0] == e.round_one);
}

TEST_CASE("rejection cap") {
  const auto fam = make_families(2, 2, 0.5, 2, 1);
  const auto lower = sample_d1(2, 0.5, fam[0], 5);
  const auto pi = make_protocol("canon-rev+full-rev", kCtx);
  CHECK_THROWS_AS(embed(pi, lower.instance, 2, 0.5, fam, 6, 1), RejectionCapExceeded);
  CHECK_THROWS_AS(embed(make_protocol("const", kCtx), lower.instance, 2, 0.5, fam, 6), InvalidArgument);
}

TEST_CASE("output laws agree") {
  const auto fam = make_families(2, 2, 0.5, 2, 1);
  const auto rep = compare_output_laws(make_protocol("theta:count-parity+full-rev", kCtx), 2, 2, 0.5, fam, 400, 7);
  CHECK(rep.trials == 400);
  CHECK(rep.tvd <= 0.15);
}
