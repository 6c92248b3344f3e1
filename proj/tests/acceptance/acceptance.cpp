#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xoscc/distributions.hpp"
#include "xoscc/errors.hpp"
#include "xoscc/experiments.hpp"
#include "xoscc/family.hpp"
#include "xoscc/infotools.hpp"
#include "xoscc/protocols.hpp"
#include "xoscc/reduction.hpp"
#include "xoscc/rng.hpp"
#include "xoscc/welfare.hpp"

using namespace xoscc;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

Verdict welfare_level_one() {
  Verdict v{true, ""};
  for (int k : {3, 4, 5}) {
    ExperimentConfig cfg;
    cfg.r = 1;
    cfg.k = k;
    cfg.p = 8;
    cfg.trials = 100;
    cfg.seed = 1;
    const auto rep = experiment_gap(cfg);
    const long f1 = rep.summary["failures_theta1"].get<long>();
    const long f0 = rep.summary["failures_theta0"].get<long>();
    v.pass = v.pass && f1 == 0 && f0 == 0;
    v.detail += "k=" + std::to_string(k) + ": theta1 " + std::to_string(100 - f1) + "/100 at sw=" +
                std::to_string(k * k * k) + ", theta0 " + std::to_string(100 - f0) + "/100 at sw<=" +
                fmt("%g", rep.summary["bound_low"].get<double>()) + "; ";
  }
  return v;
}

Verdict welfare_level_two() {
  Verdict v;
  ExperimentConfig cfg;
  cfg.r = 2;
  cfg.k = 2;
  cfg.eps = 0.5;
  cfg.p = 3;
  cfg.trials = 50;
  cfg.seed = 1;
  try {
    const auto rep = experiment_gap(cfg);
    const long f1 = rep.summary["failures_theta1"].get<long>();
    const long f0 = rep.summary["failures_theta0"].get<long>();
    v.pass = f1 == 0 && f0 <= 5;
    v.detail = "theta1 " + std::to_string(50 - f1) + "/50 at sw>=32, theta0 " + std::to_string(50 - f0) +
               "/50 at sw<=128";
    return v;
  } catch (const FamilyInfeasible& e) {
    const auto params = derive_params(2, 2, 0.5, 3);
    v.pass = false;
    v.detail = std::string("p=3 family cannot exist (") + e.what() + "; p*t - C(p,2)*l = " +
               std::to_string(params.p * params.t - 3 * params.l) + " > q = " + std::to_string(params.q) + ")";
  }
  cfg.p = 2;
  const auto info = experiment_gap(cfg);
  v.detail += "; informational p=2 run: theta1 " + std::to_string(50 - info.summary["failures_theta1"].get<long>()) +
              "/50, theta0 " + std::to_string(50 - info.summary["failures_theta0"].get<long>()) + "/50";
  return v;
}

Verdict family_invariant() {
  Params params;
  params.p = 8;
  params.q = 20;
  params.t = 4;
  params.l = 2;
  int ok = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    ok += verify_family(generate_family(params, derive_seed(seed, {tag(Stream::kFamily)}))).ok ? 1 : 0;
  }
  return {ok == 1000, std::to_string(ok) + "/1000 families verified at (p=8,q=20,t=4,l=2)"};
}

Instance tiny_instance(std::uint64_t seed) {
  Rng rng(seed);
  Instance inst;
  inst.n = 1 + static_cast<int>(rng.below(3));
  inst.m = 8;
  for (int i = 0; i < inst.n; ++i) {
    XOSValuation v;
    const auto clauses = rng.below(4);
    for (std::uint64_t c = 0; c < clauses; ++c) {
      ItemSet s;
      for (Item it = 0; it < 8; ++it) {
        if (rng.below(3) == 0) s.push_back(it);
      }
      v.clauses.push_back(s);
    }
    inst.valuations.push_back(v);
  }
  return inst;
}

Verdict oracle_equivalence() {
  int agree = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto inst = tiny_instance(derive_seed(4, {seed}));
    agree += sw_bruteforce(inst).value == sw_clause_union(inst).value ? 1 : 0;
  }
  return {agree == 200, std::to_string(agree) + "/200 instances with sw_clause_union == sw_bruteforce"};
}

Verdict information_identities() {
  constexpr double tol = 1e-9;
  int ok = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(derive_seed(5, {seed}));
    const std::vector<int> sizes{2 + static_cast<int>(rng.below(3)), 2 + static_cast<int>(rng.below(3)),
                                 2 + static_cast<int>(rng.below(3))};
    const auto jd = random_joint({"X", "Y", "Z"}, sizes, rng.next(), seed % 2 == 1);

    const double chain = std::abs(entropy(jd, {"X", "Y", "Z"}) -
                                  (entropy(jd, {"X"}) + entropy(jd, {"Y"}, {"X"}) + entropy(jd, {"Z"}, {"X", "Y"})));
    const double mi_chain = std::abs(mutual_info(jd, {"X"}, {"Y", "Z"}) -
                                     (mutual_info(jd, {"X"}, {"Y"}) + mutual_info(jd, {"X"}, {"Z"}, {"Y"})));
    const double nonneg = std::min({entropy(jd, {"X"}, {"Y"}), mutual_info(jd, {"X"}, {"Y"}),
                                    mutual_info(jd, {"X"}, {"Z"}, {"Y"})});

    const auto q = random_joint({"X", "Y", "Z"}, sizes, rng.next());
    const auto pinsker = pinsker_check(jd, q, tol);

    JointDistribution binary({"X", "Y", "B"});
    for (const auto& [o, w] : jd.table()) binary.add({o[0], o[1], o[2] % 2}, w);
    const auto fano = fano_check(binary, {"X", "Y"}, "B", map_predictor(binary, {"X", "Y"}, "B"), tol);

    worst = std::max({worst, chain, mi_chain, -nonneg});
    if (chain <= tol && mi_chain <= tol && nonneg >= -tol && pinsker.ok && fano.ok) ++ok;
  }
  return {ok == 100, std::to_string(ok) + "/100 joints pass chain rule, nonnegativity, Pinsker and Fano; worst identity gap " +
                         fmt("%.3g", worst)};
}

Verdict direct_sum() {
  const ProtocolContext ctx{1, 2, 0.5, 2, kDefaultNodeCap};
  Verdict v{true, ""};
  int passed = 0;
  bool tight = false;
  for (const auto& name : direct_sum_protocols()) {
    const auto rep = direct_sum_report(make_protocol(name, ctx), 2, 0.5, 2);
    passed += rep.ok ? 1 : 0;
    v.pass = v.pass && rep.ok;
    if (name == "x-verbatim") {
      tight = true;
      for (const auto& t : rep.players) tight = tight && std::abs(t.mi - t.bound) <= 1e-6;
    }
    v.detail += name + " I=" + fmt("%.4g", rep.total_mi) + "<=" + fmt("%.4g", rep.sum_player_mi) + "; ";
  }
  v.pass = v.pass && passed >= 5 && tight;
  v.detail = std::to_string(passed) + " protocols within 1e-6, verbatim tight=" + (tight ? "yes" : "no") + ": " +
             v.detail;
  return v;
}

Verdict product_property() {
  const ProtocolContext ctx{2, 2, 0.5, 2, kDefaultNodeCap};
  const auto constant = verify_product_property(2, 2, 0.5, 2, make_protocol("const", ctx));
  const auto reveal = verify_product_property(2, 2, 0.5, 2, make_protocol("canon-rev", ctx));
  const auto shared = verify_product_property(2, 2, 0.5, 2, make_protocol("const", ctx), std::uint64_t{1} << 24,
                                              CompletionSampler::kSharedFooling);
  const bool pass = constant.max_mi <= 1e-9 && reveal.max_mi <= 1e-9 && shared.max_mi > 0.01;
  return {pass, "constant max MI " + fmt("%.3g", constant.max_mi) + ", full revelation max MI " +
                    fmt("%.3g", reveal.max_mi) + ", shared-fooling control " + fmt("%.4g", shared.max_mi)};
}

Verdict embedding() {
  const ProtocolContext ctx{2, 2, 0.5, 2, kDefaultNodeCap};
  const auto law = embedding_law_check(2, 0.5, 2, make_protocol("const+full-rev", ctx), 1);
  const auto families = make_families(2, 2, 0.5, 2, derive_seed(1, {tag(Stream::kFamily)}));
  const auto mc =
      compare_output_laws(make_protocol("theta:count-parity+full-rev", ctx), 2, 2, 0.5, families, 10000, 1);
  const bool pass = law.ok && mc.tvd <= 0.05;
  return {pass, "exact law TVD " + fmt("%.3g", law.tvd) + " (constant round 1), Monte Carlo TVD " + fmt("%.4f", mc.tvd) +
                    " over 10000 trials (1-bit round 1), mean acceptance " + fmt("%.3f", mc.mean_acceptance)};
}

Verdict cost_accounting() {
  bool pass = true;
  int checked = 0;
  const auto families = make_families(2, 2, 0.5, 2, 9);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto s = sample_instance(seed % 2 == 0 ? 1 : 2, 2, 0.5, families, seed);
    std::uint64_t expected = 0;
    for (const auto& v : s.instance.valuations) expected += encoding_length(v.clauses, s.instance.m);
    pass = pass && run(full_revelation(), s.instance, seed).worst_case_bits == expected;
    ++checked;
    for (int rounds : {1, 2, 3}) {
      for (int bits : {1, 4}) {
        const auto t = run(constant_protocol(rounds, bits), s.instance, seed);
        pass = pass && t.worst_case_bits == static_cast<std::uint64_t>(s.instance.n) * rounds * bits;
        ++checked;
      }
    }
  }
  return {pass, std::to_string(checked) + " transcripts with exact worst-case cost"};
}

struct Criterion {
  const char* title;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"xoscc acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {"welfare dichotomy, level 1", welfare_level_one},
      {"welfare dichotomy, level 2", welfare_level_two},
      {"family invariant", family_invariant},
      {"oracle equivalence", oracle_equivalence},
      {"information identities", information_identities},
      {"direct sum at toy scale", direct_sum},
      {"product property", product_property},
      {"embedding soundness", embedding},
      {"cost accounting", cost_accounting},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<std::size_t>(only) != i + 1) continue;
    Verdict v;
    try {
      v = criteria[i].check();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    while (!v.detail.empty() && (v.detail.back() == ' ' || v.detail.back() == ';')) v.detail.pop_back();
    std::printf("criterion %zu [%s] %s: %s\n", i + 1, v.pass ? "PASS" : "FAIL", criteria[i].title, v.detail.c_str());
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
