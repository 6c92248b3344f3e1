#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "xoscc/distributions.hpp"
#include "xoscc/errors.hpp"
#include "xoscc/experiments.hpp"
#include "xoscc/family.hpp"
#include "xoscc/infotools.hpp"
#include "xoscc/io.hpp"
#include "xoscc/protocols.hpp"
#include "xoscc/reduction.hpp"
#include "xoscc/version.hpp"
#include "xoscc/welfare.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvariant = 2;
constexpr int kExitBudget = 3;

struct Global {
  std::uint64_t seed = 0;
  std::string out = "-";
  std::string format = "json";
  std::optional<std::uint64_t> budget;
};

struct Shape {
  int r = 1;
  int k = 3;
  double eps = 0.5;
  std::optional<int> p;
  std::string families;
};

void add_shape(CLI::App* app, Shape& s, bool with_r = true) {
  if (with_r) app->add_option("--r", s.r, "Number of rounds / recursion level")->check(CLI::PositiveNumber);
  app->add_option("--k", s.k, "Base size k >= 2")->check(CLI::Range(2, 64));
  app->add_option("--eps", s.eps, "Exponent eps in (0,1)");
  app->add_option("--p", s.p, "Family size p (default max(2, floor(exp(k^eps))))");
  app->add_option("--families", s.families, "Family ladder JSON instead of generating one");
}

xoscc::FamilyLadder ladder_for(const Shape& s, int r, std::uint64_t seed) {
  if (!s.families.empty()) {
    auto ladder = xoscc::ladder_from_json(xoscc::read_json_file(s.families));
    xoscc::check_ladder(r, s.k, s.eps, ladder);
    return ladder;
  }
  return xoscc::make_families(r, s.k, s.eps, s.p, xoscc::derive_seed(seed, {xoscc::tag(xoscc::Stream::kFamily)}));
}

int resolved_p(const Shape& s) { return s.p ? *s.p : xoscc::default_p(s.k, s.eps); }

void emit(const Global& g, const xoscc::Json& doc) { xoscc::write_text(g.out, doc.dump(2) + "\n"); }

int emit_report(const Global& g, const xoscc::ExperimentReport& report) {
  if (g.format == "csv") {
    xoscc::write_text(g.out, report.to_csv());
  } else {
    emit(g, report.to_json());
  }
  if (!report.invariant_ok) {
    std::cerr << "xoscc: invariant violated in experiment '" << report.name << "'\n";
    return kExitInvariant;
  }
  return kExitOk;
}

xoscc::Json envelope(const char* command, const Global& g, xoscc::Json config) {
  xoscc::Json j;
  j["tool"] = "xoscc";
  j["version"] = xoscc::kVersion;
  j["command"] = command;
  j["config"] = std::move(config);
  j["seed"] = g.seed;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hard-instance generation, welfare oracles and protocol experiments for XOS auctions"};
  app.set_version_flag("--version", std::string(xoscc::kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  app.add_option("--seed", g.seed, "Base seed")->capture_default_str();
  app.add_option("--out", g.out, "Output path ('-' for stdout)")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--budget", g.budget, "Node, state or enumeration budget of the command");

  int code = kExitOk;

  // family
  auto* family = app.add_subcommand("family", "Intersecting families");
  family->require_subcommand(1);
  Shape fam_shape;
  auto* family_gen = family->add_subcommand("gen", "Generate the family ladder for levels 1..r");
  add_shape(family_gen, fam_shape);
  family_gen->callback([&] {
    const auto ladder = ladder_for(fam_shape, fam_shape.r, g.seed);
    emit(g, xoscc::to_json(ladder));
  });
  std::string family_path;
  auto* family_check = family->add_subcommand("check", "Verify every family in a file");
  family_check->add_option("--family", family_path, "Family or ladder JSON")->required();
  family_check->callback([&] {
    const auto ladder = xoscc::ladder_from_json(xoscc::read_json_file(family_path));
    xoscc::Json reports = xoscc::Json::array();
    bool ok = true;
    for (const auto& f : ladder) {
      const auto rep = xoscc::verify_family(f);
      ok = ok && rep.ok;
      auto j = xoscc::to_json(rep);
      j["p"] = f.p;
      j["q"] = f.q;
      j["t"] = f.t;
      j["l"] = f.l;
      reports.push_back(j);
    }
    auto doc = envelope("family check", g, {{"family", family_path}});
    doc["families"] = reports;
    doc["ok"] = ok;
    emit(g, doc);
    if (!ok) code = kExitInvariant;
  });

  // gen
  Shape gen_shape;
  std::optional<int> force_theta;
  auto* gen = app.add_subcommand("gen", "Sample a hard instance with its ground truth");
  add_shape(gen, gen_shape);
  gen->add_option("--force-theta", force_theta, "Fix theta* to 0 or 1")->check(CLI::Range(0, 1));
  gen->callback([&] {
    const auto ladder = ladder_for(gen_shape, gen_shape.r, g.seed);
    const auto sample = xoscc::sample_instance(gen_shape.r, gen_shape.k, gen_shape.eps, ladder, g.seed, force_theta);
    emit(g, xoscc::to_json(sample));
  });

  // welfare
  std::string instance_path;
  std::string oracle = "clause-union";
  auto* welfare = app.add_subcommand("welfare", "Exact social welfare of an instance");
  welfare->add_option("--instance", instance_path, "Instance or sample JSON")->required();
  welfare->add_option("--oracle", oracle, "Welfare oracle")
      ->check(CLI::IsMember({"clause-union", "bruteforce"}))
      ->capture_default_str();
  welfare->callback([&] {
    const auto inst = xoscc::read_instance_document(xoscc::read_json_file(instance_path));
    const auto result = oracle == "bruteforce"
                            ? xoscc::sw_bruteforce(inst, g.budget.value_or(xoscc::kDefaultBruteforceBudget))
                            : xoscc::sw_clause_union(inst, g.budget.value_or(xoscc::kDefaultNodeCap));
    auto doc = envelope("welfare", g, {{"instance", instance_path}, {"oracle", oracle}});
    doc["value"] = result.value;
    doc["witness"] = result.witness.bundles();
    doc["witness_clauses"] = result.witness_clauses;
    doc["oracle"] = result.oracle;
    doc["nodes_expanded"] = result.nodes_expanded;
    emit(g, doc);
  });

  // run
  std::string run_protocol = "full-rev";
  std::string run_instance;
  Shape run_shape;
  auto* run = app.add_subcommand("run", "Run a protocol on an instance");
  run->add_option("--protocol", run_protocol, "Protocol name")->capture_default_str();
  run->add_option("--instance", run_instance, "Instance or sample JSON")->required();
  run->add_option("--eps", run_shape.eps, "Exponent eps for theta:<inner>");
  run->add_option("--p", run_shape.p, "p for the canonical protocols");
  run->callback([&] {
    const auto inst = xoscc::read_instance_document(xoscc::read_json_file(run_instance));
    run_shape.k = inst.k;
    const xoscc::ProtocolContext ctx{inst.level, inst.k, run_shape.eps, resolved_p(run_shape),
                                     g.budget.value_or(xoscc::kDefaultNodeCap)};
    const auto spec = xoscc::make_protocol(run_protocol, ctx);
    const auto transcript = xoscc::run(spec, inst, g.seed);
    auto doc = envelope("run", g, {{"protocol", spec.name}, {"instance", run_instance}});
    doc["transcript"] = xoscc::to_json(transcript);
    emit(g, doc);
  });

  // mi-report
  std::string mi_protocol = "x-verbatim";
  Shape mi_shape;
  mi_shape.k = 2;
  auto* mi = app.add_subcommand("mi-report", "Exact direct-sum terms of a one-round protocol");
  mi->add_option("--protocol", mi_protocol, "Protocol name")->capture_default_str();
  add_shape(mi, mi_shape, false);
  mi->callback([&] {
    const int p = mi_shape.p.value_or(2);
    const xoscc::ProtocolContext ctx{1, mi_shape.k, mi_shape.eps, p, xoscc::kDefaultNodeCap};
    const auto rep = xoscc::direct_sum_report(xoscc::make_protocol(mi_protocol, ctx), mi_shape.k, mi_shape.eps, p,
                                              g.budget.value_or(std::uint64_t{1} << 22));
    auto doc = envelope("mi-report", g, {{"protocol", mi_protocol}, {"k", mi_shape.k}, {"eps", mi_shape.eps}, {"p", p}});
    doc["report"] = xoscc::to_json(rep);
    emit(g, doc);
    if (!rep.ok) code = kExitInvariant;
  });

  // embed
  std::string embed_protocol = "count-parity+full-rev";
  std::string lower_path;
  long cap = xoscc::kDefaultRejectionCap;
  Shape embed_shape;
  auto* embed = app.add_subcommand("embed", "Run a level-r protocol on a level-(r-1) instance by round elimination");
  embed->add_option("--protocol", embed_protocol, "Protocol name (two or more rounds)")->capture_default_str();
  embed->add_option("--lower-instance", lower_path, "Lower-level instance or sample JSON")->required();
  embed->add_option("--cap", cap, "Rejection attempts per player")->check(CLI::PositiveNumber)->capture_default_str();
  embed->add_option("--eps", embed_shape.eps, "Exponent eps");
  embed->add_option("--p", embed_shape.p, "Family size p");
  embed->add_option("--families", embed_shape.families, "Family ladder JSON for levels 1..r");
  embed->callback([&] {
    const auto lower = xoscc::read_instance_document(xoscc::read_json_file(lower_path));
    embed_shape.k = lower.k;
    const int r = lower.level + 1;
    const auto ladder = ladder_for(embed_shape, r, g.seed);
    const xoscc::ProtocolContext ctx{r, lower.k, embed_shape.eps, ladder.front().p,
                                     g.budget.value_or(xoscc::kDefaultNodeCap)};
    const auto spec = xoscc::make_protocol(embed_protocol, ctx);
    auto doc = envelope("embed", g, {{"protocol", spec.name}, {"lower_instance", lower_path}, {"cap", cap}});
    try {
      const auto result = xoscc::embed(spec, lower, lower.k, embed_shape.eps, ladder, g.seed, cap);
      doc["transcript"] = xoscc::to_json(result.transcript);
      doc["diagnostics"] = {{"j_star", result.j_star},
                            {"attempts", result.attempts},
                            {"total_attempts", result.total_attempts},
                            {"acceptance_rate", result.acceptance_rate}};
    } catch (const xoscc::RejectionCapExceeded& e) {
      doc["error"] = e.what();
      doc["diagnostics"] = {{"player", e.player()}, {"attempts", e.attempts()}};
      emit(g, doc);
      code = kExitBudget;
      return;
    }
    emit(g, doc);
  });

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Named experiments");
  experiment->require_subcommand(1);
  xoscc::ExperimentConfig cfg;
  const auto add_config = [&cfg](CLI::App* sub) {
    sub->add_option("--r", cfg.r, "Rounds")->check(CLI::PositiveNumber);
    sub->add_option("--k", cfg.k, "Base size k >= 2")->check(CLI::Range(2, 64));
    sub->add_option("--eps", cfg.eps, "Exponent eps in (0,1)");
    sub->add_option("--p", cfg.p, "Family size p");
    sub->add_option("--trials", cfg.trials, "Trials")->check(CLI::NonNegativeNumber);
    sub->add_option("--protocol", cfg.protocol, "Protocol name");
    sub->add_option("--cap", cfg.rejection_cap, "Rejection attempts per player");
  };
  const auto finish = [&](auto fn) {
    cfg.seed = g.seed;
    if (g.budget) cfg.node_cap = *g.budget;
    code = emit_report(g, fn(cfg));
  };
  auto* gap = experiment->add_subcommand("gap", "Welfare dichotomy per regime");
  add_config(gap);
  gap->callback([&] { finish(xoscc::experiment_gap); });
  auto* distinguish = experiment->add_subcommand("distinguish", "theta* recovery error of a protocol");
  add_config(distinguish);
  distinguish->callback([&] { finish(xoscc::experiment_distinguish); });
  auto* mi_exp = experiment->add_subcommand("mi", "Direct-sum and product-property checks");
  add_config(mi_exp);
  mi_exp->callback([&] {
    if (mi_exp->count("--k") == 0) cfg.k = 2;
    if (mi_exp->count("--p") == 0) cfg.p = 2;
    finish(xoscc::experiment_mi);
  });
  auto* embed_exp = experiment->add_subcommand("embed", "Embedding law and output-law comparison");
  add_config(embed_exp);
  embed_exp->callback([&] {
    if (embed_exp->count("--r") == 0) cfg.r = 2;
    if (embed_exp->count("--k") == 0) cfg.k = 2;
    if (embed_exp->count("--protocol") == 0) cfg.protocol = "theta:count-parity+full-rev";
    if (embed_exp->count("--p") == 0) cfg.p = 2;
    finish(xoscc::experiment_embed);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const xoscc::BudgetExceeded& e) {
    std::cerr << "xoscc: budget exceeded: " << e.what() << "\n";
    return kExitBudget;
  } catch (const xoscc::RejectionCapExceeded& e) {
    std::cerr << "xoscc: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "xoscc: " << e.what() << "\n";
    return kExitError;
  }
  return code;
}
