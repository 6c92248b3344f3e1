#include "xoscc/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "xoscc/errors.hpp"
#include "xoscc/protocols.hpp"
#include "xoscc/reduction.hpp"
#include "xoscc/version.hpp"
#include "xoscc/welfare.hpp"

namespace xoscc {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string num(long v) { return std::to_string(v); }
std::string num(unsigned long v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

int resolved_p(const ExperimentConfig& cfg) { return cfg.p ? *cfg.p : default_p(cfg.k, cfg.eps); }

FamilyLadder experiment_families(const ExperimentConfig& cfg) {
  return make_families(cfg.r, cfg.k, cfg.eps, resolved_p(cfg), derive_seed(cfg.seed, {tag(Stream::kFamily)}));
}

ProtocolContext protocol_context(const ExperimentConfig& cfg) {
  return ProtocolContext{cfg.r, cfg.k, cfg.eps, resolved_p(cfg), cfg.node_cap};
}

ExperimentReport start(const char* name, const ExperimentConfig& cfg, std::vector<std::string> columns) {
  ExperimentReport report;
  report.name = name;
  report.config = config_json(cfg);
  report.columns = std::move(columns);
  report.summary = Json::object();
  return report;
}

double rate(long hits, long total) { return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total); }

}  // namespace

Json ExperimentReport::to_json() const {
  Json j;
  j["tool"] = "xoscc";
  j["version"] = kVersion;
  j["experiment"] = name;
  j["config"] = config;
  j["seed"] = config.contains("seed") ? config["seed"] : Json(nullptr);
  Json table = Json::array();
  for (const auto& row : rows) {
    Json obj;
    for (std::size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = row[c];
    table.push_back(obj);
  }
  j["rows"] = table;
  j["summary"] = summary;
  j["invariant_ok"] = invariant_ok;
  return j;
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream out;
  for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << csv_cell(columns[c]);
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_cell(row[c]);
    out << '\n';
  }
  return out.str();
}

Json config_json(const ExperimentConfig& cfg) {
  Json j;
  j["r"] = cfg.r;
  j["k"] = cfg.k;
  j["eps"] = cfg.eps;
  j["p"] = cfg.p ? Json(*cfg.p) : Json(nullptr);
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  j["node_cap"] = cfg.node_cap;
  j["protocol"] = cfg.protocol;
  j["rejection_cap"] = cfg.rejection_cap;
  return j;
}

ExperimentReport experiment_gap(const ExperimentConfig& cfg) {
  auto report = start("gap", cfg, {"trial", "theta_star", "sw", "bound_high", "bound_low", "pass", "nodes_expanded"});
  if (cfg.trials < 0) throw InvalidArgument("trials must be non-negative");
  const double high = high_regime_bound(cfg.r, cfg.k);
  const double low = low_regime_bound(cfg.r, cfg.k, cfg.eps);
  long passes[2] = {0, 0};
  std::int64_t max_sw[2] = {0, 0};
  std::int64_t min_sw[2] = {-1, -1};
  if (cfg.trials > 0) {
    const auto families = experiment_families(cfg);
    for (int theta = 1; theta >= 0; --theta) {
      for (long t = 0; t < cfg.trials; ++t) {
        const auto sample = sample_instance(
            cfg.r, cfg.k, cfg.eps, families,
            derive_seed(cfg.seed, {tag(Stream::kTrial), static_cast<std::uint64_t>(theta), static_cast<std::uint64_t>(t)}),
            theta);
        const auto sw = sw_clause_union(sample.instance, cfg.node_cap);
        const auto value = static_cast<double>(sw.value);
        const bool pass = theta == 1 ? (cfg.r == 1 ? value == high : value >= high) : value <= low;
        passes[theta] += pass ? 1 : 0;
        max_sw[theta] = std::max(max_sw[theta], sw.value);
        min_sw[theta] = min_sw[theta] < 0 ? sw.value : std::min(min_sw[theta], sw.value);
        report.rows.push_back({num(static_cast<long>(report.rows.size())), num(theta), num(sw.value), num(high), num(low),
                               flag(pass), num(sw.nodes_expanded)});
      }
    }
  }
  const long fail1 = cfg.trials - passes[1];
  const long fail0 = cfg.trials - passes[0];
  report.summary["p"] = resolved_p(cfg);
  report.summary["bound_high"] = high;
  report.summary["bound_low"] = low;
  report.summary["trials_per_regime"] = cfg.trials;
  report.summary["pass_rate_theta1"] = rate(passes[1], cfg.trials);
  report.summary["pass_rate_theta0"] = rate(passes[0], cfg.trials);
  report.summary["failures_theta1"] = fail1;
  report.summary["failures_theta0"] = fail0;
  report.summary["min_sw_theta1"] = min_sw[1];
  report.summary["max_sw_theta0"] = max_sw[0];
  report.invariant_ok = fail1 == 0 && (cfg.r > 1 || fail0 == 0);
  return report;
}

ExperimentReport experiment_distinguish(const ExperimentConfig& cfg) {
  auto report = start("distinguish", cfg, {"trial", "theta_star", "guess", "correct", "worst_case_bits", "realized_bits"});
  if (cfg.trials < 0) throw InvalidArgument("trials must be non-negative");
  const auto ctx = protocol_context(cfg);
  const auto name = cfg.protocol.rfind("theta:", 0) == 0 ? cfg.protocol : "theta:" + cfg.protocol;
  const auto protocol = make_protocol(name, ctx);
  long errors[2] = {0, 0};
  long counts[2] = {0, 0};
  std::uint64_t max_worst = 0;
  double sum_worst = 0.0;
  double sum_realized = 0.0;
  if (cfg.trials > 0) {
    const auto families = experiment_families(cfg);
    for (long t = 0; t < cfg.trials; ++t) {
      const auto tt = static_cast<std::uint64_t>(t);
      const auto sample = sample_instance(cfg.r, cfg.k, cfg.eps, families, derive_seed(cfg.seed, {tag(Stream::kTrial), tt}));
      const auto transcript = run(protocol, sample.instance, derive_seed(cfg.seed, {tag(Stream::kTrial), tt, 1}));
      const int theta = sample.truth.theta_star;
      const int guess = transcript.output > 0.5 ? 1 : 0;
      ++counts[theta];
      errors[theta] += guess != theta ? 1 : 0;
      max_worst = std::max(max_worst, transcript.worst_case_bits);
      sum_worst += static_cast<double>(transcript.worst_case_bits);
      sum_realized += static_cast<double>(transcript.realized_bits);
      report.rows.push_back({num(t), num(theta), num(guess), flag(guess == theta), num(transcript.worst_case_bits),
                             num(transcript.realized_bits)});
    }
  }
  report.summary["protocol"] = protocol.name;
  report.summary["p"] = resolved_p(cfg);
  report.summary["threshold"] = distinguisher_threshold(cfg.r, cfg.k, cfg.eps);
  report.summary["trials"] = cfg.trials;
  report.summary["error_rate"] = rate(errors[0] + errors[1], cfg.trials);
  report.summary["error_rate_theta0"] = rate(errors[0], counts[0]);
  report.summary["error_rate_theta1"] = rate(errors[1], counts[1]);
  report.summary["trials_theta0"] = counts[0];
  report.summary["trials_theta1"] = counts[1];
  report.summary["max_worst_case_bits"] = max_worst;
  report.summary["mean_worst_case_bits"] = cfg.trials ? sum_worst / static_cast<double>(cfg.trials) : 0.0;
  report.summary["mean_realized_bits"] = cfg.trials ? sum_realized / static_cast<double>(cfg.trials) : 0.0;
  return report;
}

std::vector<std::string> direct_sum_protocols() {
  return {"const", "x-verbatim", "x-bit:0", "x-bit:1", "x-and", "x-or", "x-parity", "count-parity"};
}

ExperimentReport experiment_mi(const ExperimentConfig& cfg) {
  auto report = start("mi", cfg, {"check", "protocol", "player", "value", "bound", "ok"});
  const int p = resolved_p(cfg);
  const auto ctx = protocol_context(cfg);
  bool ok = true;
  Json direct = Json::array();
  for (const auto& name : direct_sum_protocols()) {
    if (name.rfind("x-bit:", 0) == 0 && std::stoi(name.substr(6)) >= p) continue;
    const auto rep = direct_sum_report(make_protocol(name, ctx), cfg.k, cfg.eps, p);
    ok = ok && rep.ok;
    report.rows.push_back({"direct-sum-total", name, "", num(rep.total_mi), num(rep.sum_player_mi), flag(rep.subadditive)});
    for (const auto& term : rep.players) {
      report.rows.push_back({"direct-sum-player", name, num(term.player), num(term.mi), num(term.bound), flag(term.ok)});
    }
    direct.push_back(to_json(rep));
  }
  report.summary["direct_sum"] = direct;

  Json product = Json::array();
  const auto product_row = [&](const ProtocolSpec& pi, CompletionSampler sampler, bool expect_zero) {
    const auto rep = verify_product_property(2, cfg.k, cfg.eps, p, pi, std::uint64_t{1} << 24, sampler);
    const bool pass = expect_zero ? rep.ok : rep.max_mi > 0.01;
    ok = ok && pass;
    report.rows.push_back({"product-" + rep.sampler, rep.protocol, "", num(rep.max_mi), expect_zero ? "0" : "> 0.01",
                           flag(pass)});
    product.push_back(to_json(rep));
  };
  product_row(make_protocol("const", ctx), CompletionSampler::kIndependent, true);
  product_row(make_protocol("canon-rev", ctx), CompletionSampler::kIndependent, true);
  product_row(make_protocol("count-parity", ctx), CompletionSampler::kIndependent, true);
  product_row(make_protocol("const", ctx), CompletionSampler::kSharedFooling, false);
  report.summary["product"] = product;
  report.invariant_ok = ok;
  return report;
}

ExperimentReport experiment_embed(const ExperimentConfig& cfg) {
  auto report = start("embed", cfg, {"output", "embedded_probability", "direct_probability"});
  const int p = resolved_p(cfg);
  const auto ctx = protocol_context(cfg);
  const auto pi = make_protocol(cfg.protocol, ctx);
  bool ok = true;
  if (cfg.r == 2) {
    const auto law = embedding_law_check(cfg.k, cfg.eps, p, pi, cfg.seed);
    ok = ok && law.ok;
    report.summary["exact_law"] = to_json(law);
  }
  const auto families = experiment_families(cfg);
  const auto mc = compare_output_laws(pi, cfg.r, cfg.k, cfg.eps, families, cfg.trials, cfg.seed, cfg.rejection_cap);
  for (std::size_t v = 0; v < mc.values.size(); ++v) {
    report.rows.push_back({num(mc.values[v]), num(mc.embedded_law[v]), num(mc.direct_law[v])});
  }
  report.summary["monte_carlo"] = to_json(mc);
  report.summary["tolerance"] = 0.05;
  ok = ok && mc.tvd <= 0.05;
  report.invariant_ok = ok;
  return report;
}

}  // namespace xoscc
