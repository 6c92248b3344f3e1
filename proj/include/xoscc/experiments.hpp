#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "xoscc/io.hpp"

namespace xoscc {

struct ExperimentConfig {
  int r = 1;
  int k = 3;
  double eps = 0.5;
  std::optional<int> p;
  long trials = 100;
  std::uint64_t seed = 0;
  std::uint64_t node_cap = 500'000'000;
  std::string protocol = "full-rev";
  long rejection_cap = 100'000;
};

/// A finished experiment: table rows (CSV-able) plus a JSON summary.
struct ExperimentReport {
  std::string name;
  Json config;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  Json summary;
  bool invariant_ok = true;

  Json to_json() const;  // version, config, seed, rows and summary
  std::string to_csv() const;
};

Json config_json(const ExperimentConfig& cfg);

/// Welfare dichotomy. `trials` instances per regime with θ* forced; a row
/// passes when θ* = 1 gives sw = k^3 (r = 1) or sw >= k^{2r+1} (r >= 2),
/// and θ* = 0 gives sw <= low_regime_bound. Any θ* = 1 failure, or a θ* = 0
/// failure at r = 1, breaks the invariant.
ExperimentReport experiment_gap(const ExperimentConfig& cfg);

/// θ* recovery error of theta_distinguisher(cfg.protocol) on fresh samples.
ExperimentReport experiment_distinguish(const ExperimentConfig& cfg);

/// Direct-sum terms for the simultaneous distribution and the product
/// property at level 2, over the canonical toy protocols.
ExperimentReport experiment_mi(const ExperimentConfig& cfg);

/// Exact embedding law and Monte Carlo output-law comparison of π' and π
/// for cfg.protocol (two or more rounds) at level cfg.r.
ExperimentReport experiment_embed(const ExperimentConfig& cfg);

/// Protocols examined by experiment_mi.
std::vector<std::string> direct_sum_protocols();

}  // namespace xoscc
