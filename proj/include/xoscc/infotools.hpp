#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "xoscc/simulator.hpp"

namespace xoscc {

/// Exact finite joint distribution over named integer-valued axes.
class JointDistribution {
 public:
  using Outcome = std::vector<int>;

  JointDistribution() = default;
  explicit JointDistribution(std::vector<std::string> axes);

  const std::vector<std::string>& axes() const noexcept { return axes_; }
  const std::map<Outcome, double>& table() const noexcept { return table_; }

  /// Adds `weight` to the outcome's probability mass.
  void add(const Outcome& outcome, double weight);

  /// Rescales to total mass 1. Throws InvalidArgument on zero mass.
  void normalize();

  double total() const;
  double probability(const Outcome& outcome) const;

  /// Throws InvalidArgument unless every entry is non-negative and the
  /// total is 1 within `tol`.
  void validate(double tol = 1e-12) const;

  std::size_t axis(const std::string& name) const;  // throws on unknown names
  JointDistribution marginal(const std::vector<std::string>& keep) const;

 private:
  std::vector<std::string> axes_;
  std::map<Outcome, double> table_;
};

double binary_entropy(double p);

/// H(X | given) in bits.
double entropy(const JointDistribution& jd, const std::vector<std::string>& x,
               const std::vector<std::string>& given = {});

/// I(X ; Y | given) = H(X | given) - H(X | Y, given), in bits.
double mutual_info(const JointDistribution& jd, const std::vector<std::string>& x,
                   const std::vector<std::string>& y, const std::vector<std::string>& given = {});

/// D(P || Q) in bits over outcomes of identical axes. Throws
/// DivergenceInfinite when some outcome has Q = 0 < P.
double kl(const JointDistribution& p, const JointDistribution& q);
double tvd(const JointDistribution& p, const JointDistribution& q);

struct PinskerReport {
  double tvd = 0.0;
  double kl = 0.0;
  double bound = 0.0;  // sqrt(kl / 2)
  bool ok = false;
};

PinskerReport pinsker_check(const JointDistribution& p, const JointDistribution& q, double tol = 1e-9);

struct FanoReport {
  double error_rate = 0.0;
  double conditional_entropy = 0.0;  // H(B | A)
  double bound = 0.0;                // H2(error_rate)
  bool ok = false;
};

using Predictor = std::function<int(const JointDistribution::Outcome& a_values)>;

/// Checks H(B | A) <= H2(δ) for binary B, where δ is the error rate of
/// `predictor` applied to the values of A.
FanoReport fano_check(const JointDistribution& jd, const std::vector<std::string>& a, const std::string& b,
                      const Predictor& predictor, double tol = 1e-9);

/// Maximum a posteriori predictor of binary B from A.
Predictor map_predictor(const JointDistribution& jd, const std::vector<std::string>& a, const std::string& b);

/// Random joint over axes of the given support sizes; every outcome gets
/// positive mass unless `sparse`, in which case about half are zero.
JointDistribution random_joint(const std::vector<std::string>& axes, const std::vector<int>& sizes,
                               std::uint64_t seed, bool sparse = false);

struct PlayerTerm {
  int player = 0;
  double mi = 0.0;         // I(Θ ; Π_i | Σ, J)
  double bound = 0.0;      // |Π_i| / p
  std::size_t bits = 0;    // |Π_i|, largest declared bound over enumerated inputs
  bool ok = false;
};

struct DirectSumReport {
  std::string protocol;
  int k = 0;
  int p = 0;
  std::uint64_t outcomes = 0;
  double total_mi = 0.0;   // I(Θ ; Π | Σ, J)
  double sum_player_mi = 0.0;
  bool subadditive = false;
  std::vector<PlayerTerm> players;
  bool ok = false;
};

/// Exact direct-sum terms for a one-round protocol under the simultaneous
/// hard distribution with the given (k, eps, p). The protocol must be
/// deterministic and depend on its input only through canonical_input; the
/// item labels are then irrelevant and Σ is held at a fixed value. Throws
/// InvalidArgument when two labelings give different messages and
/// BudgetExceeded when the enumeration exceeds `budget` outcomes.
DirectSumReport direct_sum_report(const ProtocolSpec& protocol, int k, double eps, int p,
                                  std::uint64_t budget = 1u << 22, double tol = 1e-6);

}  // namespace xoscc
