#include "xoscc/infotools.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "xoscc/distributions.hpp"
#include "xoscc/errors.hpp"
#include "xoscc/protocols.hpp"
#include "xoscc/rng.hpp"

namespace xoscc {
namespace {

double plogp(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

std::vector<std::string> join(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  for (const auto& name : b) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
  return out;
}

double joint_entropy(const JointDistribution& jd, const std::vector<std::string>& axes) {
  if (axes.empty()) return 0.0;
  const auto marginal = jd.marginal(axes);
  double h = 0.0;
  for (const auto& [outcome, p] : marginal.table()) h += plogp(p);
  return h;
}

void check_same_axes(const JointDistribution& p, const JointDistribution& q) {
  if (p.axes() != q.axes()) throw DimensionMismatch("distributions are over different axes");
}

}  // namespace

JointDistribution::JointDistribution(std::vector<std::string> axes) : axes_(std::move(axes)) {
  std::set<std::string> unique(axes_.begin(), axes_.end());
  if (unique.size() != axes_.size()) throw InvalidArgument("axis names must be distinct");
}

void JointDistribution::add(const Outcome& outcome, double weight) {
  if (outcome.size() != axes_.size()) throw DimensionMismatch("outcome arity does not match the axes");
  if (weight < 0.0) throw InvalidArgument("probability mass must be non-negative");
  if (weight == 0.0) return;
  table_[outcome] += weight;
}

void JointDistribution::normalize() {
  const double mass = total();
  if (mass <= 0.0) throw InvalidArgument("cannot normalize a distribution with zero mass");
  for (auto& [outcome, p] : table_) p /= mass;
}

double JointDistribution::total() const {
  double mass = 0.0;
  for (const auto& [outcome, p] : table_) mass += p;
  return mass;
}

double JointDistribution::probability(const Outcome& outcome) const {
  const auto it = table_.find(outcome);
  return it == table_.end() ? 0.0 : it->second;
}

void JointDistribution::validate(double tol) const {
  for (const auto& [outcome, p] : table_) {
    if (p < 0.0) throw InvalidArgument("negative probability");
  }
  if (std::abs(total() - 1.0) > tol) throw InvalidArgument("probabilities do not sum to 1");
}

std::size_t JointDistribution::axis(const std::string& name) const {
  const auto it = std::find(axes_.begin(), axes_.end(), name);
  if (it == axes_.end()) throw InvalidArgument("unknown axis '" + name + "'");
  return static_cast<std::size_t>(it - axes_.begin());
}

JointDistribution JointDistribution::marginal(const std::vector<std::string>& keep) const {
  std::vector<std::size_t> index;
  for (const auto& name : keep) index.push_back(axis(name));
  JointDistribution out(keep);
  Outcome projected(keep.size());
  for (const auto& [outcome, p] : table_) {
    for (std::size_t a = 0; a < index.size(); ++a) projected[a] = outcome[index[a]];
    out.table_[projected] += p;
  }
  return out;
}

double binary_entropy(double p) {
  if (p < 0.0 || p > 1.0) throw InvalidArgument("binary_entropy needs p in [0, 1]");
  return plogp(p) + plogp(1.0 - p);
}

double entropy(const JointDistribution& jd, const std::vector<std::string>& x,
               const std::vector<std::string>& given) {
  return joint_entropy(jd, join(x, given)) - joint_entropy(jd, given);
}

double mutual_info(const JointDistribution& jd, const std::vector<std::string>& x,
                   const std::vector<std::string>& y, const std::vector<std::string>& given) {
  return entropy(jd, x, given) - entropy(jd, x, join(y, given));
}

double kl(const JointDistribution& p, const JointDistribution& q) {
  check_same_axes(p, q);
  double d = 0.0;
  for (const auto& [outcome, pv] : p.table()) {
    if (pv <= 0.0) continue;
    const double qv = q.probability(outcome);
    if (qv <= 0.0) throw DivergenceInfinite("P is not absolutely continuous with respect to Q");
    d += pv * std::log2(pv / qv);
  }
  return std::max(0.0, d);
}

double tvd(const JointDistribution& p, const JointDistribution& q) {
  check_same_axes(p, q);
  double sum = 0.0;
  for (const auto& [outcome, pv] : p.table()) sum += std::abs(pv - q.probability(outcome));
  for (const auto& [outcome, qv] : q.table()) {
    if (p.table().count(outcome) == 0) sum += qv;
  }
  return sum / 2.0;
}

PinskerReport pinsker_check(const JointDistribution& p, const JointDistribution& q, double tol) {
  PinskerReport out;
  out.tvd = tvd(p, q);
  // Pinsker holds with KL in nats; sqrt(kl_bits / 2) is the weaker bits form
  // and is what gets asserted.
  out.kl = kl(p, q);
  out.bound = std::sqrt(out.kl / 2.0);
  out.ok = out.tvd <= out.bound + tol;
  return out;
}

FanoReport fano_check(const JointDistribution& jd, const std::vector<std::string>& a, const std::string& b,
                      const Predictor& predictor, double tol) {
  const auto joint = jd.marginal(join(a, {b}));
  const std::size_t b_axis = joint.axes().size() - 1;
  FanoReport out;
  for (const auto& [outcome, p] : joint.table()) {
    if (outcome[b_axis] != 0 && outcome[b_axis] != 1) throw InvalidArgument("fano_check needs a binary B");
    const JointDistribution::Outcome a_values(outcome.begin(), outcome.begin() + static_cast<std::ptrdiff_t>(b_axis));
    if (predictor(a_values) != outcome[b_axis]) out.error_rate += p;
  }
  out.error_rate = std::clamp(out.error_rate, 0.0, 1.0);
  out.conditional_entropy = entropy(jd, {b}, a);
  out.bound = binary_entropy(out.error_rate);
  out.ok = out.conditional_entropy <= out.bound + tol;
  return out;
}

Predictor map_predictor(const JointDistribution& jd, const std::vector<std::string>& a, const std::string& b) {
  const auto joint = jd.marginal(join(a, {b}));
  const std::size_t b_axis = joint.axes().size() - 1;
  std::map<JointDistribution::Outcome, std::pair<double, double>> mass;
  for (const auto& [outcome, p] : joint.table()) {
    const JointDistribution::Outcome a_values(outcome.begin(), outcome.begin() + static_cast<std::ptrdiff_t>(b_axis));
    auto& slot = mass[a_values];
    (outcome[b_axis] == 1 ? slot.second : slot.first) += p;
  }
  return [mass = std::move(mass)](const JointDistribution::Outcome& a_values) {
    const auto it = mass.find(a_values);
    if (it == mass.end()) return 0;
    return it->second.second > it->second.first ? 1 : 0;
  };
}

JointDistribution random_joint(const std::vector<std::string>& axes, const std::vector<int>& sizes,
                               std::uint64_t seed, bool sparse) {
  if (axes.size() != sizes.size()) throw DimensionMismatch("one support size per axis");
  for (int s : sizes) {
    if (s < 1) throw InvalidArgument("support sizes must be positive");
  }
  Rng rng(seed);
  JointDistribution out(axes);
  JointDistribution::Outcome outcome(axes.size(), 0);
  bool any = false;
  while (true) {
    const double w = rng.uniform01();
    if (!sparse || rng.coin()) {
      out.add(outcome, w + 1e-3);
      any = true;
    }
    std::size_t a = 0;
    while (a < outcome.size() && ++outcome[a] == sizes[a]) outcome[a++] = 0;
    if (a == outcome.size()) break;
  }
  if (!any) out.add(JointDistribution::Outcome(axes.size(), 0), 1.0);
  out.normalize();
  return out;
}

DirectSumReport direct_sum_report(const ProtocolSpec& protocol, int k, double eps, int p, std::uint64_t budget,
                                  double tol) {
  if (protocol.rounds != 1) throw InvalidArgument("direct_sum_report needs a one-round protocol");
  const auto ladder = make_families(1, k, eps, p, derive_seed(0, {tag(Stream::kFamily)}));
  const int n = static_cast<int>(players_at(1, k));
  const int free_bits = n * (p - 1);
  if (free_bits >= 62) throw BudgetExceeded("direct_sum_report: enumeration too large");
  const std::uint64_t outcomes = static_cast<std::uint64_t>(2 * p) << free_bits;
  if (outcomes > budget) {
    throw BudgetExceeded("direct_sum_report: " + std::to_string(outcomes) + " outcomes exceed the budget of " +
                         std::to_string(budget));
  }

  const PublicInfo pub{n, static_cast<int>(items_at(1, k)), 1, k};
  const std::uint64_t x_count = std::uint64_t{1} << p;
  // message[i][x], x read as a bit mask with bit j = x(j)
  std::vector<std::vector<int>> message(static_cast<std::size_t>(n), std::vector<int>(x_count));
  std::vector<std::size_t> bits(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    std::map<Bits, int> codes;
    for (std::uint64_t x = 0; x < x_count; ++x) {
      std::vector<bool> canon(static_cast<std::size_t>(p));
      for (int j = 0; j < p; ++j) canon[static_cast<std::size_t>(j)] = ((x >> j) & 1U) != 0;
      const auto view_a = view_from_canonical(1, k, ladder, {}, 0, i, canon, derive_seed(x, {1}));
      const auto view_b = view_from_canonical(1, k, ladder, {}, 0, i, canon, derive_seed(x, {2}));
      const auto msg = compute_message(protocol, pub, view_a, i, 1, {}, 11);
      if (compute_message(protocol, pub, view_b, i, 1, {}, 23) != msg) {
        throw InvalidArgument("protocol '" + protocol.name +
                              "' is not a deterministic function of the canonical input");
      }
      bits[static_cast<std::size_t>(i)] =
          std::max(bits[static_cast<std::size_t>(i)], protocol.max_message_bits(i, 1, view_a, pub));
      message[static_cast<std::size_t>(i)][x] = codes.emplace(msg, static_cast<int>(codes.size())).first->second;
    }
  }

  std::vector<std::string> axes{"theta", "J"};
  std::vector<std::string> all_messages;
  for (int i = 0; i < n; ++i) {
    axes.push_back("Pi_" + std::to_string(i));
    all_messages.push_back(axes.back());
  }
  JointDistribution jd(axes);
  const double weight = 1.0 / static_cast<double>(outcomes);
  JointDistribution::Outcome outcome(axes.size());
  for (int j = 0; j < p; ++j) {
    for (int theta = 0; theta < 2; ++theta) {
      for (std::uint64_t free = 0; free < (std::uint64_t{1} << free_bits); ++free) {
        outcome[0] = theta;
        outcome[1] = j;
        for (int i = 0; i < n; ++i) {
          std::uint64_t x = 0;
          int used = 0;
          for (int b = 0; b < p; ++b) {
            bool bit = false;
            if (b == j) {
              bit = theta == 1;
            } else {
              bit = ((free >> (i * (p - 1) + used)) & 1U) != 0;
              ++used;
            }
            if (bit) x |= std::uint64_t{1} << b;
          }
          outcome[static_cast<std::size_t>(2 + i)] = message[static_cast<std::size_t>(i)][x];
        }
        jd.add(outcome, weight);
      }
    }
  }

  DirectSumReport out;
  out.protocol = protocol.name;
  out.k = k;
  out.p = p;
  out.outcomes = outcomes;
  out.total_mi = mutual_info(jd, {"theta"}, all_messages, {"J"});
  out.ok = true;
  for (int i = 0; i < n; ++i) {
    PlayerTerm term;
    term.player = i;
    term.mi = mutual_info(jd, {"theta"}, {all_messages[static_cast<std::size_t>(i)]}, {"J"});
    term.bits = bits[static_cast<std::size_t>(i)];
    term.bound = static_cast<double>(term.bits) / p;
    term.ok = term.mi <= term.bound + tol;
    out.ok = out.ok && term.ok;
    out.sum_player_mi += term.mi;
    out.players.push_back(term);
  }
  out.subadditive = out.total_mi <= out.sum_player_mi + tol;
  out.ok = out.ok && out.subadditive;
  return out;
}

}  // namespace xoscc
