#include "xoscc/protocols.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <utility>

#include "xoscc/errors.hpp"
#include "xoscc/welfare.hpp"

namespace xoscc {
namespace {

Bits depth_one(const XOSValuation& v, int p) { return canonical_input(v, p, 1); }

std::size_t parse_count(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  long value = 0;
  try {
    value = std::stol(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("bad " + what + " in protocol name: '" + text + "'");
  }
  if (used != text.size() || value < 0) throw InvalidArgument("bad " + what + " in protocol name: '" + text + "'");
  return static_cast<std::size_t>(value);
}

ProtocolSpec one_round(std::string name, std::size_t bits, std::function<Bits(const Bits& x)> fn, int p) {
  ProtocolSpec spec;
  spec.name = std::move(name);
  spec.rounds = 1;
  spec.max_message_bits = [bits](int, int, const XOSValuation&, const PublicInfo&) { return bits; };
  spec.message_fn = [fn = std::move(fn), p](const MessageContext& ctx) { return fn(depth_one(ctx.input, p)); };
  spec.referee_fn = [](const RefereeContext&) { return 0.0; };
  return spec;
}

void check_p(int p) {
  if (p < 1) throw InvalidArgument("p must be positive");
}

}  // namespace

void append_gamma(Bits& out, std::uint64_t value) {
  if (value == 0) throw InvalidArgument("gamma code needs a positive value");
  const int width = std::bit_width(value);
  for (int i = 1; i < width; ++i) out.push_back(false);
  for (int i = width - 1; i >= 0; --i) out.push_back(((value >> i) & 1U) != 0);
}

std::uint64_t read_gamma(const Bits& in, std::size_t& pos) {
  int zeros = 0;
  while (pos < in.size() && !in[pos]) {
    ++zeros;
    ++pos;
  }
  if (pos >= in.size() || zeros > 63) throw InvalidArgument("truncated gamma code");
  std::uint64_t value = 0;
  for (int i = 0; i <= zeros; ++i) {
    if (pos >= in.size()) throw InvalidArgument("truncated gamma code");
    value = (value << 1) | (in[pos++] ? 1U : 0U);
  }
  return value;
}

int item_width(int m) { return std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(std::max(m, 1) - 1)))); }

Bits encode_clauses(const std::vector<ItemSet>& clauses, int m) {
  const int width = item_width(m);
  Bits out;
  append_gamma(out, clauses.size() + 1);
  for (const auto& clause : clauses) {
    append_gamma(out, clause.size() + 1);
    for (Item item : clause) {
      for (int b = width - 1; b >= 0; --b) out.push_back(((item >> b) & 1U) != 0);
    }
  }
  return out;
}

std::size_t encoding_length(const std::vector<ItemSet>& clauses, int m) {
  const auto gamma_len = [](std::uint64_t v) { return 2 * static_cast<std::size_t>(std::bit_width(v)) - 1; };
  std::size_t total = gamma_len(clauses.size() + 1);
  for (const auto& clause : clauses) {
    total += gamma_len(clause.size() + 1) + clause.size() * static_cast<std::size_t>(item_width(m));
  }
  return total;
}

std::vector<ItemSet> decode_clauses(const Bits& bits, int m) {
  const int width = item_width(m);
  std::vector<ItemSet> out;
  std::size_t pos = 0;
  try {
    const auto count = read_gamma(bits, pos) - 1;
    for (std::uint64_t c = 0; c < count; ++c) {
      const auto size = read_gamma(bits, pos) - 1;
      if (pos + size * static_cast<std::uint64_t>(width) > bits.size()) break;
      ItemSet clause;
      for (std::uint64_t a = 0; a < size; ++a) {
        Item item = 0;
        for (int b = 0; b < width; ++b) item = (item << 1) | (bits[pos++] ? 1U : 0U);
        if (static_cast<int>(item) < m) clause.push_back(item);
      }
      out.push_back(normalize(std::move(clause)));
    }
  } catch (const InvalidArgument&) {
    // truncated input: keep what was read
  }
  return out;
}

std::vector<ItemSet> canonical_order(std::vector<ItemSet> clauses) {
  std::sort(clauses.begin(), clauses.end());
  return clauses;
}

Bits canonical_input(const XOSValuation& v, int p, int depth) {
  check_p(p);
  if (depth < 0) throw InvalidArgument("depth must be non-negative");
  const auto size = static_cast<std::size_t>(ipow(p, depth));
  Bits out(size, false);
  for (const auto& prov : v.provenance) {
    if (prov.depth() != depth) continue;
    std::size_t index = 0;
    bool inside = true;
    for (int digit : prov.path) {
      if (digit < 0 || digit >= p) inside = false;
      index = index * static_cast<std::size_t>(p) + static_cast<std::size_t>(digit);
    }
    if (inside) out[index] = true;
  }
  return out;
}

ProtocolSpec full_revelation(std::uint64_t node_cap) {
  ProtocolSpec spec;
  spec.name = "full-rev";
  spec.rounds = 1;
  spec.max_message_bits = [](int, int, const XOSValuation& input, const PublicInfo& pub) {
    return encoding_length(input.clauses, pub.m);
  };
  spec.message_fn = [](const MessageContext& ctx) { return encode_clauses(ctx.input.clauses, ctx.pub.m); };
  spec.referee_fn = [node_cap](const RefereeContext& ctx) {
    Instance inst;
    inst.n = ctx.pub.n;
    inst.m = ctx.pub.m;
    inst.k = ctx.pub.k;
    for (int i = 0; i < ctx.pub.n; ++i) {
      XOSValuation v;
      v.clauses = decode_clauses(ctx.board.message(ctx.board.visible_rounds(), i), ctx.pub.m);
      inst.valuations.push_back(std::move(v));
    }
    return static_cast<double>(sw_clause_union(inst, node_cap).value);
  };
  return spec;
}

ProtocolSpec clause_sketch(int c) {
  if (c < 1) throw InvalidArgument("clause_sketch needs c >= 1");
  const auto first = [c](const XOSValuation& input) {
    auto clauses = canonical_order(input.clauses);
    if (clauses.size() > static_cast<std::size_t>(c)) clauses.resize(static_cast<std::size_t>(c));
    return clauses;
  };
  ProtocolSpec spec;
  spec.name = "sketch:" + std::to_string(c);
  spec.rounds = 1;
  spec.max_message_bits = [first](int, int, const XOSValuation& input, const PublicInfo& pub) {
    return encoding_length(first(input), pub.m);
  };
  spec.message_fn = [first](const MessageContext& ctx) { return encode_clauses(first(ctx.input), ctx.pub.m); };
  spec.referee_fn = [](const RefereeContext& ctx) {
    std::vector<std::vector<ItemSet>> received;
    for (int i = 0; i < ctx.pub.n; ++i) {
      received.push_back(decode_clauses(ctx.board.message(ctx.board.visible_rounds(), i), ctx.pub.m));
    }
    std::set<Item> covered;
    std::vector<bool> assigned(received.size(), false);
    while (true) {
      std::size_t best_gain = 0;
      std::size_t best_player = 0;
      const ItemSet* best_clause = nullptr;
      for (std::size_t i = 0; i < received.size(); ++i) {
        if (assigned[i]) continue;
        for (const auto& clause : received[i]) {
          std::size_t gain = 0;
          for (Item item : clause) gain += covered.count(item) == 0 ? 1 : 0;
          if (gain > best_gain) {
            best_gain = gain;
            best_player = i;
            best_clause = &clause;
          }
        }
      }
      if (best_clause == nullptr) break;
      assigned[best_player] = true;
      covered.insert(best_clause->begin(), best_clause->end());
    }
    return static_cast<double>(covered.size());
  };
  return spec;
}

ProtocolSpec constant_protocol(int rounds, int bits) {
  if (rounds < 1) throw InvalidArgument("constant protocol needs at least one round");
  if (bits < 0) throw InvalidArgument("constant protocol needs a non-negative width");
  ProtocolSpec spec;
  spec.name = "const:" + std::to_string(rounds) + ":" + std::to_string(bits);
  spec.rounds = rounds;
  const auto width = static_cast<std::size_t>(bits);
  spec.max_message_bits = [width](int, int, const XOSValuation&, const PublicInfo&) { return width; };
  spec.message_fn = [width](const MessageContext&) { return Bits(width, false); };
  spec.referee_fn = [](const RefereeContext&) { return 0.0; };
  return spec;
}

double high_regime_bound(int r, int k) { return static_cast<double>(ipow(k, 2 * r + 1)); }

double low_regime_bound(int r, int k, double eps) {
  if (r == 1) {
    const auto l = derive_params(1, k, eps).l;
    return static_cast<double>(k) * k * (1 + l);
  }
  return 2.0 * r * std::pow(static_cast<double>(k), 2.0 * r + 2.0 * eps);
}

double distinguisher_threshold(int r, int k, double eps) {
  const double low = low_regime_bound(r, k, eps);
  const double high = high_regime_bound(r, k);
  if (low < high) return std::sqrt(low * high);
  return high - 0.5;
}

ProtocolSpec theta_distinguisher(ProtocolSpec inner, int r, int k, double eps) {
  derive_params(r, k, eps);
  const double threshold = distinguisher_threshold(r, k, eps);
  ProtocolSpec spec = inner;
  spec.name = "theta:" + inner.name;
  spec.referee_fn = [referee = std::move(inner.referee_fn), threshold](const RefereeContext& ctx) {
    return referee(ctx) > threshold ? 1.0 : 0.0;
  };
  return spec;
}

ProtocolSpec then(ProtocolSpec first, ProtocolSpec rest) {
  const int split = first.rounds;
  ProtocolSpec spec;
  spec.name = first.name + "+" + rest.name;
  spec.rounds = first.rounds + rest.rounds;
  spec.max_message_bits = [first_bound = first.max_message_bits, rest_bound = rest.max_message_bits, split](
                              int player, int round, const XOSValuation& input, const PublicInfo& pub) {
    return round <= split ? first_bound(player, round, input, pub) : rest_bound(player, round - split, input, pub);
  };
  spec.message_fn = [first_fn = first.message_fn, rest_fn = rest.message_fn, split](const MessageContext& ctx) {
    if (ctx.round <= split) return first_fn(ctx);
    MessageContext shifted{ctx.player, ctx.round - split, ctx.input, ctx.pub, ctx.board.shifted(split),
                           ctx.public_seed, ctx.private_rng};
    return rest_fn(shifted);
  };
  spec.referee_fn = [referee = std::move(rest.referee_fn), split](const RefereeContext& ctx) {
    return referee(RefereeContext{ctx.board.shifted(split), ctx.pub, ctx.public_seed});
  };
  return spec;
}

ProtocolSpec send_x_verbatim(int p) {
  check_p(p);
  return one_round("x-verbatim", static_cast<std::size_t>(p), [](const Bits& x) { return x; }, p);
}

ProtocolSpec send_x_bit(int p, int j) {
  check_p(p);
  if (j < 0 || j >= p) throw InvalidArgument("x-bit index outside [p]");
  return one_round("x-bit:" + std::to_string(j), 1,
                   [j](const Bits& x) { return Bits{x[static_cast<std::size_t>(j)]}; }, p);
}

ProtocolSpec send_x_and(int p) {
  check_p(p);
  return one_round("x-and", 1, [](const Bits& x) { return Bits{std::all_of(x.begin(), x.end(), [](bool b) { return b; })}; }, p);
}

ProtocolSpec send_x_or(int p) {
  check_p(p);
  return one_round("x-or", 1, [](const Bits& x) { return Bits{std::any_of(x.begin(), x.end(), [](bool b) { return b; })}; }, p);
}

ProtocolSpec send_x_parity(int p) {
  check_p(p);
  return one_round("x-parity", 1, [](const Bits& x) { return Bits{std::count(x.begin(), x.end(), true) % 2 == 1}; }, p);
}

ProtocolSpec send_count_parity() {
  ProtocolSpec spec;
  spec.name = "count-parity";
  spec.rounds = 1;
  spec.max_message_bits = [](int, int, const XOSValuation&, const PublicInfo&) { return std::size_t{1}; };
  spec.message_fn = [](const MessageContext& ctx) { return Bits{ctx.input.clauses.size() % 2 == 1}; };
  spec.referee_fn = [](const RefereeContext&) { return 0.0; };
  return spec;
}

ProtocolSpec canonical_revelation(int p) {
  check_p(p);
  ProtocolSpec spec;
  spec.name = "canon-rev";
  spec.rounds = 1;
  spec.max_message_bits = [p](int, int, const XOSValuation&, const PublicInfo& pub) {
    return static_cast<std::size_t>(ipow(p, pub.level));
  };
  spec.message_fn = [p](const MessageContext& ctx) { return canonical_input(ctx.input, p, ctx.pub.level); };
  spec.referee_fn = [](const RefereeContext&) { return 0.0; };
  return spec;
}

ProtocolSpec make_protocol(const std::string& name, const ProtocolContext& ctx) {
  if (name.rfind("theta:", 0) == 0) {
    return theta_distinguisher(make_protocol(name.substr(6), ctx), ctx.r, ctx.k, ctx.eps);
  }
  if (const auto plus = name.find('+'); plus != std::string::npos) {
    return then(make_protocol(name.substr(0, plus), ctx), make_protocol(name.substr(plus + 1), ctx));
  }
  if (name == "full-rev") return full_revelation(ctx.node_cap);
  if (name.rfind("sketch:", 0) == 0) return clause_sketch(static_cast<int>(parse_count(name.substr(7), "clause count")));
  if (name == "const") return constant_protocol();
  if (name.rfind("const:", 0) == 0) {
    const auto rest = name.substr(6);
    const auto colon = rest.find(':');
    if (colon == std::string::npos) return constant_protocol(static_cast<int>(parse_count(rest, "round count")));
    return constant_protocol(static_cast<int>(parse_count(rest.substr(0, colon), "round count")),
                             static_cast<int>(parse_count(rest.substr(colon + 1), "bit count")));
  }
  if (name == "x-verbatim") return send_x_verbatim(ctx.p);
  if (name.rfind("x-bit:", 0) == 0) return send_x_bit(ctx.p, static_cast<int>(parse_count(name.substr(6), "index")));
  if (name == "x-and") return send_x_and(ctx.p);
  if (name == "x-or") return send_x_or(ctx.p);
  if (name == "x-parity") return send_x_parity(ctx.p);
  if (name == "count-parity") return send_count_parity();
  if (name == "canon-rev") return canonical_revelation(ctx.p);
  throw InvalidArgument("unknown protocol '" + name + "'");
}

std::vector<std::string> protocol_names() {
  return {"full-rev",  "sketch:<c>", "const[:<rounds>[:<bits>]]", "theta:<inner>", "x-verbatim", "x-bit:<j>",
          "x-and",     "x-or",       "x-parity",                  "count-parity",  "canon-rev",  "<first>+<rest>"};
}

}  // namespace xoscc
