#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xoscc/model.hpp"
#include "xoscc/simulator.hpp"

namespace xoscc {

// ---------------------------------------------------------------------------
// Clause encoding. A clause list over [m] is written as gamma(count + 1),
// then per clause gamma(size + 1) followed by each item in a fixed width of
// max(1, bit_width(m - 1)) bits. gamma is the Elias gamma code.

void append_gamma(Bits& out, std::uint64_t value);  // value >= 1
std::uint64_t read_gamma(const Bits& in, std::size_t& pos);

int item_width(int m);
Bits encode_clauses(const std::vector<ItemSet>& clauses, int m);
std::size_t encoding_length(const std::vector<ItemSet>& clauses, int m);

/// Inverse of encode_clauses. Total over all bit strings: malformed or
/// truncated input decodes to the clauses read so far, and items >= m are
/// dropped.
std::vector<ItemSet> decode_clauses(const Bits& bits, int m);

/// Clauses sorted lexicographically, duplicates kept.
std::vector<ItemSet> canonical_order(std::vector<ItemSet> clauses);

// ---------------------------------------------------------------------------
// Label-free view of an input: bit w is set when some clause carries the
// provenance path whose base-p digits (outermost first) spell w.

Bits canonical_input(const XOSValuation& v, int p, int depth);

// ---------------------------------------------------------------------------

/// One round; each player writes her whole clause list and the referee
/// outputs the exact optimum. Player i's declared bound is the length of
/// her own encoding.
ProtocolSpec full_revelation(std::uint64_t node_cap = 500'000'000);

/// One round; each player writes her first c clauses in canonical order and
/// the referee outputs the union size of a greedy clause selection.
ProtocolSpec clause_sketch(int c);

/// `rounds` rounds of `bits` zero bits per player; the referee outputs 0.
ProtocolSpec constant_protocol(int rounds = 1, int bits = 1);

double high_regime_bound(int r, int k);
/// k^2 (1 + l) at r = 1, 2r k^{2r+2 eps} above.
double low_regime_bound(int r, int k, double eps);
/// Geometric mean of the two regime bounds when they are separated,
/// otherwise just below k^{2r+1}.
double distinguisher_threshold(int r, int k, double eps);

/// Outputs 1 when the inner estimate exceeds distinguisher_threshold(r, k, eps).
ProtocolSpec theta_distinguisher(ProtocolSpec inner, int r, int k, double eps);

/// Runs `first` and then `rest`; rest sees the blackboard from its own
/// first round onward and its referee gives the output.
ProtocolSpec then(ProtocolSpec first, ProtocolSpec rest);

// Label-free one-round protocols. x(j) below is bit j of canonical_input at
// depth 1, i.e. whether any clause came from top-level sub-instance j.
ProtocolSpec send_x_verbatim(int p);
ProtocolSpec send_x_bit(int p, int j);
ProtocolSpec send_x_and(int p);
ProtocolSpec send_x_or(int p);
ProtocolSpec send_x_parity(int p);
ProtocolSpec send_count_parity();
/// Whole canonical input at depth pub.level (p^level bits).
ProtocolSpec canonical_revelation(int p);

struct ProtocolContext {
  int r = 1;
  int k = 2;
  double eps = 0.5;
  int p = 2;
  std::uint64_t node_cap = 500'000'000;
};

/// Builds a protocol by name:
///   full-rev, sketch:<c>, const[:<rounds>[:<bits>]], theta:<inner>,
///   x-verbatim, x-bit:<j>, x-and, x-or, x-parity, count-parity, canon-rev,
///   <first>+<rest>.
/// Throws InvalidArgument for unknown names.
ProtocolSpec make_protocol(const std::string& name, const ProtocolContext& ctx);

std::vector<std::string> protocol_names();

}  // namespace xoscc
