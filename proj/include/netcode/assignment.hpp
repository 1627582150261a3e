#pragma once

#include <map>
#include <optional>
#include <utility>

#include "netcode/errors.hpp"
#include "netcode/field.hpp"
#include "netcode/matrix.hpp"
#include "netcode/network.hpp"

namespace netcode {

/// Concrete local coding coefficients: one v x v block over GF(2^k) per
/// adjacent edge pair (v = 1 for scalar codes). Pairs without an entry are
/// zero.
///
/// Optional per-session encoders P_i (vR_i x v|S_i|) map message
/// coordinates onto source-edge coordinates and decoders Q_i
/// (v|T_i| x vR_i) read them back; both default to identity. They let a
/// fractional rate such as 3/2 at v = 2 use fewer coordinates than the
/// session edges carry.
struct CodeAssignment {
  using Elem = GF2k::Elem;
  using Block = Matrix<Elem>;

  unsigned field_degree = 1;
  unsigned block = 1;
  std::map<std::pair<EdgeId, EdgeId>, Block> coefficients;
  std::map<int, Block> encoders;
  std::map<int, Block> decoders;

  CodeAssignment() = default;
  CodeAssignment(unsigned k, unsigned v) : field_degree(k), block(v) {
    if (v < 1) throw DimensionMismatch("block dimension must be at least 1");
    GF2k check(k);
    (void)check;
  }

  GF2k field() const { return GF2k(field_degree); }

  void set(const EdgeId& tail, const EdgeId& head, Elem value) {
    if (block != 1) throw DimensionMismatch("scalar coefficient on a vector code");
    if (!field().contains(value)) throw FieldMismatch("coefficient outside GF(2^k)");
    coefficients[{tail, head}] = Block(1, 1, value);
  }
  void set_block(const EdgeId& tail, const EdgeId& head, Block b) {
    if (b.rows() != block || b.cols() != block) {
      throw DimensionMismatch("coefficient block is not " + std::to_string(block) + "x" +
                              std::to_string(block));
    }
    for (auto x : b.data()) {
      if (!field().contains(x)) throw FieldMismatch("coefficient outside GF(2^k)");
    }
    coefficients[{tail, head}] = std::move(b);
  }

  Elem scalar(const EdgeId& tail, const EdgeId& head) const {
    auto it = coefficients.find({tail, head});
    return it == coefficients.end() ? 0 : it->second(0, 0);
  }
  const Block* find(const EdgeId& tail, const EdgeId& head) const {
    auto it = coefficients.find({tail, head});
    return it == coefficients.end() ? nullptr : &it->second;
  }

  /// v x v block with β on the diagonal, the usual way to lift a scalar code.
  CodeAssignment diagonal_lift(unsigned v) const {
    if (block != 1) throw DimensionMismatch("only scalar codes lift diagonally");
    CodeAssignment out(field_degree, v);
    for (const auto& [pair, b] : coefficients) {
      Block d(v, v, 0);
      for (unsigned i = 0; i < v; ++i) d(i, i) = b(0, 0);
      out.coefficients[pair] = std::move(d);
    }
    return out;
  }
};

/// Every adjacent pair (e, f) with Head(e) = Tail(f), in topological order
/// of e then id order of f.
inline std::vector<std::pair<std::size_t, std::size_t>> adjacent_pairs(const Digraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    for (auto j : g.successors(i)) out.emplace_back(i, j);
  }
  return out;
}

}  // namespace netcode
