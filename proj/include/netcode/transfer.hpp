#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "netcode/assignment.hpp"
#include "netcode/errors.hpp"
#include "netcode/matrix.hpp"
#include "netcode/network.hpp"
#include "netcode/polynomial.hpp"

namespace netcode {

// Rings for the path-sum recursion. Each supplies zero/one, the weight of
// an adjacent pair, and addition/multiplication of values. Block rings
// multiply on the right so a path weight is the product in path order.

struct SymbolicScalarRing {
  using Value = Poly;
  const Digraph* g;
  unsigned k = 1;
  Value zero() const { return Poly(k); }
  Value one() const { return Poly::one(k); }
  Value coef(std::size_t i, std::size_t j) const {
    return Poly::variable(VarId{g->id(i), g->id(j)}, k);
  }
  Value add(const Value& a, const Value& b) const { return a + b; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  bool is_zero(const Value& a) const { return a.is_zero(); }
};

struct EvaluatedScalarRing {
  using Value = GF2k::Elem;
  const Digraph* g;
  const CodeAssignment* code;
  GF2k f;
  Value zero() const { return 0; }
  Value one() const { return 1; }
  Value coef(std::size_t i, std::size_t j) const { return code->scalar(g->id(i), g->id(j)); }
  Value add(Value a, Value b) const { return a ^ b; }
  Value mul(Value a, Value b) const { return f.mul(a, b); }
  bool is_zero(Value a) const { return a == 0; }
};

struct SymbolicBlockRing {
  using Value = Matrix<Poly>;
  const Digraph* g;
  unsigned v = 1;
  unsigned k = 1;
  PolyOps ops{k};
  Value zero() const { return Value(v, v, Poly(k)); }
  Value one() const { return identity(v, ops); }
  Value coef(std::size_t i, std::size_t j) const {
    Value b(v, v, Poly(k));
    for (unsigned r = 0; r < v; ++r) {
      for (unsigned c = 0; c < v; ++c) {
        b(r, c) = Poly::variable(
            VarId{g->id(i), g->id(j), static_cast<int>(r + 1), static_cast<int>(c + 1)}, k);
      }
    }
    return b;
  }
  Value add(const Value& a, const Value& b) const { return matadd(a, b, ops); }
  Value mul(const Value& a, const Value& b) const { return matmul(a, b, ops); }
  bool is_zero(const Value& a) const { return is_zero_matrix(a, ops); }
};

struct EvaluatedBlockRing {
  using Value = Matrix<GF2k::Elem>;
  const Digraph* g;
  const CodeAssignment* code;
  FieldOps ops;
  Value zero() const { return Value(code->block, code->block, 0); }
  Value one() const { return identity(code->block, ops); }
  Value coef(std::size_t i, std::size_t j) const {
    const auto* b = code->find(g->id(i), g->id(j));
    return b ? *b : zero();
  }
  Value add(const Value& a, const Value& b) const { return matadd(a, b, ops); }
  Value mul(const Value& a, const Value& b) const { return matmul(a, b, ops); }
  bool is_zero(const Value& a) const { return is_zero_matrix(a, ops); }
};

/// Sum of path weights from edge `src` to every edge, over paths that use
/// no edge of `avoid`. Entry src is one unless src itself is avoided.
template <class Ring>
std::vector<typename Ring::Value> path_sums_from(const Digraph& g, std::size_t src,
                                                 const EdgeMask& avoid, const Ring& ring) {
  std::vector<typename Ring::Value> val(g.edge_count(), ring.zero());
  if (avoid.test(src)) return val;
  val[src] = ring.one();
  for (std::size_t j = src + 1; j < g.edge_count(); ++j) {
    if (avoid.test(j)) continue;
    auto acc = ring.zero();
    for (auto i : g.predecessors(j)) {
      if (i < src || ring.is_zero(val[i])) continue;
      acc = ring.add(acc, ring.mul(val[i], ring.coef(i, j)));
    }
    val[j] = std::move(acc);
  }
  return val;
}

namespace detail {

inline void require_sorted(const Digraph& g, const std::vector<EdgeId>& es, const char* what) {
  for (std::size_t i = 1; i < es.size(); ++i) {
    if (g.index(es[i - 1]) >= g.index(es[i])) {
      throw NotTopologicallySorted(std::string(what) + " is not in topological order at '" +
                                   es[i] + "'");
    }
  }
}

}  // namespace detail

/// Entry (i, j) = sum over rows[i] -> cols[j] paths.
template <class Ring>
Matrix<typename Ring::Value> transfer_values(const Digraph& g, const std::vector<EdgeId>& rows,
                                             const std::vector<EdgeId>& cols, const Ring& ring) {
  const auto ci = g.indices(cols);
  Matrix<typename Ring::Value> out(rows.size(), cols.size(), ring.zero());
  const EdgeMask none(g.edge_count());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto sums = path_sums_from(g, g.index(rows[r]), none, ring);
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = sums[ci[c]];
  }
  return out;
}

/// Entry (i, j) sums rows[i] -> cols[j] paths avoiding every cols[k], k < j.
template <class Ring>
Matrix<typename Ring::Value> destinations_excluded_values(const Digraph& g,
                                                          const std::vector<EdgeId>& rows,
                                                          const std::vector<EdgeId>& cols,
                                                          const Ring& ring) {
  detail::require_sorted(g, cols, "destination list");
  const auto ci = g.indices(cols);
  Matrix<typename Ring::Value> out(rows.size(), cols.size(), ring.zero());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    EdgeMask avoid(g.edge_count());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      out(r, c) = path_sums_from(g, g.index(rows[r]), avoid, ring)[ci[c]];
      avoid.set(ci[c]);
    }
  }
  return out;
}

/// Entry (i, j) sums rows[i] -> cols[j] paths avoiding every rows[k], k > i.
template <class Ring>
Matrix<typename Ring::Value> sources_excluded_values(const Digraph& g,
                                                     const std::vector<EdgeId>& rows,
                                                     const std::vector<EdgeId>& cols,
                                                     const Ring& ring) {
  detail::require_sorted(g, rows, "source list");
  const auto ri = g.indices(rows), ci = g.indices(cols);
  Matrix<typename Ring::Value> out(rows.size(), cols.size(), ring.zero());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    EdgeMask avoid(g.edge_count());
    for (std::size_t k = r + 1; k < rows.size(); ++k) avoid.set(ri[k]);
    const auto sums = path_sums_from(g, ri[r], avoid, ring);
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = sums[ci[c]];
  }
  return out;
}

/// Entry (i, j) sums rows[i] -> cols[j] paths through at least one edge of
/// `via`: all paths minus those avoiding `via`.
template <class Ring>
Matrix<typename Ring::Value> restricted_values(const Digraph& g, const std::vector<EdgeId>& rows,
                                               const std::vector<EdgeId>& cols,
                                               const EdgeSet& via, const Ring& ring) {
  const auto ci = g.indices(cols);
  const EdgeMask none(g.edge_count()), avoid = g.mask(via);
  Matrix<typename Ring::Value> out(rows.size(), cols.size(), ring.zero());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t src = g.index(rows[r]);
    const auto all = path_sums_from(g, src, none, ring);
    const auto miss = path_sums_from(g, src, avoid, ring);
    for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = ring.add(all[ci[c]], miss[ci[c]]);
  }
  return out;
}

/// Unitriangular coupling matrix among the edges of `u`.
template <class Ring>
Matrix<typename Ring::Value> coupling_values(const Digraph& g, const std::vector<EdgeId>& u,
                                             const Ring& ring) {
  detail::require_sorted(g, u, "coupling edge list");
  return transfer_values(g, u, u, ring);
}

/// Symbolic transfer matrix with rows and columns labelled by edges. Vector
/// matrices store each v x v block expanded in place, so `entries` is
/// (v * rows) x (v * cols).
struct TransferMatrix {
  std::vector<EdgeId> rows;
  std::vector<EdgeId> cols;
  unsigned block = 1;
  Matrix<Poly> entries;

  const Poly& operator()(std::size_t r, std::size_t c) const { return entries(r, c); }
  Matrix<Poly> block_at(std::size_t r, std::size_t c) const {
    return entries.block(r * block, c * block, block, block);
  }
};

inline TransferMatrix make_transfer(std::vector<EdgeId> rows, std::vector<EdgeId> cols,
                                    Matrix<Poly> m) {
  return TransferMatrix{std::move(rows), std::move(cols), 1, std::move(m)};
}

inline std::vector<EdgeId> concat(const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) {
  std::vector<EdgeId> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

/// Local coding matrix F: entry (i, j) is β for adjacent pairs, else zero.
inline TransferMatrix local_coding_matrix(const Digraph& g) {
  const auto ids = g.topological_edge_order();
  Matrix<Poly> f(ids.size(), ids.size(), Poly());
  SymbolicScalarRing ring{&g};
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (auto j : g.successors(i)) f(i, j) = ring.coef(i, j);
  }
  return make_transfer(ids, ids, std::move(f));
}

/// H = (I - F)^-1, built row by row along topological order.
inline TransferMatrix extended_transfer_matrix(const Digraph& g) {
  const auto ids = g.topological_edge_order();
  return make_transfer(ids, ids, transfer_values(g, ids, ids, SymbolicScalarRing{&g}));
}

inline TransferMatrix transfer_matrix(const Digraph& g, const std::vector<EdgeId>& rows,
                                      const std::vector<EdgeId>& cols) {
  return make_transfer(rows, cols, transfer_values(g, rows, cols, SymbolicScalarRing{&g}));
}

inline TransferMatrix coupling_matrix(const Digraph& g, const std::vector<EdgeId>& u) {
  return make_transfer(u, u, coupling_values(g, u, SymbolicScalarRing{&g}));
}

inline TransferMatrix destinations_excluded_matrix(const Digraph& g,
                                                   const std::vector<EdgeId>& rows,
                                                   const std::vector<EdgeId>& cols) {
  return make_transfer(rows, cols,
                       destinations_excluded_values(g, rows, cols, SymbolicScalarRing{&g}));
}

inline TransferMatrix sources_excluded_matrix(const Digraph& g, const std::vector<EdgeId>& rows,
                                              const std::vector<EdgeId>& cols) {
  return make_transfer(rows, cols,
                       sources_excluded_values(g, rows, cols, SymbolicScalarRing{&g}));
}

/// Paths from S1 ∪ S2 to T1 ∪ T2 that pass through `u`.
inline TransferMatrix restricted_network_transfer_matrix(const Network& net, const EdgeSet& u) {
  const auto rows = concat(net.s1(), net.s2()), cols = concat(net.t1(), net.t2());
  return make_transfer(rows, cols, restricted_values(net, rows, cols, u, SymbolicScalarRing{&net}));
}

/// Session matrix G_{i,j}: sources of session i to destinations of session j.
inline TransferMatrix session_matrix(const Network& net, int i, int j) {
  const auto& rows = i == 1 ? net.s1() : net.s2();
  const auto& cols = j == 1 ? net.t1() : net.t2();
  return transfer_matrix(net, rows, cols);
}

inline TransferMatrix vector_transfer_matrix(const Digraph& g, unsigned v,
                                             const std::vector<EdgeId>& rows,
                                             const std::vector<EdgeId>& cols) {
  if (v < 1) throw DimensionMismatch("block dimension must be at least 1");
  const auto blocks = transfer_values(g, rows, cols, SymbolicBlockRing{&g, v});
  return TransferMatrix{rows, cols, v, flatten(blocks, v, Poly())};
}

inline TransferMatrix vector_extended_transfer_matrix(const Digraph& g, unsigned v) {
  const auto ids = g.topological_edge_order();
  return vector_transfer_matrix(g, v, ids, ids);
}

/// Transfer matrix under a concrete code, flattened to scalars.
inline Matrix<GF2k::Elem> evaluated_transfer(const Digraph& g, const CodeAssignment& code,
                                             const std::vector<EdgeId>& rows,
                                             const std::vector<EdgeId>& cols) {
  if (code.block == 1) {
    return transfer_values(g, rows, cols, EvaluatedScalarRing{&g, &code, code.field()});
  }
  const auto blocks =
      transfer_values(g, rows, cols, EvaluatedBlockRing{&g, &code, FieldOps{code.field()}});
  return flatten(blocks, code.block, GF2k::Elem{0});
}

/// Substitutes a scalar code into a symbolic matrix.
inline Matrix<GF2k::Elem> evaluate_matrix(const Matrix<Poly>& m, const CodeAssignment& code) {
  if (code.block != 1) throw DimensionMismatch("scalar evaluation of a vector code");
  const GF2k f = code.field();
  Assignment at;
  for (const auto& [pair, b] : code.coefficients) at[VarId{pair.first, pair.second}] = b(0, 0);
  // Variables the code leaves unset are zero.
  for (const auto& p : m.data()) {
    for (const auto& v : p.variables()) at.emplace(v, 0);
  }
  Matrix<GF2k::Elem> out(m.rows(), m.cols(), 0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = evaluate(m(r, c), at, f);
  }
  return out;
}

}  // namespace netcode
