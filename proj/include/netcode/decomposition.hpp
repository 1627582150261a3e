#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "netcode/errors.hpp"
#include "netcode/gns.hpp"
#include "netcode/matrix.hpp"
#include "netcode/network.hpp"
#include "netcode/polynomial.hpp"
#include "netcode/transfer.hpp"

namespace netcode {

/// Two-edge GNS cut with e1 before e2 in topological order.
struct GnsPair {
  EdgeId e1;
  EdgeId e2;
};

/// Orders the two edges topologically and checks the GNS property.
inline GnsPair make_gns_pair(const Network& net, const EdgeId& a, const EdgeId& b) {
  if (a == b) throw NotAGnsCut("cut edges must differ");
  if (!is_gns_cut(net, {a, b})) throw NotAGnsCut("{" + a + ", " + b + "} is not a GNS cut");
  return net.index(a) < net.index(b) ? GnsPair{a, b} : GnsPair{b, a};
}

inline void check_pair(const Network& net, const GnsPair& p) {
  if (net.index(p.e1) >= net.index(p.e2)) {
    throw NotTopologicallySorted("cut pair is not in topological order");
  }
  if (!is_gns_cut(net, {p.e1, p.e2})) {
    throw NotAGnsCut("{" + p.e1 + ", " + p.e2 + "} is not a GNS cut");
  }
}

/// Subnetwork with designated entry and exit edges.
struct SideNetwork {
  Digraph graph;
  std::vector<EdgeId> sources;
  std::vector<EdgeId> sinks;
};

namespace detail {

inline SideNetwork side_between(const Digraph& g, const std::vector<EdgeId>& from,
                                const std::vector<EdgeId>& to) {
  const EdgeMask none(g.edge_count());
  const EdgeMask fwd = g.forward_closure(g.mask(from), none);
  const EdgeMask bwd = g.backward_closure(g.mask(to), none);
  std::vector<Edge> kept;
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (fwd.test(i) && bwd.test(i)) kept.push_back(g.edge(i));
  }
  SideNetwork s{Digraph(std::move(kept)), {}, {}};
  for (const auto& e : from) {
    if (s.graph.has_edge(e)) s.sources.push_back(e);
  }
  for (const auto& e : to) {
    if (s.graph.has_edge(e)) s.sinks.push_back(e);
  }
  return s;
}

inline std::set<std::uint32_t> matrix_vars(const Matrix<Poly>& m) {
  std::set<std::uint32_t> out;
  for (const auto& p : m.data()) {
    for (auto v : p.variable_indices()) out.insert(v);
  }
  return out;
}

inline bool disjoint(const std::set<std::uint32_t>& a, const std::set<std::uint32_t>& b) {
  return std::none_of(a.begin(), a.end(), [&](std::uint32_t v) { return b.count(v) != 0; });
}

}  // namespace detail

/// Edges on some S1 ∪ S2 -> {e1, e2} path; exits are the cut edges.
inline SideNetwork left_side_network(const Network& net, const GnsPair& p) {
  return detail::side_between(net, concat(net.s1(), net.s2()), {p.e1, p.e2});
}

/// Edges on some {e1, e2} -> T1 ∪ T2 path; entries are the cut edges.
inline SideNetwork right_side_network(const Network& net, const GnsPair& p) {
  return detail::side_between(net, {p.e1, p.e2}, concat(net.t1(), net.t2()));
}

/// Outcome of checking target = product of factors.
struct IdentityCheck {
  bool holds = false;
  bool symbolic = true;
  /// Chance a false identity passed; zero for symbolic checks.
  double error_bound = 0.0;
};

/// Compares `target` with the product of `factors`, expanding symbolically
/// when the monomial cap allows and falling back to random evaluation over
/// GF(2^32) otherwise.
inline IdentityCheck check_product(const Matrix<Poly>& target,
                                   const std::vector<const Matrix<Poly>*>& factors,
                                   std::uint64_t seed = 0, unsigned trials = 8) {
  PolyOps ops;
  try {
    Matrix<Poly> prod = *factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) prod = matmul(prod, *factors[i], ops);
    return {prod == target, true, 0.0};
  } catch (const SymbolicOverflow&) {
  }
  std::set<VarId> vars;
  unsigned degree = 0;
  auto scan = [&](const Matrix<Poly>& m) {
    unsigned d = 0;
    for (const auto& p : m.data()) {
      for (const auto& v : p.variables()) vars.insert(v);
      for (const auto& t : p.terms()) d = std::max(d, t.mono.total_degree());
    }
    return d;
  };
  unsigned factor_degree = 0;
  for (const auto* f : factors) factor_degree += scan(*f);
  degree = std::max(scan(target), factor_degree);
  const GF2k field(32);
  FieldSampler draw(field, seed);
  FieldOps fops{field};
  auto eval_matrix = [&](const Matrix<Poly>& m, const Assignment& at) {
    Matrix<GF2k::Elem> out(m.rows(), m.cols(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = evaluate(m(r, c), at, field);
    }
    return out;
  };
  for (unsigned t = 0; t < trials; ++t) {
    Assignment at;
    for (const auto& v : vars) at[v] = draw();
    auto prod = eval_matrix(*factors.front(), at);
    for (std::size_t i = 1; i < factors.size(); ++i) {
      prod = matmul(prod, eval_matrix(*factors[i], at), fops);
    }
    if (!(prod == eval_matrix(target, at))) return {false, false, 0.0};
  }
  double bound = 1.0;
  const double per = std::min(1.0, degree / static_cast<double>(field.order()));
  for (unsigned t = 0; t < trials; ++t) bound *= per;
  return {true, false, bound};
}

struct Decomposition {
  GnsPair pair;
  TransferMatrix M, M1, Lambda, M2;
  SideNetwork left_net, right_net;
  IdentityCheck identity;
  bool disjoint_c = false;  // vars(s_i -> e1) ∩ vars(M2) = ∅
  bool disjoint_d = false;  // vars(M1) ∩ vars(e2 -> t_i) = ∅
  /// vars(M1) ∩ vars(M2) = ∅; only asserted without an e1 -> e2 path.
  std::optional<bool> disjoint_e;

  bool all_checks_pass() const {
    return identity.holds && disjoint_c && disjoint_d && disjoint_e.value_or(true);
  }
};

/// Builds M, M1, Λ, M2 for a two-edge GNS cut of a network with single-edge
/// sessions and verifies M = M1 Λ M2 together with the disjointness claims.
///
/// M(1,2) counts only s1 -> t2 paths through the cut; the other entries are
/// full path sums, which the cut meets anyway.
inline Decomposition decompose(const Network& net, const GnsPair& pair) {
  if (!net.single_edge_sessions()) {
    throw DimensionMismatch("decompose needs single-edge sessions; use general_decompose");
  }
  check_pair(net, pair);
  const EdgeId &s1 = net.s1()[0], &t1 = net.t1()[0], &s2 = net.s2()[0], &t2 = net.t2()[0];
  const std::vector<EdgeId> src{s1, s2}, dst{t1, t2}, cut{pair.e1, pair.e2};
  const SymbolicScalarRing ring{&net};

  Decomposition d;
  d.pair = pair;
  {
    auto full = transfer_values(net, src, dst, ring);
    auto via = restricted_values(net, {s1}, {t2}, {pair.e1, pair.e2}, ring);
    full(0, 1) = via(0, 0);
    d.M = make_transfer(src, dst, std::move(full));
  }
  d.M1 = make_transfer(src, cut, destinations_excluded_values(net, src, cut, ring));
  d.Lambda = make_transfer(cut, cut, coupling_values(net, cut, ring));
  d.M2 = make_transfer(cut, dst, sources_excluded_values(net, cut, dst, ring));
  d.left_net = left_side_network(net, pair);
  d.right_net = right_side_network(net, pair);

  d.identity = check_product(d.M.entries, {&d.M1.entries, &d.Lambda.entries, &d.M2.entries});
  if (!d.identity.holds) {
    throw DecompositionMismatch("M != M1 Λ M2 for cut {" + pair.e1 + ", " + pair.e2 + "}");
  }

  const auto v_m1 = detail::matrix_vars(d.M1.entries);
  const auto v_m2 = detail::matrix_vars(d.M2.entries);
  const auto v_into_e1 = detail::matrix_vars(d.M1.entries.block(0, 0, 2, 1));
  const auto v_from_e2 = detail::matrix_vars(d.M2.entries.block(1, 0, 1, 2));
  d.disjoint_c = detail::disjoint(v_into_e1, v_m2);
  d.disjoint_d = detail::disjoint(v_m1, v_from_e2);
  if (!net.reaches(pair.e1, pair.e2)) {
    d.disjoint_e = detail::disjoint(v_m1, v_m2);
  }
  return d;
}

struct GeneralDecomposition {
  std::vector<EdgeId> u;
  TransferMatrix restricted;       // S1 ∪ S2 -> T1 ∪ T2 via U
  TransferMatrix dest_excluded;    // M'
  TransferMatrix coupling;         // Λ^U
  TransferMatrix source_excluded;  // M''
  IdentityCheck identity;
};

/// Factors the via-U transfer matrix as M' Λ^U M'' for any topologically
/// sorted edge list U.
inline GeneralDecomposition general_decompose(const Network& net, const std::vector<EdgeId>& u) {
  if (u.empty()) throw PreconditionViolated("general_decompose needs a nonempty edge list");
  const auto src = concat(net.s1(), net.s2()), dst = concat(net.t1(), net.t2());
  const SymbolicScalarRing ring{&net};
  GeneralDecomposition g;
  g.u = u;
  g.coupling = make_transfer(u, u, coupling_values(net, u, ring));
  g.restricted = make_transfer(src, dst, restricted_values(net, src, dst, {u.begin(), u.end()}, ring));
  g.dest_excluded = make_transfer(src, u, destinations_excluded_values(net, src, u, ring));
  g.source_excluded = make_transfer(u, dst, sources_excluded_values(net, u, dst, ring));
  g.identity = check_product(g.restricted.entries, {&g.dest_excluded.entries,
                                                    &g.coupling.entries,
                                                    &g.source_excluded.entries});
  if (!g.identity.holds) throw DecompositionMismatch("restricted matrix != M' Λ M''");
  return g;
}

/// The s2 -> t1 polynomial split along a two-edge GNS cut:
///   s2->t1 = b1u1 (μ11 + λ12u2 μ21) + b2u2 μ21.
struct InterferenceExpansion {
  Poly total;      // s2 -> t1
  Poly b1u1;       // s2 -> e1
  Poly b2u2;       // s2 -> e2 avoiding e1
  Poly lambda12u2; // e1 -> e2
  Poly mu11;       // e1 -> t1 avoiding e2
  Poly mu21;       // e2 -> t1

  Poly reassembled() const { return b1u1 * (mu11 + lambda12u2 * mu21) + b2u2 * mu21; }
};

inline InterferenceExpansion interference_expansion(const Network& net, const GnsPair& pair) {
  if (!net.single_edge_sessions()) throw DimensionMismatch("needs single-edge sessions");
  check_pair(net, pair);
  const SymbolicScalarRing ring{&net};
  const std::size_t e1 = net.index(pair.e1), e2 = net.index(pair.e2);
  const std::size_t s2 = net.index(net.s2()[0]), t1 = net.index(net.t1()[0]);
  const EdgeMask none(net.edge_count());
  EdgeMask no_e1(net.edge_count()), no_e2(net.edge_count());
  no_e1.set(e1);
  no_e2.set(e2);

  InterferenceExpansion x;
  const auto from_s2 = path_sums_from(net, s2, none, ring);
  x.total = from_s2[t1];
  x.b1u1 = from_s2[e1];
  x.b2u2 = path_sums_from(net, s2, no_e1, ring)[e2];
  const auto from_e1 = path_sums_from(net, e1, none, ring);
  x.lambda12u2 = from_e1[e2];
  x.mu11 = path_sums_from(net, e1, no_e2, ring)[t1];
  x.mu21 = path_sums_from(net, e2, none, ring)[t1];
  if (!(x.reassembled() == x.total)) {
    throw DecompositionMismatch("interference expansion does not reassemble");
  }
  return x;
}

}  // namespace netcode
