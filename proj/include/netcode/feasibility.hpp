#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "netcode/assignment.hpp"
#include "netcode/code.hpp"
#include "netcode/decomposition.hpp"
#include "netcode/errors.hpp"
#include "netcode/gns.hpp"
#include "netcode/network.hpp"
#include "netcode/paths.hpp"
#include "netcode/polynomial.hpp"
#include "netcode/transfer.hpp"

namespace netcode {

/// s2 -> t1 paths split by which cut edges they use.
struct PathClassCount {
  std::uint64_t via_e1_not_e2 = 0;
  std::uint64_t via_e2_not_e1 = 0;
  std::uint64_t via_both = 0;

  int nonempty() const {
    return (via_e1_not_e2 > 0) + (via_e2_not_e1 > 0) + (via_both > 0);
  }
  std::uint64_t total() const { return via_e1_not_e2 + via_e2_not_e1 + via_both; }
  std::string to_string() const {
    return "(" + std::to_string(via_e1_not_e2) + "," + std::to_string(via_e2_not_e1) + "," +
           std::to_string(via_both) + ")";
  }
  bool operator==(const PathClassCount&) const = default;
};

inline PathClassCount classify_interference(const Network& net, const GnsPair& pair,
                                            std::uint64_t cap = kDefaultPathCap) {
  if (!net.single_edge_sessions()) throw DimensionMismatch("needs single-edge sessions");
  check_pair(net, pair);
  const EdgeSet s2{net.s2()[0]}, t1{net.t1()[0]};
  PathClassCount c;
  c.via_e1_not_e2 = count_paths(net, s2, t1, {pair.e1}, {pair.e2}, cap);
  c.via_e2_not_e1 = count_paths(net, s2, t1, {pair.e2}, {pair.e1}, cap);
  c.via_both = count_paths(net, s2, t1, {pair.e1}, {}, cap) - c.via_e1_not_e2;
  return c;
}

/// Coefficients into edge e: β_{x,e} for every x in In(e).
inline VarGroup incoming_group(const Digraph& g, const EdgeId& e) {
  VarGroup u;
  for (auto i : g.predecessors(g.index(e))) u.insert(VarId{g.id(i), e});
  return u;
}

/// When, for some cut edge e_i, one s2 -> t1 path uses e_i and another
/// avoids it, returns the coefficient group u_i into e_i. The s2 -> t1
/// polynomial then mixes degree 0 and degree 1 in u_i; that is asserted.
inline std::optional<VarGroup> homogeneity_witness(const Network& net, const GnsPair& pair) {
  if (!net.single_edge_sessions()) throw DimensionMismatch("needs single-edge sessions");
  check_pair(net, pair);
  const EdgeSet s1{net.s1()[0]}, t1{net.t1()[0]}, s2{net.s2()[0]}, t2{net.t2()[0]};
  if (count_paths(net, s1, t1) == 0 || count_paths(net, s2, t2) == 0) {
    throw PreconditionViolated("homogeneity witness needs both sessions connected");
  }
  for (const EdgeId& e : {pair.e1, pair.e2}) {
    if (count_paths(net, s2, t1, {e}) == 0 || count_paths(net, s2, t1, {}, {e}) == 0) continue;
    VarGroup u = incoming_group(net, e);
    const Poly interference = transfer_matrix(net, net.s2(), net.t1())(0, 0);
    if (is_homogeneous(interference, u)) {
      throw InternalContradiction("s2->t1 polynomial is homogeneous in the coefficients into " + e);
    }
    return u;
  }
  return std::nullopt;
}

enum class Verdict { Achievable, Infeasible };

struct FeasibilityVerdict {
  Verdict verdict = Verdict::Infeasible;

  // Achievable
  std::optional<CodeAssignment> code;
  unsigned field_degree = 0;
  std::string method;  // "routing", "search" or "single-path routing"

  // Infeasible
  std::optional<EdgeCut> witness;
  int missing_session = 0;  // 1 or 2 when a session has no path

  /// One line per step of the procedure, for reports.
  std::vector<std::string> trace;

  bool achievable() const { return verdict == Verdict::Achievable; }
};

struct DecideOptions {
  unsigned max_field_degree = 16;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t random_trials = 2000;
};

namespace detail {

/// Lexicographically smallest path from `from` to `to`.
inline std::optional<std::vector<std::size_t>> first_path(const Digraph& g, std::size_t from,
                                                          std::size_t to) {
  if (!g.reaches(from, to)) return std::nullopt;
  std::vector<std::size_t> p{from};
  while (p.back() != to) {
    for (auto j : g.successors(p.back())) {
      if (g.reaches(j, to)) {
        p.push_back(j);
        break;
      }
    }
  }
  return p;
}

inline CodeAssignment routing_code(const Network& net,
                                   const std::vector<std::vector<EdgeId>>& paths) {
  CodeAssignment code(1, 1);
  for (auto [i, j] : adjacent_pairs(net)) code.set(net.id(i), net.id(j), 0);
  for (const auto& p : paths) {
    for (std::size_t i = 0; i + 1 < p.size(); ++i) code.set(p[i], p[i + 1], 1);
  }
  return code;
}

inline std::vector<EdgeId> ids(const Digraph& g, const std::vector<std::size_t>& p) {
  std::vector<EdgeId> out;
  for (auto i : p) out.push_back(g.id(i));
  return out;
}

}  // namespace detail

/// Structure of a network with exactly one s2 -> t1 path P = q0..qL.
struct SingleInterferenceAnalysis {
  Path interference;  // P
  /// For each s1 -> t1 path, the index on P of its first edge on P.
  std::vector<std::size_t> join_index;
  /// For each s2 -> t2 path, the index of the last edge of its common prefix with P.
  std::vector<std::size_t> leave_index;
  std::size_t j = 0;  // max join index
  std::size_t i = 0;  // min leave index
  /// s1 -> t1 paths never leave P once on it.
  bool joined_paths_stay = true;
  /// s2 -> t2 paths never come back to P after leaving.
  bool leaving_paths_stay_out = true;
  Path p1;  // an s1 -> t1 path joining at j
  Path p2;  // an s2 -> t2 path leaving at i
};

inline SingleInterferenceAnalysis analyze_single_interference(const Network& net,
                                                              std::size_t cap = kDefaultPathCap) {
  if (!net.single_edge_sessions()) throw DimensionMismatch("needs single-edge sessions");
  const EdgeSet s1{net.s1()[0]}, t1{net.t1()[0]}, s2{net.s2()[0]}, t2{net.t2()[0]};
  auto inter = enumerate_paths(net, s2, t1, {}, {}, cap);
  if (inter.size() != 1) {
    throw PreconditionViolated("expected exactly one s2->t1 path, found " +
                               std::to_string(inter.size()));
  }
  SingleInterferenceAnalysis a;
  a.interference = inter[0];
  std::map<EdgeId, std::size_t> pos;
  for (std::size_t k = 0; k < a.interference.size(); ++k) pos[a.interference[k]] = k;

  bool first = true;
  for (const auto& p : enumerate_paths(net, s1, t1, {}, {}, cap)) {
    std::size_t k = 0;
    while (!pos.count(p[k])) ++k;  // t1 lies on P, so this stops
    for (std::size_t m = k; m < p.size(); ++m) {
      if (!pos.count(p[m])) a.joined_paths_stay = false;
    }
    const std::size_t idx = pos.at(p[k]);
    a.join_index.push_back(idx);
    if (first || idx > a.j) {
      a.j = idx;
      a.p1 = p;
    }
    first = false;
  }
  first = true;
  for (const auto& p : enumerate_paths(net, s2, t2, {}, {}, cap)) {
    std::size_t k = 0;
    while (k + 1 < p.size() && k + 1 < a.interference.size() &&
           p[k + 1] == a.interference[k + 1]) {
      ++k;
    }
    for (std::size_t m = k + 1; m < p.size(); ++m) {
      if (pos.count(p[m])) a.leaving_paths_stay_out = false;
    }
    a.leave_index.push_back(k);
    if (first || k < a.i) {
      a.i = k;
      a.p2 = p;
    }
    first = false;
  }
  return a;
}

/// Decides whether rate (1, 1) is achievable with scalar linear coding,
/// returning a verified code or a checkable obstruction.
///
/// Steps: (0) both sessions must be connected; (1) a GNS cut of size <= 1
/// rules the rate out; (2) without s2 -> t1 paths, route on two paths;
/// (3) reduce to a critical network; (4) if some two-edge GNS cut sees two
/// or more classes of interference paths, search for a code; (5) otherwise
/// the interference path is unique and routing on p1, p2 works.
inline FeasibilityVerdict decide_rate11(const Network& net, const DecideOptions& opt = {}) {
  if (!net.single_edge_sessions()) {
    throw DimensionMismatch("rate (1,1) decision needs single-edge sessions");
  }
  FeasibilityVerdict v;
  const std::size_t s1 = net.index(net.s1()[0]), t1 = net.index(net.t1()[0]);
  const std::size_t s2 = net.index(net.s2()[0]), t2 = net.index(net.t2()[0]);

  auto accept = [&](CodeAssignment code, unsigned k, std::string method) {
    if (!verify_scalar_code(net, code, 1, 1)) {
      throw InternalContradiction(method + " code failed verification");
    }
    v.verdict = Verdict::Achievable;
    v.code = std::move(code);
    v.field_degree = k;
    v.method = std::move(method);
    return v;
  };

  if (!net.reaches(s1, t1) || !net.reaches(s2, t2)) {
    v.missing_session = net.reaches(s1, t1) ? 2 : 1;
    v.trace.push_back("step 0: no path for session " + std::to_string(v.missing_session));
    return v;
  }
  if (auto cut = min_gns_cut(net, 1)) {
    v.witness = std::move(cut);
    v.trace.push_back("step 1: GNS cut of size " + std::to_string(v.witness->size()));
    return v;
  }
  if (!net.reaches(s2, t1)) {
    v.trace.push_back("step 2: no interference; routing");
    const auto p1 = detail::first_path(net, s1, t1), p2 = detail::first_path(net, s2, t2);
    return accept(detail::routing_code(net, {detail::ids(net, *p1), detail::ids(net, *p2)}), 1,
                  "routing");
  }

  const Network crit = criticalize(net);
  v.trace.push_back("step 3: critical network keeps " + std::to_string(crit.edge_count()) +
                    " of " + std::to_string(net.edge_count()) + " edges");

  auto lift = [&](const CodeAssignment& c, unsigned k) {
    CodeAssignment out(k, 1);
    for (auto [i, j] : adjacent_pairs(net)) out.set(net.id(i), net.id(j), c.scalar(net.id(i), net.id(j)));
    return out;
  };

  for (const auto& cut : gns_cuts_of_size(crit, 2)) {
    const GnsPair pair = make_gns_pair(crit, *cut.begin(), *cut.rbegin());
    const auto classes = classify_interference(crit, pair);
    if (classes.nonempty() < 2) continue;
    v.trace.push_back("step 4: cut {" + pair.e1 + ", " + pair.e2 + "} has classes " +
                      classes.to_string() + "; searching");
    for (unsigned k : {1u, 2u}) {
      if (k > opt.max_field_degree) break;
      try {
        SearchOptions so;
        so.kind = SearchKind::Exhaustive;
        auto r = find_scalar_code(crit, 1, 1, k, so);
        if (r.code) return accept(lift(*r.code, k), k, "search");
        v.trace.push_back("  GF(2^" + std::to_string(k) + ") exhausted");
      } catch (const SearchSpaceTooLarge&) {
        v.trace.push_back("  GF(2^" + std::to_string(k) + ") too large for exhaustive search");
      }
    }
    for (unsigned k = 4; k <= opt.max_field_degree; ++k) {
      SearchOptions so;
      so.kind = SearchKind::Random;
      so.trials = opt.random_trials;
      so.seed = opt.seed;
      so.jobs = opt.jobs;
      auto r = find_scalar_code(crit, 1, 1, k, so);
      if (r.code) return accept(lift(*r.code, k), k, "search");
    }
    throw InternalContradiction("no code found up to GF(2^" + std::to_string(opt.max_field_degree) +
                                ") although two interference classes exist");
  }

  const std::uint64_t n_inter = count_paths(crit, {crit.s2()[0]}, {crit.t1()[0]});
  if (n_inter == 0) {
    // Reduction removed all interference; route inside the critical network.
    v.trace.push_back("step 5: critical network has no interference; routing");
    const std::size_t c1 = crit.index(crit.s1()[0]), d1 = crit.index(crit.t1()[0]);
    const std::size_t c2 = crit.index(crit.s2()[0]), d2 = crit.index(crit.t2()[0]);
    const auto p1 = detail::first_path(crit, c1, d1), p2 = detail::first_path(crit, c2, d2);
    return accept(detail::routing_code(net, {detail::ids(crit, *p1), detail::ids(crit, *p2)}), 1,
                  "routing");
  }
  if (n_inter != 1) {
    throw InternalContradiction("critical network has " + std::to_string(n_inter) +
                                " interference paths but every GNS pair sees one class");
  }
  const auto a = analyze_single_interference(crit);
  v.trace.push_back("step 5: single interference path, join index " + std::to_string(a.j) +
                    ", leave index " + std::to_string(a.i));
  if (a.j <= a.i) {
    throw InternalContradiction("edge '" + a.interference[a.j] +
                                "' would be a single-edge GNS cut");
  }
  return accept(detail::routing_code(net, {a.p1, a.p2}), 1, "single-path routing");
}

struct OracleOptions {
  std::uint64_t node_budget = 2'000'000;
  /// Above this many variables the oracle only samples.
  std::size_t exact_variable_limit = 48;
  std::size_t random_trials = 20000;
  std::uint64_t seed = 0;
};

namespace detail {

// Exponents above q-1 act like smaller ones on GF(q): x^q = x.
inline Poly reduce_for_functions(const Poly& p, std::uint64_t q) {
  bool needs = false;
  for (const auto& t : p.terms()) {
    for (auto [v, e] : t.mono.factors()) needs = needs || e >= q;
  }
  if (!needs) return p;
  std::vector<Poly::Term> terms;
  for (const auto& t : p.terms()) {
    Monomial m;
    for (auto [v, e] : t.mono.factors()) {
      const auto r = static_cast<std::uint32_t>(e < q ? e : (e - 1) % (q - 1) + 1);
      m = m * Monomial(v, r);
    }
    terms.push_back({std::move(m), t.coef});
  }
  return Poly::from_terms(p.field_degree(), std::move(terms));
}

// p as Σ_i c_i x^i; entry i of the result is c_i.
inline std::vector<Poly> split_by_power(const Poly& p, std::uint32_t x) {
  std::vector<std::vector<Poly::Term>> parts(p.degree_in(x) + 1);
  for (const auto& t : p.terms()) {
    Monomial m = t.mono;
    const auto e = m.remove(x);
    parts[e].push_back({std::move(m), t.coef});
  }
  std::vector<Poly> out;
  for (auto& part : parts) out.push_back(Poly::from_terms(p.field_degree(), std::move(part)));
  return out;
}

class OracleSearch {
 public:
  OracleSearch(unsigned k, const OracleOptions& opt) : f_(k), opt_(opt) {}

  bool solve(std::vector<Poly> zeros, std::vector<Poly> nonzero) {
    if (++nodes_ > opt_.node_budget) {
      throw SearchSpaceTooLarge("oracle exceeded " + std::to_string(opt_.node_budget) +
                                " search nodes");
    }
    const std::uint64_t q = f_.order();
    std::vector<Poly> z2, n2;
    for (auto& z : zeros) {
      Poly r = reduce_for_functions(z, q);
      if (r.is_zero()) continue;
      if (r.is_constant()) return false;
      z2.push_back(std::move(r));
    }
    for (auto& n : nonzero) {
      Poly r = reduce_for_functions(n, q);
      if (r.is_zero()) return false;
      if (r.is_constant()) continue;
      n2.push_back(std::move(r));
    }
    if (z2.empty()) {
      // A reduced polynomial is nonzero exactly when it is nonzero somewhere.
      Poly prod = Poly::one(f_.degree());
      try {
        for (const auto& n : n2) prod = reduce_for_functions(prod * n, q);
      } catch (const SymbolicOverflow&) {
        throw SearchSpaceTooLarge("oracle product exceeds the monomial cap");
      }
      return !prod.is_zero();
    }

    // Branch variable: the one in the most zero-target terms.
    std::map<std::uint32_t, std::size_t> freq;
    for (const auto& z : z2) {
      for (const auto& t : z.terms()) {
        for (auto [v, e] : t.mono.factors()) ++freq[v];
      }
    }
    std::uint32_t x = 0;
    std::size_t best = 0;
    for (auto [v, c] : freq) {
      if (c > best || (c == best && var_name(v) < var_name(x))) {
        x = v;
        best = c;
      }
    }
    // The zero target through which x is eliminated.
    std::size_t zi = z2.size();
    for (std::size_t i = 0; i < z2.size(); ++i) {
      const auto d = z2[i].degree_in(x);
      if (d == 0) continue;
      if (zi == z2.size() || d < z2[zi].degree_in(x) ||
          (d == z2[zi].degree_in(x) && z2[i].size() < z2[zi].size())) {
        zi = i;
      }
    }

    if (z2[zi].degree_in(x) == 1) {
      const auto parts = split_by_power(z2[zi], x);  // z = b + a x
      const Poly& b = parts[0];
      const Poly& a = parts[1];
      // a != 0 and x = b / a; clear denominators with powers of a.
      {
        auto eliminate = [&](const Poly& p) {
          const auto cs = split_by_power(p, x);
          const std::size_t d = cs.size() - 1;
          if (d == 0) return p;
          std::vector<Poly> apow{Poly::one(f_.degree())}, bpow{Poly::one(f_.degree())};
          for (std::size_t i = 1; i <= d; ++i) {
            apow.push_back(apow.back() * a);
            bpow.push_back(bpow.back() * b);
          }
          Poly out(f_.degree());
          for (std::size_t i = 0; i <= d; ++i) {
            if (!cs[i].is_zero()) out += cs[i] * bpow[i] * apow[d - i];
          }
          return out;
        };
        std::vector<Poly> zs, ns;
        try {
          for (std::size_t i = 0; i < z2.size(); ++i) {
            if (i != zi) zs.push_back(eliminate(z2[i]));
          }
          for (const auto& n : n2) ns.push_back(eliminate(n));
        } catch (const SymbolicOverflow&) {
          throw SearchSpaceTooLarge("oracle elimination exceeds the monomial cap");
        }
        ns.push_back(a);
        if (solve(std::move(zs), std::move(ns))) return true;
      }
      // a = 0 and b = 0; x stays free.
      {
        std::vector<Poly> zs;
        for (std::size_t i = 0; i < z2.size(); ++i) {
          if (i != zi) zs.push_back(z2[i]);
        }
        zs.push_back(a);
        zs.push_back(b);
        return solve(std::move(zs), n2);
      }
    }

    // Higher degree: try every field value for x.
    for (std::uint64_t val = 0; val < q; ++val) {
      std::vector<Poly> zs, ns;
      for (const auto& z : z2) zs.push_back(z.substitute(x, static_cast<GF2k::Elem>(val), f_));
      for (const auto& n : n2) ns.push_back(n.substitute(x, static_cast<GF2k::Elem>(val), f_));
      if (solve(std::move(zs), std::move(ns))) return true;
    }
    return false;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  GF2k f_;
  OracleOptions opt_;
  std::uint64_t nodes_ = 0;
};

}  // namespace detail

/// Is rate (1, 1) achievable over GF(2^k)? Decides whether some assignment
/// makes the interference vanish while the decoding determinant survives:
/// with a GNS pair the conditions are s2->t1 = 0 and det(M) != 0, without
/// one they are G21 = 0 and det(G11) det(G22) != 0.
///
/// The search eliminates one variable at a time through a zero target that
/// is linear in it (z = a x + b splits into a = b = 0, or a != 0 with
/// x = b/a substituted everywhere), and tries every field value for
/// variables that only occur with higher degree. It is exact; it never
/// samples unless the variable count exceeds opts.exact_variable_limit,
/// in which case a miss raises SearchSpaceTooLarge.
inline bool nullstellensatz_oracle(const Network& net, const std::optional<GnsPair>& pair,
                                   unsigned k, const OracleOptions& opts = {}) {
  const GF2k f(k);
  std::vector<Poly> zeros, nonzero;
  if (pair) {
    if (!net.single_edge_sessions()) throw DimensionMismatch("pair form needs single-edge sessions");
    check_pair(net, *pair);
    const SymbolicScalarRing ring{&net};
    const EdgeId &s1 = net.s1()[0], &t1 = net.t1()[0], &s2 = net.s2()[0], &t2 = net.t2()[0];
    auto m = transfer_values(net, {s1, s2}, {t1, t2}, ring);
    m(0, 1) = restricted_values(net, {s1}, {t2}, {pair->e1, pair->e2}, ring)(0, 0);
    zeros.push_back(m(1, 0));
    nonzero.push_back(determinant(m));
  } else {
    const auto g21 = transfer_matrix(net, net.s2(), net.t1());
    zeros.assign(g21.entries.data().begin(), g21.entries.data().end());
    nonzero.push_back(determinant(transfer_matrix(net, net.s1(), net.t1()).entries));
    nonzero.push_back(determinant(transfer_matrix(net, net.s2(), net.t2()).entries));
  }
  for (auto& p : zeros) p = p.promoted(k);
  for (auto& p : nonzero) p = p.promoted(k);

  std::set<VarId> vars;
  for (const auto* list : {&zeros, &nonzero}) {
    for (const auto& p : *list) {
      for (const auto& v : p.variables()) vars.insert(v);
    }
  }
  if (vars.size() <= opts.exact_variable_limit) {
    detail::OracleSearch search(k, opts);
    return search.solve(std::move(zeros), std::move(nonzero));
  }
  // Sampling: each coefficient is zero with probability 1/2, otherwise uniform.
  FieldSampler draw(f, opts.seed);
  for (std::size_t t = 0; t < opts.random_trials; ++t) {
    Assignment at;
    for (const auto& v : vars) at[v] = (draw.engine()() & 1) ? 0 : draw();
    const bool ok =
        std::all_of(zeros.begin(), zeros.end(), [&](const Poly& p) { return evaluate(p, at, f) == 0; }) &&
        std::all_of(nonzero.begin(), nonzero.end(), [&](const Poly& p) { return evaluate(p, at, f) != 0; });
    if (ok) return true;
  }
  throw SearchSpaceTooLarge("oracle sampling found no witness among " +
                            std::to_string(opts.random_trials) + " draws");
}

}  // namespace netcode
