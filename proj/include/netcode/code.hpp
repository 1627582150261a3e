#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "netcode/assignment.hpp"
#include "netcode/errors.hpp"
#include "netcode/field.hpp"
#include "netcode/matrix.hpp"
#include "netcode/network.hpp"
#include "netcode/polynomial.hpp"
#include "netcode/transfer.hpp"

namespace netcode {

/// Nonnegative rational rate such as 3/2.
struct Rational {
  long num = 0;
  long den = 1;

  Rational() = default;
  Rational(long n, long d = 1) : num(n), den(d) {
    if (d <= 0 || n < 0) throw DimensionMismatch("rates must be nonnegative with positive denominator");
  }
  /// vR as an integer; throws when it is not one.
  long scaled(long v) const {
    if ((num * v) % den != 0) {
      throw DimensionMismatch("rate " + to_string() + " times block dimension " +
                              std::to_string(v) + " is not an integer");
    }
    return num * v / den;
  }
  std::string to_string() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
  }
};

/// Per-criterion outcome of checking a code against the decoding conditions
/// det(G11) != 0, det(G22) != 0 and G21 = 0.
struct CodeCheck {
  GF2k::Elem det11 = 0;
  GF2k::Elem det22 = 0;
  bool interference_zero = false;
  bool ok() const { return det11 != 0 && det22 != 0 && interference_zero; }
};

inline CodeCheck check_scalar_code(const Network& net, const CodeAssignment& code, long r1,
                                   long r2) {
  if (code.block != 1) throw DimensionMismatch("scalar check of a vector code");
  if (static_cast<long>(net.s1().size()) != r1 || static_cast<long>(net.t1().size()) != r1 ||
      static_cast<long>(net.s2().size()) != r2 || static_cast<long>(net.t2().size()) != r2) {
    throw DimensionMismatch("session sizes do not match rate (" + std::to_string(r1) + "," +
                            std::to_string(r2) + ")");
  }
  const GF2k f = code.field();
  CodeCheck c;
  c.det11 = determinant(evaluated_transfer(net, code, net.s1(), net.t1()), f);
  c.det22 = determinant(evaluated_transfer(net, code, net.s2(), net.t2()), f);
  c.interference_zero =
      is_zero_matrix(evaluated_transfer(net, code, net.s2(), net.t1()), FieldOps{f});
  return c;
}

/// True when `code` lets destination 1 recover message 1 free of
/// interference and destination 2 recover message 2 at rate (r1, r2).
inline bool verify_scalar_code(const Network& net, const CodeAssignment& code, long r1, long r2) {
  return check_scalar_code(net, code, r1, r2).ok();
}

/// Vector version with block dimension code.block. Encoders and decoders
/// default to identity, which requires vR_i = v|S_i| (resp. v|T_i|).
inline CodeCheck check_vector_code(const Network& net, const CodeAssignment& code,
                                   const Rational& r1, const Rational& r2) {
  const long v = code.block;
  const long n1 = r1.scaled(v), n2 = r2.scaled(v);
  const GF2k f = code.field();
  const FieldOps ops{f};
  auto encoder = [&](int i, long rows, std::size_t edges) {
    const long cols = v * static_cast<long>(edges);
    if (auto it = code.encoders.find(i); it != code.encoders.end()) {
      if (static_cast<long>(it->second.rows()) != rows ||
          static_cast<long>(it->second.cols()) != cols) {
        throw DimensionMismatch("encoder " + std::to_string(i) + " has the wrong shape");
      }
      return it->second;
    }
    if (rows != cols) {
      throw DimensionMismatch("session " + std::to_string(i) + " needs an encoder: rate " +
                              std::to_string(rows) + " over " + std::to_string(cols) +
                              " coordinates");
    }
    return identity(static_cast<std::size_t>(rows), ops);
  };
  auto decoder = [&](int i, long cols, std::size_t edges) {
    const long rows = v * static_cast<long>(edges);
    if (auto it = code.decoders.find(i); it != code.decoders.end()) {
      if (static_cast<long>(it->second.rows()) != rows ||
          static_cast<long>(it->second.cols()) != cols) {
        throw DimensionMismatch("decoder " + std::to_string(i) + " has the wrong shape");
      }
      return it->second;
    }
    if (rows != cols) {
      throw DimensionMismatch("session " + std::to_string(i) + " needs a decoder");
    }
    return identity(static_cast<std::size_t>(rows), ops);
  };
  const auto p1 = encoder(1, n1, net.s1().size()), p2 = encoder(2, n2, net.s2().size());
  const auto q1 = decoder(1, n1, net.t1().size()), q2 = decoder(2, n2, net.t2().size());
  auto g = [&](const std::vector<EdgeId>& s, const std::vector<EdgeId>& t) {
    return evaluated_transfer(net, code, s, t);
  };
  CodeCheck c;
  c.det11 = determinant(matmul(matmul(p1, g(net.s1(), net.t1()), ops), q1, ops), f);
  c.det22 = determinant(matmul(matmul(p2, g(net.s2(), net.t2()), ops), q2, ops), f);
  c.interference_zero = is_zero_matrix(matmul(matmul(p2, g(net.s2(), net.t1()), ops), q1, ops), ops);
  return c;
}

inline bool verify_vector_code(const Network& net, const CodeAssignment& code,
                               const Rational& r1, const Rational& r2) {
  return check_vector_code(net, code, r1, r2).ok();
}

/// Replaces a session's edges by `rate` fresh edges meeting at the vertex the
/// old edges share, so any rate can be studied with square session matrices.
/// Sessions whose size already equals the rate are untouched.
inline Network adapt_rates(const Network& net, long r1, long r2) {
  std::vector<Edge> edges = net.edges();
  std::set<EdgeId> taken;
  for (const auto& e : edges) taken.insert(e.id);
  auto fresh = [&](const std::string& base) {
    std::string id = base;
    while (taken.count(id)) id += "'";
    taken.insert(id);
    return id;
  };
  auto common = [&](const std::vector<EdgeId>& es, bool tail, const char* what) {
    if (es.empty()) throw DimensionMismatch(std::string(what) + " is empty");
    const auto& first = net.edge(net.index(es[0]));
    const std::string v = tail ? first.tail : first.head;
    for (const auto& e : es) {
      const auto& x = net.edge(net.index(e));
      if ((tail ? x.tail : x.head) != v) {
        throw DimensionMismatch(std::string(what) + " edges do not share a vertex");
      }
    }
    return v;
  };
  auto adapt_src = [&](const std::vector<EdgeId>& s, long rate, const char* name) {
    if (static_cast<long>(s.size()) == rate) return s;
    const std::string v = common(s, true, name);
    std::vector<EdgeId> out;
    const std::string root = fresh(std::string(name) + "*");
    for (long i = 1; i <= rate; ++i) {
      out.push_back(fresh(std::string(name) + "*" + std::to_string(i)));
      edges.push_back({out.back(), root, v});
    }
    return out;
  };
  auto adapt_dst = [&](const std::vector<EdgeId>& t, long rate, const char* name) {
    if (static_cast<long>(t.size()) == rate) return t;
    const std::string v = common(t, false, name);
    std::vector<EdgeId> out;
    const std::string root = fresh(std::string(name) + "*");
    for (long i = 1; i <= rate; ++i) {
      out.push_back(fresh(std::string(name) + "*" + std::to_string(i)));
      edges.push_back({out.back(), v, root});
    }
    return out;
  };
  auto s1 = adapt_src(net.s1(), r1, "S1");
  auto t1 = adapt_dst(net.t1(), r1, "T1");
  auto s2 = adapt_src(net.s2(), r2, "S2");
  auto t2 = adapt_dst(net.t2(), r2, "T2");
  return Network(std::move(edges), std::move(s1), std::move(t1), std::move(s2), std::move(t2));
}

enum class SearchKind { Exhaustive, Random };

struct SearchOptions {
  SearchKind kind = SearchKind::Exhaustive;
  std::size_t trials = 1000;  // random mode
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  /// Exhaustive mode refuses when q^variables exceeds this.
  std::uint64_t budget = std::uint64_t{1} << 28;
};

struct SearchResult {
  std::optional<CodeAssignment> code;
  /// Assignments examined (search nodes in exhaustive mode).
  std::uint64_t trials = 0;
  /// Coefficients the search actually varied; all others are zero.
  std::size_t variables = 0;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

namespace detail {

// Polynomial flattened to slots for fast repeated evaluation.
struct CompiledPoly {
  struct Term {
    GF2k::Elem coef;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> factors;  // (slot, exponent)
  };
  std::vector<Term> terms;
  std::uint32_t last_slot = 0;
  bool nonzero_target = false;

  GF2k::Elem eval(const std::vector<GF2k::Elem>& x, const GF2k& f) const {
    GF2k::Elem acc = 0;
    for (const auto& t : terms) {
      GF2k::Elem v = t.coef;
      for (auto [s, e] : t.factors) {
        v = f.mul(v, e == 1 ? x[s] : f.pow(x[s], e));
        if (!v) break;
      }
      acc ^= v;
    }
    return acc;
  }
};

struct ScalarProblem {
  std::vector<VarId> vars;  // slot order
  std::vector<CompiledPoly> constraints;
};

// The decoding conditions as polynomials: every G21 entry must vanish,
// det(G11) and det(G22) must not. Variables get slots in the order the
// constraints (fewest variables first, zero targets first) mention them.
inline std::optional<ScalarProblem> scalar_problem(const Network& net) {
  const auto g11 = transfer_matrix(net, net.s1(), net.t1());
  const auto g22 = transfer_matrix(net, net.s2(), net.t2());
  const auto g21 = transfer_matrix(net, net.s2(), net.t1());
  const Poly d11 = determinant(g11.entries), d22 = determinant(g22.entries);
  if (d11.is_zero() || d22.is_zero()) return std::nullopt;
  std::vector<std::pair<Poly, bool>> polys;
  for (const auto& p : g21.entries.data()) {
    if (!p.is_zero()) polys.emplace_back(p, false);
  }
  std::stable_sort(polys.begin(), polys.end(), [](const auto& a, const auto& b) {
    return a.first.variable_indices().size() < b.first.variable_indices().size();
  });
  polys.emplace_back(d22, true);
  polys.emplace_back(d11, true);

  ScalarProblem prob;
  std::map<std::uint32_t, std::uint32_t> slot;
  for (const auto& [p, nz] : polys) {
    std::vector<VarId> fresh;
    for (auto v : p.variable_indices()) {
      if (!slot.count(v)) fresh.push_back(var_name(v));
    }
    std::sort(fresh.begin(), fresh.end());
    for (const auto& v : fresh) {
      slot[intern(v)] = static_cast<std::uint32_t>(prob.vars.size());
      prob.vars.push_back(v);
    }
    CompiledPoly c;
    c.nonzero_target = nz;
    for (const auto& t : p.terms()) {
      CompiledPoly::Term ct{t.coef, {}};
      for (auto [v, e] : t.mono.factors()) {
        ct.factors.emplace_back(slot.at(v), e);
        c.last_slot = std::max(c.last_slot, slot.at(v));
      }
      c.terms.push_back(std::move(ct));
    }
    prob.constraints.push_back(std::move(c));
  }
  return prob;
}

inline bool satisfied(const CompiledPoly& c, const std::vector<GF2k::Elem>& x, const GF2k& f) {
  const GF2k::Elem v = c.eval(x, f);
  return c.nonzero_target ? v != 0 : v == 0;
}

inline CodeAssignment assemble(const Network& net, unsigned k, const std::vector<VarId>& vars,
                               const std::vector<GF2k::Elem>& x) {
  CodeAssignment code(k, 1);
  for (auto [i, j] : adjacent_pairs(net)) code.set(net.id(i), net.id(j), 0);
  for (std::size_t s = 0; s < vars.size(); ++s) code.set(vars[s].tail, vars[s].head, x[s]);
  return code;
}

}  // namespace detail

/// Searches GF(2^k) for a scalar code achieving (r1, r2) on a network whose
/// session sizes equal the rates. Exhaustive mode is complete: it walks
/// every assignment of the coefficients the decoding conditions mention,
/// checking each condition as soon as its variables are fixed. Random mode
/// draws trial t from seed splitmix64(seed + t) and reports the smallest
/// successful t, whatever the number of jobs.
inline SearchResult find_scalar_code(const Network& net, long r1, long r2, unsigned k,
                                     const SearchOptions& opt = {}) {
  if (static_cast<long>(net.s1().size()) != r1 || static_cast<long>(net.t1().size()) != r1 ||
      static_cast<long>(net.s2().size()) != r2 || static_cast<long>(net.t2().size()) != r2) {
    throw DimensionMismatch("session sizes do not match rate; see adapt_rates");
  }
  const GF2k f(k);
  SearchResult res;
  std::optional<detail::ScalarProblem> prob;
  bool overflow = false;
  try {
    prob = detail::scalar_problem(net);
  } catch (const SymbolicOverflow&) {
    if (opt.kind == SearchKind::Exhaustive) {
      throw SearchSpaceTooLarge("decoding conditions exceed the monomial cap");
    }
    overflow = true;
  }
  if (!prob && !overflow) return res;  // a determinant is identically zero

  auto finish = [&](const std::vector<VarId>& vars, const std::vector<GF2k::Elem>& x) {
    CodeAssignment code = detail::assemble(net, k, vars, x);
    if (!verify_scalar_code(net, code, r1, r2)) {
      throw InternalContradiction("search produced a code that fails verification");
    }
    res.code = std::move(code);
  };

  if (opt.kind == SearchKind::Exhaustive) {
    const std::size_t n = prob->vars.size();
    res.variables = n;
    long double space = 1;
    for (std::size_t i = 0; i < n; ++i) space *= static_cast<long double>(f.order());
    if (space > static_cast<long double>(opt.budget)) {
      throw SearchSpaceTooLarge(std::to_string(n) + " coefficients over GF(2^" +
                                std::to_string(k) + ") exceed the exhaustive budget");
    }
    // Constraints checked at each depth.
    std::vector<std::vector<const detail::CompiledPoly*>> at_depth(n + 1);
    for (const auto& c : prob->constraints) {
      at_depth[c.terms.empty() ? 0 : c.last_slot + 1].push_back(&c);
    }
    for (const auto* c : at_depth[0]) {
      if (!detail::satisfied(*c, {}, f)) return res;
    }
    std::vector<GF2k::Elem> x(n, 0);
    // Depth-first odometer: x[0..d) fixed, x[d] being tried.
    std::size_t d = 0;
    if (n == 0) {
      finish(prob->vars, x);
      return res;
    }
    while (true) {
      ++res.trials;
      bool ok = true;
      for (const auto* c : at_depth[d + 1]) {
        if (!detail::satisfied(*c, x, f)) {
          ok = false;
          break;
        }
      }
      if (ok && d + 1 == n) {
        finish(prob->vars, x);
        return res;
      }
      if (ok) {
        x[++d] = 0;
        continue;
      }
      // Advance to the next value, backtracking past exhausted positions.
      while (true) {
        if (x[d] + 1 < f.order()) {
          ++x[d];
          break;
        }
        if (d == 0) return res;
        x[d] = 0;
        --d;
      }
    }
  }

  // Random search.
  std::vector<VarId> vars;
  if (prob) {
    vars = prob->vars;
  } else {
    for (auto [i, j] : adjacent_pairs(net)) vars.push_back(VarId{net.id(i), net.id(j)});
  }
  res.variables = vars.size();
  auto trial_point = [&](std::uint64_t t) {
    FieldSampler draw(f, splitmix64(opt.seed + t));
    std::vector<GF2k::Elem> x(vars.size());
    for (auto& v : x) v = draw();
    return x;
  };
  auto works = [&](const std::vector<GF2k::Elem>& x) {
    if (prob) {
      return std::all_of(prob->constraints.begin(), prob->constraints.end(),
                         [&](const auto& c) { return detail::satisfied(c, x, f); });
    }
    return verify_scalar_code(net, detail::assemble(net, k, vars, x), r1, r2);
  };
  const unsigned jobs = std::max(1u, opt.jobs);
  std::atomic<std::uint64_t> best{std::numeric_limits<std::uint64_t>::max()};
  auto worker = [&](unsigned j) {
    for (std::uint64_t t = j; t < opt.trials && t < best.load(); t += jobs) {
      if (works(trial_point(t))) {
        std::uint64_t cur = best.load();
        while (t < cur && !best.compare_exchange_weak(cur, t)) {
        }
        return;
      }
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker, j);
    for (auto& th : pool) th.join();
  }
  const std::uint64_t t = best.load();
  if (t == std::numeric_limits<std::uint64_t>::max()) {
    res.trials = opt.trials;
    return res;
  }
  res.trials = t + 1;
  finish(vars, trial_point(t));
  return res;
}

}  // namespace netcode
