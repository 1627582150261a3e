#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "netcode/errors.hpp"
#include "netcode/network.hpp"

namespace netcode {

using Path = std::vector<EdgeId>;

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

namespace detail {

// Edges that can still complete a qualifying path: reach[i] means some
// `to` edge is reachable from i avoiding `avoid`; reach_via[i] additionally
// requires the remainder (including i) to touch `via`.
struct PathPruning {
  EdgeMask reach;
  EdgeMask reach_via;
};

inline PathPruning path_pruning(const Digraph& g, const EdgeMask& to, const EdgeMask& via,
                                const EdgeMask& avoid) {
  const std::size_t n = g.edge_count();
  PathPruning p{EdgeMask(n), EdgeMask(n)};
  for (std::size_t i = n; i-- > 0;) {
    if (avoid.test(i)) continue;
    bool r = to.test(i), rv = to.test(i) && via.test(i);
    for (auto j : g.successors(i)) {
      r = r || p.reach.test(j);
      rv = rv || (via.test(i) ? p.reach.test(j) : p.reach_via.test(j));
    }
    if (r) p.reach.set(i);
    if (rv) p.reach_via.set(i);
  }
  return p;
}

}  // namespace detail

/// All paths from an edge of `from` to an edge of `to` that touch `via`
/// (when nonempty) and avoid `avoid`, in lexicographic order of their edge
/// id sequences. Throws PathCapExceeded once more than `cap` paths exist.
inline std::vector<Path> enumerate_paths(const Digraph& g, const EdgeSet& from, const EdgeSet& to,
                                         const EdgeSet& via = {}, const EdgeSet& avoid = {},
                                         std::size_t cap = kDefaultPathCap) {
  if (from.empty() || to.empty()) {
    throw PreconditionViolated("path enumeration needs nonempty endpoints");
  }
  const EdgeMask to_m = g.mask(to), avoid_m = g.mask(avoid);
  const bool need_via = !via.empty();
  const EdgeMask via_m = need_via ? g.mask(via) : EdgeMask(g.edge_count());
  const auto prune = detail::path_pruning(g, to_m, via_m, avoid_m);

  std::vector<Path> out;
  std::vector<std::size_t> stack;
  // Depth-first with successors visited in id order yields lexicographic output.
  auto dfs = [&](auto&& self, std::size_t i, bool touched) -> void {
    touched = touched || (need_via && via_m.test(i));
    const EdgeMask& alive = (!need_via || touched) ? prune.reach : prune.reach_via;
    if (!alive.test(i)) return;
    stack.push_back(i);
    if (to_m.test(i) && (!need_via || touched)) {
      if (out.size() == cap) {
        throw PathCapExceeded("more than " + std::to_string(cap) + " paths");
      }
      Path p;
      p.reserve(stack.size());
      for (auto k : stack) p.push_back(g.id(k));
      out.push_back(std::move(p));
    }
    for (auto j : g.successors(i)) self(self, j, touched);
    stack.pop_back();
  };
  for (const auto& e : from) {
    const std::size_t i = g.index(e);
    if (avoid_m.test(i)) continue;
    dfs(dfs, i, false);
  }
  return out;
}

/// Number of qualifying paths, by dynamic programming rather than listing.
/// Throws PathCapExceeded beyond `cap`.
inline std::uint64_t count_paths(const Digraph& g, const EdgeSet& from, const EdgeSet& to,
                                 const EdgeSet& via = {}, const EdgeSet& avoid = {},
                                 std::uint64_t cap = kDefaultPathCap) {
  const std::size_t n = g.edge_count();
  const EdgeMask from_m = g.mask(from), to_m = g.mask(to), avoid_m = g.mask(avoid);
  const bool need_via = !via.empty();
  const EdgeMask via_m = need_via ? g.mask(via) : EdgeMask(n);
  // plain[i]: paths from a source ending at i that have not touched via;
  // hit[i]: those that have.
  std::vector<std::uint64_t> plain(n, 0), hit(n, 0);
  std::uint64_t total = 0;
  auto sat_add = [cap](std::uint64_t a, std::uint64_t b) {
    const std::uint64_t s = a + b;
    if (s < a || s > cap) throw PathCapExceeded("more than " + std::to_string(cap) + " paths");
    return s;
  };
  for (std::size_t j = 0; j < n; ++j) {
    if (avoid_m.test(j)) continue;
    std::uint64_t p = from_m.test(j) ? 1 : 0, h = 0;
    for (auto i : g.predecessors(j)) {
      p = sat_add(p, plain[i]);
      h = sat_add(h, hit[i]);
    }
    if (need_via && via_m.test(j)) {
      h = sat_add(h, p);
      p = 0;
    }
    plain[j] = p;
    hit[j] = h;
    if (to_m.test(j)) total = sat_add(total, need_via ? h : p);
  }
  return total;
}

enum class CutKind { SourceDest, Gns };

struct EdgeCut {
  EdgeSet edges;
  CutKind kind = CutKind::SourceDest;
  bool operator==(const EdgeCut&) const = default;
  std::size_t size() const { return edges.size(); }
};

/// Minimum edge cut separating `from` from `to`, by unit-capacity max-flow
/// on the edge-split graph. The returned cut is the one closest to `from`
/// (edges saturated at the boundary of the residual source side).
inline EdgeCut min_edge_cut(const Digraph& g, const EdgeSet& from, const EdgeSet& to) {
  for (const auto& e : from) {
    if (to.count(e)) throw PreconditionViolated("from and to share edge '" + e + "'");
  }
  const std::size_t n = g.edge_count();
  // Node 2i is the entry of edge i, 2i+1 its exit; 2n is the super source,
  // 2n+1 the super sink.
  const std::size_t src = 2 * n, dst = 2 * n + 1, nodes = 2 * n + 2;
  constexpr int kInf = std::numeric_limits<int>::max() / 4;
  struct Arc {
    std::size_t to;
    int cap;
    std::size_t rev;
  };
  std::vector<std::vector<Arc>> adj(nodes);
  auto add_arc = [&](std::size_t u, std::size_t v, int c) {
    adj[u].push_back({v, c, adj[v].size()});
    adj[v].push_back({u, 0, adj[u].size() - 1});
  };
  for (std::size_t i = 0; i < n; ++i) {
    add_arc(2 * i, 2 * i + 1, 1);
    for (auto j : g.successors(i)) add_arc(2 * i + 1, 2 * j, kInf);
  }
  for (const auto& e : from) add_arc(src, 2 * g.index(e), kInf);
  for (const auto& e : to) add_arc(2 * g.index(e) + 1, dst, kInf);

  std::vector<std::pair<std::size_t, std::size_t>> parent(nodes);
  std::vector<char> seen(nodes);
  auto bfs = [&] {
    std::fill(seen.begin(), seen.end(), 0);
    std::queue<std::size_t> q;
    q.push(src);
    seen[src] = 1;
    while (!q.empty()) {
      const auto u = q.front();
      q.pop();
      for (std::size_t k = 0; k < adj[u].size(); ++k) {
        const auto& a = adj[u][k];
        if (a.cap > 0 && !seen[a.to]) {
          seen[a.to] = 1;
          parent[a.to] = {u, k};
          q.push(a.to);
        }
      }
    }
    return seen[dst] != 0;
  };
  while (bfs()) {
    for (std::size_t v = dst; v != src;) {
      auto [u, k] = parent[v];
      adj[u][k].cap -= 1;
      adj[v][adj[u][k].rev].cap += 1;
      v = u;
    }
  }
  EdgeCut cut;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[2 * i] && !seen[2 * i + 1]) cut.edges.insert(g.id(i));
  }
  return cut;
}

}  // namespace netcode
