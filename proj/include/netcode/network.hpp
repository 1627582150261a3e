#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netcode/errors.hpp"

namespace netcode {

using EdgeId = std::string;
using EdgeSet = std::set<EdgeId>;

struct Edge {
  EdgeId id;
  std::string tail;
  std::string head;

  bool operator==(const Edge&) const = default;
};

/// Dense bitset over edge indices.
class EdgeMask {
 public:
  EdgeMask() = default;
  explicit EdgeMask(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return n_; }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
  }
  EdgeMask& operator|=(const EdgeMask& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  bool intersects(const EdgeMask& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & o.words_[i]) return true;
    }
    return false;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Acyclic multigraph whose edges are stored in topological order.
///
/// Edge e precedes edge f in the adjacency relation when Head(e) = Tail(f).
/// Indices used throughout the library are positions in that order, so a
/// path always visits strictly increasing indices. Ties among unrelated
/// edges break by EdgeId.
class Digraph {
 public:
  Digraph() = default;

  explicit Digraph(std::vector<Edge> edges) {
    std::map<EdgeId, std::size_t> by_id;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (edges[i].id.empty()) throw InvalidNetwork("edge with empty id");
      if (!by_id.emplace(edges[i].id, i).second) {
        throw InvalidNetwork("duplicate edge id '" + edges[i].id + "'");
      }
    }
    const std::size_t n = edges.size();
    std::map<std::string, std::vector<std::size_t>> out_of;
    for (std::size_t i = 0; i < n; ++i) out_of[edges[i].tail].push_back(i);

    // Kahn's algorithm on the edge adjacency relation with a min-heap on id.
    std::vector<std::size_t> indeg(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (auto it = out_of.find(edges[i].head); it != out_of.end()) {
        for (auto j : it->second) ++indeg[j];
      }
    }
    using Item = std::pair<EdgeId, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i) {
      if (indeg[i] == 0) ready.emplace(edges[i].id, i);
    }
    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
      const std::size_t i = ready.top().second;
      ready.pop();
      order.push_back(i);
      if (auto it = out_of.find(edges[i].head); it != out_of.end()) {
        for (auto j : it->second) {
          if (--indeg[j] == 0) ready.emplace(edges[j].id, j);
        }
      }
    }
    if (order.size() != n) {
      std::string stuck;
      for (std::size_t i = 0; i < n; ++i) {
        if (indeg[i] > 0) {
          stuck = edges[i].id;
          break;
        }
      }
      throw CycleDetected("edge adjacency has a cycle through '" + stuck + "'");
    }

    edges_.reserve(n);
    for (auto i : order) edges_.push_back(std::move(edges[i]));
    for (std::size_t i = 0; i < n; ++i) index_.emplace(edges_[i].id, i);

    std::map<std::string, std::vector<std::size_t>> tails;
    std::set<std::string> verts;
    for (std::size_t i = 0; i < n; ++i) {
      tails[edges_[i].tail].push_back(i);
      verts.insert(edges_[i].tail);
      verts.insert(edges_[i].head);
    }
    vertices_.assign(verts.begin(), verts.end());
    succ_.assign(n, {});
    pred_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      if (auto it = tails.find(edges_[i].head); it != tails.end()) {
        succ_[i] = it->second;
        for (auto j : it->second) pred_[j].push_back(i);
      }
    }
    // Adjacency lists sorted by id keep every traversal deterministic.
    auto by_name = [this](std::size_t a, std::size_t b) { return edges_[a].id < edges_[b].id; };
    for (auto& s : succ_) std::sort(s.begin(), s.end(), by_name);
    for (auto& p : pred_) std::sort(p.begin(), p.end());

    reach_.assign(n, EdgeMask(n));
    for (std::size_t i = n; i-- > 0;) {
      reach_[i].set(i);
      for (auto j : succ_[i]) reach_[i] |= reach_[j];
    }
  }

  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }
  const EdgeId& id(std::size_t i) const { return edges_[i].id; }

  bool has_edge(const EdgeId& e) const { return index_.count(e) != 0; }
  std::size_t index(const EdgeId& e) const {
    auto it = index_.find(e);
    if (it == index_.end()) throw UnknownEdge("unknown edge '" + e + "'");
    return it->second;
  }
  std::vector<std::size_t> indices(const std::vector<EdgeId>& es) const {
    std::vector<std::size_t> out;
    out.reserve(es.size());
    for (const auto& e : es) out.push_back(index(e));
    return out;
  }
  template <class Range>
  EdgeMask mask(const Range& es) const {
    EdgeMask m(edge_count());
    for (const auto& e : es) m.set(index(e));
    return m;
  }

  /// Edges f with Head(e) = Tail(f), ordered by id.
  const std::vector<std::size_t>& successors(std::size_t i) const { return succ_[i]; }
  /// Edges f with Head(f) = Tail(e), in topological order.
  const std::vector<std::size_t>& predecessors(std::size_t i) const { return pred_[i]; }

  /// True when a path runs from edge i to edge j (every edge reaches itself).
  bool reaches(std::size_t i, std::size_t j) const { return reach_[i].test(j); }
  bool reaches(const EdgeId& a, const EdgeId& b) const { return reaches(index(a), index(b)); }

  std::vector<EdgeId> topological_edge_order() const {
    std::vector<EdgeId> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) out.push_back(e.id);
    return out;
  }

  /// Edges reachable from `from` using no edge of `removed`.
  EdgeMask forward_closure(const EdgeMask& from, const EdgeMask& removed) const {
    EdgeMask seen(edge_count());
    for (std::size_t j = 0; j < edge_count(); ++j) {
      if (removed.test(j)) continue;
      if (from.test(j)) {
        seen.set(j);
        continue;
      }
      for (auto i : pred_[j]) {
        if (seen.test(i)) {
          seen.set(j);
          break;
        }
      }
    }
    return seen;
  }

  /// Edges that reach `to` using no edge of `removed`.
  EdgeMask backward_closure(const EdgeMask& to, const EdgeMask& removed) const {
    EdgeMask seen(edge_count());
    for (std::size_t i = edge_count(); i-- > 0;) {
      if (removed.test(i)) continue;
      if (to.test(i)) {
        seen.set(i);
        continue;
      }
      for (auto j : succ_[i]) {
        if (seen.test(j)) {
          seen.set(i);
          break;
        }
      }
    }
    return seen;
  }

  bool connected(const EdgeMask& from, const EdgeMask& to, const EdgeMask& removed) const {
    return forward_closure(from, removed).intersects(to);
  }

  Digraph without(const EdgeSet& drop) const {
    std::vector<Edge> kept;
    for (const auto& e : edges_) {
      if (!drop.count(e.id)) kept.push_back(e);
    }
    return Digraph(std::move(kept));
  }

  bool operator==(const Digraph& o) const { return edges_ == o.edges_; }

 private:
  std::vector<Edge> edges_;
  std::vector<std::string> vertices_;
  std::unordered_map<EdgeId, std::size_t> index_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
  std::vector<EdgeMask> reach_;
};

/// Two-unicast-Z network: session 1 runs S1 -> T1, session 2 runs S2 -> T2,
/// and destination 2 already knows message 1.
class Network : public Digraph {
 public:
  Network() = default;
  Network(std::vector<Edge> edges, std::vector<EdgeId> s1, std::vector<EdgeId> t1,
          std::vector<EdgeId> s2, std::vector<EdgeId> t2)
      : Digraph(std::move(edges)),
        s1_(std::move(s1)),
        t1_(std::move(t1)),
        s2_(std::move(s2)),
        t2_(std::move(t2)) {
    std::set<EdgeId> seen;
    for (const auto* list : {&s1_, &t1_, &s2_, &t2_}) {
      for (const auto& e : *list) {
        if (!has_edge(e)) throw InvalidNetwork("session edge '" + e + "' is not an edge");
        if (!seen.insert(e).second) {
          throw InvalidNetwork("edge '" + e + "' appears in more than one session slot");
        }
      }
    }
  }

  const std::vector<EdgeId>& s1() const { return s1_; }
  const std::vector<EdgeId>& t1() const { return t1_; }
  const std::vector<EdgeId>& s2() const { return s2_; }
  const std::vector<EdgeId>& t2() const { return t2_; }

  bool single_edge_sessions() const {
    return s1_.size() == 1 && t1_.size() == 1 && s2_.size() == 1 && t2_.size() == 1;
  }
  bool is_session_edge(const EdgeId& e) const {
    for (const auto* list : {&s1_, &t1_, &s2_, &t2_}) {
      if (std::find(list->begin(), list->end(), e) != list->end()) return true;
    }
    return false;
  }

  /// Same sessions, fewer edges. Session edges cannot be dropped.
  Network without(const EdgeSet& drop) const {
    for (const auto& e : drop) {
      if (is_session_edge(e)) {
        throw PreconditionViolated("cannot remove session edge '" + e + "'");
      }
    }
    std::vector<Edge> kept;
    for (const auto& e : edges()) {
      if (!drop.count(e.id)) kept.push_back(e);
    }
    return Network(std::move(kept), s1_, t1_, s2_, t2_);
  }

  bool operator==(const Network& o) const {
    return Digraph::operator==(o) && s1_ == o.s1_ && t1_ == o.t1_ && s2_ == o.s2_ &&
           t2_ == o.t2_;
  }

 private:
  std::vector<EdgeId> s1_, t1_, s2_, t2_;
};

struct Session {
  std::vector<EdgeId> sources;
  std::vector<EdgeId> sinks;
  bool operator==(const Session&) const = default;
};

/// m independent unicast sessions over one DAG.
class MUnicastNetwork : public Digraph {
 public:
  MUnicastNetwork() = default;
  MUnicastNetwork(std::vector<Edge> edges, std::vector<Session> sessions)
      : Digraph(std::move(edges)), sessions_(std::move(sessions)) {
    std::set<EdgeId> seen;
    for (const auto& s : sessions_) {
      for (const auto* list : {&s.sources, &s.sinks}) {
        for (const auto& e : *list) {
          if (!has_edge(e)) throw InvalidNetwork("session edge '" + e + "' is not an edge");
          if (!seen.insert(e).second) {
            throw InvalidNetwork("edge '" + e + "' appears in more than one session slot");
          }
        }
      }
    }
  }

  const std::vector<Session>& sessions() const { return sessions_; }
  std::size_t session_count() const { return sessions_.size(); }

 private:
  std::vector<Session> sessions_;
};

}  // namespace netcode
