#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "netcode/errors.hpp"
#include "netcode/network.hpp"
#include "netcode/paths.hpp"

namespace netcode {

inline constexpr std::size_t kDefaultGnsMaxSize = 4;

namespace detail {

struct SessionMasks {
  EdgeMask s1, t1, s2, t2;
  explicit SessionMasks(const Network& net)
      : s1(net.mask(net.s1())), t1(net.mask(net.t1())), s2(net.mask(net.s2())),
        t2(net.mask(net.t2())) {}
};

inline bool kills_gns_families(const Network& net, const SessionMasks& m,
                               const EdgeMask& removed) {
  if (net.connected(m.s1, m.t1, removed)) return false;
  const EdgeMask from2 = net.forward_closure(m.s2, removed);
  return !from2.intersects(m.t2) && !from2.intersects(m.t1);
}

}  // namespace detail

/// True when removing `cut` leaves no S1->T1, S2->T2 or S2->T1 path.
inline bool is_gns_cut(const Network& net, const EdgeSet& cut) {
  return detail::kills_gns_families(net, detail::SessionMasks(net), net.mask(cut));
}

/// Edges on at least one S1->T1, S2->T2 or S2->T1 path. Only these can
/// belong to a minimal GNS cut.
inline std::vector<std::size_t> gns_relevant_edges(const Network& net) {
  const detail::SessionMasks m(net);
  const EdgeMask none(net.edge_count());
  const EdgeMask f1 = net.forward_closure(m.s1, none), f2 = net.forward_closure(m.s2, none);
  const EdgeMask b1 = net.backward_closure(m.t1, none), b2 = net.backward_closure(m.t2, none);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < net.edge_count(); ++i) {
    if ((f1.test(i) && b1.test(i)) || (f2.test(i) && (b1.test(i) || b2.test(i)))) {
      out.push_back(i);
    }
  }
  std::sort(out.begin(), out.end(),
            [&](std::size_t a, std::size_t b) { return net.id(a) < net.id(b); });
  return out;
}

/// Every GNS cut of exactly `size` relevant edges, in lexicographic order.
inline std::vector<EdgeSet> gns_cuts_of_size(const Network& net, std::size_t size) {
  const detail::SessionMasks m(net);
  const auto rel = gns_relevant_edges(net);
  std::vector<EdgeSet> out;
  if (size > rel.size()) return out;
  std::vector<std::size_t> pick(size);
  for (std::size_t i = 0; i < size; ++i) pick[i] = i;
  while (true) {
    EdgeMask removed(net.edge_count());
    for (auto p : pick) removed.set(rel[p]);
    if (detail::kills_gns_families(net, m, removed)) {
      EdgeSet cut;
      for (auto p : pick) cut.insert(net.id(rel[p]));
      out.push_back(std::move(cut));
    }
    std::size_t k = size;
    while (k > 0 && pick[k - 1] == rel.size() - size + k - 1) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t j = k; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

/// Smallest GNS cut with at most `max_size` edges, searching subsets in
/// increasing size and lexicographic order.
inline std::optional<EdgeCut> min_gns_cut(const Network& net,
                                          std::size_t max_size = kDefaultGnsMaxSize) {
  if (max_size < 1) throw PreconditionViolated("max_size must be at least 1");
  for (std::size_t s = 0; s <= max_size; ++s) {
    auto cuts = gns_cuts_of_size(net, s);
    if (!cuts.empty()) return EdgeCut{std::move(cuts.front()), CutKind::Gns};
  }
  return std::nullopt;
}

namespace detail {

inline bool min_gns_at_most_one(const Network& net) {
  return !gns_cuts_of_size(net, 0).empty() || !gns_cuts_of_size(net, 1).empty();
}

inline bool both_sessions_connected(const Network& net) {
  const EdgeMask none(net.edge_count());
  return net.connected(net.mask(net.s1()), net.mask(net.t1()), none) &&
         net.connected(net.mask(net.s2()), net.mask(net.t2()), none);
}

}  // namespace detail

/// Strips edges one at a time, always the smallest id whose removal keeps
/// both sessions connected and the minimum GNS cut at two. Session edges
/// stay. In the result every edge lies in some GNS cut of size two.
inline Network criticalize(const Network& net) {
  if (!detail::both_sessions_connected(net)) {
    throw PreconditionViolated("criticalize needs S1->T1 and S2->T2 paths");
  }
  if (detail::min_gns_at_most_one(net) || gns_cuts_of_size(net, 2).empty()) {
    throw PreconditionViolated("criticalize needs a minimum GNS cut of size two");
  }
  Network cur = net;
  while (true) {
    std::vector<EdgeId> ids = cur.topological_edge_order();
    std::sort(ids.begin(), ids.end());
    bool removed = false;
    for (const auto& e : ids) {
      if (cur.is_session_edge(e)) continue;
      Network next = cur.without({e});
      if (detail::both_sessions_connected(next) && !detail::min_gns_at_most_one(next)) {
        cur = std::move(next);
        removed = true;
        break;
      }
    }
    if (!removed) return cur;
  }
}

}  // namespace netcode
