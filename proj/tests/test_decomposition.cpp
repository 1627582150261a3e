#include <gtest/gtest.h>

#include <random>

#include "netcode/decomposition.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace netcode;

namespace {

std::vector<GnsPair> size2_pairs(const Network& net) {
  std::vector<GnsPair> out;
  for (const auto& c : gns_cuts_of_size(net, 2)) out.push_back(make_gns_pair(net, *c.begin(), *c.rbegin()));
  return out;
}

// Entry-by-entry comparison with brute-force path enumeration.
void expect_matches_oracle(const Network& net, const Decomposition& d) {
  const auto& es = net.edges();
  const EdgeId &s1 = net.s1()[0], &t1 = net.t1()[0], &s2 = net.s2()[0], &t2 = net.t2()[0];
  const EdgeId &e1 = d.pair.e1, &e2 = d.pair.e2;
  EXPECT_EQ(d.M(0, 0), oracle::path_sum(es, s1, t1));
  EXPECT_EQ(d.M(0, 1), oracle::path_sum_via(es, s1, t2, {e1, e2}));
  EXPECT_EQ(d.M(1, 0), oracle::path_sum(es, s2, t1));
  EXPECT_EQ(d.M(1, 1), oracle::path_sum(es, s2, t2));
  const EdgeId src[] = {s1, s2}, dst[] = {t1, t2};
  for (int i = 0; i < 2; ++i) {
    EXPECT_EQ(d.M1(i, 0), oracle::path_sum(es, src[i], e1));
    EXPECT_EQ(d.M1(i, 1), oracle::path_sum(es, src[i], e2, {e1}));
    EXPECT_EQ(d.M2(0, i), oracle::path_sum(es, e1, dst[i], {e2}));
    EXPECT_EQ(d.M2(1, i), oracle::path_sum(es, e2, dst[i]));
  }
  EXPECT_EQ(d.Lambda(0, 1), oracle::path_sum(es, e1, e2));
}

void expect_side_edges_qualify(const Network& net, const SideNetwork& side,
                               const std::vector<EdgeId>& from, const std::vector<EdgeId>& to) {
  for (const auto& e : side.graph.edges()) {
    EXPECT_TRUE(net.has_edge(e.id));
    bool on_path = false;
    for (const auto& a : from) {
      for (const auto& b : to) {
        if (oracle::reaches(net.edges(), a, e.id) && oracle::reaches(net.edges(), e.id, b)) on_path = true;
      }
    }
    EXPECT_TRUE(on_path) << e.id;
  }
}

}  // namespace

TEST(Decompose, CorpusInstancesFactor) {
  for (const char* name : {"disjoint_chains", "butterfly_z", "single_interference"}) {
    const Network net = corpus::network(name);
    const auto pairs = size2_pairs(net);
    ASSERT_FALSE(pairs.empty()) << name;
    for (const auto& p : pairs) {
      const auto d = decompose(net, p);
      EXPECT_TRUE(d.all_checks_pass()) << name;
      EXPECT_TRUE(d.identity.symbolic);
      expect_matches_oracle(net, d);
    }
  }
}

TEST(Decompose, RandomGns2Instances) {
  std::mt19937_64 rng(31);
  int with_coupling = 0, without = 0;
  for (int t = 0; t < 150; ++t) {
    const Network net = gen::random_gns2_network(rng, 14);
    for (const auto& p : size2_pairs(net)) {
      const auto d = decompose(net, p);
      expect_matches_oracle(net, d);
      EXPECT_TRUE(d.identity.holds);
      EXPECT_TRUE(d.disjoint_c);
      EXPECT_TRUE(d.disjoint_d);
      EXPECT_EQ(determinant(d.Lambda.entries), Poly::one());
      const Poly det_m = determinant(d.M.entries);
      EXPECT_EQ(det_m, determinant(d.M1.entries) * determinant(d.M2.entries));
      EXPECT_FALSE(det_m.is_zero());
      if (net.reaches(p.e1, p.e2)) {
        ++with_coupling;
        EXPECT_FALSE(d.disjoint_e.has_value());
      } else {
        ++without;
        EXPECT_EQ(d.Lambda.entries, identity(2, PolyOps{}));
        ASSERT_TRUE(d.disjoint_e.has_value());
        EXPECT_TRUE(*d.disjoint_e);
      }
      expect_side_edges_qualify(net, d.left_net, {net.s1()[0], net.s2()[0]}, {p.e1, p.e2});
      expect_side_edges_qualify(net, d.right_net, {p.e1, p.e2}, {net.t1()[0], net.t2()[0]});
    }
  }
  EXPECT_GT(with_coupling, 0);
  EXPECT_GT(without, 0);
}

TEST(Decompose, RejectsNonCutsAndUnsortedPairs) {
  const Network net = corpus::network("butterfly_z");
  EXPECT_THROW(make_gns_pair(net, "s1", "ac"), NotAGnsCut);
  EXPECT_THROW(make_gns_pair(net, "cd", "cd"), NotAGnsCut);
  const auto p = size2_pairs(net).front();
  EXPECT_THROW(decompose(net, GnsPair{p.e2, p.e1}), NotTopologicallySorted);
  EXPECT_THROW(decompose(corpus::network("instance_I"), p), DimensionMismatch);
}

TEST(GeneralDecompose, RandomEdgeListsFactor) {
  std::mt19937_64 rng(32);
  for (int t = 0; t < 120; ++t) {
    const Network net = gen::random_z_network(rng, 5, 6 + gen::pick(rng, 4));
    const auto order = net.topological_edge_order();
    const std::size_t size = 1 + gen::pick(rng, 3);
    std::vector<EdgeId> u;
    for (const auto& e : order) {
      if (u.size() < size && rng() % 3 == 0) u.push_back(e);
    }
    if (u.empty()) continue;
    const auto g = general_decompose(net, u);
    EXPECT_TRUE(g.identity.holds);
    const EdgeSet us(u.begin(), u.end());
    for (std::size_t r = 0; r < g.restricted.rows.size(); ++r) {
      for (std::size_t c = 0; c < g.restricted.cols.size(); ++c) {
        EXPECT_EQ(g.restricted(r, c),
                  oracle::path_sum_via(net.edges(), g.restricted.rows[r], g.restricted.cols[c], us));
      }
    }
  }
  const Network net = corpus::network("butterfly_z");
  EXPECT_THROW(general_decompose(net, {}), PreconditionViolated);
}

TEST(GeneralDecompose, AgreesWithTwoEdgeDecomposition) {
  std::mt19937_64 rng(33);
  for (int t = 0; t < 60; ++t) {
    const Network net = gen::random_gns2_network(rng, 13);
    for (const auto& p : size2_pairs(net)) {
      const auto d = decompose(net, p);
      const auto g = general_decompose(net, {p.e1, p.e2});
      // Every s1->t1, s2->t1 and s2->t2 path meets a GNS cut, so the
      // restricted matrix is M itself.
      EXPECT_EQ(g.restricted.entries, d.M.entries);
      EXPECT_EQ(g.dest_excluded.entries, d.M1.entries);
      EXPECT_EQ(g.coupling.entries, d.Lambda.entries);
      EXPECT_EQ(g.source_excluded.entries, d.M2.entries);
    }
  }
}

TEST(InterferenceExpansion, PiecesMatchOracles) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 100; ++t) {
    const Network net = gen::random_gns2_network(rng, 14);
    const auto& es = net.edges();
    const EdgeId &s2 = net.s2()[0], &t1 = net.t1()[0];
    for (const auto& p : size2_pairs(net)) {
      const auto x = interference_expansion(net, p);
      EXPECT_EQ(x.total, oracle::path_sum(es, s2, t1));
      EXPECT_EQ(x.reassembled(), x.total);
      EXPECT_EQ(x.b1u1, oracle::path_sum(es, s2, p.e1));
      EXPECT_EQ(x.b2u2, oracle::path_sum(es, s2, p.e2, {p.e1}));
      EXPECT_EQ(x.lambda12u2, oracle::path_sum(es, p.e1, p.e2));
      EXPECT_EQ(x.mu11, oracle::path_sum(es, p.e1, t1, {p.e2}));
      EXPECT_EQ(x.mu21, oracle::path_sum(es, p.e2, t1));
    }
  }
}
