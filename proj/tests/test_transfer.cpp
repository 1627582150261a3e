#include <gtest/gtest.h>

#include <random>

#include "netcode/transfer.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace netcode;

namespace {

/// Sum over a -> b paths that avoid every edge in `avoid` (endpoints too).
Poly constrained_sum(const std::vector<Edge>& es, const EdgeId& a, const EdgeId& b,
                     const EdgeSet& avoid) {
  return oracle::path_sum(es, a, b, avoid);
}

/// Block product along a path in path order, as an oracle for vector H.
Matrix<Poly> block_weight(const std::vector<EdgeId>& p, unsigned v) {
  PolyOps ops;
  Matrix<Poly> w = identity(v, ops);
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    Matrix<Poly> b(v, v, Poly());
    for (unsigned r = 0; r < v; ++r) {
      for (unsigned c = 0; c < v; ++c) {
        b(r, c) = Poly::variable(VarId{p[i], p[i + 1], static_cast<int>(r + 1), static_cast<int>(c + 1)});
      }
    }
    w = matmul(w, b, ops);
  }
  return w;
}

}  // namespace

TEST(Transfer, SingleEdge) {
  const Digraph g({{"e", "u", "v"}});
  const auto h = extended_transfer_matrix(g);
  EXPECT_EQ(h(0, 0), Poly::one());
  EXPECT_EQ(transfer_matrix(g, {"e"}, {"e"})(0, 0), Poly::one());
}

TEST(Transfer, ChainEntryIsTheCoefficient) {
  const Digraph g({{"e1", "u", "v"}, {"e2", "v", "w"}});
  const auto h = extended_transfer_matrix(g);
  EXPECT_EQ(h(0, 1), Poly::variable(VarId{"e1", "e2"}));
  EXPECT_TRUE(h(1, 0).is_zero());
}

TEST(Transfer, UnknownEdge) {
  const Digraph g({{"e", "u", "v"}});
  EXPECT_THROW(transfer_matrix(g, {"e"}, {"nope"}), UnknownEdge);
}

TEST(Transfer, RandomDagsMatchPathSumsAndInvertIMinusF) {
  std::mt19937_64 rng(21);
  PolyOps ops;
  for (int t = 0; t < 100; ++t) {
    const auto es = gen::random_dag(rng, 6, 2 + gen::pick(rng, 9));
    const Digraph g(es);
    const auto h = extended_transfer_matrix(g);
    const auto f = local_coding_matrix(g);
    const std::size_t n = h.rows.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        EXPECT_EQ(h(i, j), oracle::path_sum(es, h.rows[i], h.cols[j]));
        EXPECT_EQ(!h(i, j).is_zero(), i == j || g.reaches(h.rows[i], h.cols[j]));
        // F is strictly upper triangular in topological order.
        if (j <= i) { EXPECT_TRUE(f(i, j).is_zero()); }
      }
    }
    Matrix<Poly> i_minus_f = identity(n, ops);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) i_minus_f(i, j) = i_minus_f(i, j) + f(i, j);
    }
    EXPECT_EQ(matmul(i_minus_f, h.entries, ops), identity(n, ops));
  }
}

TEST(Transfer, SingleEdgeCutFactorizes) {
  const Digraph g({{"s", "x", "a"}, {"p", "a", "b"}, {"q", "a", "b"}, {"e", "b", "c"},
                   {"r", "c", "d"}, {"w", "c", "d"}, {"t", "d", "y"}});
  const Poly st = transfer_matrix(g, {"s"}, {"t"})(0, 0);
  EXPECT_EQ(st, transfer_matrix(g, {"s"}, {"e"})(0, 0) * transfer_matrix(g, {"e"}, {"t"})(0, 0));
}

TEST(Transfer, FactorizationThroughEveryCutEdgeOnRandomDags) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 200; ++t) {
    const auto es = gen::random_dag(rng, 6, 9);
    const Digraph g(es);
    const auto& s = es[gen::pick(rng, es.size())].id;
    const auto& d = es[gen::pick(rng, es.size())].id;
    if (s == d || !g.reaches(s, d)) continue;
    const Poly st = transfer_matrix(g, {s}, {d})(0, 0);
    for (const auto& e : es) {
      if (e.id == s || e.id == d) continue;
      if (!oracle::reaches(es, s, d, {e.id})) {
        EXPECT_EQ(st, transfer_matrix(g, {s}, {e.id})(0, 0) * transfer_matrix(g, {e.id}, {d})(0, 0));
      }
    }
  }
}

TEST(Transfer, InstanceISessionMatrices) {
  const Network net = corpus::network("instance_I");
  const auto g22 = session_matrix(net, 2, 2);
  EXPECT_FALSE(g22(0, 0).is_zero());
  EXPECT_EQ(g22(0, 0), oracle::path_sum(net.edges(), "s2", "t2"));
  const auto g21 = session_matrix(net, 2, 1);
  EXPECT_EQ(g21(0, 0), oracle::path_sum(net.edges(), "s2", "t11"));
  EXPECT_EQ(g21(0, 1), oracle::path_sum(net.edges(), "s2", "t12"));
}

TEST(Coupling, NoInternalPathsGivesIdentity) {
  const Digraph g({{"a", "u", "v"}, {"b", "x", "y"}});
  const auto l = coupling_matrix(g, {"a", "b"});
  EXPECT_EQ(l.entries, identity(2, PolyOps{}));
}

TEST(Coupling, OneConnectingPair) {
  const Digraph g({{"a", "u", "v"}, {"b", "v", "w"}});
  const auto l = coupling_matrix(g, {"a", "b"});
  EXPECT_EQ(l(0, 1), Poly::variable(VarId{"a", "b"}));
  EXPECT_TRUE(l(1, 0).is_zero());
  EXPECT_THROW(coupling_matrix(g, {"b", "a"}), NotTopologicallySorted);
}

TEST(Coupling, UnitriangularWithPathSums) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 100; ++t) {
    const auto es = gen::random_dag(rng, 6, 9);
    const Digraph g(es);
    auto order = g.topological_edge_order();
    std::vector<EdgeId> u;
    for (const auto& e : order) {
      if (rng() % 3 == 0) u.push_back(e);
    }
    if (u.empty()) continue;
    const auto l = coupling_matrix(g, u);
    EXPECT_EQ(determinant(l.entries, 1), Poly::one());
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (i == j) { EXPECT_EQ(l(i, j), Poly::one()); }
        if (i > j) { EXPECT_TRUE(l(i, j).is_zero()); }
        if (i < j) { EXPECT_EQ(l(i, j), oracle::path_sum(es, u[i], u[j])); }
      }
    }
  }
}

TEST(Excluded, SingleColumnEqualsTransfer) {
  const Digraph g({{"s", "x", "a"}, {"p", "a", "b"}, {"t", "b", "c"}});
  EXPECT_EQ(destinations_excluded_matrix(g, {"s"}, {"t"}).entries,
            transfer_matrix(g, {"s"}, {"t"}).entries);
  EXPECT_EQ(sources_excluded_matrix(g, {"s"}, {"t"}).entries,
            transfer_matrix(g, {"s"}, {"t"}).entries);
}

TEST(Excluded, PathThroughEarlierColumnIsDropped) {
  const Digraph g({{"s", "x", "a"}, {"e1", "a", "b"}, {"e2", "b", "c"}});
  const auto m = destinations_excluded_matrix(g, {"s"}, {"e1", "e2"});
  EXPECT_TRUE(m(0, 1).is_zero());
  const auto r = sources_excluded_matrix(g, {"e1", "e2"}, {"e2"});
  EXPECT_TRUE(r(0, 0).is_zero());
  EXPECT_THROW(destinations_excluded_matrix(g, {"s"}, {"e2", "e1"}), NotTopologicallySorted);
  EXPECT_THROW(sources_excluded_matrix(g, {"e2", "e1"}, {"e2"}), NotTopologicallySorted);
}

TEST(Excluded, RandomMatchesAvoidSetEnumeration) {
  std::mt19937_64 rng(24);
  for (int t = 0; t < 100; ++t) {
    const auto es = gen::random_dag(rng, 6, 10);
    const Digraph g(es);
    const auto order = g.topological_edge_order();
    std::vector<EdgeId> a, b;
    for (const auto& e : order) {
      const auto r = rng() % 4;
      if (r == 0) a.push_back(e);
      if (r == 1) b.push_back(e);
    }
    if (a.empty() || b.empty()) continue;
    const auto de = destinations_excluded_matrix(g, a, b);
    const auto se = sources_excluded_matrix(g, a, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        EdgeSet earlier(b.begin(), b.begin() + static_cast<long>(j));
        EdgeSet later(a.begin() + static_cast<long>(i) + 1, a.end());
        EXPECT_EQ(de(i, j), constrained_sum(es, a[i], b[j], earlier));
        EXPECT_EQ(se(i, j), constrained_sum(es, a[i], b[j], later));
      }
    }
  }
}

TEST(Restricted, AllEdgesGivesFullMatrixAndDisjointSetGivesZero) {
  const Network net = corpus::network("butterfly_z");
  EdgeSet all;
  for (const auto& e : net.edges()) all.insert(e.id);
  const auto full = transfer_matrix(net, concat(net.s1(), net.s2()), concat(net.t1(), net.t2()));
  EXPECT_EQ(restricted_network_transfer_matrix(net, all).entries, full.entries);

  auto es = net.edges();
  es.push_back({"island", "p", "q"});
  const Network with_island(es, net.s1(), net.t1(), net.s2(), net.t2());
  const auto none = restricted_network_transfer_matrix(with_island, {"island"});
  for (const auto& p : none.entries.data()) EXPECT_TRUE(p.is_zero());
}

TEST(Restricted, RandomMatchesViaEnumeration) {
  std::mt19937_64 rng(25);
  for (int t = 0; t < 100; ++t) {
    const Network net = gen::random_z_network(rng, 5, 7);
    EdgeSet u;
    for (const auto& e : net.edges()) {
      if (rng() % 3 == 0) u.insert(e.id);
    }
    const auto m = restricted_network_transfer_matrix(net, u);
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      for (std::size_t j = 0; j < m.cols.size(); ++j) {
        EXPECT_EQ(m(i, j), oracle::path_sum_via(net.edges(), m.rows[i], m.cols[j], u));
      }
    }
  }
}

TEST(VectorTransfer, DimensionOneIsScalar) {
  std::mt19937_64 rng(26);
  const auto es = gen::random_dag(rng, 5, 8);
  const Digraph g(es);
  const auto order = g.topological_edge_order();
  const auto vh = vector_extended_transfer_matrix(g, 1);
  const auto sh = extended_transfer_matrix(g);
  // Block variables carry (1,1) coordinates; compare after evaluation at
  // matching points instead of syntactically.
  const GF2k f(8);
  Assignment at;
  for (auto [i, j] : adjacent_pairs(g)) {
    const GF2k::Elem x = static_cast<GF2k::Elem>(rng() & 0xff);
    at[VarId{g.id(i), g.id(j)}] = x;
    at[VarId{g.id(i), g.id(j), 1, 1}] = x;
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = 0; j < order.size(); ++j) {
      auto need = [&](const Poly& p) {
        for (const auto& v : p.variables()) at.emplace(v, 0);
      };
      need(vh(i, j));
      need(sh(i, j));
      EXPECT_EQ(evaluate(vh(i, j), at, f), evaluate(sh(i, j), at, f));
    }
  }
  EXPECT_THROW(vector_extended_transfer_matrix(g, 0), DimensionMismatch);
}

TEST(VectorTransfer, ChainBlockIsTheCoefficientBlock) {
  const Digraph g({{"e1", "u", "v"}, {"e2", "v", "w"}});
  const auto h = vector_transfer_matrix(g, 2, {"e1"}, {"e2"});
  EXPECT_EQ(h.block_at(0, 0), block_weight({"e1", "e2"}, 2));
}

TEST(VectorTransfer, BlocksMultiplyInPathOrder) {
  std::mt19937_64 rng(27);
  PolyOps ops;
  for (int t = 0; t < 30; ++t) {
    const auto es = gen::random_dag(rng, 5, 7);
    const Digraph g(es);
    const auto& a = es[gen::pick(rng, es.size())].id;
    const auto& b = es[gen::pick(rng, es.size())].id;
    const auto h = vector_transfer_matrix(g, 2, {a}, {b});
    Matrix<Poly> expected(2, 2, Poly());
    for (const auto& p : oracle::paths(es, a, b)) expected = matadd(expected, block_weight(p, 2), ops);
    EXPECT_EQ(h.block_at(0, 0), expected);
  }
}

TEST(VectorTransfer, DiagonalCodeReducesToScalar) {
  std::mt19937_64 rng(28);
  for (int t = 0; t < 30; ++t) {
    const Network net = gen::random_z_network(rng, 5, 7);
    CodeAssignment scalar(4, 1);
    for (auto [i, j] : adjacent_pairs(net)) {
      scalar.set(net.id(i), net.id(j), static_cast<GF2k::Elem>(rng() & 0xf));
    }
    const auto lifted = scalar.diagonal_lift(2);
    const auto rows = concat(net.s1(), net.s2()), cols = concat(net.t1(), net.t2());
    const auto s = evaluated_transfer(net, scalar, rows, cols);
    const auto v = evaluated_transfer(net, lifted, rows, cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < cols.size(); ++c) {
        EXPECT_EQ(v(2 * r, 2 * c), s(r, c));
        EXPECT_EQ(v(2 * r + 1, 2 * c + 1), s(r, c));
        EXPECT_EQ(v(2 * r, 2 * c + 1), 0u);
        EXPECT_EQ(v(2 * r + 1, 2 * c), 0u);
      }
    }
  }
}

TEST(Evaluation, EvaluatedAndSymbolicModesAgree) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 50; ++t) {
    const Network net = gen::random_z_network(rng, 5, 8);
    CodeAssignment code(8, 1);
    for (auto [i, j] : adjacent_pairs(net)) {
      code.set(net.id(i), net.id(j), static_cast<GF2k::Elem>(rng() & 0xff));
    }
    const auto rows = concat(net.s1(), net.s2()), cols = concat(net.t1(), net.t2());
    EXPECT_EQ(evaluated_transfer(net, code, rows, cols),
              evaluate_matrix(transfer_matrix(net, rows, cols).entries, code));
  }
}
