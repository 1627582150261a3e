#include <gtest/gtest.h>

#include <random>

#include "netcode/code.hpp"
#include "netcode/feasibility.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace netcode;

namespace {

PathClassCount classify_by_enumeration(const Network& net, const GnsPair& p) {
  PathClassCount c;
  for (const auto& path : oracle::paths(net.edges(), net.s2()[0], net.t1()[0])) {
    const bool a = std::count(path.begin(), path.end(), p.e1) > 0;
    const bool b = std::count(path.begin(), path.end(), p.e2) > 0;
    if (a && b) ++c.via_both;
    else if (a) ++c.via_e1_not_e2;
    else if (b) ++c.via_e2_not_e1;
  }
  return c;
}

// The verdict carries its own evidence; check it independently.
void expect_sound(const Network& net, const FeasibilityVerdict& v) {
  if (v.achievable()) {
    ASSERT_TRUE(v.code.has_value());
    EXPECT_TRUE(verify_scalar_code(net, *v.code, 1, 1));
    EXPECT_EQ(v.code->field_degree, v.field_degree);
    return;
  }
  if (v.missing_session) {
    const auto& s = v.missing_session == 1 ? net.s1() : net.s2();
    const auto& d = v.missing_session == 1 ? net.t1() : net.t2();
    EXPECT_FALSE(oracle::reaches(net.edges(), s[0], d[0]));
    return;
  }
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_LE(v.witness->size(), 1u);
  EXPECT_TRUE(oracle::gns_cut(net, EdgeSet(v.witness->edges.begin(), v.witness->edges.end())));
}

}  // namespace

TEST(Classify, CorpusClassCounts) {
  const Network si = corpus::network("single_interference");
  for (const auto& c : gns_cuts_of_size(si, 2)) {
    EXPECT_LE(classify_interference(si, make_gns_pair(si, *c.begin(), *c.rbegin())).nonempty(), 1);
  }
  const Network bz = corpus::network("butterfly_z");
  int multi = 0;
  for (const auto& c : gns_cuts_of_size(bz, 2)) {
    multi += classify_interference(bz, make_gns_pair(bz, *c.begin(), *c.rbegin())).nonempty() >= 2;
  }
  EXPECT_GT(multi, 0);
  const Network dc = corpus::network("disjoint_chains");
  for (const auto& c : gns_cuts_of_size(dc, 2)) {
    EXPECT_EQ(classify_interference(dc, make_gns_pair(dc, *c.begin(), *c.rbegin())).to_string(), "(0,0,0)");
  }
}

TEST(Classify, RandomMatchesEnumerationAndWitness) {
  std::mt19937_64 rng(41);
  int witnessed = 0;
  for (int t = 0; t < 150; ++t) {
    const Network net = gen::random_gns2_network(rng, 14);
    for (const auto& c : gns_cuts_of_size(net, 2)) {
      const GnsPair p = make_gns_pair(net, *c.begin(), *c.rbegin());
      const auto counts = classify_interference(net, p);
      EXPECT_EQ(counts, classify_by_enumeration(net, p));
      // A witness exists exactly when some cut edge is used by one
      // interference path and avoided by another.
      const auto w = homogeneity_witness(net, p);
      EXPECT_EQ(w.has_value(), counts.nonempty() >= 2);
      if (w) {
        ++witnessed;
        EXPECT_FALSE(is_homogeneous(transfer_matrix(net, net.s2(), net.t1())(0, 0), *w));
      }
    }
  }
  EXPECT_GT(witnessed, 0);
}

TEST(Decide, CorpusVerdicts) {
  struct Case {
    const char* name;
    bool achievable;
    const char* method;
  };
  for (const Case c : {Case{"gns1", false, ""}, Case{"disjoint_chains", true, "routing"},
                       Case{"butterfly_z", true, "search"},
                       Case{"single_interference", true, "routing"}}) {
    const Network net = corpus::network(c.name);
    const auto v = decide_rate11(net);
    EXPECT_EQ(v.achievable(), c.achievable) << c.name;
    if (c.achievable) { EXPECT_EQ(v.method, c.method) << c.name; }
    expect_sound(net, v);
  }
  const Network inst = corpus::network("instance_I");
  EXPECT_THROW(decide_rate11(inst), DimensionMismatch);
  const Network adapted = adapt_rates(inst, 1, 1);
  const auto v = decide_rate11(adapted);
  EXPECT_TRUE(v.achievable());
  expect_sound(adapted, v);
}

TEST(Decide, MissingSessionAndSingleEdgeCut) {
  const Network gap({{"s1", "a", "b"}, {"t1", "c", "d"}, {"s2", "x", "y"}, {"t2", "y", "z"}},
                    {"s1"}, {"t1"}, {"s2"}, {"t2"});
  const auto v = decide_rate11(gap);
  EXPECT_FALSE(v.achievable());
  EXPECT_EQ(v.missing_session, 1);
  const auto g1 = decide_rate11(corpus::network("gns1"));
  ASSERT_TRUE(g1.witness.has_value());
  EXPECT_EQ(g1.witness->edges, EdgeSet{"cd"});
}

TEST(Decide, RandomInstancesAreSoundAndMatchTheOracle) {
  std::mt19937_64 rng(42);
  int yes = 0, no = 0;
  for (int t = 0; t < 120; ++t) {
    const Network net = gen::random_z_network(rng, 3 + gen::pick(rng, 3), 3 + gen::pick(rng, 4));
    DecideOptions opt;
    opt.seed = static_cast<std::uint64_t>(t);
    const auto v = decide_rate11(net, opt);
    expect_sound(net, v);
    (v.achievable() ? yes : no)++;
    if (v.achievable()) {
      EXPECT_LE(v.field_degree, 4u);
    }
    EXPECT_EQ(v.achievable(), nullstellensatz_oracle(net, std::nullopt, 4)) << t;
  }
  EXPECT_GT(yes, 0);
  EXPECT_GT(no, 0);
}

TEST(Decide, DeterministicForAFixedSeed) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 20; ++t) {
    const Network net = gen::random_gns2_network(rng, 13);
    DecideOptions opt;
    opt.seed = 7;
    const auto a = decide_rate11(net, opt), b = decide_rate11(net, opt);
    EXPECT_EQ(a.trace, b.trace);
    EXPECT_EQ(a.code.has_value(), b.code.has_value());
    if (a.code) { EXPECT_EQ(a.code->coefficients, b.code->coefficients); }
  }
}

TEST(Oracle, GnsOneIsInfeasibleAtEveryDegree) {
  const Network net = corpus::network("gns1");
  for (unsigned k = 1; k <= 4; ++k) EXPECT_FALSE(nullstellensatz_oracle(net, std::nullopt, k)) << k;
}

TEST(Oracle, PairFormAgreesWithPlainForm) {
  std::mt19937_64 rng(44);
  for (int t = 0; t < 60; ++t) {
    const Network net = gen::random_gns2_network(rng, 12);
    const bool plain = nullstellensatz_oracle(net, std::nullopt, 2);
    for (const auto& c : gns_cuts_of_size(net, 2)) {
      EXPECT_EQ(nullstellensatz_oracle(net, make_gns_pair(net, *c.begin(), *c.rbegin()), 2), plain);
    }
  }
}

TEST(SingleInterference, StructureOnCriticalNetworks) {
  std::mt19937_64 rng(45);
  int seen = 0;
  for (int t = 0; t < 400 && seen < 40; ++t) {
    const Network net = gen::random_gns2_network(rng, 14);
    const Network crit = criticalize(net);
    if (count_paths(crit, {crit.s2()[0]}, {crit.t1()[0]}) != 1) continue;
    bool one_class = true;
    for (const auto& c : gns_cuts_of_size(crit, 2)) {
      one_class &= classify_interference(crit, make_gns_pair(crit, *c.begin(), *c.rbegin())).nonempty() <= 1;
    }
    if (!one_class) continue;
    ++seen;
    const auto a = analyze_single_interference(crit);
    EXPECT_TRUE(a.joined_paths_stay);
    EXPECT_TRUE(a.leaving_paths_stay_out);
    EXPECT_GT(a.j, a.i);
    // Routing p1 and p2 is interference free: p1 enters P after p2 left it.
    EXPECT_EQ(a.p1.back(), crit.t1()[0]);
    EXPECT_EQ(a.p2.front(), crit.s2()[0]);
  }
  EXPECT_GT(seen, 0);
  EXPECT_THROW(analyze_single_interference(corpus::network("butterfly_z")), PreconditionViolated);
}
