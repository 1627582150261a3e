#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "netcode/io.hpp"
#include "support/corpus.hpp"
#include "support/generators.hpp"

using namespace netcode;

TEST(NetworkJson, CorpusRoundTrips) {
  for (const char* name : corpus::kZNetworks) {
    const Network net = corpus::network(name);
    const std::string text = serialize_network(net);
    EXPECT_EQ(parse_network(text), net) << name;
    EXPECT_EQ(serialize_network(parse_network(text)), text) << name;
    EXPECT_FALSE(is_m_unicast_document(text));
  }
  for (const char* name : {"chains_B", "butterfly_B"}) {
    const auto b = corpus::m_unicast(name);
    const std::string text = serialize_m_unicast(b);
    EXPECT_TRUE(is_m_unicast_document(text));
    const auto back = parse_m_unicast(text);
    EXPECT_EQ(static_cast<const Digraph&>(back), static_cast<const Digraph&>(b));
    EXPECT_EQ(back.sessions(), b.sessions());
  }
}

TEST(NetworkJson, RandomRoundTrips) {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 50; ++t) {
    const Network net = gen::random_z_network(rng, 6, 8);
    EXPECT_EQ(parse_network(serialize_network(net)), net);
  }
}

TEST(NetworkJson, VertexSlots) {
  const Network net = parse_network(R"({
    "edges": [{"id": "b", "tail": "s", "head": "x"}, {"id": "a", "tail": "s", "head": "x"},
              {"id": "c", "tail": "x", "head": "d"}, {"id": "p", "tail": "q", "head": "r"},
              {"id": "o", "tail": "r", "head": "z"}],
    "sessions": {"s1": {"vertex": "s"}, "t1": ["c"], "s2": ["p"], "t2": {"vertex": "z"}}})");
  EXPECT_EQ(net.s1(), (std::vector<EdgeId>{"a", "b"}));
  EXPECT_EQ(net.t2(), std::vector<EdgeId>{"o"});
}

TEST(NetworkJson, PositionedSyntaxErrors) {
  try {
    parse_network("{\n  \"edges\": [,]\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 13u);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  try {
    parse_network("{\"edges\": [}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_EQ(e.column(), 12u);
  }
}

TEST(NetworkJson, StructuralErrors) {
  EXPECT_THROW(parse_network(R"({"sessions": {}})"), ParseError);
  EXPECT_THROW(parse_network(R"({"edges": [{"id": "a", "tail": "u"}], "sessions": {}})"), ParseError);
  EXPECT_THROW(parse_network(R"({"edges": [{"id": 1, "tail": "u", "head": "v"}], "sessions": {}})"),
               ParseError);
  const std::string edges = R"("edges": [{"id": "a", "tail": "u", "head": "v"}, {"id": "b", "tail": "v", "head": "w"}])";
  EXPECT_THROW(parse_network("{" + edges + R"(, "sessions": []})"), ParseError);
  EXPECT_THROW(parse_network("{" + edges + R"(, "sessions": {"s1": ["a"], "t1": ["b"], "s2": ["a"]}})"),
               ParseError);
  EXPECT_THROW(parse_network("{" + edges + R"(, "sessions": {"s1": ["a"], "t1": ["b"], "s2": ["a"], "t2": ["b"]}})"),
               InvalidNetwork);
  EXPECT_THROW(parse_network("{" + edges + R"(, "sessions": {"s1": ["a"], "t1": ["x"], "s2": ["a"], "t2": ["b"]}})"),
               InvalidNetwork);
  EXPECT_THROW(parse_network("{" + edges + R"(, "sessions": {"s1": {"vertex": "w"}, "t1": ["b"], "s2": ["a"], "t2": ["b"]}})"),
               ParseError);
  EXPECT_THROW(load_network(corpus::path("does_not_exist")), Error);
}

TEST(CodeJson, ScalarRoundTrip) {
  CodeAssignment c(4, 1);
  c.set("a", "b", 0xf);
  c.set("b", "c", 0x3);
  const std::string text = serialize_code(c, Rational(1), Rational(1));
  const CodeFile f = parse_code(text);
  EXPECT_EQ(f.code.field_degree, 4u);
  EXPECT_EQ(f.code.coefficients, c.coefficients);
  EXPECT_EQ(f.r1->to_string(), "1");
  EXPECT_NE(text.find("\"beta:a:b\": \"0xf\""), std::string::npos);
  EXPECT_EQ(serialize_code(f.code, f.r1, f.r2), text);
}

TEST(CodeJson, VectorRoundTripOfTheBundledScheme) {
  const std::string text = read_file(corpus::path("instance_I_vector_code"));
  const CodeFile f = parse_code(text);
  const CodeFile again = parse_code(serialize_code(f.code, f.r1, f.r2));
  EXPECT_EQ(again.code.coefficients, f.code.coefficients);
  EXPECT_EQ(again.code.encoders, f.code.encoders);
  EXPECT_EQ(again.code.decoders, f.code.decoders);
  EXPECT_EQ(again.r1->to_string(), "3/2");
}

TEST(CodeJson, RejectsBadInput) {
  EXPECT_THROW(parse_code("[]"), ParseError);
  EXPECT_THROW(parse_code(R"({"gamma": 1})"), ParseError);
  EXPECT_THROW(parse_code(R"({"beta:a": "0x1"})"), ParseError);
  EXPECT_THROW(parse_code(R"({"beta:a:b:c": "0x1"})"), ParseError);
  EXPECT_THROW(parse_code(R"({"beta:a:b": "zz"})"), ParseError);
  EXPECT_THROW(parse_code(R"({"field_degree": 40})"), ParseError);
  EXPECT_THROW(parse_code(R"({"field_degree": "two"})"), ParseError);
  EXPECT_THROW(parse_code(R"({"field_degree": 1, "beta:a:b": "0x2"})"), FieldMismatch);
  EXPECT_THROW(parse_code(R"({"block_dimension": 2, "beta:a:b": "0x1"})"), ParseError);
  EXPECT_THROW(parse_code(R"({"block_dimension": 2, "beta:a:b": [["0x1"], ["0x1", "0x0"]]})"), ParseError);
  EXPECT_THROW(parse_code(R"({"block_dimension": 2, "beta:a:b": [["0x1"]]})"), DimensionMismatch);
  EXPECT_THROW(parse_code(R"({"encoder:3": [["0x1"]]})"), ParseError);
  EXPECT_THROW(parse_code(R"({"rates": ["1/x", "1"]})"), ParseError);
  EXPECT_THROW(parse_code(R"({"rates": ["1"]})"), ParseError);
}

TEST(Dot, ColorsAndShading) {
  const Network net = corpus::network("butterfly_z");
  const std::string dot = export_dot(net);
  EXPECT_EQ(dot.rfind("digraph network {", 0), 0u);
  EXPECT_NE(dot.find("[label=\"s1\", color=green"), std::string::npos);
  EXPECT_NE(dot.find("[label=\"s2\", color=green"), std::string::npos);
  EXPECT_NE(dot.find("[label=\"t1\", color=red"), std::string::npos);
  EXPECT_NE(dot.find("[label=\"t2\", color=red"), std::string::npos);
  EXPECT_NE(dot.find("[label=\"cd\"];"), std::string::npos);
  const std::string t2_head = net.edge(net.index("t2")).head;
  EXPECT_NE(dot.find("\"" + t2_head + "\" [style=filled, fillcolor=gray80];"), std::string::npos);
  const std::string t1_head = net.edge(net.index("t1")).head;
  EXPECT_EQ(dot.find("\"" + t1_head + "\" [style=filled"), std::string::npos);
}

TEST(Dot, WellFormed) {
  for (const char* name : corpus::kZNetworks) {
    const Network net = corpus::network(name);
    const std::string dot = export_dot(net);
    EXPECT_EQ(std::count(dot.begin(), dot.end(), '{'), 1);
    EXPECT_EQ(std::count(dot.begin(), dot.end(), '}'), 1);
    const std::regex edge_line(R"re(^  "[^"]+" -> "[^"]+" \[label="[^"]+"(, color=(green|red), fontcolor=(green|red))?\];$)re");
    const std::regex vertex_line(R"re(^  "[^"]+"( \[style=filled, fillcolor=gray80\])?;$)re");
    std::istringstream in(dot);
    std::string line;
    std::size_t edges = 0, vertices = 0;
    while (std::getline(in, line)) {
      if (std::regex_match(line, edge_line)) ++edges;
      else if (std::regex_match(line, vertex_line)) ++vertices;
    }
    EXPECT_EQ(edges, net.edge_count()) << name;
    EXPECT_EQ(vertices, net.vertices().size()) << name;
  }
  const Network odd({{"a\"b", "x\\y", "z"}, {"t", "z", "w"}}, {"a\"b"}, {"t"}, {}, {});
  EXPECT_NE(export_dot(odd).find(R"("x\\y" -> "z" [label="a\"b")"), std::string::npos);
}
