#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "netcode/assignment.hpp"
#include "netcode/code.hpp"
#include "netcode/errors.hpp"
#include "netcode/network.hpp"

namespace netcode {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text,
                                                       std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // byte is the 1-based position just past the offending character.
    const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
    const auto [line, col] = line_column(text, at);
    std::string msg = e.what();
    if (auto p = msg.find("syntax error"); p != std::string::npos) msg = msg.substr(p);
    throw ParseError("malformed JSON: " + msg, line, col);
  }
}

inline const Json& member(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ParseError(where + ": missing \"" + key + "\"", 0, 0);
  }
  return obj.at(key);
}

inline std::string text_of(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + " must be a string", 0, 0);
  return j.get<std::string>();
}

inline std::vector<Edge> parse_edges(const Json& doc) {
  const Json& arr = member(doc, "edges", "network");
  if (!arr.is_array()) throw ParseError("\"edges\" must be an array", 0, 0);
  std::vector<Edge> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    out.push_back({text_of(member(arr[i], "id", where), where + ".id"),
                   text_of(member(arr[i], "tail", where), where + ".tail"),
                   text_of(member(arr[i], "head", where), where + ".head")});
  }
  return out;
}

/// A session slot is an array of edge ids or {"vertex": v}, which stands
/// for all out-edges of v (source slots) or all in-edges of v (sink slots),
/// in id order.
inline std::vector<EdgeId> parse_slot(const Json& j, const std::vector<Edge>& edges,
                                      bool source, const std::string& where) {
  std::vector<EdgeId> out;
  if (j.is_object()) {
    const std::string v = text_of(member(j, "vertex", where), where + ".vertex");
    for (const auto& e : edges) {
      if ((source ? e.tail : e.head) == v) out.push_back(e.id);
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) throw ParseError(where + ": vertex '" + v + "' has no such edges", 0, 0);
    return out;
  }
  if (!j.is_array()) throw ParseError(where + " must be an array or {\"vertex\": ...}", 0, 0);
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(text_of(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

}  // namespace detail

/// True when the document uses the m-unicast session array.
inline bool is_m_unicast_document(const std::string& text) {
  const Json doc = detail::parse_json(text);
  return doc.is_object() && doc.contains("sessions") && doc.at("sessions").is_array();
}

inline Network parse_network(const std::string& text) {
  const Json doc = detail::parse_json(text);
  auto edges = detail::parse_edges(doc);
  const Json& s = detail::member(doc, "sessions", "network");
  if (!s.is_object()) {
    throw ParseError("\"sessions\" must be an object with s1, t1, s2, t2", 0, 0);
  }
  auto slot = [&](const char* key, bool source) {
    return detail::parse_slot(detail::member(s, key, "sessions"), edges, source,
                              std::string("sessions.") + key);
  };
  auto s1 = slot("s1", true), t1 = slot("t1", false), s2 = slot("s2", true),
       t2 = slot("t2", false);
  return Network(std::move(edges), std::move(s1), std::move(t1), std::move(s2), std::move(t2));
}

inline MUnicastNetwork parse_m_unicast(const std::string& text) {
  const Json doc = detail::parse_json(text);
  auto edges = detail::parse_edges(doc);
  const Json& s = detail::member(doc, "sessions", "network");
  if (!s.is_array()) throw ParseError("\"sessions\" must be an array of {s, t}", 0, 0);
  std::vector<Session> sessions;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::string where = "sessions[" + std::to_string(i) + "]";
    sessions.push_back({detail::parse_slot(detail::member(s[i], "s", where), edges, true, where + ".s"),
                        detail::parse_slot(detail::member(s[i], "t", where), edges, false, where + ".t")});
  }
  return MUnicastNetwork(std::move(edges), std::move(sessions));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Network load_network(const std::string& path) { return parse_network(read_file(path)); }
inline MUnicastNetwork load_m_unicast(const std::string& path) {
  return parse_m_unicast(read_file(path));
}

namespace detail {

inline Json edges_json(const Digraph& g) {
  Json arr = Json::array();
  for (const auto& e : g.edges()) arr.push_back({{"id", e.id}, {"tail", e.tail}, {"head", e.head}});
  return arr;
}

}  // namespace detail

inline std::string serialize_network(const Network& net) {
  Json doc;
  doc["edges"] = detail::edges_json(net);
  doc["sessions"] = {{"s1", net.s1()}, {"t1", net.t1()}, {"s2", net.s2()}, {"t2", net.t2()}};
  return doc.dump(2) + "\n";
}

inline std::string serialize_m_unicast(const MUnicastNetwork& net) {
  Json doc;
  doc["edges"] = detail::edges_json(net);
  Json s = Json::array();
  for (const auto& sess : net.sessions()) s.push_back({{"s", sess.sources}, {"t", sess.sinks}});
  doc["sessions"] = s;
  return doc.dump(2) + "\n";
}

// Code files ---------------------------------------------------------------

/// A code file: the assignment plus the rates it is meant for, when given.
struct CodeFile {
  CodeAssignment code;
  std::optional<Rational> r1, r2;
};

namespace detail {

inline std::string hex(GF2k::Elem x) {
  std::ostringstream ss;
  ss << "0x" << std::hex << x;
  return ss.str();
}

inline GF2k::Elem parse_hex(const Json& j, const std::string& where) {
  const std::string s = text_of(j, where);
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos, 16);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (s.empty() || pos != s.size() || v > 0xffffffffULL) {
    throw ParseError(where + ": '" + s + "' is not a hex field element", 0, 0);
  }
  return static_cast<GF2k::Elem>(v);
}

inline Matrix<GF2k::Elem> parse_block(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    throw ParseError(where + " must be a nonempty array of rows", 0, 0);
  }
  Matrix<GF2k::Elem> m(j.size(), j[0].size(), 0);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != m.cols()) {
      throw ParseError(where + ": ragged rows", 0, 0);
    }
    for (std::size_t c = 0; c < m.cols(); ++c) {
      m(r, c) = parse_hex(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

inline Json block_json(const Matrix<GF2k::Elem>& m) {
  Json rows = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(hex(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

inline Rational parse_rational(const Json& j, const std::string& where) {
  if (j.is_number_unsigned()) return Rational(j.get<long>());
  const std::string s = text_of(j, where);
  try {
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(std::stol(s));
    return Rational(std::stol(s.substr(0, slash)), std::stol(s.substr(slash + 1)));
  } catch (const std::logic_error&) {
    throw ParseError(where + ": '" + s + "' is not a rate", 0, 0);
  }
}

inline CodeFile code_from_json(const Json& doc) {
  if (!doc.is_object()) throw ParseError("code file must be a JSON object", 0, 0);
  unsigned k = 1, v = 1;
  if (doc.contains("field_degree")) k = doc.at("field_degree").get<unsigned>();
  if (doc.contains("block_dimension")) v = doc.at("block_dimension").get<unsigned>();
  if (k < 1 || k > kMaxFieldDegree) throw ParseError("field_degree out of range", 0, 0);
  CodeFile out{CodeAssignment(k, v), std::nullopt, std::nullopt};
  for (const auto& [key, val] : doc.items()) {
    if (key == "field_degree" || key == "block_dimension") continue;
    if (key == "rates") {
      if (!val.is_array() || val.size() != 2) throw ParseError("\"rates\" must be [R1, R2]", 0, 0);
      out.r1 = detail::parse_rational(val[0], "rates[0]");
      out.r2 = detail::parse_rational(val[1], "rates[1]");
    } else if (key.rfind("beta:", 0) == 0) {
      const std::string rest = key.substr(5);
      const auto colon = rest.find(':');
      if (colon == std::string::npos || rest.find(':', colon + 1) != std::string::npos) {
        throw ParseError("bad coefficient key '" + key + "'", 0, 0);
      }
      const EdgeId tail = rest.substr(0, colon), head = rest.substr(colon + 1);
      if (val.is_string()) {
        if (v != 1) throw ParseError(key + ": vector codes need blocks", 0, 0);
        out.code.set(tail, head, detail::parse_hex(val, key));
      } else {
        out.code.set_block(tail, head, detail::parse_block(val, key));
      }
    } else if (key.rfind("encoder:", 0) == 0 || key.rfind("decoder:", 0) == 0) {
      const bool enc = key[0] == 'e';
      const std::string n = key.substr(8);
      if (n != "1" && n != "2") throw ParseError("bad session in '" + key + "'", 0, 0);
      auto m = detail::parse_block(val, key);
      (enc ? out.code.encoders : out.code.decoders)[std::stoi(n)] = std::move(m);
    } else {
      throw ParseError("unknown key '" + key + "' in code file", 0, 0);
    }
  }
  return out;
}

}  // namespace detail

/// Keys: "field_degree", "block_dimension", optional "rates": [R1, R2],
/// "beta:<edge>:<edge>" (hex scalar, or a v x v array of hex rows), and
/// "encoder:<i>" / "decoder:<i>" matrices. Edge ids must not contain ':'.
inline CodeFile parse_code(const std::string& text) {
  const Json doc = detail::parse_json(text);
  try {
    return detail::code_from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("code file: ") + e.what(), 0, 0);
  }
}

inline CodeFile load_code(const std::string& path) { return parse_code(read_file(path)); }

inline std::string serialize_code(const CodeAssignment& code,
                                  const std::optional<Rational>& r1 = std::nullopt,
                                  const std::optional<Rational>& r2 = std::nullopt) {
  Json doc;
  doc["field_degree"] = code.field_degree;
  doc["block_dimension"] = code.block;
  if (r1 && r2) doc["rates"] = {r1->to_string(), r2->to_string()};
  for (const auto& [pair, b] : code.coefficients) {
    const std::string key = "beta:" + pair.first + ":" + pair.second;
    if (code.block == 1) {
      doc[key] = detail::hex(b(0, 0));
    } else {
      doc[key] = detail::block_json(b);
    }
  }
  for (const auto& [i, m] : code.encoders) doc["encoder:" + std::to_string(i)] = detail::block_json(m);
  for (const auto& [i, m] : code.decoders) doc["decoder:" + std::to_string(i)] = detail::block_json(m);
  return doc.dump(2) + "\n";
}

// DOT ----------------------------------------------------------------------

namespace detail {

inline std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Graphviz rendering. Source edges are green, destination edges red, and
/// the head of every T2 edge (the destination holding side information) is
/// shaded.
inline std::string export_dot(const Network& net) {
  std::set<std::string> shaded;
  for (const auto& e : net.t2()) shaded.insert(net.edge(net.index(e)).head);
  auto in = [](const std::vector<EdgeId>& l, const EdgeId& e) {
    return std::find(l.begin(), l.end(), e) != l.end();
  };
  std::ostringstream out;
  out << "digraph network {\n  rankdir=LR;\n";
  for (const auto& v : net.vertices()) {
    out << "  " << detail::quoted(v);
    if (shaded.count(v)) out << " [style=filled, fillcolor=gray80]";
    out << ";\n";
  }
  for (const auto& e : net.edges()) {
    out << "  " << detail::quoted(e.tail) << " -> " << detail::quoted(e.head) << " [label="
        << detail::quoted(e.id);
    if (in(net.s1(), e.id) || in(net.s2(), e.id)) {
      out << ", color=green, fontcolor=green";
    } else if (in(net.t1(), e.id) || in(net.t2(), e.id)) {
      out << ", color=red, fontcolor=red";
    }
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace netcode
