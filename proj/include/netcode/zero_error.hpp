#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "netcode/errors.hpp"
#include "netcode/network.hpp"

namespace netcode {

/// Explicit function-table codes over an arbitrary finite alphabet, the
/// m-unicast to two-unicast-Z embedding, and exhaustive zero-error checks.

using Symbol = std::uint32_t;

/// Sessions over a DAG plus side information: destination j also knows the
/// messages of every session listed in side_info[j].
struct CodedNetwork {
  Digraph graph;
  std::vector<Session> sessions;
  std::vector<std::vector<std::size_t>> side_info;

  static CodedNetwork from(const Network& net) {
    return {Digraph(net.edges()),
            {{net.s1(), net.t1()}, {net.s2(), net.t2()}},
            {{}, {0}}};
  }
  static CodedNetwork from(const MUnicastNetwork& net) {
    return {Digraph(net.edges()), net.sessions(),
            std::vector<std::vector<std::size_t>>(net.session_count())};
  }
};

/// Symbols are integers in [0, alphabet^block_length), i.e. words of A^n
/// written in base |A|. Session i sends rates[i] symbols.
///
/// Table layouts, all with the first input as the most significant digit:
///  - source edge of session i: indexed by the session's message tuple;
///  - any other edge: indexed by the values of its in-edges sorted by id;
///  - decoders[j][r]: output symbol r of destination j, indexed by the
///    values on T_j in listed order followed by the side-information
///    messages in side_info order.
struct TableCode {
  std::size_t alphabet = 2;
  std::size_t block_length = 1;
  std::vector<std::size_t> rates;
  std::map<EdgeId, std::vector<Symbol>> tables;
  std::vector<std::vector<std::vector<Symbol>>> decoders;

  std::size_t symbols() const {
    std::size_t s = 1;
    for (std::size_t i = 0; i < block_length; ++i) s *= alphabet;
    return s;
  }
};

namespace detail {

inline constexpr std::size_t kMaxTableSize = std::size_t{1} << 24;

inline std::size_t checked_power(std::size_t base, std::size_t exp, std::size_t limit,
                                 const std::string& what) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && r > limit / base) {
      throw StateSpaceTooLarge(what + " exceeds " + std::to_string(limit));
    }
    r *= base;
  }
  return r;
}

inline std::size_t pack(const std::vector<Symbol>& digits, std::size_t radix) {
  std::size_t idx = 0;
  for (Symbol d : digits) idx = idx * radix + d;
  return idx;
}

inline std::vector<Symbol> unpack(std::size_t idx, std::size_t radix, std::size_t len) {
  std::vector<Symbol> out(len);
  for (std::size_t i = len; i-- > 0;) {
    out[i] = static_cast<Symbol>(idx % radix);
    idx /= radix;
  }
  return out;
}

/// Per-edge evaluation plan shared by simulation and verification.
struct TablePlan {
  std::size_t symbols = 0;
  std::vector<std::optional<std::size_t>> source_of;  // session owning a source edge
  std::vector<std::vector<std::size_t>> inputs;       // in-edges, sorted by id
  std::vector<const std::vector<Symbol>*> tables;
};

inline TablePlan plan_tables(const CodedNetwork& net, const TableCode& code) {
  const Digraph& g = net.graph;
  if (code.alphabet < 2) throw DimensionMismatch("alphabet needs at least two letters");
  if (code.rates.size() != net.sessions.size()) {
    throw DimensionMismatch("code has " + std::to_string(code.rates.size()) +
                            " rates for " + std::to_string(net.sessions.size()) + " sessions");
  }
  TablePlan p;
  p.symbols = checked_power(code.alphabet, code.block_length, std::size_t{1} << 16,
                            "symbol alphabet");
  p.source_of.assign(g.edge_count(), std::nullopt);
  for (std::size_t s = 0; s < net.sessions.size(); ++s) {
    for (const auto& e : net.sessions[s].sources) p.source_of[g.index(e)] = s;
  }
  p.inputs.resize(g.edge_count());
  p.tables.resize(g.edge_count());
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    std::size_t arity;
    if (p.source_of[i]) {
      arity = code.rates[*p.source_of[i]];
    } else {
      p.inputs[i] = g.predecessors(i);
      std::sort(p.inputs[i].begin(), p.inputs[i].end(),
                [&](std::size_t a, std::size_t b) { return g.id(a) < g.id(b); });
      arity = p.inputs[i].size();
    }
    auto it = code.tables.find(g.id(i));
    if (it == code.tables.end()) throw DimensionMismatch("no table for edge '" + g.id(i) + "'");
    const std::size_t want = checked_power(p.symbols, arity, kMaxTableSize, "table size");
    if (it->second.size() != want) {
      throw DimensionMismatch("table for edge '" + g.id(i) + "' has " +
                              std::to_string(it->second.size()) + " entries, expected " +
                              std::to_string(want));
    }
    p.tables[i] = &it->second;
  }
  if (code.decoders.size() != net.sessions.size()) {
    throw DimensionMismatch("decoder count does not match session count");
  }
  for (std::size_t j = 0; j < net.sessions.size(); ++j) {
    std::size_t arity = net.sessions[j].sinks.size();
    for (std::size_t s : net.side_info[j]) arity += code.rates[s];
    const std::size_t want = checked_power(p.symbols, arity, kMaxTableSize, "decoder size");
    if (code.decoders[j].size() != code.rates[j]) {
      throw DimensionMismatch("destination " + std::to_string(j + 1) + " needs " +
                              std::to_string(code.rates[j]) + " decoders");
    }
    for (const auto& d : code.decoders[j]) {
      if (d.size() != want) {
        throw DimensionMismatch("decoder of destination " + std::to_string(j + 1) +
                                " has the wrong size");
      }
    }
  }
  return p;
}

/// Edge values by topological index. `forced` overrides selected edges.
inline std::vector<Symbol> run_tables(const TablePlan& p,
                                      const std::vector<std::vector<Symbol>>& messages,
                                      const std::map<std::size_t, Symbol>& forced = {}) {
  std::vector<Symbol> val(p.tables.size());
  std::vector<Symbol> digits;
  for (std::size_t i = 0; i < val.size(); ++i) {
    if (auto f = forced.find(i); f != forced.end()) {
      val[i] = f->second;
      continue;
    }
    std::size_t idx;
    if (p.source_of[i]) {
      idx = pack(messages[*p.source_of[i]], p.symbols);
    } else {
      digits.clear();
      for (std::size_t q : p.inputs[i]) digits.push_back(val[q]);
      idx = pack(digits, p.symbols);
    }
    val[i] = (*p.tables[i])[idx] % p.symbols;
  }
  return val;
}

inline std::vector<std::vector<Symbol>> run_decoders(
    const CodedNetwork& net, const TableCode& code, const TablePlan& p,
    const std::vector<Symbol>& val, const std::vector<std::vector<Symbol>>& messages) {
  std::vector<std::vector<Symbol>> out(net.sessions.size());
  for (std::size_t j = 0; j < net.sessions.size(); ++j) {
    std::vector<Symbol> digits;
    for (const auto& t : net.sessions[j].sinks) digits.push_back(val[net.graph.index(t)]);
    for (std::size_t s : net.side_info[j]) {
      digits.insert(digits.end(), messages[s].begin(), messages[s].end());
    }
    const std::size_t idx = pack(digits, p.symbols);
    for (const auto& d : code.decoders[j]) out[j].push_back(d[idx] % p.symbols);
  }
  return out;
}

}  // namespace detail

struct Simulation {
  std::map<EdgeId, Symbol> edges;
  std::vector<std::vector<Symbol>> decoded;
};

/// Push one message tuple through the code.
inline Simulation simulate(const CodedNetwork& net, const TableCode& code,
                           const std::vector<std::vector<Symbol>>& messages) {
  const auto p = detail::plan_tables(net, code);
  if (messages.size() != net.sessions.size()) throw DimensionMismatch("one message per session");
  for (std::size_t s = 0; s < messages.size(); ++s) {
    if (messages[s].size() != code.rates[s]) {
      throw DimensionMismatch("message " + std::to_string(s + 1) + " has the wrong length");
    }
    for (Symbol x : messages[s]) {
      if (x >= p.symbols) throw DimensionMismatch("message symbol out of range");
    }
  }
  const auto val = detail::run_tables(p, messages);
  Simulation sim;
  for (std::size_t i = 0; i < val.size(); ++i) sim.edges[net.graph.id(i)] = val[i];
  sim.decoded = detail::run_decoders(net, code, p, val, messages);
  return sim;
}

inline constexpr std::size_t kMaxMessageTuples = 1'000'000;

struct ZeroErrorReport {
  bool ok = true;
  std::size_t tuples = 0;
  std::optional<std::vector<std::vector<Symbol>>> counterexample;
  std::size_t failing_session = 0;  // 1-based, 0 when ok

  std::string to_string() const {
    if (ok) return "zero-error: yes (" + std::to_string(tuples) + " message tuples)";
    std::string s = "zero-error: no, destination " + std::to_string(failing_session) +
                    " misdecodes messages (";
    for (std::size_t i = 0; i < counterexample->size(); ++i) {
      if (i) s += "; ";
      for (std::size_t k = 0; k < (*counterexample)[i].size(); ++k) {
        if (k) s += ",";
        s += std::to_string((*counterexample)[i][k]);
      }
    }
    return s + ")";
  }
};

/// Exhaustive: every message tuple must be decoded exactly at every
/// destination. Stops at the first failure, in lexicographic tuple order.
inline ZeroErrorReport verify_zero_error(const CodedNetwork& net, const TableCode& code) {
  const auto p = detail::plan_tables(net, code);
  std::size_t width = 0;
  for (std::size_t r : code.rates) width += r;
  const std::size_t total =
      detail::checked_power(p.symbols, width, kMaxMessageTuples, "message tuple count");
  ZeroErrorReport rep;
  std::vector<std::vector<Symbol>> msg(code.rates.size());
  for (std::size_t t = 0; t < total; ++t) {
    const auto flat = detail::unpack(t, p.symbols, width);
    std::size_t pos = 0;
    for (std::size_t s = 0; s < msg.size(); ++s) {
      msg[s].assign(flat.begin() + pos, flat.begin() + pos + code.rates[s]);
      pos += code.rates[s];
    }
    const auto val = detail::run_tables(p, msg);
    const auto dec = detail::run_decoders(net, code, p, val, msg);
    ++rep.tuples;
    for (std::size_t j = 0; j < dec.size(); ++j) {
      if (dec[j] != msg[j]) {
        rep.ok = false;
        rep.counterexample = msg;
        rep.failing_session = j + 1;
        return rep;
      }
    }
  }
  return rep;
}

inline ZeroErrorReport verify_zero_error(const Network& net, const TableCode& code) {
  return verify_zero_error(CodedNetwork::from(net), code);
}
inline ZeroErrorReport verify_zero_error(const MUnicastNetwork& net, const TableCode& code) {
  return verify_zero_error(CodedNetwork::from(net), code);
}

/// Rate-1-per-session forwarding code: source edges carry their session's
/// single message symbol and every other edge copies its only in-edge.
/// Destination j outputs the value on its first sink edge.
inline TableCode relay_code(const CodedNetwork& net, std::size_t alphabet,
                            std::size_t block_length = 1) {
  TableCode code;
  code.alphabet = alphabet;
  code.block_length = block_length;
  code.rates.assign(net.sessions.size(), 1);
  const std::size_t q = code.symbols();
  const Digraph& g = net.graph;
  std::set<EdgeId> sources;
  for (const auto& s : net.sessions) sources.insert(s.sources.begin(), s.sources.end());
  std::vector<Symbol> ident(q);
  for (std::size_t x = 0; x < q; ++x) ident[x] = static_cast<Symbol>(x);
  for (std::size_t i = 0; i < g.edge_count(); ++i) {
    if (!sources.count(g.id(i)) && g.predecessors(i).size() != 1) {
      throw PreconditionViolated("relay code needs a single in-edge on '" + g.id(i) + "'");
    }
    code.tables[g.id(i)] = ident;
  }
  for (std::size_t j = 0; j < net.sessions.size(); ++j) {
    if (net.sessions[j].sinks.empty()) throw PreconditionViolated("session without sinks");
    std::size_t arity = net.sessions[j].sinks.size();
    for (std::size_t s : net.side_info[j]) arity += code.rates[s];
    const std::size_t size = detail::checked_power(q, arity, detail::kMaxTableSize, "decoder size");
    const std::size_t stride = size / q;  // first input is the top digit
    std::vector<Symbol> d(size);
    for (std::size_t idx = 0; idx < size; ++idx) d[idx] = static_cast<Symbol>(idx / stride);
    code.decoders.push_back({std::move(d)});
  }
  return code;
}

/// The m-unicast network B embedded in a two-unicast-Z network. Per session
/// i (1-based in ids) the construction adds
///   x1_i : src1 -> add_i      (part of S1)
///   x2_i : src2 -> split_i    (part of S2)
///   a_i  : split_i -> add_i   (copy of x2_i for the adder)
///   c_i  : split_i -> sub_i   (copy of x2_i for the subtractor)
///   zs_i : out_i -> sub_i     (B's output i, into the subtractor)
///   z_i  : out_i -> dst2      (T2)
///   v_i  : sub_i -> dst1      (T1)
/// B's i-th source edge leaves add_i and its i-th sink edge enters out_i.
/// B's own edges and vertices get a "B." prefix.
struct ZConstruction {
  Network net;
  std::size_t m = 0;
  std::vector<EdgeId> x1, x2, a, c, y, t, zs, z, v;  // y, t: B's source / sink edges
  std::map<EdgeId, EdgeId> b_edge;                    // B id -> id in net
};

inline ZConstruction build_z_from_m_unicast(const MUnicastNetwork& b) {
  ZConstruction out;
  out.m = b.session_count();
  if (out.m == 0) throw PreconditionViolated("B has no sessions");
  std::map<EdgeId, std::size_t> src_of, sink_of;
  for (std::size_t i = 0; i < out.m; ++i) {
    const auto& s = b.sessions()[i];
    if (s.sources.size() != 1 || s.sinks.size() != 1) {
      throw PreconditionViolated("B sessions must have one source and one sink edge");
    }
    if (!b.predecessors(b.index(s.sources[0])).empty()) {
      throw PreconditionViolated("B source edge '" + s.sources[0] + "' has in-edges");
    }
    if (!b.successors(b.index(s.sinks[0])).empty()) {
      throw PreconditionViolated("B sink edge '" + s.sinks[0] + "' has out-edges");
    }
    src_of[s.sources[0]] = i;
    sink_of[s.sinks[0]] = i;
  }
  auto num = [](std::size_t i) { return std::to_string(i + 1); };
  std::vector<Edge> es;
  for (const auto& e : b.edges()) {
    Edge n{"B." + e.id, "B." + e.tail, "B." + e.head};
    if (auto it = src_of.find(e.id); it != src_of.end()) n.tail = "add_" + num(it->second);
    if (auto it = sink_of.find(e.id); it != sink_of.end()) n.head = "out_" + num(it->second);
    out.b_edge[e.id] = n.id;
    es.push_back(n);
  }
  for (std::size_t i = 0; i < out.m; ++i) {
    const std::string k = num(i);
    auto add = [&](std::vector<EdgeId>& list, const std::string& id, const std::string& tail,
                   const std::string& head) {
      list.push_back(id);
      es.push_back({id, tail, head});
    };
    add(out.x1, "x1_" + k, "src1", "add_" + k);
    add(out.x2, "x2_" + k, "src2", "split_" + k);
    add(out.a, "a_" + k, "split_" + k, "add_" + k);
    add(out.c, "c_" + k, "split_" + k, "sub_" + k);
    add(out.zs, "zs_" + k, "out_" + k, "sub_" + k);
    add(out.z, "z_" + k, "out_" + k, "dst2");
    add(out.v, "v_" + k, "sub_" + k, "dst1");
    out.y.push_back(out.b_edge.at(b.sessions()[i].sources[0]));
    out.t.push_back(out.b_edge.at(b.sessions()[i].sinks[0]));
  }
  out.net = Network(std::move(es), out.x1, out.v, out.x2, out.z);
  return out;
}

/// Abelian group on A^n used for the adders and subtractors.
enum class LiftGroup { Xor, ModularSum };

namespace detail {

struct GroupOps {
  LiftGroup kind;
  std::size_t alphabet;
  std::size_t block;

  Symbol combine(Symbol x, Symbol y, bool subtract) const {
    if (kind == LiftGroup::Xor) return x ^ y;
    Symbol r = 0, place = 1;
    for (std::size_t d = 0; d < block; ++d) {
      const Symbol a = x % alphabet, b = y % alphabet;
      const Symbol s = subtract ? (a + alphabet - b) % alphabet : (a + b) % alphabet;
      r += s * place;
      place *= static_cast<Symbol>(alphabet);
      x /= alphabet;
      y /= alphabet;
    }
    return r;
  }
  Symbol add(Symbol x, Symbol y) const { return combine(x, y, false); }
  Symbol sub(Symbol x, Symbol y) const { return combine(x, y, true); }
};

/// Table over two inputs in the order (first, second) of `ins`, given a
/// function of (x1-like, x2-like) values.
template <class F>
std::vector<Symbol> binary_table(std::size_t q, F f) {
  std::vector<Symbol> t(q * q);
  for (std::size_t u = 0; u < q; ++u) {
    for (std::size_t w = 0; w < q; ++w) t[u * q + w] = f(static_cast<Symbol>(u), static_cast<Symbol>(w));
  }
  return t;
}

}  // namespace detail

/// Turn a zero-error rate-(1,...,1) code for B into a rate-(m,m) code for
/// the constructed network: Y_i = X1i + X2i, V_i = Z_i - X2i, and
/// destination 2 recovers X2i = Z_i - X1i.
inline TableCode lift_code(const ZConstruction& zc, const MUnicastNetwork& b,
                           const TableCode& code_b, LiftGroup group = LiftGroup::Xor) {
  const CodedNetwork bnet = CodedNetwork::from(b);
  detail::plan_tables(bnet, code_b);
  for (std::size_t r : code_b.rates) {
    if (r != 1) throw PreconditionViolated("lift needs a rate-(1,...,1) code for B");
  }
  const std::size_t q = code_b.symbols();
  if (group == LiftGroup::Xor && (code_b.alphabet & (code_b.alphabet - 1)) != 0) {
    throw PreconditionViolated("xor lift needs a power-of-two alphabet");
  }
  const detail::GroupOps ops{group, code_b.alphabet, code_b.block_length};
  const std::size_t m = zc.m;

  TableCode out;
  out.alphabet = code_b.alphabet;
  out.block_length = code_b.block_length;
  out.rates = {m, m};

  for (const auto& [bid, zid] : zc.b_edge) out.tables[zid] = code_b.tables.at(bid);

  std::vector<Symbol> ident(q);
  for (std::size_t x = 0; x < q; ++x) ident[x] = static_cast<Symbol>(x);
  const std::size_t msg_size = detail::checked_power(q, m, detail::kMaxTableSize, "table size");

  for (std::size_t i = 0; i < m; ++i) {
    // Source edges pick component i of the session message.
    std::vector<Symbol> pick(msg_size);
    for (std::size_t idx = 0; idx < msg_size; ++idx) pick[idx] = detail::unpack(idx, q, m)[i];
    out.tables[zc.x1[i]] = pick;
    out.tables[zc.x2[i]] = pick;
    out.tables[zc.a[i]] = ident;
    out.tables[zc.c[i]] = ident;

    // Y_i: in-edges sorted by id are a_i (X2i) then x1_i (X1i).
    const auto& enc = code_b.tables.at(b.sessions()[i].sources[0]);
    out.tables[zc.y[i]] = detail::binary_table(q, [&](Symbol x2, Symbol x1) {
      return enc[ops.add(x1, x2)];
    });

    const auto& dec = code_b.decoders[i][0];
    out.tables[zc.zs[i]] = dec;
    out.tables[zc.z[i]] = dec;
    // V_i: in-edges sorted by id are c_i (X2i) then zs_i (Z_i).
    out.tables[zc.v[i]] = detail::binary_table(q, [&](Symbol x2, Symbol zv) {
      return ops.sub(zv, x2);
    });
  }

  // Destination 1 reads V directly; destination 2 reads Z then knows X1.
  out.decoders.resize(2);
  const std::size_t d1 = msg_size;
  const std::size_t d2 = detail::checked_power(q, 2 * m, detail::kMaxTableSize, "decoder size");
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<Symbol> dec1(d1), dec2(d2);
    for (std::size_t idx = 0; idx < d1; ++idx) dec1[idx] = detail::unpack(idx, q, m)[r];
    for (std::size_t idx = 0; idx < d2; ++idx) {
      const auto digits = detail::unpack(idx, q, 2 * m);
      dec2[idx] = ops.sub(digits[r], digits[m + r]);
    }
    out.decoders[0].push_back(std::move(dec1));
    out.decoders[1].push_back(std::move(dec2));
  }
  return out;
}

struct PropertyCheck {
  std::string label;
  bool holds = false;
  std::string detail;
};

/// The four structural consequences of zero-error rate (m,m) on the
/// constructed network, each checked exhaustively. With
///   f_i(x1_i, x2_i) = Y_i,  h = B's map (Y_1..Y_m) -> (Z_1..Z_m),
///   g_i(Z_i, x2_i) = V_i:
/// (1) for every fixed x2, (Z_i)_i -> (g_i(Z_i, x2_i))_i is a bijection;
/// (2) for every fixed x2, x1 -> (f_i(x1_i, x2_i))_i is a bijection;
/// (3) h is a bijection and, for every fixed x1, x2 -> (f_i)_i is one;
/// (4) h_i depends on Y_i alone, through a bijection.
struct BijectivityReport {
  std::array<PropertyCheck, 4> properties;
  bool all_hold() const {
    return std::all_of(properties.begin(), properties.end(),
                       [](const PropertyCheck& p) { return p.holds; });
  }
};

inline BijectivityReport bijectivity_properties(const ZConstruction& zc, const TableCode& code) {
  const CodedNetwork net = CodedNetwork::from(zc.net);
  const auto p = detail::plan_tables(net, code);
  const Digraph& g = net.graph;
  const std::size_t q = p.symbols;
  const std::size_t m = zc.m;
  const std::size_t space = detail::checked_power(q, m, kMaxMessageTuples, "tuple count");
  detail::checked_power(q, 2 * m, kMaxMessageTuples, "tuple count");

  auto local = [&](const EdgeId& e, Symbol first, Symbol second) {
    return (*p.tables[g.index(e)])[first * q + second] % q;
  };
  auto f = [&](std::size_t i, Symbol x1, Symbol x2) { return local(zc.y[i], x2, x1); };
  auto gfun = [&](std::size_t i, Symbol zv, Symbol x2) { return local(zc.v[i], x2, zv); };
  auto h = [&](const std::vector<Symbol>& y) {
    std::map<std::size_t, Symbol> forced;
    for (std::size_t i = 0; i < m; ++i) forced[g.index(zc.y[i])] = y[i];
    const std::vector<std::vector<Symbol>> dummy{std::vector<Symbol>(m, 0),
                                                 std::vector<Symbol>(m, 0)};
    const auto val = detail::run_tables(p, dummy, forced);
    std::vector<Symbol> zv(m);
    for (std::size_t i = 0; i < m; ++i) zv[i] = val[g.index(zc.zs[i])];
    return zv;
  };
  auto tuple = [&](std::size_t idx) { return detail::unpack(idx, q, m); };
  auto show = [](const std::vector<Symbol>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
  };
  // Finds a collision of fn over all m-tuples, if any.
  auto injective = [&](auto fn, std::vector<Symbol>& witness) {
    std::vector<char> seen(space, 0);
    for (std::size_t idx = 0; idx < space; ++idx) {
      const auto in = tuple(idx);
      const std::size_t image = detail::pack(fn(in), q);
      if (seen[image]) {
        witness = in;
        return false;
      }
      seen[image] = 1;
    }
    return true;
  };

  BijectivityReport rep;
  std::vector<Symbol> w;

  auto& p1 = rep.properties[0];
  p1 = {"(1) (g_1..g_m) with x2 fixed is a bijection", true, ""};
  for (std::size_t ix2 = 0; ix2 < space && p1.holds; ++ix2) {
    const auto x2 = tuple(ix2);
    if (!injective([&](const std::vector<Symbol>& zv) {
          std::vector<Symbol> o(m);
          for (std::size_t i = 0; i < m; ++i) o[i] = gfun(i, zv[i], x2[i]);
          return o;
        }, w)) {
      p1.holds = false;
      p1.detail = "collision at x2=" + show(x2) + ", z=" + show(w);
    }
  }

  auto& p2 = rep.properties[1];
  p2 = {"(2) (f_1..f_m) with x2 fixed is a bijection", true, ""};
  for (std::size_t ix2 = 0; ix2 < space && p2.holds; ++ix2) {
    const auto x2 = tuple(ix2);
    if (!injective([&](const std::vector<Symbol>& x1) {
          std::vector<Symbol> o(m);
          for (std::size_t i = 0; i < m; ++i) o[i] = f(i, x1[i], x2[i]);
          return o;
        }, w)) {
      p2.holds = false;
      p2.detail = "collision at x2=" + show(x2) + ", x1=" + show(w);
    }
  }

  auto& p3 = rep.properties[2];
  p3 = {"(3) h and (f_1..f_m) with x1 fixed are bijections", true, ""};
  if (!injective(h, w)) {
    p3.holds = false;
    p3.detail = "h collides at y=" + show(w);
  }
  for (std::size_t ix1 = 0; ix1 < space && p3.holds; ++ix1) {
    const auto x1 = tuple(ix1);
    if (!injective([&](const std::vector<Symbol>& x2) {
          std::vector<Symbol> o(m);
          for (std::size_t i = 0; i < m; ++i) o[i] = f(i, x1[i], x2[i]);
          return o;
        }, w)) {
      p3.holds = false;
      p3.detail = "f collides at x1=" + show(x1) + ", x2=" + show(w);
    }
  }

  auto& p4 = rep.properties[3];
  p4 = {"(4) h_i depends only on Y_i, bijectively", true, ""};
  std::vector<std::vector<std::optional<Symbol>>> tilde(m, std::vector<std::optional<Symbol>>(q));
  for (std::size_t idx = 0; idx < space && p4.holds; ++idx) {
    const auto y = tuple(idx);
    const auto zv = h(y);
    for (std::size_t i = 0; i < m; ++i) {
      auto& slot = tilde[i][y[i]];
      if (slot && *slot != zv[i]) {
        p4.holds = false;
        p4.detail = "h_" + std::to_string(i + 1) + " varies with other inputs at y=" + show(y);
        break;
      }
      slot = zv[i];
    }
  }
  for (std::size_t i = 0; i < m && p4.holds; ++i) {
    std::vector<char> seen(q, 0);
    for (std::size_t y = 0; y < q; ++y) {
      const Symbol img = *tilde[i][y];
      if (seen[img]) {
        p4.holds = false;
        p4.detail = "reduced h_" + std::to_string(i + 1) + " is not injective";
        break;
      }
      seen[img] = 1;
    }
  }
  return rep;
}

}  // namespace netcode
