#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "netcode/code.hpp"
#include "netcode/decomposition.hpp"
#include "netcode/feasibility.hpp"
#include "netcode/gns.hpp"
#include "netcode/io.hpp"
#include "netcode/paths.hpp"
#include "netcode/zero_error.hpp"

namespace netcode {

/// Text reports behind the command-line tool. They contain no timings or
/// addresses, so equal inputs give byte-identical output.

namespace detail {

inline std::string join(const std::vector<EdgeId>& es, const char* sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < es.size(); ++i) s += (i ? sep : "") + es[i];
  return s;
}

inline std::string join(const EdgeSet& es) { return join(std::vector<EdgeId>(es.begin(), es.end())); }

inline std::string matrix_text(const std::string& name, const TransferMatrix& m) {
  std::ostringstream out;
  out << name << " (" << join(m.rows) << " -> " << join(m.cols) << "):\n";
  for (std::size_t r = 0; r < m.entries.rows(); ++r) {
    out << "  [";
    for (std::size_t c = 0; c < m.entries.cols(); ++c) {
      out << (c ? ", " : "") << m.entries(r, c).to_string();
    }
    out << "]\n";
  }
  return out.str();
}

inline std::string side_text(const std::string& name, const SideNetwork& s) {
  std::ostringstream out;
  out << name << ": " << s.graph.edge_count() << " edges, sources {" << join(s.sources)
      << "}, sinks {" << join(s.sinks) << "}\n";
  for (const auto& e : s.graph.edges()) out << "  " << e.id << ": " << e.tail << " -> " << e.head << "\n";
  return out.str();
}

}  // namespace detail

inline std::string analyze_report(const Network& net) {
  std::ostringstream out;
  out << "edges: " << net.edge_count() << "\n";
  out << "vertices: " << net.vertices().size() << "\n";
  auto cut_line = [&](const char* name, const std::vector<EdgeId>& a, const std::vector<EdgeId>& b) {
    const auto c = min_edge_cut(net, EdgeSet(a.begin(), a.end()), EdgeSet(b.begin(), b.end()));
    out << "min cut " << name << ": " << c.size() << " {" << detail::join(c.edges) << "}\n";
  };
  cut_line("S1->T1", net.s1(), net.t1());
  cut_line("S2->T2", net.s2(), net.t2());
  cut_line("S2->T1", net.s2(), net.t1());
  const auto gns = min_gns_cut(net, kDefaultGnsMaxSize);
  if (gns) {
    out << "min GNS cut: " << gns->size() << " {" << detail::join(gns->edges) << "}\n";
  } else {
    out << "min GNS cut: > " << kDefaultGnsMaxSize << "\n";
  }
  if (!net.single_edge_sessions()) {
    out << "interference classes: skipped (multi-edge sessions)\n";
    return out.str();
  }
  const auto pairs = gns_cuts_of_size(net, 2);
  if (pairs.empty()) out << "size-2 GNS cuts: none\n";
  for (const auto& cut : pairs) {
    const GnsPair p = make_gns_pair(net, *cut.begin(), *cut.rbegin());
    out << "cut {" << p.e1 << ", " << p.e2 << "} classes: "
        << classify_interference(net, p).to_string() << "\n";
  }
  return out.str();
}

struct Feasible11Report {
  std::string text;
  FeasibilityVerdict verdict;
  Network decided;  // the network the verdict and code refer to
};

/// Networks whose sessions span several edges at one vertex are first
/// collapsed to single virtual edges with adapt_rates.
inline Feasible11Report feasible11_report(const Network& input, const DecideOptions& opt) {
  std::ostringstream out;
  out << "seed: " << opt.seed << "\n";
  Network net = input;
  if (!net.single_edge_sessions()) {
    net = adapt_rates(input, 1, 1);
    out << "sessions adapted to single virtual edges\n";
  }
  auto v = decide_rate11(net, opt);
  for (const auto& line : v.trace) out << line << "\n";
  if (v.achievable()) {
    out << "verdict: Achievable\n";
    out << "method: " << v.method << "\n";
    out << "field degree: " << v.field_degree << "\n";
  } else {
    out << "verdict: Infeasible\n";
    if (v.missing_session) {
      out << "certificate: session " << v.missing_session << " has no path\n";
    } else {
      out << "certificate: GNS cut {" << detail::join(v.witness->edges) << "}\n";
    }
  }
  return {out.str(), std::move(v), std::move(net)};
}

inline GnsPair default_pair(const Network& net) {
  const auto cuts = gns_cuts_of_size(net, 2);
  if (cuts.empty()) throw NotAGnsCut("network has no GNS cut of size 2");
  return make_gns_pair(net, *cuts[0].begin(), *cuts[0].rbegin());
}

inline std::string decompose_report(const Network& net, const GnsPair& pair) {
  const Decomposition d = decompose(net, pair);
  std::ostringstream out;
  out << "cut: {" << pair.e1 << ", " << pair.e2 << "}\n";
  out << detail::matrix_text("M", d.M) << detail::matrix_text("M1", d.M1)
      << detail::matrix_text("Lambda", d.Lambda) << detail::matrix_text("M2", d.M2);
  out << "M = M1 Lambda M2: " << (d.identity.holds ? "holds" : "FAILS")
      << (d.identity.symbolic ? " (symbolic)" : " (random evaluation)") << "\n";
  out << "vars(s_i -> e1) disjoint from vars(M2): " << (d.disjoint_c ? "yes" : "no") << "\n";
  out << "vars(M1) disjoint from vars(e2 -> t_i): " << (d.disjoint_d ? "yes" : "no") << "\n";
  if (d.disjoint_e) {
    out << "vars(M1) disjoint from vars(M2): " << (*d.disjoint_e ? "yes" : "no") << "\n";
  } else {
    out << "vars(M1) disjoint from vars(M2): not claimed (e1 reaches e2)\n";
  }
  out << detail::side_text("left network", d.left_net) << detail::side_text("right network", d.right_net);
  return out.str();
}

struct VerifyReport {
  std::string text;
  bool ok = false;
};

/// Rates come from the code file; otherwise from the session sizes.
inline VerifyReport verify_code_report(const Network& net, const CodeFile& file) {
  const Rational r1 = file.r1.value_or(Rational(static_cast<long>(net.s1().size())));
  const Rational r2 = file.r2.value_or(Rational(static_cast<long>(net.s2().size())));
  const CodeCheck c = check_vector_code(net, file.code, r1, r2);
  std::ostringstream out;
  out << "rate: (" << r1.to_string() << ", " << r2.to_string() << ")\n";
  out << "field: GF(2^" << file.code.field_degree << "), block dimension " << file.code.block << "\n";
  out << "det G11: " << detail::hex(c.det11) << "\n";
  out << "det G22: " << detail::hex(c.det22) << "\n";
  out << "G21 zero: " << (c.interference_zero ? "yes" : "no") << "\n";
  out << "verdict: " << (c.ok() ? "valid" : "invalid") << "\n";
  return {out.str(), c.ok()};
}

}  // namespace netcode
