// netcode: command-line front end for the two-unicast-Z library.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "netcode/netcode.hpp"

namespace {

using namespace netcode;

constexpr int kAchievable = 0;
constexpr int kInfeasible = 1;
constexpr int kError = 2;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

GnsPair parse_cut(const Network& net, const std::string& spec) {
  if (spec.empty()) return default_pair(net);
  const auto comma = spec.find(',');
  if (comma == std::string::npos) throw NotAGnsCut("--cut expects two edge ids as e1,e2");
  const std::string a = spec.substr(0, comma), b = spec.substr(comma + 1);
  for (const auto& e : {a, b}) {
    if (!net.has_edge(e)) throw UnknownEdge("no edge '" + e + "'");
  }
  return make_gns_pair(net, a, b);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Linear network coding tools for two-unicast-Z networks"};
  app.require_subcommand(1);

  std::string file, code_file, out_file, cut;
  std::uint64_t seed = 0;
  unsigned jobs = 1, max_k = 16;

  auto* analyze = app.add_subcommand("analyze", "Cuts, GNS bound and interference path classes");
  analyze->add_option("file", file, "network JSON")->required();

  auto* feasible = app.add_subcommand("feasible11", "Decide rate (1,1) and emit a code");
  feasible->add_option("file", file, "network JSON")->required();
  feasible->add_option("--max-field-degree", max_k, "largest k tried for GF(2^k)")
      ->check(CLI::Range(1u, static_cast<unsigned>(kMaxFieldDegree)));
  feasible->add_option("--seed", seed, "seed for randomized search");
  feasible->add_option("--jobs", jobs, "search threads")->check(CLI::PositiveNumber);
  feasible->add_option("-o,--output", out_file, "write the code JSON here");

  auto* decomp = app.add_subcommand("decompose", "Factor M = M1 Lambda M2 across a GNS pair");
  decomp->add_option("file", file, "network JSON")->required();
  decomp->add_option("--cut", cut, "two edges e1,e2 (default: first size-2 GNS cut)");

  auto* construct = app.add_subcommand("construct-z", "Embed an m-unicast network");
  construct->add_option("file", file, "m-unicast network JSON")->required();
  construct->add_option("-o,--output", out_file, "write the network JSON here");

  auto* verify = app.add_subcommand("verify-code", "Check a linear code against a network");
  verify->add_option("file", file, "network JSON")->required();
  verify->add_option("code", code_file, "code JSON")->required();

  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering");
  dot->add_option("file", file, "network JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kError;
  }

  try {
    if (*analyze) {
      std::cout << analyze_report(load_network(file));
      return 0;
    }
    if (*feasible) {
      DecideOptions opt;
      opt.seed = seed;
      opt.jobs = jobs;
      opt.max_field_degree = max_k;
      auto rep = feasible11_report(load_network(file), opt);
      std::cout << rep.text;
      if (!rep.verdict.achievable()) return kInfeasible;
      const std::string json = serialize_code(*rep.verdict.code, Rational(1), Rational(1));
      if (out_file.empty()) {
        std::cout << "code:\n" << json;
      } else {
        write_file(out_file, json);
        std::cout << "code written to " << out_file << "\n";
      }
      return kAchievable;
    }
    if (*decomp) {
      const Network net = load_network(file);
      std::cout << decompose_report(net, parse_cut(net, cut));
      return 0;
    }
    if (*construct) {
      const auto z = build_z_from_m_unicast(load_m_unicast(file));
      const std::string json = serialize_network(z.net);
      if (out_file.empty()) {
        std::cout << json;
      } else {
        write_file(out_file, json);
      }
      return 0;
    }
    if (*verify) {
      const auto rep = verify_code_report(load_network(file), load_code(code_file));
      std::cout << rep.text;
      return rep.ok ? kAchievable : kInfeasible;
    }
    if (*dot) {
      std::cout << export_dot(load_network(file));
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
