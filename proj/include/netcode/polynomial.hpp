#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "netcode/errors.hpp"
#include "netcode/field.hpp"

namespace netcode {

/// Names the local coding coefficient from edge `tail` into edge `head`.
/// Vector codes carry one variable per block entry (`row`, `col`, 1-based);
/// scalar variables leave both at zero.
struct VarId {
  std::string tail;
  std::string head;
  int row = 0;
  int col = 0;

  auto operator<=>(const VarId&) const = default;

  bool is_block_entry() const { return row != 0; }

  std::string to_string() const {
    std::string s = "b[" + tail + "->" + head + "]";
    if (is_block_entry()) {
      s += "(" + std::to_string(row) + "," + std::to_string(col) + ")";
    }
    return s;
  }
};

using VarGroup = std::set<VarId>;
using Assignment = std::map<VarId, GF2k::Elem>;

namespace detail {

/// Process-wide append-only intern table; monomials store the indices.
class VarRegistry {
 public:
  static VarRegistry& instance() {
    static VarRegistry r;
    return r;
  }

  std::uint32_t intern(const VarId& v) {
    {
      std::shared_lock lock(mu_);
      if (auto it = index_.find(v); it != index_.end()) return it->second;
    }
    std::unique_lock lock(mu_);
    auto [it, inserted] = index_.emplace(v, static_cast<std::uint32_t>(ids_.size()));
    if (inserted) ids_.push_back(v);
    return it->second;
  }

  const VarId& lookup(std::uint32_t i) const {
    std::shared_lock lock(mu_);
    return ids_.at(i);
  }

 private:
  mutable std::shared_mutex mu_;
  std::map<VarId, std::uint32_t> index_;
  std::deque<VarId> ids_;
};

inline std::atomic<std::size_t>& monomial_cap_storage() {
  static std::atomic<std::size_t> cap = [] {
    std::size_t v = 100000;
    if (const char* env = std::getenv("NETCODE_MONOMIAL_CAP")) {
      char* end = nullptr;
      const unsigned long long parsed = std::strtoull(env, &end, 10);
      if (end != env && parsed > 0) v = static_cast<std::size_t>(parsed);
    }
    return v;
  }();
  return cap;
}

}  // namespace detail

inline std::uint32_t intern(const VarId& v) {
  return detail::VarRegistry::instance().intern(v);
}
inline const VarId& var_name(std::uint32_t index) {
  return detail::VarRegistry::instance().lookup(index);
}

/// Maximum number of terms a polynomial may hold before arithmetic reports
/// SymbolicOverflow. Defaults to 100000; NETCODE_MONOMIAL_CAP overrides.
inline std::size_t monomial_cap() { return detail::monomial_cap_storage().load(); }
inline void set_monomial_cap(std::size_t cap) { detail::monomial_cap_storage().store(cap); }

/// Power product of interned variables, sorted by variable index.
class Monomial {
 public:
  using Factor = std::pair<std::uint32_t, std::uint32_t>;  // (var, exponent)

  Monomial() = default;
  explicit Monomial(std::uint32_t var, std::uint32_t exp = 1) {
    if (exp) factors_.emplace_back(var, exp);
  }

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }

  std::uint32_t exponent(std::uint32_t var) const {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{var, 0});
    return it != factors_.end() && it->first == var ? it->second : 0;
  }

  std::uint32_t total_degree() const {
    std::uint32_t d = 0;
    for (const auto& [v, e] : factors_) d += e;
    return d;
  }

  friend Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.factors_.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin(), j = b.factors_.begin();
    while (i != a.factors_.end() && j != b.factors_.end()) {
      if (i->first < j->first) {
        r.factors_.push_back(*i++);
      } else if (j->first < i->first) {
        r.factors_.push_back(*j++);
      } else {
        r.factors_.emplace_back(i->first, i->second + j->second);
        ++i, ++j;
      }
    }
    r.factors_.insert(r.factors_.end(), i, a.factors_.end());
    r.factors_.insert(r.factors_.end(), j, b.factors_.end());
    return r;
  }

  /// Drops `var`, returning its exponent.
  std::uint32_t remove(std::uint32_t var) {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{var, 0});
    if (it == factors_.end() || it->first != var) return 0;
    const std::uint32_t e = it->second;
    factors_.erase(it);
    return e;
  }

  auto operator<=>(const Monomial&) const = default;

  struct Hash {
    std::size_t operator()(const Monomial& m) const {
      std::uint64_t h = 0x9e3779b97f4a7c15ull;
      for (const auto& [v, e] : m.factors_) {
        h ^= (std::uint64_t{v} << 20 | e) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      }
      return static_cast<std::size_t>(h);
    }
  };

 private:
  std::vector<Factor> factors_;
};

/// Sparse multivariate polynomial over GF(2^k).
///
/// Terms are kept sorted by monomial with no zero coefficients, so equality
/// is structural. Polynomials over GF(2) mix freely with any GF(2^k)
/// (the prime field embeds in every extension); any other degree mismatch
/// raises FieldMismatch.
class Poly {
 public:
  using Elem = GF2k::Elem;
  struct Term {
    Monomial mono;
    Elem coef;
    bool operator==(const Term&) const = default;
  };

  Poly() = default;
  explicit Poly(unsigned field_degree) : field_(field_degree) {}

  static Poly constant(Elem c, unsigned field_degree = 1) {
    Poly p(field_degree);
    if (!p.field_.contains(c)) throw FieldMismatch("constant outside field");
    if (c) p.terms_.push_back({Monomial{}, c});
    return p;
  }
  static Poly one(unsigned field_degree = 1) { return constant(1, field_degree); }
  /// Sums arbitrary terms, merging equal monomials.
  static Poly from_terms(unsigned field_degree, std::vector<Term> terms) {
    Poly p(field_degree);
    std::sort(terms.begin(), terms.end(),
              [](const Term& x, const Term& y) { return x.mono < y.mono; });
    for (auto& t : terms) {
      if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
        p.terms_.back().coef ^= t.coef;
        if (!p.terms_.back().coef) p.terms_.pop_back();
      } else if (t.coef) {
        p.terms_.push_back(std::move(t));
      }
    }
    p.check_cap();
    return p;
  }
  static Poly variable(const VarId& v, unsigned field_degree = 1) {
    Poly p(field_degree);
    p.terms_.push_back({Monomial(intern(v)), 1});
    return p;
  }

  unsigned field_degree() const { return field_.degree(); }
  const GF2k& field() const { return field_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
  }
  Elem constant_value() const {
    if (terms_.empty()) return 0;
    return terms_[0].mono.is_one() ? terms_[0].coef : 0;
  }

  /// Re-reads a GF(2) polynomial as one over GF(2^k).
  Poly promoted(unsigned k) const {
    if (k == field_degree()) return *this;
    if (field_degree() != 1) {
      throw FieldMismatch("only GF(2) polynomials can be promoted");
    }
    Poly r(k);
    r.terms_ = terms_;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    const unsigned k = common_degree(a, b);
    Poly r(k);
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin(), j = b.terms_.begin();
    while (i != a.terms_.end() && j != b.terms_.end()) {
      if (i->mono < j->mono) {
        r.terms_.push_back(*i++);
      } else if (j->mono < i->mono) {
        r.terms_.push_back(*j++);
      } else {
        if (Elem c = GF2k::add(i->coef, j->coef)) r.terms_.push_back({i->mono, c});
        ++i, ++j;
      }
    }
    r.terms_.insert(r.terms_.end(), i, a.terms_.end());
    r.terms_.insert(r.terms_.end(), j, b.terms_.end());
    r.check_cap();
    return r;
  }
  // Characteristic 2: negation is the identity.
  friend Poly operator-(const Poly& a, const Poly& b) { return a + b; }

  friend Poly operator*(const Poly& a, const Poly& b) {
    const unsigned k = common_degree(a, b);
    Poly r(k);
    if (a.is_zero() || b.is_zero()) return r;
    const GF2k& f = r.field_;
    if (a.terms_.size() == 1 || b.terms_.size() == 1) {
      // Multiplying by a single term keeps the order; no merge needed.
      const bool left_single = a.terms_.size() == 1;
      const Term& t = left_single ? a.terms_[0] : b.terms_[0];
      const auto& other = left_single ? b.terms_ : a.terms_;
      r.terms_.reserve(other.size());
      for (const auto& u : other) {
        if (Elem c = f.mul(t.coef, u.coef)) r.terms_.push_back({t.mono * u.mono, c});
      }
      std::sort(r.terms_.begin(), r.terms_.end(),
                [](const Term& x, const Term& y) { return x.mono < y.mono; });
      r.check_cap();
      return r;
    }
    const std::size_t cap = monomial_cap();
    std::unordered_map<Monomial, Elem, Monomial::Hash> acc;
    acc.reserve(std::min(a.size() * b.size(), 4 * cap));
    for (const auto& x : a.terms_) {
      for (const auto& y : b.terms_) {
        auto& slot = acc[x.mono * y.mono];
        slot = GF2k::add(slot, f.mul(x.coef, y.coef));
      }
      if (acc.size() > 4 * cap) {
        throw SymbolicOverflow("product exceeds the monomial cap of " +
                               std::to_string(cap));
      }
    }
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc) {
      if (c) r.terms_.push_back({m, c});
    }
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& x, const Term& y) { return x.mono < y.mono; });
    r.check_cap();
    return r;
  }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  bool operator==(const Poly& o) const {
    if (terms_ != o.terms_) return false;
    return field_degree() == o.field_degree() || is_constant_gf2() || o.is_constant_gf2() ||
           all_coefficients_binary();
  }

  Poly pow(unsigned e) const {
    Poly r = Poly::one(field_degree());
    Poly base = *this;
    while (e) {
      if (e & 1) r *= base;
      e >>= 1;
      if (e) base *= base;
    }
    return r;
  }

  /// Substitutes `value` (an element of GF(2^k)) for one variable. The
  /// result lives in GF(2^k); a GF(2) polynomial is promoted first.
  Poly substitute(std::uint32_t var, Elem value, const GF2k& at) const {
    const Poly src = promoted_for(at);
    Poly r(at.degree());
    std::unordered_map<Monomial, Elem, Monomial::Hash> acc;
    for (const auto& t : src.terms_) {
      Monomial m = t.mono;
      const std::uint32_t e = m.remove(var);
      const Elem c = e ? at.mul(t.coef, at.pow(value, e)) : t.coef;
      if (!c) continue;
      auto& slot = acc[m];
      slot = GF2k::add(slot, c);
    }
    for (auto& [m, c] : acc) {
      if (c) r.terms_.push_back({m, c});
    }
    std::sort(r.terms_.begin(), r.terms_.end(),
              [](const Term& x, const Term& y) { return x.mono < y.mono; });
    return r;
  }
  Poly substitute(const VarId& var, Elem value, const GF2k& at) const {
    return substitute(intern(var), value, at);
  }

  std::vector<std::uint32_t> variable_indices() const {
    std::vector<std::uint32_t> vs;
    for (const auto& t : terms_) {
      for (const auto& [v, e] : t.mono.factors()) vs.push_back(v);
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
  }

  std::set<VarId> variables() const {
    std::set<VarId> out;
    for (auto i : variable_indices()) out.insert(var_name(i));
    return out;
  }

  std::uint32_t degree_in(std::uint32_t var) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent(var));
    return d;
  }

  /// Largest exponent of any single variable.
  std::uint32_t max_variable_degree() const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) {
      for (const auto& [v, e] : t.mono.factors()) d = std::max(d, e);
    }
    return d;
  }

  /// Renders as "c*b[a->b]^2*b[c->d] + ...", factors and terms ordered by
  /// VarId so output does not depend on interning order. Coefficients other
  /// than 1 print in hex.
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::vector<std::string> rendered;
    rendered.reserve(terms_.size());
    std::vector<std::pair<std::vector<std::pair<VarId, std::uint32_t>>, Elem>> sorted;
    for (const auto& t : terms_) {
      std::vector<std::pair<VarId, std::uint32_t>> fs;
      for (const auto& [v, e] : t.mono.factors()) fs.emplace_back(var_name(v), e);
      std::sort(fs.begin(), fs.end());
      sorted.emplace_back(std::move(fs), t.coef);
    }
    std::sort(sorted.begin(), sorted.end());
    std::string out;
    for (const auto& [fs, c] : sorted) {
      std::string term;
      if (c != 1 || fs.empty()) term = hex(c);
      for (const auto& [v, e] : fs) {
        if (!term.empty()) term += "*";
        term += v.to_string();
        if (e > 1) term += "^" + std::to_string(e);
      }
      if (!out.empty()) out += " + ";
      out += term;
    }
    return out;
  }

 private:
  static std::string hex(Elem c) {
    static constexpr char digits[] = "0123456789abcdef";
    if (c == 0) return "0";
    std::string s;
    while (c) {
      s.insert(s.begin(), digits[c & 0xf]);
      c >>= 4;
    }
    return s;
  }

  static unsigned common_degree(const Poly& a, const Poly& b) {
    const unsigned ka = a.field_degree(), kb = b.field_degree();
    if (ka == kb) return ka;
    if (ka == 1 && a.all_coefficients_binary()) return kb;
    if (kb == 1 && b.all_coefficients_binary()) return ka;
    if (a.is_zero()) return kb;
    if (b.is_zero()) return ka;
    throw FieldMismatch("polynomials over GF(2^" + std::to_string(ka) + ") and GF(2^" +
                        std::to_string(kb) + ")");
  }

  bool all_coefficients_binary() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const Term& t) { return t.coef == 1; });
  }
  bool is_constant_gf2() const {
    return is_constant() && constant_value() <= 1;
  }

  Poly promoted_for(const GF2k& at) const {
    if (field_degree() == at.degree()) return *this;
    if (all_coefficients_binary()) {
      Poly r(at.degree());
      r.terms_ = terms_;
      return r;
    }
    throw FieldMismatch("cannot evaluate over a different extension");
  }

  void check_cap() const {
    if (terms_.size() > monomial_cap()) {
      throw SymbolicOverflow("polynomial exceeds the monomial cap of " +
                             std::to_string(monomial_cap()));
    }
  }

  GF2k field_{1};
  std::vector<Term> terms_;
};

inline std::vector<std::uint32_t> intern_group(const VarGroup& g) {
  std::vector<std::uint32_t> ids;
  ids.reserve(g.size());
  for (const auto& v : g) ids.push_back(intern(v));
  std::sort(ids.begin(), ids.end());
  return ids;
}

namespace detail {
inline std::uint32_t group_degree(const Monomial& m, const std::vector<std::uint32_t>& group) {
  std::uint32_t d = 0;
  for (const auto& [v, e] : m.factors()) {
    if (std::binary_search(group.begin(), group.end(), v)) d += e;
  }
  return d;
}
}  // namespace detail

/// Largest total exponent over the variables of `g` among the terms of `p`;
/// all other variables act as coefficients.
inline std::uint32_t sumdeg(const Poly& p, const VarGroup& g) {
  if (p.is_zero()) throw ZeroPolynomial("sumdeg of the zero polynomial");
  const auto ids = intern_group(g);
  std::uint32_t d = 0;
  for (const auto& t : p.terms()) d = std::max(d, detail::group_degree(t.mono, ids));
  return d;
}

/// True when every term has the same total exponent over `g`.
inline bool is_homogeneous(const Poly& p, const VarGroup& g) {
  if (p.is_zero()) throw ZeroPolynomial("homogeneity of the zero polynomial");
  const auto ids = intern_group(g);
  const std::uint32_t d = detail::group_degree(p.terms().front().mono, ids);
  return std::all_of(p.terms().begin(), p.terms().end(), [&](const Poly::Term& t) {
    return detail::group_degree(t.mono, ids) == d;
  });
}

/// Evaluates `p` at a point of GF(2^k)^n. Every variable of `p` must be
/// bound; GF(2) polynomials evaluate in any extension.
inline GF2k::Elem evaluate(const Poly& p, const Assignment& at, const GF2k& field) {
  if (p.field_degree() != field.degree() && p.field_degree() != 1) {
    throw FieldMismatch("evaluation field differs from coefficient field");
  }
  std::unordered_map<std::uint32_t, GF2k::Elem> values;
  GF2k::Elem acc = 0;
  for (const auto& t : p.terms()) {
    GF2k::Elem term = t.coef;
    for (const auto& [v, e] : t.mono.factors()) {
      auto it = values.find(v);
      if (it == values.end()) {
        auto bound = at.find(var_name(v));
        if (bound == at.end()) {
          throw UnboundVariable("no value for " + var_name(v).to_string());
        }
        if (!field.contains(bound->second)) {
          throw FieldMismatch("value for " + var_name(v).to_string() + " outside field");
        }
        it = values.emplace(v, bound->second).first;
      }
      term = field.mul(term, field.pow(it->second, e));
    }
    acc = GF2k::add(acc, term);
  }
  return acc;
}

/// Uniform draws from GF(2^k) using only the mt19937_64 bit stream, so
/// sequences are identical across standard libraries.
class FieldSampler {
 public:
  FieldSampler(const GF2k& field, std::uint64_t seed) : field_(field), rng_(seed) {}
  GF2k::Elem operator()() { return static_cast<GF2k::Elem>(rng_()) & field_.mask(); }
  std::mt19937_64& engine() { return rng_; }

 private:
  GF2k field_;
  std::mt19937_64 rng_;
};

struct IdentityTestResult {
  bool identical = true;
  std::size_t trials_run = 0;
  /// Upper bound on the probability that distinct expressions survived
  /// every trial: (degree / 2^k)^trials. Zero once a difference is found.
  double error_bound = 0.0;
};

/// An expression that may be too large to expand: it only needs to
/// evaluate at points. `degree` bounds its total degree.
struct Expression {
  std::function<GF2k::Elem(const Assignment&, const GF2k&)> eval;
  std::vector<VarId> variables;
  unsigned degree = 0;

  static Expression of(const Poly& p) {
    Expression e;
    e.eval = [p](const Assignment& a, const GF2k& f) { return evaluate(p, a, f); };
    const auto vs = p.variables();
    e.variables.assign(vs.begin(), vs.end());
    for (const auto& t : p.terms()) e.degree = std::max(e.degree, t.mono.total_degree());
    return e;
  }
};

/// Schwartz-Zippel test: evaluates both sides at `trials` uniform points of
/// GF(2^k). A mismatch is conclusive; agreement is probabilistic.
inline IdentityTestResult random_identity_test(const Expression& a, const Expression& b,
                                               unsigned trials, unsigned k,
                                               std::uint64_t seed = 0) {
  if (trials == 0) throw PreconditionViolated("identity test needs at least one trial");
  const GF2k field(k);
  std::set<VarId> vars(a.variables.begin(), a.variables.end());
  vars.insert(b.variables.begin(), b.variables.end());
  FieldSampler draw(field, seed);
  IdentityTestResult r;
  for (unsigned t = 0; t < trials; ++t) {
    Assignment point;
    for (const auto& v : vars) point[v] = draw();
    ++r.trials_run;
    if (a.eval(point, field) != b.eval(point, field)) {
      r.identical = false;
      r.error_bound = 0.0;
      return r;
    }
  }
  const double per_trial =
      std::min(1.0, static_cast<double>(std::max(a.degree, b.degree)) /
                        static_cast<double>(field.order()));
  double bound = 1.0;
  for (unsigned t = 0; t < trials; ++t) bound *= per_trial;
  r.error_bound = bound;
  return r;
}

inline IdentityTestResult random_identity_test(const Poly& a, const Poly& b, unsigned trials,
                                               unsigned k, std::uint64_t seed = 0) {
  return random_identity_test(Expression::of(a), Expression::of(b), trials, k, seed);
}

}  // namespace netcode
