#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "netcode/errors.hpp"

namespace netcode {

/// Reduction polynomials for GF(2^k), k = 1..32, bit i holding the
/// coefficient of x^i. Each entry is the lowest-weight irreducible
/// polynomial of degree k, choosing the smallest middle exponents first
/// (trinomial x^k + x^a + 1 when one exists, else a pentanomial).
inline constexpr std::array<std::uint64_t, 33> kIrreducibleModuli = {
    0x0,        0x3,        0x7,         0xb,        0x13,       0x25,
    0x43,       0x83,       0x11b,       0x203,      0x409,      0x805,
    0x1009,     0x201b,     0x4021,      0x8003,     0x1002b,    0x20009,
    0x40009,    0x80027,    0x100009,    0x200005,   0x400003,   0x800021,
    0x100001b,  0x2000009,  0x400001b,   0x8000027,  0x10000003, 0x20000005,
    0x40000003, 0x80000009, 0x10000008d,
};

inline constexpr unsigned kMaxFieldDegree = 32;

/// Arithmetic in GF(2^k) with elements packed as the low k bits of a word.
///
/// Degrees up to 16 use shared log/antilog tables; larger degrees fall back
/// to shift-and-add multiplication. Instances are cheap value types.
class GF2k {
 public:
  using Elem = std::uint32_t;

  explicit GF2k(unsigned degree = 1) : degree_(degree) {
    if (degree < 1 || degree > kMaxFieldDegree) {
      throw FieldMismatch("field degree must be in 1..32, got " +
                          std::to_string(degree));
    }
    if (degree_ <= kTableLimit) tables_ = tables_for(degree_);
  }

  unsigned degree() const { return degree_; }
  std::uint64_t modulus() const { return kIrreducibleModuli[degree_]; }
  std::uint64_t order() const { return std::uint64_t{1} << degree_; }
  Elem mask() const {
    return static_cast<Elem>((std::uint64_t{1} << degree_) - 1);
  }
  bool contains(Elem a) const { return (std::uint64_t{a} >> degree_) == 0; }

  static Elem add(Elem a, Elem b) { return a ^ b; }
  static Elem sub(Elem a, Elem b) { return a ^ b; }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    if (tables_) {
      const auto& t = *tables_;
      return t.exp[t.log[a] + t.log[b]];
    }
    return slow_mul(a, b, degree_);
  }

  Elem pow(Elem a, std::uint64_t e) const {
    Elem r = 1;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  Elem inv(Elem a) const {
    if (a == 0) throw FieldMismatch("zero has no inverse");
    return pow(a, order() - 2);
  }

  bool operator==(const GF2k& o) const { return degree_ == o.degree_; }

 private:
  static constexpr unsigned kTableLimit = 16;

  struct Tables {
    std::vector<Elem> exp;  // doubled so log sums need no reduction
    std::vector<std::uint32_t> log;
  };

  static Elem slow_mul(Elem a, Elem b, unsigned k) {
    const std::uint64_t mod = kIrreducibleModuli[k];
    std::uint64_t x = a, r = 0;
    while (b) {
      if (b & 1) r ^= x;
      b >>= 1;
      x <<= 1;
      if ((x >> k) & 1) x ^= mod;
    }
    return static_cast<Elem>(r);
  }

  static std::shared_ptr<const Tables> tables_for(unsigned k) {
    static std::mutex mu;
    static std::array<std::shared_ptr<const Tables>, kTableLimit + 1> cache;
    std::lock_guard lock(mu);
    if (cache[k]) return cache[k];
    const std::uint64_t n = std::uint64_t{1} << k;
    // Find a generator of the multiplicative group; the moduli are
    // irreducible but not necessarily primitive.
    for (Elem g = 2; g < n || n == 2; ++g) {
      auto t = std::make_shared<Tables>();
      t->exp.assign(2 * n, 0);
      t->log.assign(n, 0);
      Elem x = 1;
      bool ok = true;
      for (std::uint64_t i = 0; i + 1 < n; ++i) {
        if (i > 0 && x == 1) {
          ok = false;
          break;
        }
        t->exp[i] = x;
        t->log[x] = static_cast<std::uint32_t>(i);
        x = n == 2 ? 1 : slow_mul(x, g, k);
      }
      if (!ok || x != 1) continue;
      for (std::uint64_t i = n - 1; i < 2 * n; ++i) t->exp[i] = t->exp[i - (n - 1)];
      cache[k] = t;
      return cache[k];
    }
    throw FieldMismatch("no generator found for GF(2^" + std::to_string(k) + ")");
  }

  unsigned degree_;
  std::shared_ptr<const Tables> tables_;
};

}  // namespace netcode
