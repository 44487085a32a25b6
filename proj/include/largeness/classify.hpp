#pragma once

#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "largeness/presentation.hpp"

namespace largeness {

/// Parameters of a cyclically reduced relator x^n y^l x^-n y^-m, read up to
/// rotation and inversion with either generator playing x.
struct BsShape {
  int x = 0;  // generator index playing x
  long long n = 0, l = 0, m = 0;
};

namespace detail {

struct Syllable {
  int generator;
  long long exponent;
};

inline std::vector<Syllable> cyclic_syllables(const Word& core) {
  std::vector<Syllable> s;
  for (Letter l : core) {
    if (!s.empty() && s.back().generator == generator_of(l))
      s.back().exponent += sign_of(l);
    else
      s.push_back({generator_of(l), sign_of(l)});
  }
  if (s.size() > 1 && s.front().generator == s.back().generator) {
    s.front().exponent += s.back().exponent;
    s.pop_back();
  }
  return s;
}

inline bool large_shape(const BsShape& b) { return std::llabs(b.n) > 1 || std::gcd(b.l, b.m) != 1; }

}  // namespace detail

/// Every reading of r as x^n y^l x^-n y^-m (at most two, one per choice of x).
inline std::vector<BsShape> bs_shapes(const Word& r) {
  auto s = detail::cyclic_syllables(cyclic_reduce(r).core);
  std::vector<BsShape> out;
  if (s.size() != 4 || s[0].generator != s[2].generator || s[1].generator != s[3].generator ||
      s[0].generator == s[1].generator)
    return out;
  for (std::size_t k : {0u, 1u}) {
    const auto& a = s[k];
    const auto& b = s[k + 1];
    const auto& c = s[k + 2];
    const auto& d = s[(k + 3) % 4];
    if (a.exponent == -c.exponent) out.push_back({a.generator, a.exponent, b.exponent, -d.exponent});
  }
  return out;
}

/// Classification of small presentations by shape: the groups below are
/// known to be not large, or (for the Baumslag-Solitar-like shapes with
/// |n| > 1 or l, m not coprime) known to be large.
struct Classification {
  enum class Kind { none, not_large, large } kind = Kind::none;
  std::string reason;  // for not_large
  std::vector<long long> parameters;
  std::optional<BsShape> shape;  // for large
};

inline Classification classify_presentation(const Presentation& q) {
  Classification c;
  if (q.rank() == 0) {
    c.kind = Classification::Kind::not_large;
    c.reason = "trivial";
    return c;
  }
  if (q.rank() == 1) {
    c.kind = Classification::Kind::not_large;
    c.reason = "cyclic";
    return c;
  }
  if (q.rank() != 2 || q.relators.size() != 1) return c;
  const Word core = cyclic_reduce(q.relators[0]).core;
  if (core.max_generator() < 1 || core.occurrences(0) == 0) return c;
  if (zxz_relator_check(core)) {
    c.kind = Classification::Kind::not_large;
    c.reason = "Z^2";
    return c;
  }
  auto shapes = bs_shapes(core);
  for (const auto& b : shapes)
    if (detail::large_shape(b)) {
      c.kind = Classification::Kind::large;
      c.shape = b;
      return c;
    }
  if (shapes.empty()) return c;
  const auto& b = shapes.front();
  c.kind = Classification::Kind::not_large;
  if (std::llabs(b.l) == 1 || std::llabs(b.m) == 1) {
    c.reason = "BS(1,m)";
    c.parameters = {b.l * b.m};
  } else {
    c.reason = "BS(l,m) coprime";
    c.parameters = {b.l, b.m};
  }
  return c;
}

}  // namespace largeness
