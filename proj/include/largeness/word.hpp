#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace largeness {

// A letter is a signed, 1-based generator code: +(g+1) for x_g, -(g+1) for x_g^-1.
using Letter = int;

constexpr Letter make_letter(int generator, int sign = 1) {
  return sign > 0 ? generator + 1 : -(generator + 1);
}
constexpr int generator_of(Letter l) { return (l > 0 ? l : -l) - 1; }
constexpr int sign_of(Letter l) { return l > 0 ? 1 : -1; }

class Word;
Word free_reduce(std::span<const Letter> letters);

/// A freely reduced word in a free group. The empty word is the identity.
///
/// Every constructor reduces its input, so a Word never holds an adjacent
/// inverse pair.
class Word {
 public:
  Word() = default;
  Word(std::initializer_list<Letter> letters) : Word(std::span<const Letter>(letters.begin(), letters.size())) {}
  explicit Word(std::span<const Letter> letters);
  explicit Word(const std::vector<Letter>& letters) : Word(std::span<const Letter>(letters)) {}

  static Word generator(int g, long long exponent = 1) {
    Word w;
    w.letters_.assign(static_cast<std::size_t>(exponent < 0 ? -exponent : exponent),
                      make_letter(g, exponent < 0 ? -1 : 1));
    return w;
  }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }

  Word inverse() const {
    Word w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(-*it);
    return w;
  }

  Word& operator*=(const Word& rhs) {
    for (Letter l : rhs.letters_) push(l);
    return *this;
  }
  friend Word operator*(Word lhs, const Word& rhs) {
    lhs *= rhs;
    return lhs;
  }

  Word pow(long long e) const {
    Word base = e < 0 ? inverse() : *this;
    if (e < 0) e = -e;
    Word out;
    for (long long i = 0; i < e; ++i) out *= base;
    return out;
  }

  /// Contiguous subword; subwords of reduced words are reduced.
  Word subword(std::size_t pos, std::size_t len) const {
    Word w;
    w.letters_.assign(letters_.begin() + static_cast<std::ptrdiff_t>(pos),
                      letters_.begin() + static_cast<std::ptrdiff_t>(pos + len));
    return w;
  }

  long long exponent_sum(int g) const {
    long long s = 0;
    for (Letter l : letters_)
      if (generator_of(l) == g) s += sign_of(l);
    return s;
  }

  std::size_t occurrences(int g) const {
    return static_cast<std::size_t>(
        std::count_if(letters_.begin(), letters_.end(), [g](Letter l) { return generator_of(l) == g; }));
  }

  /// Largest generator index used, or -1 for the empty word.
  int max_generator() const {
    int m = -1;
    for (Letter l : letters_) m = std::max(m, generator_of(l));
    return m;
  }

  bool operator==(const Word&) const = default;
  // Shortlex order.
  std::strong_ordering operator<=>(const Word& o) const {
    if (auto c = letters_.size() <=> o.letters_.size(); c != 0) return c;
    return letters_ <=> o.letters_;
  }

 private:
  void push(Letter l) {
    if (!letters_.empty() && letters_.back() == -l)
      letters_.pop_back();
    else
      letters_.push_back(l);
  }

  std::vector<Letter> letters_;
};

inline Word::Word(std::span<const Letter> letters) {
  letters_.reserve(letters.size());
  for (Letter l : letters) {
    if (l == 0) throw std::invalid_argument("letter code 0 is not a generator");
    push(l);
  }
}

/// Maximal cancellation of adjacent inverse pairs.
inline Word free_reduce(std::span<const Letter> letters) { return Word(letters); }

inline Word commutator(const Word& u, const Word& v) { return u * v * u.inverse() * v.inverse(); }

struct CyclicReduction {
  Word core;
  Word conjugator;  // input = conjugator * core * conjugator^-1
};

inline CyclicReduction cyclic_reduce(const Word& w) {
  std::size_t lo = 0;
  std::size_t hi = w.size();
  while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
    ++lo;
    --hi;
  }
  return {w.subword(lo, hi - lo), w.subword(0, lo)};
}

/// Cyclic rotation by k letters; for a cyclically reduced word the result is
/// again cyclically reduced.
inline Word rotate(const Word& w, std::size_t k) {
  if (w.empty()) return w;
  k %= w.size();
  std::vector<Letter> out(w.begin() + static_cast<std::ptrdiff_t>(k), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k));
  return Word(out);
}

class MissingImage : public std::out_of_range {
 public:
  explicit MissingImage(int g) : std::out_of_range("no image for generator " + std::to_string(g)), generator(g) {}
  int generator;
};

/// Homomorphic image of w under x_g -> images[g].
inline Word substitute(const Word& w, std::span<const Word> images) {
  Word out;
  for (Letter l : w) {
    auto g = static_cast<std::size_t>(generator_of(l));
    if (g >= images.size()) throw MissingImage(static_cast<int>(g));
    out *= (l > 0 ? images[g] : images[g].inverse());
  }
  return out;
}

inline Word substitute(const Word& w, const std::map<int, Word>& images) {
  Word out;
  for (Letter l : w) {
    auto it = images.find(generator_of(l));
    if (it == images.end()) throw MissingImage(generator_of(l));
    out *= (l > 0 ? it->second : it->second.inverse());
  }
  return out;
}

enum class Decision { yes, no, undetermined };

struct CommutatorWitness {
  Word u;
  Word v;
  Word conjugator;  // w = conjugator * [u,v] * conjugator^-1
};

struct CommutatorSearch {
  Decision decision = Decision::no;
  std::optional<CommutatorWitness> witness;
};

/// Decides whether w is a commutator in the free group.
///
/// Works on the cyclic reduction and looks for a rotation of the literal form
/// X Y X^-1 Y^-1 first, then X Y Z X^-1 Y^-1 Z^-1 (which equals [XY, ZX^-1]).
/// Every cyclically reduced commutator has such a rotation, so exhausting all
/// splits proves "no". Cores longer than length_cap are left undetermined.
inline CommutatorSearch is_commutator(const Word& w, std::size_t length_cap = 64) {
  auto [core, conj] = cyclic_reduce(w);
  const std::size_t n = core.size();
  if (n == 0) return {Decision::yes, CommutatorWitness{Word{}, Word{}, Word{}}};
  if (n > length_cap) return {Decision::undetermined, std::nullopt};
  if (n % 2 != 0) return {Decision::no, std::nullopt};
  for (int g = 0; g <= core.max_generator(); ++g)
    if (core.exponent_sum(g) != 0) return {Decision::no, std::nullopt};

  const std::size_t half = n / 2;
  // r[pos .. pos+len) spells the inverse of r[start .. start+len)
  auto inverse_at = [](const std::vector<Letter>& r, std::size_t start, std::size_t len, std::size_t pos) {
    for (std::size_t i = 0; i < len; ++i)
      if (r[pos + i] != -r[start + len - 1 - i]) return false;
    return true;
  };
  auto witness_for = [&](std::size_t k, Word u, Word v) {
    return CommutatorSearch{Decision::yes, CommutatorWitness{std::move(u), std::move(v), conj * core.subword(0, k)}};
  };

  for (std::size_t k = 0; k < n; ++k) {
    Word r = rotate(core, k);
    const auto& L = r.letters();
    for (std::size_t a = 1; a < half; ++a) {
      std::size_t b = half - a;
      if (inverse_at(L, 0, a, a + b) && inverse_at(L, a, b, 2 * a + b))
        return witness_for(k, r.subword(0, a), r.subword(a, b));
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    Word r = rotate(core, k);
    const auto& L = r.letters();
    for (std::size_t a = 1; a + 2 <= half; ++a) {
      for (std::size_t b = 1; a + b + 1 <= half; ++b) {
        std::size_t c = half - a - b;
        std::size_t s = a + b + c;
        if (inverse_at(L, 0, a, s) && inverse_at(L, a, b, s + a) && inverse_at(L, a + b, c, s + a + b))
          return witness_for(k, r.subword(0, a + b), r.subword(a + b, c + a));
      }
    }
  }
  return {Decision::no, std::nullopt};
}

struct ProperPower {
  Word root;
  int exponent = 1;
  Word conjugator;  // w = conjugator * root^exponent * conjugator^-1
};

/// Root and maximal exponent >= 2 of the cyclic reduction of w, if any.
inline std::optional<ProperPower> is_proper_power(const Word& w) {
  auto [core, conj] = cyclic_reduce(w);
  const std::size_t n = core.size();
  for (std::size_t p = 1; p <= n / 2; ++p) {
    if (n % p != 0) continue;
    if (rotate(core, p) == core) return ProperPower{core.subword(0, p), static_cast<int>(n / p), conj};
  }
  return std::nullopt;
}

/// True iff w is a cyclic conjugate of [a,b] or [b,a] for its two generators.
inline bool zxz_relator_check(const Word& w) {
  std::vector<int> gens;
  for (Letter l : w)
    if (std::find(gens.begin(), gens.end(), generator_of(l)) == gens.end()) gens.push_back(generator_of(l));
  if (gens.size() != 2) throw std::invalid_argument("zxz_relator_check needs a word in exactly two generators");
  Word core = cyclic_reduce(w).core;
  if (core.size() != 4) return false;
  return core[2] == -core[0] && core[3] == -core[1] && generator_of(core[0]) != generator_of(core[1]);
}

}  // namespace largeness
