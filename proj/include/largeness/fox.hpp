#pragma once

#include <map>
#include <utility>

#include "largeness/integer.hpp"
#include "largeness/word.hpp"

namespace largeness {

/// Element of the integral group ring of a free group.
class GroupRingElt {
 public:
  GroupRingElt() = default;
  static GroupRingElt of(const Word& w, const Integer& c = 1) {
    GroupRingElt e;
    e.add_term(w, c);
    return e;
  }

  const std::map<Word, Integer>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Word& w, const Integer& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(w, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  GroupRingElt& operator+=(const GroupRingElt& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  GroupRingElt& operator-=(const GroupRingElt& o) {
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  friend GroupRingElt operator+(GroupRingElt a, const GroupRingElt& b) { return a += b; }
  friend GroupRingElt operator-(GroupRingElt a, const GroupRingElt& b) { return a -= b; }
  friend GroupRingElt operator*(const GroupRingElt& a, const GroupRingElt& b) {
    GroupRingElt r;
    for (const auto& [w1, c1] : a.terms_)
      for (const auto& [w2, c2] : b.terms_) r.add_term(w1 * w2, c1 * c2);
    return r;
  }

  bool operator==(const GroupRingElt&) const = default;

 private:
  std::map<Word, Integer> terms_;
};

/// Left Fox derivative d r / d x_gen, using d(uv) = du + u dv.
inline GroupRingElt fox_derivative(const Word& r, int gen) {
  GroupRingElt d;
  Word prefix;
  for (Letter l : r) {
    if (generator_of(l) == gen) {
      if (l > 0) {
        d.add_term(prefix, 1);
        prefix *= Word{l};
      } else {
        prefix *= Word{l};
        d.add_term(prefix, -1);
      }
    } else {
      prefix *= Word{l};
    }
  }
  return d;
}

}  // namespace largeness
