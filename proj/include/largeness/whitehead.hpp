#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "largeness/word.hpp"

namespace largeness {

/// An automorphism of F_r given by generator images, together with its inverse.
struct TrackedAutomorphism {
  std::vector<Word> images;
  std::vector<Word> inverse_images;

  static TrackedAutomorphism identity(int rank) {
    TrackedAutomorphism a;
    for (int g = 0; g < rank; ++g) {
      a.images.push_back(Word::generator(g));
      a.inverse_images.push_back(Word::generator(g));
    }
    return a;
  }

  Word apply(const Word& w) const { return substitute(w, images); }
  Word apply_inverse(const Word& w) const { return substitute(w, inverse_images); }
};

/// The Whitehead automorphisms of the second kind: a fixed letter a, and every
/// other generator y sent to one of y, y a, a^-1 y, a^-1 y a. Identity omitted.
inline std::vector<TrackedAutomorphism> whitehead_automorphisms(int rank) {
  std::vector<TrackedAutomorphism> out;
  for (int m = 0; m < rank; ++m)
    for (int sign : {1, -1}) {
      const Word a = Word::generator(m, sign);
      std::size_t choices = 1;
      for (int g = 1; g < rank; ++g) choices *= 4;
      for (std::size_t code = 1; code < choices; ++code) {
        TrackedAutomorphism t = TrackedAutomorphism::identity(rank);
        std::size_t c = code;
        for (int g = 0; g < rank; ++g) {
          if (g == m) continue;
          const Word y = Word::generator(g);
          switch (c % 4) {
            case 1:
              t.images[static_cast<std::size_t>(g)] = y * a;
              t.inverse_images[static_cast<std::size_t>(g)] = y * a.inverse();
              break;
            case 2:
              t.images[static_cast<std::size_t>(g)] = a.inverse() * y;
              t.inverse_images[static_cast<std::size_t>(g)] = a * y;
              break;
            case 3:
              t.images[static_cast<std::size_t>(g)] = a.inverse() * y * a;
              t.inverse_images[static_cast<std::size_t>(g)] = a * y * a.inverse();
              break;
            default:
              break;
          }
          c /= 4;
        }
        out.push_back(std::move(t));
      }
    }
  return out;
}

struct PrimitivityResult {
  bool primitive = false;
  bool budget_exhausted = false;
  std::size_t applications = 0;
  /// alpha(w) = c x_m^{+-1} c^-1 for some c when primitive.
  TrackedAutomorphism alpha;
};

/// Whitehead peak reduction: lower the cyclic length of w by single Whitehead
/// automorphisms until it is 1 (w primitive) or no move helps (not
/// primitive). Stops after `budget` automorphism applications.
inline PrimitivityResult primitivity_search(const Word& w, int rank, std::size_t budget = 10000) {
  PrimitivityResult r;
  r.alpha = TrackedAutomorphism::identity(rank);
  const auto moves = whitehead_automorphisms(rank);
  Word cur = w;
  while (true) {
    std::size_t len = cyclic_reduce(cur).core.size();
    if (len <= 1) {
      r.primitive = len == 1;
      return r;
    }
    bool improved = false;
    for (const auto& m : moves) {
      if (++r.applications > budget) {
        r.budget_exhausted = true;
        return r;
      }
      Word next = m.apply(cur);
      if (cyclic_reduce(next).core.size() >= len) continue;
      cur = std::move(next);
      for (auto& x : r.alpha.images) x = m.apply(x);
      std::vector<Word> inv;
      for (const auto& x : m.inverse_images) inv.push_back(r.alpha.apply_inverse(x));
      r.alpha.inverse_images = std::move(inv);
      improved = true;
      break;
    }
    if (!improved) return r;
  }
}

}  // namespace largeness
