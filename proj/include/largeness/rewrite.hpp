#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "largeness/coset_table.hpp"
#include "largeness/presentation.hpp"
#include "largeness/word.hpp"

namespace largeness {

/// Breadth-first spanning tree of the coset graph using positive generator
/// edges in generator order. tree[c] = (parent coset, generator), root has
/// parent -1; rep[c] is the transversal word.
struct SchreierTransversal {
  std::vector<std::pair<int, int>> tree;
  std::vector<Word> rep;
};

inline SchreierTransversal schreier_transversal(const CosetTable& t) {
  if (!is_complete(t)) throw std::invalid_argument("Reidemeister-Schreier needs a complete coset table");
  SchreierTransversal s{std::vector<std::pair<int, int>>(static_cast<std::size_t>(t.degree), {-1, -1}),
                        std::vector<Word>(static_cast<std::size_t>(t.degree))};
  std::vector<bool> seen(static_cast<std::size_t>(t.degree));
  seen[0] = true;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    int c = queue.front();
    queue.pop_front();
    for (int g = 0; g < t.rank(); ++g) {
      int d = t.action[static_cast<std::size_t>(g)][static_cast<std::size_t>(c)];
      if (seen[static_cast<std::size_t>(d)]) continue;
      seen[static_cast<std::size_t>(d)] = true;
      s.tree[static_cast<std::size_t>(d)] = {c, g};
      s.rep[static_cast<std::size_t>(d)] = s.rep[static_cast<std::size_t>(c)] * Word::generator(g);
      queue.push_back(d);
    }
  }
  return s;
}

/// Subgroup presentation together with the bookkeeping that relates it to G.
struct Rewriting {
  Presentation presentation;
  SchreierTransversal transversal;
  /// schreier_index[c][g]: subgroup generator for edge c --x_g-->, or -1 on a tree edge.
  std::vector<std::vector<int>> schreier_index;
  /// Each subgroup generator as a word in G.
  std::vector<Word> in_parent;
};

/// Express an element of the subgroup (given as a word of G that fixes coset 0)
/// in the Schreier generators.
inline Word rewrite_word(const CosetTable& t, const Rewriting& rw, const Word& w, int start = 0) {
  auto inv = inverse_action(t);
  std::vector<Letter> out;
  int c = start;
  for (Letter l : w) {
    auto g = static_cast<std::size_t>(generator_of(l));
    if (sign_of(l) > 0) {
      int s = rw.schreier_index[static_cast<std::size_t>(c)][g];
      if (s >= 0) out.push_back(make_letter(s, 1));
      c = t.action[g][static_cast<std::size_t>(c)];
    } else {
      c = inv[g][static_cast<std::size_t>(c)];
      int s = rw.schreier_index[static_cast<std::size_t>(c)][g];
      if (s >= 0) out.push_back(make_letter(s, -1));
    }
  }
  return Word(out);
}

/// Reidemeister-Schreier presentation of the stabilizer of coset 0: one
/// generator per non-tree edge, (n-1)i + 1 in all, and one relator per
/// (coset, relator) pair, m i in all.
inline Rewriting reidemeister_schreier(const Presentation& p, const CosetTable& t) {
  if (t.rank() != p.rank()) throw std::invalid_argument("coset table and presentation differ in rank");
  Rewriting rw;
  rw.transversal = schreier_transversal(t);
  const auto n = static_cast<std::size_t>(p.rank());
  rw.schreier_index.assign(static_cast<std::size_t>(t.degree), std::vector<int>(n, -1));
  std::vector<std::string> names;
  for (int c = 0; c < t.degree; ++c)
    for (std::size_t g = 0; g < n; ++g) {
      int d = t.action[g][static_cast<std::size_t>(c)];
      if (rw.transversal.tree[static_cast<std::size_t>(d)] == std::pair<int, int>{c, static_cast<int>(g)}) continue;
      rw.schreier_index[static_cast<std::size_t>(c)][g] = static_cast<int>(names.size());
      names.push_back(c == 0 && d == 0 ? p.generators[g] : p.generators[g] + "_" + std::to_string(c));
      rw.in_parent.push_back(rw.transversal.rep[static_cast<std::size_t>(c)] * Word::generator(static_cast<int>(g)) *
                             rw.transversal.rep[static_cast<std::size_t>(d)].inverse());
    }
  if (std::set<std::string>(names.begin(), names.end()).size() != names.size())
    names = numbered_names("s", static_cast<int>(names.size()), 0);
  rw.presentation.generators = std::move(names);
  for (int c = 0; c < t.degree; ++c)
    for (const auto& r : p.relators) rw.presentation.relators.push_back(rewrite_word(t, rw, r, c));
  return rw;
}

/// Tietze simplification: cyclically reduce, drop empty relators, and
/// eliminate a generator occurring exactly once in some relator whenever that
/// does not lengthen the presentation. Deterministic.
inline Presentation simplify(Presentation p) {
  while (true) {
    std::vector<Word> kept;
    for (const auto& r : p.relators) {
      Word c = cyclic_reduce(r).core;
      if (!c.empty()) kept.push_back(std::move(c));
    }
    p.relators = std::move(kept);

    // candidates ordered by (relator length, relator index, generator)
    std::vector<std::size_t> order(p.relators.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p.relators[a].size() < p.relators[b].size(); });

    bool eliminated = false;
    for (std::size_t ri : order) {
      const Word& r = p.relators[ri];
      std::set<int> gens;
      for (Letter l : r) gens.insert(generator_of(l));
      for (int g : gens) {
        if (r.occurrences(g) != 1) continue;
        std::size_t uses = 0;
        for (std::size_t j = 0; j < p.relators.size(); ++j)
          if (j != ri) uses += p.relators[j].occurrences(g);
        // new length is total - |r| + uses (|r| - 2)
        if (r.size() >= 2 && uses * (r.size() - 2) > r.size()) continue;
        // r = u g^e v  =>  g = (v u)^-e
        std::size_t pos = 0;
        while (generator_of(r[pos]) != g) ++pos;
        Word rest = r.subword(pos + 1, r.size() - pos - 1) * r.subword(0, pos);
        Word value = sign_of(r[pos]) > 0 ? rest.inverse() : rest;
        std::map<int, Word> images;
        for (int h = 0; h < p.rank(); ++h) {
          if (h == g) continue;
          images[h] = Word::generator(h < g ? h : h - 1);
        }
        Word value_renamed = substitute(value, images);
        images[g] = value_renamed;
        Presentation q;
        for (int h = 0; h < p.rank(); ++h)
          if (h != g) q.generators.push_back(p.generators[static_cast<std::size_t>(h)]);
        for (std::size_t j = 0; j < p.relators.size(); ++j)
          if (j != ri) q.relators.push_back(substitute(p.relators[j], images));
        p = std::move(q);
        eliminated = true;
        break;
      }
      if (eliminated) break;
    }
    if (!eliminated) return p;
  }
}

}  // namespace largeness
