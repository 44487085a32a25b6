#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "largeness/coset_table.hpp"
#include "largeness/presentation.hpp"
#include "largeness/stallings.hpp"
#include "largeness/whitehead.hpp"
#include "largeness/word.hpp"

namespace largeness {

inline std::vector<std::string> default_free_names(int rank) {
  static const char* small[] = {"x", "y", "z"};
  if (rank <= 3) return std::vector<std::string>(small, small + rank);
  return numbered_names("x", rank);
}

/// Endomorphism of F_n, x_g -> images[g].
struct Endomorphism {
  int rank = 0;
  std::vector<Word> images;
  std::vector<std::string> names;  // generator names; empty means x, y, z / x1, x2, ...

  static Endomorphism identity(int rank) {
    Endomorphism e{rank, {}, {}};
    for (int g = 0; g < rank; ++g) e.images.push_back(Word::generator(g));
    return e;
  }

  std::vector<std::string> generator_names() const { return names.empty() ? default_free_names(rank) : names; }

  void validate() const {
    if (static_cast<int>(images.size()) != rank) throw std::invalid_argument("endomorphism needs one image per generator");
    for (const auto& w : images)
      if (w.max_generator() >= rank) throw std::invalid_argument("image uses a generator outside the free group");
    if (!names.empty() && static_cast<int>(names.size()) != rank) throw std::invalid_argument("wrong number of names");
  }

  bool operator==(const Endomorphism& o) const { return rank == o.rank && images == o.images; }
};

inline Word endo_apply(const Endomorphism& e, Word w, long long power = 1) {
  for (long long k = 0; k < power; ++k) w = substitute(w, e.images);
  return w;
}

/// a after b: x -> a(b(x)).
inline Endomorphism endo_compose(const Endomorphism& a, const Endomorphism& b) {
  Endomorphism c{b.rank, {}, b.names};
  for (const auto& w : b.images) c.images.push_back(endo_apply(a, w));
  return c;
}

inline Endomorphism endo_power(const Endomorphism& e, long long j) {
  Endomorphism out = Endomorphism::identity(e.rank);
  out.names = e.names;
  for (long long k = 0; k < j; ++k) out = endo_compose(e, out);
  return out;
}

/// The images generate a subgroup of rank n exactly when theta is injective
/// (free groups of finite rank are Hopfian).
inline bool endo_is_injective(const Endomorphism& e) {
  for (const auto& w : e.images)
    if (w.empty()) return false;
  return sg_rank(fold(std::span<const Word>(e.images))) == e.rank;
}

/// The standard presentation < x_1..x_n, t | t x_i t^-1 theta(x_i)^-1 >.
inline Presentation mapping_torus(const Endomorphism& e, const std::string& stable = "t") {
  Presentation p;
  p.generators = e.generator_names();
  std::string s = stable;
  while (std::find(p.generators.begin(), p.generators.end(), s) != p.generators.end()) s += "_";
  p.generators.push_back(s);
  const Word t = Word::generator(e.rank);
  for (int g = 0; g < e.rank; ++g)
    p.relators.push_back(t * Word::generator(g) * t.inverse() * e.images[static_cast<std::size_t>(g)].inverse());
  return p;
}

/// Index-j subgroup <F_n, s = t^j>, itself the mapping torus of theta^j.
inline Presentation cyclic_cover(const Endomorphism& e, long long j) {
  if (j < 1) throw std::invalid_argument("cyclic cover needs j >= 1");
  if (j == 1) return mapping_torus(e);
  return mapping_torus(endo_power(e, j), "s");
}

struct NormalForm {
  long long p = 0;
  Word gamma;
  long long q = 0;
  bool operator==(const NormalForm&) const = default;
};

/// g = t^-p gamma t^q, pushing t letters outwards left to right with
/// t x t^-1 = theta(x). Generator n of g is t.
inline NormalForm normal_form(const Endomorphism& e, const Word& g) {
  if (!endo_is_injective(e)) throw std::invalid_argument("normal form needs an injective endomorphism");
  NormalForm nf;
  for (Letter l : g) {
    int x = generator_of(l);
    if (x == e.rank) {
      if (sign_of(l) > 0) {
        ++nf.q;
      } else if (nf.q > 0) {
        --nf.q;
      } else {
        nf.gamma = endo_apply(e, nf.gamma);
        ++nf.p;
      }
    } else if (x < e.rank) {
      nf.gamma *= endo_apply(e, Word{l}, nf.q);
    } else {
      throw std::invalid_argument("word uses a generator outside the mapping torus");
    }
  }
  return nf;
}

/// Word problem in the ascending HNN extension: t^-p gamma t^q is trivial iff
/// p = q and gamma = 1.
inline bool torus_equal(const Endomorphism& e, const Word& a, const Word& b) {
  NormalForm nf = normal_form(e, a * b.inverse());
  return nf.p == nf.q && nf.gamma.empty();
}

/// theta^-1(F) for a finite-index F: the stabilizer of the base vertex when
/// x acts on the vertices of F's covering graph by reading theta(x).
inline StallingsGraph preimage_subgroup(const Endomorphism& e, const StallingsGraph& F) {
  if (!is_covering(F, e.rank)) throw std::invalid_argument("preimage needs a finite-index subgroup");
  std::vector<std::vector<int>> act(static_cast<std::size_t>(e.rank), std::vector<int>(static_cast<std::size_t>(F.vertices)));
  for (int g = 0; g < e.rank; ++g)
    for (int v = 0; v < F.vertices; ++v)
      act[static_cast<std::size_t>(g)][static_cast<std::size_t>(v)] = *sg_trace(F, e.images[static_cast<std::size_t>(g)], v);
  std::set<int> orbit{0};
  std::deque<int> queue{0};
  std::vector<Edge> edges;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int g = 0; g < e.rank; ++g) {
      int u = act[static_cast<std::size_t>(g)][static_cast<std::size_t>(v)];
      edges.push_back({v, g, u});
      if (orbit.insert(u).second) queue.push_back(u);
      // x_g permutes the vertices, so its inverse is reached by iterating
      for (int w = 0; w < F.vertices; ++w)
        if (act[static_cast<std::size_t>(g)][static_cast<std::size_t>(w)] == v && orbit.insert(w).second) queue.push_back(w);
    }
  }
  StallingsGraph out = detail::canonical_numbering(0, edges, e.rank);
  if (out.vertices > F.vertices) throw std::logic_error("preimage index exceeds the index of F");
  return out;
}

/// Vertex permutations of a covering graph induced by theta^j(x_g), built
/// letter by letter so the (possibly huge) words theta^j(x_g) are never formed.
inline std::vector<std::vector<int>> endo_power_action(const Endomorphism& e, long long j, const StallingsGraph& F) {
  const auto V = static_cast<std::size_t>(F.vertices);
  std::vector<std::vector<int>> act(static_cast<std::size_t>(e.rank), std::vector<int>(V)), inv = act;
  for (const auto& ed : F.edges) {
    act[static_cast<std::size_t>(ed.label)][static_cast<std::size_t>(ed.from)] = ed.to;
    inv[static_cast<std::size_t>(ed.label)][static_cast<std::size_t>(ed.to)] = ed.from;
  }
  for (long long k = 0; k < j; ++k) {
    std::vector<std::vector<int>> next(static_cast<std::size_t>(e.rank), std::vector<int>(V)), next_inv = next;
    for (int g = 0; g < e.rank; ++g)
      for (std::size_t v = 0; v < V; ++v) {
        int c = static_cast<int>(v);
        for (Letter l : e.images[static_cast<std::size_t>(g)])
          c = (sign_of(l) > 0 ? act : inv)[static_cast<std::size_t>(generator_of(l))][static_cast<std::size_t>(c)];
        next[static_cast<std::size_t>(g)][v] = c;
        next_inv[static_cast<std::size_t>(g)][static_cast<std::size_t>(c)] = static_cast<int>(v);
      }
    act = std::move(next);
    inv = std::move(next_inv);
  }
  return act;
}

/// theta^j(F) <= F, checked on a free basis of the finite-index subgroup F.
inline bool endo_power_preserves(const Endomorphism& e, long long j, const StallingsGraph& F) {
  if (!is_covering(F, e.rank)) return false;
  auto act = endo_power_action(e, j, F);
  std::vector<std::vector<int>> inv(act.size(), std::vector<int>(static_cast<std::size_t>(F.vertices)));
  for (std::size_t g = 0; g < act.size(); ++g)
    for (int v = 0; v < F.vertices; ++v) inv[g][static_cast<std::size_t>(act[g][static_cast<std::size_t>(v)])] = v;
  for (const Word& b : sg_index_and_basis(F, e.rank).basis) {
    int c = 0;
    for (Letter l : b) c = (sign_of(l) > 0 ? act : inv)[static_cast<std::size_t>(generator_of(l))][static_cast<std::size_t>(c)];
    if (c != 0) return false;
  }
  return true;
}

struct Pullback {
  StallingsGraph delta;
  long long j = 1;
  std::vector<long long> indices;  // index of each F_k visited
};

/// Iterate F_{k+1} = theta^-1(F_k) until some F_a reappears as F_b; then
/// Delta = F_a and theta^(b-a)(Delta) <= Delta, which is checked on a basis.
inline Pullback stable_pullback(const Endomorphism& e, const StallingsGraph& F, int max_iter = 1000) {
  if (!endo_is_injective(e)) throw std::invalid_argument("pullback needs an injective endomorphism");
  std::vector<StallingsGraph> seen{detail::canonical_numbering(0, F.edges, e.rank)};
  Pullback r;
  r.indices.push_back(seen.back().vertices);
  for (int it = 0; it < max_iter; ++it) {
    StallingsGraph next = preimage_subgroup(e, seen.back());
    if (next.vertices > seen.back().vertices) throw std::logic_error("pullback index increased");
    r.indices.push_back(next.vertices);
    for (std::size_t a = 0; a < seen.size(); ++a)
      if (seen[a] == next) {
        r.delta = next;
        r.j = static_cast<long long>(seen.size() - a);
        if (!endo_power_preserves(e, r.j, r.delta)) throw std::logic_error("pullback is not invariant");
        return r;
      }
    seen.push_back(std::move(next));
  }
  throw BoundExceeded("pullback did not repeat within " + std::to_string(max_iter) + " steps");
}

/// theta^i(w) = v w^k v^-1.
struct PeriodicWitness {
  Word w;
  long long i = 1;
  Word v;
  long long k = 1;
};

inline bool witness_verify(const Endomorphism& e, const PeriodicWitness& wit) {
  if (wit.w.empty() || wit.i < 1 || wit.k == 0) return false;
  if (wit.w.max_generator() >= e.rank || wit.v.max_generator() >= e.rank) return false;
  return endo_apply(e, wit.w, wit.i) == wit.v * wit.w.pow(wit.k) * wit.v.inverse();
}

/// Parses lines `name -> word`, one per generator in order; blank lines and
/// `#` comments are skipped. Words may use any generator named on a left side.
inline Endomorphism parse_endomorphism(std::string_view text) {
  struct Line {
    std::size_t number;
    std::string lhs, rhs;
  };
  std::vector<Line> lines;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto arrow = raw.find("->");
    if (arrow == std::string::npos) throw ParseError("expected 'name -> word'", number, 1);
    auto trim = [](std::string s) {
      auto a = s.find_first_not_of(" \t\r");
      auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    lines.push_back({number, trim(raw.substr(0, arrow)), trim(raw.substr(arrow + 2))});
  }
  Endomorphism e;
  for (const auto& l : lines) {
    bool ok = !l.lhs.empty() && std::isalpha(static_cast<unsigned char>(l.lhs[0]));
    for (char c : l.lhs) ok = ok && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
    if (!ok) throw ParseError("bad generator name '" + l.lhs + "'", l.number, 1);
    if (std::find(e.names.begin(), e.names.end(), l.lhs) != e.names.end())
      throw ParseError("generator '" + l.lhs + "' defined twice", l.number, 1);
    e.names.push_back(l.lhs);
  }
  e.rank = static_cast<int>(e.names.size());
  if (e.rank == 0) throw ParseError("no generators", number, 1);
  for (const auto& l : lines) {
    try {
      e.images.push_back(l.rhs == "1" ? Word{} : parse_word(l.rhs, e.names));
    } catch (const ParseError& err) {
      throw ParseError(err.what(), l.number, err.column);
    }
  }
  return e;
}

/// A free basis of a subgroup Delta with a chosen first element, and the
/// rewriting of graph-basis coordinates into it.
struct DeltaBasis {
  StallingsGraph graph;  // with preferred tree set for the graph basis
  std::vector<Word> basis;
  TrackedAutomorphism to_new;  // graph-basis word -> chosen-basis word
  bool via_whitehead = false;
  std::size_t whitehead_applications = 0;

  /// An element of Delta as a word in the chosen basis.
  Word coordinates(const Word& x) const {
    auto c = sg_coordinates(graph, x);
    if (!c) throw std::invalid_argument("element is not in the subgroup");
    return to_new.apply(*c);
  }
};

/// Make w (an element of Delta) the first element of a free basis of Delta:
/// first by a spanning tree containing all but one edge of w's loop, and
/// otherwise by a bounded Whitehead primitivity search. nullopt if neither
/// succeeds.
inline std::optional<DeltaBasis> basis_with_element(const StallingsGraph& delta, int ambient_rank, const Word& w,
                                                    std::size_t whitehead_budget = 10000) {
  std::map<std::pair<int, int>, Edge> out, in;
  for (const auto& e : delta.edges) {
    out[{e.from, e.label}] = e;
    in[{e.to, e.label}] = e;
  }
  std::vector<std::pair<Edge, int>> walk;  // edge and direction
  int v = 0;
  for (Letter l : w) {
    auto& m = sign_of(l) > 0 ? out : in;
    auto it = m.find({v, generator_of(l)});
    if (it == m.end()) return std::nullopt;
    walk.push_back({it->second, sign_of(l)});
    v = sign_of(l) > 0 ? it->second.to : it->second.from;
  }
  if (v != 0 || walk.empty()) return std::nullopt;

  auto finish = [&](StallingsGraph g, std::size_t k_hint, bool whitehead, std::size_t apps,
                    TrackedAutomorphism to_new) -> std::optional<DeltaBasis> {
    DeltaBasis d;
    d.graph = std::move(g);
    d.via_whitehead = whitehead;
    d.whitehead_applications = apps;
    auto raw = sg_index_and_basis(d.graph, ambient_rank).basis;
    const int r = static_cast<int>(raw.size());
    // chosen basis element i = to_new^-1(x_i) in graph coordinates
    std::vector<Word> chosen;
    for (int i = 0; i < r; ++i) chosen.push_back(substitute(to_new.apply_inverse(Word::generator(i)), raw));
    // move element k_hint to the front
    TrackedAutomorphism perm = TrackedAutomorphism::identity(r);
    std::vector<int> pos(static_cast<std::size_t>(r));
    int next = 1;
    for (int i = 0; i < r; ++i) pos[static_cast<std::size_t>(i)] = i == static_cast<int>(k_hint) ? 0 : next++;
    for (int i = 0; i < r; ++i) {
      perm.images[static_cast<std::size_t>(i)] = Word::generator(pos[static_cast<std::size_t>(i)]);
      perm.inverse_images[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])] = Word::generator(i);
    }
    d.basis.assign(static_cast<std::size_t>(r), Word{});
    for (int i = 0; i < r; ++i) d.basis[static_cast<std::size_t>(pos[static_cast<std::size_t>(i)])] = chosen[static_cast<std::size_t>(i)];
    d.to_new.images.clear();
    d.to_new.inverse_images.clear();
    for (int i = 0; i < r; ++i) {
      d.to_new.images.push_back(perm.apply(to_new.images[static_cast<std::size_t>(i)]));
      d.to_new.inverse_images.push_back(to_new.apply_inverse(perm.inverse_images[static_cast<std::size_t>(i)]));
    }
    if (d.basis.empty() || d.basis[0] != w) return std::nullopt;
    return d;
  };

  // Tree route: an edge crossed once whose removal leaves the walk acyclic.
  std::map<Edge, int> crossings;
  for (const auto& [e, dir] : walk) ++crossings[e];
  for (std::size_t idx = walk.size(); idx-- > 0;) {
    const Edge closing = walk[idx].first;
    if (crossings[closing] != 1) continue;
    detail::Dsu dsu(delta.vertices);
    bool acyclic = true;
    std::vector<Edge> tree;
    for (const auto& [e, n] : crossings) {
      if (e == closing) continue;
      if (!dsu.unite(e.from, e.to)) {
        acyclic = false;
        break;
      }
      tree.push_back(e);
    }
    if (!acyclic) continue;
    StallingsGraph g = delta;
    g.preferred_tree = tree;
    g.inverted.clear();
    if (walk[idx].second < 0) g.inverted.push_back(closing);
    auto coords = sg_coordinates(g, w);
    if (!coords || coords->size() != 1) continue;
    const int r = sg_rank(g);
    return finish(std::move(g), static_cast<std::size_t>(generator_of((*coords)[0])), false, 0,
                  TrackedAutomorphism::identity(r));
  }

  // Whitehead route on the graph basis.
  StallingsGraph g = delta;
  g.preferred_tree.clear();
  g.inverted.clear();
  const int r = sg_rank(g);
  Word wc = *sg_coordinates(g, w);
  PrimitivityResult pr = primitivity_search(wc, r, whitehead_budget);
  if (!pr.primitive) return std::nullopt;
  // alpha(wc) = c x_m^eps c^-1; the basis conj(alpha^-1(x_i)) by alpha^-1(c)
  // contains wc^eps.
  Word image = pr.alpha.apply(wc);
  auto [core, c] = cyclic_reduce(image);
  const int m = generator_of(core[0]);
  const int eps = sign_of(core[0]);
  // to_new(u) = coordinates of u in the new basis: x_i -> c^-1 alpha(x_i) c,
  // with x_m inverted when eps < 0.
  std::vector<Word> flip;
  for (int h = 0; h < r; ++h) flip.push_back(Word::generator(h, h == m && eps < 0 ? -1 : 1));
  TrackedAutomorphism to_new;
  for (int i = 0; i < r; ++i) to_new.images.push_back(substitute(c.inverse() * pr.alpha.apply(Word::generator(i)) * c, flip));
  for (int i = 0; i < r; ++i) {
    Word x = i == m && eps < 0 ? Word::generator(i, -1) : Word::generator(i);
    to_new.inverse_images.push_back(pr.alpha.apply_inverse(c * x * c.inverse()));
  }
  return finish(std::move(g), static_cast<std::size_t>(m), true, pr.applications, std::move(to_new));
}

}  // namespace largeness
