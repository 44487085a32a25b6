#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <tuple>
#include <utility>
#include <vector>

#include "largeness/word.hpp"

namespace largeness {

struct Edge {
  int from = 0;
  int label = 0;  // generator index
  int to = 0;
  auto operator<=>(const Edge&) const = default;
};

/// Labelled graph representing a subgroup of a free group by its loops at
/// vertex 0. fold() returns folded core graphs with vertices numbered in
/// breadth-first order from the base and edges sorted.
struct StallingsGraph {
  int vertices = 1;
  std::vector<Edge> edges;
  /// Edges to put into the spanning tree first when reading off a basis.
  std::vector<Edge> preferred_tree;
  /// Non-tree edges whose basis element is reported inverted.
  std::vector<Edge> inverted;

  bool operator==(const StallingsGraph& o) const { return vertices == o.vertices && edges == o.edges; }
};

namespace detail {

struct Dsu {
  std::vector<int> parent;
  explicit Dsu(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    return true;
  }
};

/// Identify vertices until no vertex has two outgoing or two incoming edges
/// with the same label; duplicate edges disappear.
inline std::vector<Edge> fold_edges(int vertices, std::vector<Edge> edges, Dsu& dsu) {
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, int>, int> out, in;
    for (auto& e : edges) {
      e.from = dsu.find(e.from);
      e.to = dsu.find(e.to);
      auto [o, fresh_o] = out.try_emplace({e.from, e.label}, e.to);
      if (!fresh_o && dsu.find(o->second) != e.to) changed |= dsu.unite(o->second, e.to);
      auto [i, fresh_i] = in.try_emplace({e.to, e.label}, e.from);
      if (!fresh_i && dsu.find(i->second) != e.from) changed |= dsu.unite(i->second, e.from);
    }
    for (auto& e : edges) {
      e.from = dsu.find(e.from);
      e.to = dsu.find(e.to);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  }
  (void)vertices;
  return edges;
}

/// Renumber reachable vertices breadth-first from `base`, scanning outgoing
/// then incoming edges per label; drops anything unreachable.
inline StallingsGraph canonical_numbering(int base, const std::vector<Edge>& edges, int rank) {
  std::map<std::pair<int, int>, int> out, in;
  for (const auto& e : edges) {
    out[{e.from, e.label}] = e.to;
    in[{e.to, e.label}] = e.from;
  }
  std::map<int, int> label{{base, 0}};
  std::vector<int> order{base};
  for (std::size_t k = 0; k < order.size(); ++k)
    for (int g = 0; g < rank; ++g)
      for (auto* m : {&out, &in}) {
        auto it = m->find({order[k], g});
        if (it == m->end() || label.count(it->second)) continue;
        label[it->second] = static_cast<int>(order.size());
        order.push_back(it->second);
      }
  StallingsGraph g;
  g.vertices = static_cast<int>(order.size());
  for (const auto& e : edges)
    if (label.count(e.from) && label.count(e.to)) g.edges.push_back({label[e.from], e.label, label[e.to]});
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

inline int edge_rank(const std::vector<Edge>& edges) {
  int r = 0;
  for (const auto& e : edges) r = std::max(r, e.label + 1);
  return r;
}

}  // namespace detail

/// Folded core graph of the subgroup generated by `generators`.
inline StallingsGraph fold(std::span<const Word> generators) {
  std::vector<Edge> edges;
  int vertices = 1;
  for (const auto& w : generators) {
    if (w.empty()) continue;
    int prev = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      int next = i + 1 == w.size() ? 0 : vertices++;
      Letter l = w[i];
      if (sign_of(l) > 0)
        edges.push_back({prev, generator_of(l), next});
      else
        edges.push_back({next, generator_of(l), prev});
      prev = next;
    }
  }
  detail::Dsu dsu(vertices);
  edges = detail::fold_edges(vertices, std::move(edges), dsu);

  // Prune hanging trees away from the base.
  bool pruned = true;
  while (pruned) {
    pruned = false;
    std::map<int, int> degree;
    for (const auto& e : edges) {
      ++degree[e.from];
      ++degree[e.to];
    }
    std::vector<Edge> kept;
    for (const auto& e : edges) {
      bool leaf_from = e.from != 0 && degree[e.from] == 1;
      bool leaf_to = e.to != 0 && degree[e.to] == 1;
      if (leaf_from || leaf_to)
        pruned = true;
      else
        kept.push_back(e);
    }
    edges = std::move(kept);
  }
  return detail::canonical_numbering(0, edges, detail::edge_rank(edges));
}

inline StallingsGraph fold(std::initializer_list<Word> generators) {
  return fold(std::span<const Word>(generators.begin(), generators.size()));
}

/// Vertex reached by reading w from `start`, or nullopt if the path leaves the graph.
inline std::optional<int> sg_trace(const StallingsGraph& g, const Word& w, int start = 0) {
  std::map<std::pair<int, int>, int> out, in;
  for (const auto& e : g.edges) {
    out[{e.from, e.label}] = e.to;
    in[{e.to, e.label}] = e.from;
  }
  int v = start;
  for (Letter l : w) {
    auto& m = sign_of(l) > 0 ? out : in;
    auto it = m.find({v, generator_of(l)});
    if (it == m.end()) return std::nullopt;
    v = it->second;
  }
  return v;
}

inline bool sg_membership(const StallingsGraph& g, const Word& w) { return sg_trace(g, w) == 0; }

/// Every vertex has an incoming and an outgoing edge for each of the
/// `ambient_rank` labels.
inline bool is_covering(const StallingsGraph& g, int ambient_rank) {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(g.vertices), std::vector<int>(static_cast<std::size_t>(ambient_rank)));
  auto in = out;
  for (const auto& e : g.edges) {
    if (e.label >= ambient_rank) return false;
    ++out[static_cast<std::size_t>(e.from)][static_cast<std::size_t>(e.label)];
    ++in[static_cast<std::size_t>(e.to)][static_cast<std::size_t>(e.label)];
  }
  for (int v = 0; v < g.vertices; ++v)
    for (int l = 0; l < ambient_rank; ++l)
      if (out[static_cast<std::size_t>(v)][static_cast<std::size_t>(l)] != 1 ||
          in[static_cast<std::size_t>(v)][static_cast<std::size_t>(l)] != 1)
        return false;
  return true;
}

struct IndexAndBasis {
  std::optional<long long> index;  // nullopt: infinite
  std::vector<Word> basis;
};

namespace detail {

struct SpanningTree {
  std::vector<Word> path;            // tree path from the base to each vertex
  std::vector<int> basis_of_edge;    // index into the basis, or -1 for tree edges
};

/// Spanning tree with the preferred edges first, then breadth-first.
inline SpanningTree spanning_tree(const StallingsGraph& g) {
  std::vector<std::optional<Word>> path(static_cast<std::size_t>(g.vertices));
  path[0] = Word{};
  std::vector<bool> in_tree(g.edges.size());
  auto edge_index = [&](const Edge& e) {
    auto it = std::lower_bound(g.edges.begin(), g.edges.end(), e);
    if (it == g.edges.end() || *it != e) throw std::invalid_argument("preferred tree edge is not in the graph");
    return static_cast<std::size_t>(it - g.edges.begin());
  };
  // Preferred edges, attached as soon as one endpoint is reached.
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& e : g.preferred_tree) {
      std::size_t k = edge_index(e);
      if (in_tree[k]) continue;
      auto& pf = path[static_cast<std::size_t>(e.from)];
      auto& pt = path[static_cast<std::size_t>(e.to)];
      if (pf && !pt) {
        pt = *pf * Word::generator(e.label);
      } else if (pt && !pf) {
        pf = *pt * Word::generator(e.label, -1);
      } else {
        continue;
      }
      in_tree[k] = true;
      grew = true;
    }
  }
  std::deque<int> queue;
  for (int v = 0; v < g.vertices; ++v)
    if (path[static_cast<std::size_t>(v)]) queue.push_back(v);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
      const Edge& e = g.edges[k];
      if (e.from == v && !path[static_cast<std::size_t>(e.to)]) {
        path[static_cast<std::size_t>(e.to)] = *path[static_cast<std::size_t>(v)] * Word::generator(e.label);
        in_tree[k] = true;
        queue.push_back(e.to);
      } else if (e.to == v && !path[static_cast<std::size_t>(e.from)]) {
        path[static_cast<std::size_t>(e.from)] = *path[static_cast<std::size_t>(v)] * Word::generator(e.label, -1);
        in_tree[k] = true;
        queue.push_back(e.from);
      }
    }
  }
  SpanningTree t;
  for (auto& p : path) {
    if (!p) throw std::invalid_argument("subgroup graph is not connected");
    t.path.push_back(std::move(*p));
  }
  int next = 0;
  for (std::size_t k = 0; k < g.edges.size(); ++k) t.basis_of_edge.push_back(in_tree[k] ? -1 : next++);
  return t;
}

}  // namespace detail

/// Free basis from a spanning tree (preferred edges first, then breadth-first)
/// with one element per remaining edge, in edge order; index is the vertex
/// count for a covering graph and infinite otherwise.
inline IndexAndBasis sg_index_and_basis(const StallingsGraph& g, int ambient_rank) {
  IndexAndBasis r;
  if (is_covering(g, ambient_rank)) r.index = g.vertices;
  detail::SpanningTree t = detail::spanning_tree(g);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    if (t.basis_of_edge[k] < 0) continue;
    const Edge& e = g.edges[k];
    Word b = t.path[static_cast<std::size_t>(e.from)] * Word::generator(e.label) *
             t.path[static_cast<std::size_t>(e.to)].inverse();
    bool flip = std::find(g.inverted.begin(), g.inverted.end(), e) != g.inverted.end();
    r.basis.push_back(flip ? b.inverse() : b);
  }
  return r;
}

/// An element of the subgroup written in the basis of sg_index_and_basis
/// (letter i stands for basis element i); nullopt if w is not in the subgroup.
inline std::optional<Word> sg_coordinates(const StallingsGraph& g, const Word& w) {
  detail::SpanningTree t = detail::spanning_tree(g);
  std::map<std::pair<int, int>, std::size_t> out, in;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    out[{g.edges[k].from, g.edges[k].label}] = k;
    in[{g.edges[k].to, g.edges[k].label}] = k;
  }
  std::vector<Letter> letters;
  int v = 0;
  for (Letter l : w) {
    auto& m = sign_of(l) > 0 ? out : in;
    auto it = m.find({v, generator_of(l)});
    if (it == m.end()) return std::nullopt;
    const Edge& e = g.edges[it->second];
    v = sign_of(l) > 0 ? e.to : e.from;
    int b = t.basis_of_edge[it->second];
    if (b < 0) continue;
    bool flip = std::find(g.inverted.begin(), g.inverted.end(), e) != g.inverted.end();
    letters.push_back(make_letter(b, flip ? -sign_of(l) : sign_of(l)));
  }
  if (v != 0) return std::nullopt;
  return Word(letters);
}

/// Rank of the subgroup: edges - vertices + 1 for a connected core graph.
inline int sg_rank(const StallingsGraph& g) { return static_cast<int>(g.edges.size()) - g.vertices + 1; }

/// A finite-index subgroup of F_n containing w as a basis element: the folded
/// loop of w completed to a covering by joining, for each label, the vertices
/// lacking an outgoing edge to those lacking an incoming one (lowest ids
/// first). preferred_tree is the loop minus one cycle edge, the last one read
/// forwards if there is such.
inline StallingsGraph hall_overgroup(const Word& w, int ambient_rank) {
  if (w.empty()) throw std::invalid_argument("hall_overgroup needs a nontrivial word");
  if (w.max_generator() >= ambient_rank) throw std::invalid_argument("word uses a generator outside the ambient rank");

  // The reduced loop: a hair along the conjugator, then a cycle along the core.
  auto [core, conj] = cyclic_reduce(w);
  std::vector<Edge> loop;
  int vertices = 1;
  int prev = 0;
  auto step = [&](Letter l, int next) {
    if (sign_of(l) > 0)
      loop.push_back({prev, generator_of(l), next});
    else
      loop.push_back({next, generator_of(l), prev});
    prev = next;
  };
  for (Letter l : conj) step(l, vertices++);
  const int cycle_start = prev;
  for (std::size_t i = 0; i < core.size(); ++i) step(core[i], i + 1 == core.size() ? cycle_start : vertices++);
  std::size_t closing_at = loop.size() - 1;
  for (std::size_t i = 0; i < core.size(); ++i)
    if (sign_of(core[i]) > 0) closing_at = conj.size() + i;
  const Edge closing = loop[closing_at];

  std::vector<Edge> edges = loop;
  for (int l = 0; l < ambient_rank; ++l) {
    std::vector<bool> has_out(static_cast<std::size_t>(vertices)), has_in(static_cast<std::size_t>(vertices));
    for (const auto& e : edges)
      if (e.label == l) {
        has_out[static_cast<std::size_t>(e.from)] = true;
        has_in[static_cast<std::size_t>(e.to)] = true;
      }
    std::vector<int> need_out, need_in;
    for (int v = 0; v < vertices; ++v) {
      if (!has_out[static_cast<std::size_t>(v)]) need_out.push_back(v);
      if (!has_in[static_cast<std::size_t>(v)]) need_in.push_back(v);
    }
    for (std::size_t k = 0; k < need_out.size(); ++k) edges.push_back({need_out[k], l, need_in[k]});
  }

  StallingsGraph g = detail::canonical_numbering(0, edges, ambient_rank);
  // translate the loop edges through the renumbering
  std::map<int, int> relabel;
  {
    std::map<std::pair<int, int>, int> out;
    for (const auto& e : edges) out[{e.from, e.label}] = e.to;
    std::map<std::pair<int, int>, int> out_new;
    for (const auto& e : g.edges) out_new[{e.from, e.label}] = e.to;
    std::map<std::pair<int, int>, int> in, in_new;
    for (const auto& e : edges) in[{e.to, e.label}] = e.from;
    for (const auto& e : g.edges) in_new[{e.to, e.label}] = e.from;
    relabel[0] = 0;
    std::deque<int> queue{0};
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      for (int l = 0; l < ambient_rank; ++l) {
        int u = out.at({v, l}), un = out_new.at({relabel[v], l});
        if (relabel.emplace(u, un).second) queue.push_back(u);
        int x = in.at({v, l}), xn = in_new.at({relabel[v], l});
        if (relabel.emplace(x, xn).second) queue.push_back(x);
      }
    }
  }
  for (const auto& e : loop)
    if (e != closing) g.preferred_tree.push_back({relabel.at(e.from), e.label, relabel.at(e.to)});
  if (sign_of(core[closing_at - conj.size()]) < 0)
    g.inverted.push_back({relabel.at(closing.from), closing.label, relabel.at(closing.to)});
  return g;
}

}  // namespace largeness
