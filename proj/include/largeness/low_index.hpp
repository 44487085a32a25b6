#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "largeness/coset_table.hpp"
#include "largeness/parallel.hpp"
#include "largeness/presentation.hpp"

namespace largeness {

struct LowIndexOptions {
  int max_index = 1;
  int min_index = 1;
  unsigned threads = 1;
  std::size_t node_limit = 0;  // 0: unlimited; otherwise BoundExceeded past this many search nodes
};

namespace detail {

/// Partial coset table with 2n columns per coset: x_0, x_0^-1, x_1, ...
class SimsSearch {
 public:
  SimsSearch(const Presentation& p, const LowIndexOptions& opt)
      : n_(p.rank()), cols_(2 * p.rank()), max_(opt.max_index), opt_(opt) {
    std::set<std::vector<int>> seen;
    for (const auto& r : p.relators) {
      Word core = cyclic_reduce(r).core;
      for (std::size_t k = 0; k < std::max<std::size_t>(core.size(), 1); ++k) {
        std::vector<int> cs;
        for (Letter l : rotate(core, k)) cs.push_back(col(l));
        if (!cs.empty() && seen.insert(cs).second) rels_.push_back(std::move(cs));
      }
    }
  }

  struct State {
    int degree = 1;
    std::vector<int> table;
  };

  State root() const { return State{1, std::vector<int>(static_cast<std::size_t>(max_ * cols_), -1)}; }

  /// Children of a state in canonical order; leaves are reported through `emit`.
  template <class Emit>
  std::vector<State> expand(const State& s, Emit&& emit) {
    if (opt_.node_limit && ++nodes_ > opt_.node_limit) throw BoundExceeded("low-index search node limit reached");
    int c = -1, x = -1;
    for (int k = 0; k < s.degree * cols_ && c < 0; ++k)
      if (s.table[static_cast<std::size_t>(k)] < 0) {
        c = k / cols_;
        x = k % cols_;
      }
    if (c < 0) {
      if (s.degree >= opt_.min_index && automorphic_roots(s) > 0) emit(to_table(s));
      return {};
    }
    std::vector<State> out;
    for (int d = 0; d <= s.degree && d < max_; ++d) {
      State t = s;
      if (d == t.degree) ++t.degree;
      if (at(t, d, x ^ 1) >= 0) continue;
      at(t, c, x) = d;
      at(t, d, x ^ 1) = c;
      if (deduce(t) && canonical(t)) out.push_back(std::move(t));
    }
    return out;
  }

  template <class Emit>
  void run(const State& s, Emit&& emit) {
    for (auto& child : expand(s, emit)) run(child, emit);
  }

  std::size_t nodes() const { return nodes_; }

 private:
  static int col(Letter l) { return 2 * generator_of(l) + (sign_of(l) > 0 ? 0 : 1); }
  int& at(State& s, int c, int x) const { return s.table[static_cast<std::size_t>(c * cols_ + x)]; }
  int at(const State& s, int c, int x) const { return s.table[static_cast<std::size_t>(c * cols_ + x)]; }

  // Relator scans from every coset until nothing new follows; false on a contradiction.
  bool deduce(State& s) const {
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& r : rels_)
        for (int c = 0; c < s.degree; ++c) {
          int f = c, b = c;
          std::size_t i = 0, j = r.size();
          while (i < j && at(s, f, r[i]) >= 0) f = at(s, f, r[i++]);
          if (i == j) {
            if (f != c) return false;
            continue;
          }
          while (j > i && at(s, b, r[j - 1] ^ 1) >= 0) b = at(s, b, r[--j] ^ 1);
          if (j == i) {
            if (f != b) return false;
          } else if (j == i + 1) {
            at(s, f, r[i]) = b;
            at(s, b, r[i] ^ 1) = f;
            changed = true;
          }
        }
    }
    return true;
  }

  // Compare the table re-rooted at b with s entry by entry. Returns -1 if the
  // re-rooted table is smaller, +1 if larger, 0 if equal or undecided.
  int compare_rerooted(const State& s, int b, bool& decided) const {
    std::vector<int> order{b};
    std::vector<int> label(static_cast<std::size_t>(s.degree), -1);
    label[static_cast<std::size_t>(b)] = 0;
    decided = false;
    for (int k = 0; k < s.degree; ++k) {
      if (k >= static_cast<int>(order.size())) return 0;
      int old = order[static_cast<std::size_t>(k)];
      for (int x = 0; x < cols_; ++x) {
        int cur = at(s, k, x);
        int img = at(s, old, x);
        if (cur < 0 || img < 0) return 0;
        int& l = label[static_cast<std::size_t>(img)];
        if (l < 0) {
          l = static_cast<int>(order.size());
          order.push_back(img);
        }
        if (l != cur) {
          decided = true;
          return l < cur ? -1 : 1;
        }
      }
    }
    decided = true;
    return 0;
  }

  bool canonical(const State& s) const {
    for (int b = 1; b < s.degree; ++b) {
      bool decided = false;
      if (compare_rerooted(s, b, decided) < 0) return false;
    }
    return true;
  }

  // Number of roots giving exactly this table (0 if some root gives a smaller one).
  int automorphic_roots(const State& s) const {
    int count = 1;
    for (int b = 1; b < s.degree; ++b) {
      bool decided = false;
      int cmp = compare_rerooted(s, b, decided);
      if (cmp < 0) return 0;
      if (cmp == 0 && decided) ++count;
    }
    return count;
  }

  CosetTable to_table(const State& s) const {
    CosetTable t{s.degree, std::vector<std::vector<int>>(static_cast<std::size_t>(n_))};
    for (int g = 0; g < n_; ++g)
      for (int c = 0; c < s.degree; ++c) t.action[static_cast<std::size_t>(g)].push_back(at(s, c, 2 * g));
    return t;
  }

  int n_, cols_, max_;
  LowIndexOptions opt_;
  std::vector<std::vector<int>> rels_;
  std::size_t nodes_ = 0;
};

}  // namespace detail

/// Number of subgroups conjugate to the stabilizer of coset 0.
inline int conjugacy_class_size(const CosetTable& t) {
  CosetTable s = standardize(t);
  int fixed = 0;
  for (int b = 0; b < t.degree; ++b)
    if (standardize(s, b) == s) ++fixed;
  return t.degree / fixed;
}

/// One table per conjugacy class of subgroups with index in
/// [min_index, max_index], each the least re-rooting of its class, sorted by
/// (index, table). The output does not depend on the thread count.
inline std::vector<CosetTable> low_index_subgroups(const Presentation& p, const LowIndexOptions& opt) {
  if (opt.max_index < 1) throw std::invalid_argument("max_index must be positive");
  std::vector<CosetTable> out;
  if (p.rank() == 0) {
    if (opt.min_index <= 1) out.push_back(CosetTable{1, {}});
    return out;
  }
  detail::SimsSearch search(p, opt);
  auto collect = [&out](CosetTable t) { out.push_back(std::move(t)); };

  if (opt.threads <= 1) {
    search.run(search.root(), collect);
  } else {
    // Expand breadth-first until there is enough work to share, then search
    // the subtrees independently.
    std::vector<detail::SimsSearch::State> frontier{search.root()};
    const std::size_t target = 8 * static_cast<std::size_t>(opt.threads);
    while (!frontier.empty() && frontier.size() < target) {
      std::vector<detail::SimsSearch::State> next;
      for (const auto& s : frontier)
        for (auto& c : search.expand(s, collect)) next.push_back(std::move(c));
      frontier = std::move(next);
    }
    LowIndexOptions sub = opt;
    if (sub.node_limit) sub.node_limit = sub.node_limit > search.nodes() ? sub.node_limit - search.nodes() : 1;
    auto parts = parallel_map(frontier.size(), opt.threads, [&](std::size_t i) {
      detail::SimsSearch local(p, sub);
      std::vector<CosetTable> found;
      local.run(frontier[i], [&found](CosetTable t) { found.push_back(std::move(t)); });
      return std::make_pair(std::move(found), local.nodes());
    });
    // the limit is on the total, as in the serial search
    std::size_t total = search.nodes();
    for (auto& part : parts) {
      total += part.second;
      for (auto& t : part.first) out.push_back(std::move(t));
    }
    if (opt.node_limit && total > opt.node_limit) throw BoundExceeded("low-index search node limit reached");
  }
  std::sort(out.begin(), out.end(), [](const CosetTable& a, const CosetTable& b) {
    return a.degree != b.degree ? a.degree < b.degree : a.action < b.action;
  });
  return out;
}

inline std::vector<CosetTable> low_index_subgroups(const Presentation& p, int max_index, unsigned threads = 1) {
  LowIndexOptions opt;
  opt.max_index = max_index;
  opt.threads = threads;
  return low_index_subgroups(p, opt);
}

}  // namespace largeness
