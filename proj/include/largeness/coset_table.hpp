#pragma once

#include <cstddef>
#include <deque>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "largeness/presentation.hpp"
#include "largeness/word.hpp"

namespace largeness {

/// Action of a group on the cosets of a subgroup; coset 0 is the subgroup
/// itself and action[g][c] = c . x_g (or -1 while undefined).
struct CosetTable {
  int degree = 0;
  std::vector<std::vector<int>> action;

  int rank() const { return static_cast<int>(action.size()); }

  /// c . l for a signed letter; -1 if undefined.
  int act(int c, Letter l) const {
    const auto& row = action[static_cast<std::size_t>(generator_of(l))];
    if (sign_of(l) > 0) return row[static_cast<std::size_t>(c)];
    for (int d = 0; d < degree; ++d)
      if (row[static_cast<std::size_t>(d)] == c) return d;
    return -1;
  }

  /// Coset reached from c along w; -1 if the path leaves the table.
  int trace(int c, const Word& w) const {
    for (Letter l : w) {
      if (c < 0) return -1;
      c = act(c, l);
    }
    return c;
  }

  bool operator==(const CosetTable&) const = default;
  auto operator<=>(const CosetTable&) const = default;
};

class BoundExceeded : public std::runtime_error {
 public:
  explicit BoundExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Every generator acts as a permutation of all `degree` cosets.
inline bool is_complete(const CosetTable& t) {
  for (const auto& row : t.action) {
    if (static_cast<int>(row.size()) != t.degree) return false;
    std::vector<bool> hit(static_cast<std::size_t>(t.degree));
    for (int c : row) {
      if (c < 0 || c >= t.degree || hit[static_cast<std::size_t>(c)]) return false;
      hit[static_cast<std::size_t>(c)] = true;
    }
  }
  return t.degree >= 1;
}

/// Inverse permutations of a complete table.
inline std::vector<std::vector<int>> inverse_action(const CosetTable& t) {
  std::vector<std::vector<int>> inv(t.action.size(), std::vector<int>(static_cast<std::size_t>(t.degree)));
  for (std::size_t g = 0; g < t.action.size(); ++g)
    for (int c = 0; c < t.degree; ++c) inv[g][static_cast<std::size_t>(t.action[g][static_cast<std::size_t>(c)])] = c;
  return inv;
}

/// Tracing every relator from every coset returns to the start.
inline bool is_relator_closed(const CosetTable& t, const Presentation& p) {
  if (!is_complete(t) || t.rank() != p.rank()) return false;
  auto inv = inverse_action(t);
  for (const auto& r : p.relators)
    for (int c = 0; c < t.degree; ++c) {
      int d = c;
      for (Letter l : r) {
        auto g = static_cast<std::size_t>(generator_of(l));
        d = sign_of(l) > 0 ? t.action[g][static_cast<std::size_t>(d)] : inv[g][static_cast<std::size_t>(d)];
      }
      if (d != c) return false;
    }
  return true;
}

/// Renumber a complete table by first appearance, scanning cosets in order and
/// for each the columns x_0, x_0^-1, x_1, ... ; `root` becomes coset 0.
inline CosetTable standardize(const CosetTable& t, int root = 0) {
  auto inv = inverse_action(t);
  std::vector<int> order{root};
  std::vector<int> label(static_cast<std::size_t>(t.degree), -1);
  label[static_cast<std::size_t>(root)] = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    auto c = static_cast<std::size_t>(order[k]);
    for (std::size_t g = 0; g < t.action.size(); ++g)
      for (int d : {t.action[g][c], inv[g][c]})
        if (label[static_cast<std::size_t>(d)] < 0) {
          label[static_cast<std::size_t>(d)] = static_cast<int>(order.size());
          order.push_back(d);
        }
  }
  if (static_cast<int>(order.size()) != t.degree) throw std::invalid_argument("coset table is not transitive");
  CosetTable s{t.degree, std::vector<std::vector<int>>(t.action.size(), std::vector<int>(static_cast<std::size_t>(t.degree)))};
  for (std::size_t g = 0; g < t.action.size(); ++g)
    for (int c = 0; c < t.degree; ++c)
      s.action[g][static_cast<std::size_t>(label[static_cast<std::size_t>(c)])] =
          label[static_cast<std::size_t>(t.action[g][static_cast<std::size_t>(c)])];
  return s;
}

/// Hunter-Lamb-Trotter Todd-Coxeter enumeration of the cosets of <subgens>.
/// Fails once more than max_cosets cosets are alive, or when the workspace of
/// defined cosets (64 * max_cosets + 1024) runs out.
inline CosetTable coset_enumerate(const Presentation& p, std::span<const Word> subgens, int max_cosets) {
  if (max_cosets < 1) throw std::invalid_argument("max_cosets must be positive");
  const int n = p.rank();
  const int cols = 2 * n;
  const long long workspace = 64LL * max_cosets + 1024;
  auto col = [](Letter l) { return 2 * generator_of(l) + (sign_of(l) > 0 ? 0 : 1); };
  auto inv_col = [](int x) { return x ^ 1; };

  std::vector<int> table;  // row-major, cols per coset
  std::vector<int> parent;
  int alive = 0;
  auto entry = [&](int c, int x) -> int& { return table[static_cast<std::size_t>(c * cols + x)]; };
  auto new_coset = [&]() {
    if (static_cast<long long>(parent.size()) >= workspace)
      throw BoundExceeded("coset enumeration ran out of workspace");
    int d = static_cast<int>(parent.size());
    parent.push_back(d);
    table.resize(table.size() + static_cast<std::size_t>(cols), -1);
    if (++alive > max_cosets) throw BoundExceeded("more than " + std::to_string(max_cosets) + " cosets");
    return d;
  };
  auto rep = [&](int c) {
    int r = c;
    while (parent[static_cast<std::size_t>(r)] != r) r = parent[static_cast<std::size_t>(r)];
    while (parent[static_cast<std::size_t>(c)] != r) {
      int next = parent[static_cast<std::size_t>(c)];
      parent[static_cast<std::size_t>(c)] = r;
      c = next;
    }
    return r;
  };
  auto is_alive = [&](int c) { return parent[static_cast<std::size_t>(c)] == c; };

  auto merge = [&](int k, int l, std::deque<int>& queue) {
    k = rep(k);
    l = rep(l);
    if (k == l) return;
    if (k > l) std::swap(k, l);
    parent[static_cast<std::size_t>(l)] = k;
    --alive;
    queue.push_back(l);
  };
  auto coincidence = [&](int a, int b) {
    std::deque<int> queue;
    merge(a, b, queue);
    while (!queue.empty()) {
      int e = queue.front();
      queue.pop_front();
      for (int x = 0; x < cols; ++x) {
        int f = entry(e, x);
        if (f < 0) continue;
        if (entry(f, inv_col(x)) == e) entry(f, inv_col(x)) = -1;
        int e1 = rep(e), f1 = rep(f);
        if (entry(e1, x) >= 0) {
          merge(f1, entry(e1, x), queue);
        } else if (entry(f1, inv_col(x)) >= 0) {
          merge(e1, entry(f1, inv_col(x)), queue);
        } else {
          entry(e1, x) = f1;
          entry(f1, inv_col(x)) = e1;
        }
      }
    }
  };
  auto define = [&](int c, int x) {
    int d = new_coset();
    entry(c, x) = d;
    entry(d, inv_col(x)) = c;
  };
  auto scan_and_fill = [&](int c, const Word& w) {
    const auto& L = w.letters();
    if (L.empty()) return;
    int f = c, b = c;
    std::size_t i = 0, j = L.size();  // unscanned letters are L[i, j)
    while (true) {
      while (i < j && entry(f, col(L[i])) >= 0) f = entry(f, col(L[i++]));
      if (i == j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j > i && entry(b, inv_col(col(L[j - 1]))) >= 0) b = entry(b, inv_col(col(L[--j])));
      if (j == i) {
        coincidence(f, b);
        return;
      }
      if (j == i + 1) {
        entry(f, col(L[i])) = b;
        entry(b, inv_col(col(L[i]))) = f;
        return;
      }
      define(f, col(L[i]));
    }
  };

  new_coset();
  for (const auto& s : subgens) scan_and_fill(0, s);
  for (int c = 0; c < static_cast<int>(parent.size()); ++c) {
    for (const auto& r : p.relators) {
      if (!is_alive(c)) break;
      scan_and_fill(c, r);
    }
    for (int x = 0; x < cols && is_alive(c); ++x)
      if (entry(c, x) < 0) define(c, x);
  }

  std::vector<int> label(parent.size(), -1);
  int degree = 0;
  for (std::size_t c = 0; c < parent.size(); ++c)
    if (is_alive(static_cast<int>(c))) label[c] = degree++;
  CosetTable t{degree, std::vector<std::vector<int>>(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(degree)))};
  for (std::size_t c = 0; c < parent.size(); ++c) {
    if (label[c] < 0) continue;
    for (int g = 0; g < n; ++g)
      t.action[static_cast<std::size_t>(g)][static_cast<std::size_t>(label[c])] =
          label[static_cast<std::size_t>(rep(entry(static_cast<int>(c), 2 * g)))];
  }
  return standardize(t);
}

}  // namespace largeness
