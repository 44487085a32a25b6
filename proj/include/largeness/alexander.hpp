#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "largeness/abelian.hpp"
#include "largeness/fox.hpp"
#include "largeness/laurent.hpp"
#include "largeness/presentation.hpp"

namespace largeness {

using PolyMatrix = std::vector<std::vector<LaurentPoly>>;

/// Ring map Z[F] -> field[t^{+-1}], w -> t^chi(w).
inline LaurentPoly chi_specialize(const GroupRingElt& e, const Chi& chi, const Field& field) {
  LaurentPoly out(field);
  for (const auto& [w, c] : e.terms()) out.add_term(to_int64(chi(w)), field.reduce(Rational(c)));
  return out;
}

class NotSurjective : public std::invalid_argument {
 public:
  explicit NotSurjective(const std::string& why) : std::invalid_argument(why) {}
};

/// Result of rewriting a presentation through a free-group automorphism that
/// puts a character into coordinate form (1 on generator 0, 0 elsewhere).
struct CoordinateChange {
  Presentation presentation;
  int pivot = 0;
  Chi chi;                        // on the new generators
  std::vector<Word> old_in_new;   // old generator k as a word in the new ones
  std::vector<Word> new_in_old;   // new generator i as a word in the old ones
  std::size_t moves = 0;          // elementary Nielsen moves applied
};

inline CoordinateChange coordinate_change(const Presentation& p, const Chi& chi) {
  const auto n = static_cast<std::size_t>(p.rank());
  if (chi.values.size() != n) throw NotSurjective("character has the wrong number of values");
  for (const auto& r : p.relators)
    if (chi(r) != 0) throw NotSurjective("character does not vanish on every relator");
  if (chi.content() != 1) throw NotSurjective("character values are not coprime");

  std::vector<Integer> c = chi.values;
  std::vector<Word> old_in_new, new_in_old;
  for (std::size_t i = 0; i < n; ++i) {
    old_in_new.push_back(Word::generator(static_cast<int>(i)));
    new_in_old.push_back(Word::generator(static_cast<int>(i)));
  }
  std::size_t moves = 0;
  auto resubstitute = [&](const std::vector<Word>& images) {
    for (auto& w : old_in_new) w = substitute(w, images);
  };
  auto identity_images = [&] {
    std::vector<Word> im;
    for (std::size_t i = 0; i < n; ++i) im.push_back(Word::generator(static_cast<int>(i)));
    return im;
  };

  // y_i <- y_i y_j^q
  auto transvect = [&](std::size_t i, std::size_t j, const Integer& q) {
    long long k = to_int64(q);
    c[i] += q * c[j];
    new_in_old[i] = new_in_old[i] * new_in_old[j].pow(k);
    auto im = identity_images();
    im[i] = Word::generator(static_cast<int>(i)) * Word::generator(static_cast<int>(j), -k);
    resubstitute(im);
    moves += static_cast<std::size_t>(k < 0 ? -k : k);
  };

  while (true) {
    std::size_t j = n;
    for (std::size_t i = 0; i < n; ++i)
      if (c[i] != 0 && (j == n || abs_int(c[i]) < abs_int(c[j]))) j = i;
    bool single = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j || c[i] == 0) continue;
      single = false;
      transvect(i, j, -(c[i] / c[j]));
    }
    if (single) {
      if (c[j] < 0) {
        c[j] = -c[j];
        new_in_old[j] = new_in_old[j].inverse();
        auto im = identity_images();
        im[j] = im[j].inverse();
        resubstitute(im);
        ++moves;
      }
      if (j != 0) {
        std::swap(c[0], c[j]);
        std::swap(new_in_old[0], new_in_old[j]);
        auto im = identity_images();
        std::swap(im[0], im[j]);
        resubstitute(im);
        ++moves;
      }
      break;
    }
  }

  CoordinateChange cc;
  cc.presentation.generators = moves == 0 ? p.generators : numbered_names("y", static_cast<int>(n), 0);
  for (const auto& r : p.relators) cc.presentation.relators.push_back(substitute(r, old_in_new));
  cc.chi = Chi{c};
  cc.old_in_new = std::move(old_in_new);
  cc.new_in_old = std::move(new_in_old);
  cc.moves = moves;
  return cc;
}

struct AlexMatrix {
  CoordinateChange coordinates;
  PolyMatrix entries;  // (n-1) x m; row i-1 belongs to new generator i
  Field field;
};

/// Presentation matrix of H_1(ker chi) over field[t^{+-1}] from Fox calculus in
/// coordinate form; the pivot row vanishes identically and is dropped.
inline AlexMatrix alexander_matrix(const Presentation& p, const Chi& chi, const Field& field) {
  AlexMatrix a{coordinate_change(p, chi), {}, field};
  const auto& q = a.coordinates.presentation;
  for (int i = 1; i < q.rank(); ++i) {
    std::vector<LaurentPoly> row;
    for (const auto& r : q.relators) row.push_back(chi_specialize(fox_derivative(r, i), a.coordinates.chi, field));
    a.entries.push_back(std::move(row));
  }
  return a;
}

/// Fraction-free (Bareiss) determinant.
inline LaurentPoly determinant(PolyMatrix A, const Field& field) {
  const std::size_t k = A.size();
  if (k == 0) return LaurentPoly::constant(field, 1);
  bool negate = false;
  LaurentPoly prev = LaurentPoly::constant(field, 1);
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = k;
    for (std::size_t r = col; r < k; ++r)
      if (!A[r][col].is_zero()) {
        piv = r;
        break;
      }
    if (piv == k) return LaurentPoly(field);
    if (piv != col) {
      std::swap(A[piv], A[col]);
      negate = !negate;
    }
    for (std::size_t i = col + 1; i < k; ++i) {
      for (std::size_t j = col + 1; j < k; ++j)
        A[i][j] = exact_div(A[col][col] * A[i][j] - A[i][col] * A[col][j], prev);
      A[i][col] = LaurentPoly(field);
    }
    prev = A[col][col];
  }
  return negate ? -A[k - 1][k - 1] : A[k - 1][k - 1];
}

struct RankProfile {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;  // original row indices
  std::vector<std::size_t> pivot_cols;
};

inline RankProfile rank_profile(PolyMatrix A, const Field& field) {
  RankProfile out;
  const std::size_t rows = A.size();
  const std::size_t cols = rows ? A[0].size() : 0;
  std::vector<std::size_t> perm(rows);
  for (std::size_t i = 0; i < rows; ++i) perm[i] = i;
  LaurentPoly prev = LaurentPoly::constant(field, 1);
  std::size_t r = 0;
  for (std::size_t col = 0; col < cols && r < rows; ++col) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i)
      if (!A[i][col].is_zero()) {
        piv = i;
        break;
      }
    if (piv == rows) continue;
    std::swap(A[piv], A[r]);
    std::swap(perm[piv], perm[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = col + 1; j < cols; ++j) A[i][j] = exact_div(A[r][col] * A[i][j] - A[i][col] * A[r][j], prev);
      A[i][col] = LaurentPoly(field);
    }
    prev = A[r][col];
    out.pivot_rows.push_back(perm[r]);
    out.pivot_cols.push_back(col);
    ++r;
  }
  out.rank = r;
  return out;
}

/// A nonzero v with v * A = 0, if the rows of A are dependent over field(t).
/// Built from signed maximal minors (Cramer's rule), so all entries are
/// Laurent polynomials.
inline std::optional<std::vector<LaurentPoly>> left_null_vector(const PolyMatrix& A, const Field& field) {
  const std::size_t rows = A.size();
  if (rows == 0) return std::nullopt;
  const std::size_t cols = A[0].size();
  PolyMatrix T(cols, std::vector<LaurentPoly>(rows, LaurentPoly(field)));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) T[j][i] = A[i][j];
  RankProfile prof = rank_profile(T, field);
  if (prof.rank == rows) return std::nullopt;

  std::size_t free_col = 0;
  while (std::find(prof.pivot_cols.begin(), prof.pivot_cols.end(), free_col) != prof.pivot_cols.end()) ++free_col;
  std::vector<std::size_t> support = prof.pivot_cols;
  support.push_back(free_col);
  std::sort(support.begin(), support.end());

  std::vector<LaurentPoly> v(rows, LaurentPoly(field));
  for (std::size_t k = 0; k < support.size(); ++k) {
    PolyMatrix minor;
    for (std::size_t ri : prof.pivot_rows) {
      std::vector<LaurentPoly> row;
      for (std::size_t s = 0; s < support.size(); ++s)
        if (s != k) row.push_back(T[ri][support[s]]);
      minor.push_back(std::move(row));
    }
    LaurentPoly d = determinant(std::move(minor), field);
    v[support[k]] = k % 2 == 0 ? d : -d;
  }
  return v;
}

/// v * A, one entry per column.
inline std::vector<LaurentPoly> row_times_matrix(const std::vector<LaurentPoly>& v, const PolyMatrix& A,
                                                 const Field& field) {
  const std::size_t cols = A.empty() ? 0 : A[0].size();
  std::vector<LaurentPoly> out(cols, LaurentPoly(field));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) out[j] += v.at(i) * A[i][j];
  return out;
}

/// gcd of the maximal minors of the Alexander matrix, normalized.
inline LaurentPoly alexander_polynomial(const Presentation& p, const Chi& chi, const Field& field) {
  AlexMatrix a = alexander_matrix(p, chi, field);
  const std::size_t rows = a.entries.size();
  const std::size_t cols = p.relators.size();
  if (rows == 0) return LaurentPoly::constant(field, 1);
  if (cols < rows) return LaurentPoly(field);
  LaurentPoly g(field);
  std::vector<std::size_t> pick(rows);
  for (std::size_t i = 0; i < rows; ++i) pick[i] = i;
  while (true) {
    PolyMatrix sq;
    for (std::size_t i = 0; i < rows; ++i) {
      std::vector<LaurentPoly> row;
      for (std::size_t j : pick) row.push_back(a.entries[i][j]);
      sq.push_back(std::move(row));
    }
    g = gcd(g, determinant(std::move(sq), field));
    // next column subset in lexicographic order
    std::size_t k = rows;
    while (k > 0 && pick[k - 1] == cols - rows + k - 1) --k;
    if (k == 0) break;
    ++pick[k - 1];
    for (std::size_t i = k; i < rows; ++i) pick[i] = pick[i - 1] + 1;
  }
  return g;
}

/// Vanishing of the Alexander polynomial, decided by rank over field(t).
inline bool alexander_is_zero(const Presentation& p, const Chi& chi, const Field& field) {
  AlexMatrix a = alexander_matrix(p, chi, field);
  if (a.entries.empty()) return false;
  return rank_profile(a.entries, field).rank < a.entries.size();
}

}  // namespace largeness
