#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "largeness/integer.hpp"
#include "largeness/matrix.hpp"
#include "largeness/presentation.hpp"

namespace largeness {

/// A homomorphism to the integers, given by its value on each generator.
struct Chi {
  std::vector<Integer> values;

  Integer operator()(const Word& w) const {
    Integer s = 0;
    for (Letter l : w) s += sign_of(l) > 0 ? values.at(generator_of(l)) : Integer(-values.at(generator_of(l)));
    return s;
  }

  Integer content() const {
    Integer g = 0;
    for (const auto& v : values) g = gcd_int(g, v);
    return g;
  }

  bool operator==(const Chi&) const = default;
};

struct AbelianInvariants {
  int betti = 0;
  std::vector<Integer> torsion;  // each >= 2, each dividing the next

  bool is_free_rank_two() const { return betti == 2 && torsion.empty(); }
  bool operator==(const AbelianInvariants&) const = default;
};

/// Entry (i, j) is the exponent sum of generator i in relator j.
inline IntMatrix exponent_matrix(const Presentation& p) {
  IntMatrix m(p.generators.size(), p.relators.size());
  for (std::size_t j = 0; j < p.relators.size(); ++j)
    for (Letter l : p.relators[j]) m(static_cast<std::size_t>(generator_of(l)), j) += sign_of(l);
  return m;
}

inline std::vector<Integer> exponent_vector(const Word& w, int rank) {
  std::vector<Integer> v(static_cast<std::size_t>(rank));
  for (Letter l : w) v.at(static_cast<std::size_t>(generator_of(l))) += sign_of(l);
  return v;
}

inline AbelianInvariants abelianization(const Presentation& p) {
  AbelianInvariants inv;
  if (p.relators.empty()) {
    inv.betti = p.rank();
    return inv;
  }
  auto snf = smith_normal_form(exponent_matrix(p));
  std::size_t rank = 0;
  for (const auto& d : snf.diagonal()) {
    if (d == 0) continue;
    ++rank;
    if (d > 1) inv.torsion.push_back(d);
  }
  inv.betti = p.rank() - static_cast<int>(rank);
  return inv;
}

/// Row-style Hermite normal form of a full-row-rank matrix: positive pivots,
/// entries above each pivot reduced into [0, pivot).
inline IntMatrix hermite_normal_form(IntMatrix A) {
  std::size_t r = 0;
  for (std::size_t col = 0; col < A.cols() && r < A.rows(); ++col) {
    while (true) {
      std::size_t best = A.rows();
      for (std::size_t i = r; i < A.rows(); ++i)
        if (A(i, col) != 0 && (best == A.rows() || abs_int(A(i, col)) < abs_int(A(best, col)))) best = i;
      if (best == A.rows()) break;
      A.swap_rows(r, best);
      bool done = true;
      for (std::size_t i = r + 1; i < A.rows(); ++i) {
        if (A(i, col) == 0) continue;
        A.add_row(i, r, -(A(i, col) / A(r, col)));
        done = done && A(i, col) == 0;
      }
      if (done) break;
    }
    if (A(r, col) == 0) continue;
    if (A(r, col) < 0) A.negate_row(r);
    for (std::size_t i = 0; i < r; ++i) A.add_row(i, r, -floor_div(A(i, col), A(r, col)));
    ++r;
  }
  return A;
}

class NoSurjectionToZ : public std::domain_error {
 public:
  NoSurjectionToZ() : std::domain_error("first Betti number is 0: no homomorphism onto Z") {}
};

/// Basis of Hom(G, Z), in Hermite normal form.
inline std::vector<Chi> hom_to_Z_basis(const Presentation& p) {
  const auto n = static_cast<std::size_t>(p.rank());
  IntMatrix kernel;
  if (p.relators.empty()) {
    kernel = IntMatrix::identity(n);
  } else {
    // chi E = 0  <=>  (chi U^-1) D = 0, so the kernel is spanned by rows rank.. of U.
    auto snf = smith_normal_form(exponent_matrix(p));
    std::size_t rank = snf.rank();
    kernel = IntMatrix(n - rank, n);
    for (std::size_t i = rank; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) kernel(i - rank, j) = snf.U(i, j);
  }
  if (kernel.rows() == 0) throw NoSurjectionToZ();
  IntMatrix h = hermite_normal_form(kernel);
  std::vector<Chi> basis;
  for (std::size_t i = 0; i < h.rows(); ++i) basis.push_back(Chi{h.row(i)});
  return basis;
}

/// True iff chi kills every relator and takes coprime values (so it is onto Z).
inline bool is_surjective_character(const Presentation& p, const Chi& chi) {
  if (chi.values.size() != p.generators.size()) return false;
  for (const auto& r : p.relators)
    if (chi(r) != 0) return false;
  return chi.content() == 1;
}

struct SpanRank {
  std::size_t rank = 0;
  bool infinite_index = false;
};

/// Rank of the subgroup of ab(G) = Z^b1 generated by the images of `words`.
inline SpanRank image_span_rank(const Presentation& p, std::span<const Word> words) {
  std::vector<Chi> basis;
  try {
    basis = hom_to_Z_basis(p);
  } catch (const NoSurjectionToZ&) {
    return {0, false};
  }
  IntMatrix m(words.size(), basis.size());
  for (std::size_t i = 0; i < words.size(); ++i)
    for (std::size_t j = 0; j < basis.size(); ++j) m(i, j) = basis[j](words[i]);
  std::size_t r = words.empty() ? 0 : rank(m);
  return {r, r < basis.size()};
}

}  // namespace largeness
