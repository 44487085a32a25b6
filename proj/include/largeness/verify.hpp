#pragma once

#include <exception>
#include <string>
#include <vector>

#include "largeness/alexander.hpp"
#include "largeness/certificate.hpp"
#include "largeness/classify.hpp"
#include "largeness/stallings.hpp"
#include "largeness/torus.hpp"

namespace largeness {

struct VerifyResult {
  bool ok = false;
  std::string reason;  // first failed check
};

namespace verify_detail {

struct Failure {
  std::string reason;
};

inline void require(bool cond, const std::string& why) {
  if (!cond) throw Failure{why};
}

/// Equal up to renaming generators.
inline bool same_presentation(const Presentation& a, const Presentation& b) {
  return a.rank() == b.rank() && a.relators == b.relators;
}

/// Replay a chain of coset tables from `start` and return the presentation
/// reached.
inline Presentation replay(const Presentation& start, const std::vector<CosetTable>& chain) {
  Presentation cur = start;
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const auto& t = chain[k];
    const std::string at = "chain step " + std::to_string(k) + ": ";
    require(is_complete(t), at + "coset table incomplete");
    require(t.rank() == cur.rank(), at + "coset table has the wrong number of generators");
    require(is_relator_closed(t, cur), at + "coset table is not closed under the relators");
    try {
      standardize(t);
    } catch (const std::exception&) {
      require(false, at + "coset table is not transitive");
    }
    cur = subgroup_presentation(cur, t);
  }
  return cur;
}

/// The presentation a top-level certificate claims to be about, checked
/// against the replayed chain.
inline void check_chain(const Presentation& p, const std::vector<CosetTable>& chain, const Presentation& claimed) {
  const Presentation base = simplify(p);
  const Presentation reached = replay(base, chain);
  require(same_presentation(reached, claimed) || (chain.empty() && same_presentation(p, claimed)),
          "presentation does not match the replayed chain");
}

inline void check_commutator(const Presentation& q, const CommutatorData& c) {
  require(q.deficiency() == 1, "commutator route needs deficiency exactly 1");
  require(c.relator < q.relators.size(), "relator index out of range");
  for (const Word* w : {&c.u, &c.v, &c.conjugator}) require(w->max_generator() < q.rank(), "commutator word out of range");
  require(c.conjugator * commutator(c.u, c.v) * c.conjugator.inverse() == q.relators[c.relator],
          "relator is not the stated conjugate of a commutator");
}

inline void check(const Presentation& p, const Certificate& cert);

struct Checker {
  const Presentation& p;

  void operator()(const DeficiencyAtLeastTwo& c) const {
    check_chain(p, c.chain, c.presentation);
    require(c.presentation.deficiency() >= 2, "deficiency is below 2");
  }

  void operator()(const ProperPowerRelator& c) const {
    check_chain(p, c.chain, c.presentation);
    require(c.presentation.deficiency() >= 1, "proper-power route needs deficiency at least 1");
    require(c.relator < c.presentation.relators.size(), "relator index out of range");
    require(c.exponent >= 2 && !c.root.empty(), "exponent below 2 or empty root");
    const Word core = cyclic_reduce(c.presentation.relators[c.relator]).core;
    const Word power = cyclic_reduce(c.root.pow(c.exponent)).core;
    require(!core.empty() && core.size() == power.size(), "relator is not the stated power");
    bool found = false;
    for (std::size_t k = 0; k < core.size() && !found; ++k) found = rotate(power, k) == core;
    require(found, "relator is not conjugate to the stated power");
  }

  void operator()(const AlexanderZero& c) const {
    check_chain(p, c.chain, c.presentation);
    const auto& q = c.presentation;
    require(is_surjective_character(q, c.chi), "character is not a surjection onto Z");
    AlexMatrix a = alexander_matrix(q, c.chi, c.field);
    require(a.entries == c.matrix, "Alexander matrix does not match");
    require(!a.entries.empty(), "empty Alexander matrix");
    require(c.witness.size() == a.entries.size(), "witness has the wrong length");
    bool nonzero = false;
    for (const auto& f : c.witness) {
      require(f.field() == c.field, "witness over the wrong field");
      nonzero = nonzero || !f.is_zero();
    }
    require(nonzero, "witness is zero");
    for (const auto& f : row_times_matrix(c.witness, a.entries, c.field))
      require(f.is_zero(), "witness is not in the left kernel");
  }

  void operator()(const CommutatorBetti& c) const {
    check_chain(p, c.chain, c.presentation);
    const auto& q = c.presentation;
    check_commutator(q, c.commutator);
    const AbelianInvariants ab = abelianization(q);
    require(ab == c.abelianization, "abelianization does not match");
    const std::vector<Word> uv{c.commutator.u, c.commutator.v};
    require(image_span_rank(q, uv).rank == c.span_rank, "span rank does not match");
    require(c.span_rank < static_cast<std::size_t>(ab.betti) || (ab.betti == 2 && !ab.torsion.empty()),
            "commutator words span a finite-index subgroup of a torsion-free abelianization");
  }

  void operator()(const BigFiniteCoverAbelianization& c) const {
    check_chain(p, c.chain, c.presentation);
    check_commutator(c.presentation, c.commutator);
    require(!c.cover_chain.empty(), "empty cover chain");
    const Presentation h = replay(c.presentation, c.cover_chain);
    require(same_presentation(h, c.cover_presentation), "cover presentation does not match");
    const AbelianInvariants ab = abelianization(h);
    require(ab == c.cover_abelianization, "cover abelianization does not match");
    require(!ab.is_free_rank_two(), "cover abelianization is Z^2");
  }

  void operator()(const CitedLarge& c) const {
    check_chain(p, c.chain, c.presentation);
    const auto& q = c.presentation;
    require(q.rank() == 2 && q.relators.size() == 1, "not a two-generator one-relator presentation");
    bool found = false;
    for (const auto& b : bs_shapes(q.relators[0]))
      found = found || (b.n == c.n && b.l == c.l && b.m == c.m);
    require(found, "relator does not have the stated shape");
    require(detail::large_shape(BsShape{0, c.n, c.l, c.m}), "parameters are not in the large range");
  }

  void operator()(const CitedNonLarge& c) const {
    Classification cl = classify_presentation(simplify(p));
    require(cl.kind == Classification::Kind::not_large, "presentation is not of a known non-large shape");
    require(cl.reason == c.reason && cl.parameters == c.parameters, "classification does not match");
  }

  void operator()(const MappingTorusCover& c) const {
    const Endomorphism& e = c.endomorphism;
    e.validate();
    require(same_presentation(p, mapping_torus(e)), "presentation is not the mapping torus of the endomorphism");
    require(endo_is_injective(e), "endomorphism is not injective");
    require(witness_verify(e, c.witness) && c.witness.i >= 1 && !c.witness.w.empty() && c.witness.k != 0,
            "periodic witness fails");
    require(c.power >= 1, "power must be positive");
    const std::size_t r = c.basis.size();
    require(r >= 1 && c.images.size() == r, "basis and images differ in size");
    for (const auto& b : c.basis) require(b.max_generator() < e.rank, "basis word out of range");
    const StallingsGraph g = fold(std::span<const Word>(c.basis));
    require(is_covering(g, e.rank), "basis does not generate a finite-index subgroup");
    require(sg_rank(g) == static_cast<int>(r), "basis is not a free basis");

    Endomorphism phi{e.rank, {}, e.names};
    for (int x = 0; x < e.rank; ++x)
      phi.images.push_back(c.witness.v.inverse() * endo_apply(e, Word::generator(x), c.witness.i) * c.witness.v);
    for (std::size_t l = 0; l < r; ++l) {
      require(c.images[l].max_generator() < static_cast<int>(r), "image word out of range");
      require(endo_apply(phi, c.basis[l], c.power) == substitute(c.images[l], c.basis),
              "image of basis element " + std::to_string(l) + " does not match");
    }
    Presentation l;
    for (std::size_t k = 0; k <= r; ++k) l.generators.push_back("b" + std::to_string(k));
    const Word s = Word::generator(static_cast<int>(r));
    for (std::size_t k = 0; k < r; ++k)
      l.relators.push_back(s * Word::generator(static_cast<int>(k)) * s.inverse() * c.images[k].inverse());
    require(same_presentation(l, c.presentation), "subgroup presentation does not match");
    require(c.inner != nullptr, "missing inner certificate");
    require(!std::holds_alternative<CitedNonLarge>(c.inner->value), "inner certificate does not show largeness");
    check(c.presentation, *c.inner);
  }
};

inline void check(const Presentation& p, const Certificate& cert) { std::visit(Checker{p}, cert.value); }

}  // namespace verify_detail

/// Replay every claim of a certificate against p. Never throws.
inline VerifyResult explain_certificate(const Presentation& p, const Certificate& c) {
  try {
    p.validate();
    verify_detail::check(p, c);
    return {true, {}};
  } catch (const verify_detail::Failure& f) {
    return {false, f.reason};
  } catch (const std::exception& e) {
    return {false, std::string("malformed certificate: ") + e.what()};
  }
}

inline bool verify_certificate(const Presentation& p, const Certificate& c) { return explain_certificate(p, c).ok; }

/// A verdict is consistent when LARGE comes with a verifying certificate that
/// shows largeness and NOT_LARGE_KNOWN with a verifying citation.
inline VerifyResult explain_verdict(const Presentation& p, const Verdict& v) {
  switch (v.status) {
    case Status::large:
      if (!v.certificate) return {false, "LARGE without a certificate"};
      if (std::holds_alternative<CitedNonLarge>(v.certificate->value)) return {false, "LARGE with a non-largeness citation"};
      return explain_certificate(p, *v.certificate);
    case Status::not_large_known:
      if (!v.certificate || !std::holds_alternative<CitedNonLarge>(v.certificate->value))
        return {false, "NOT_LARGE_KNOWN without a citation"};
      return explain_certificate(p, *v.certificate);
    default:
      if (v.certificate) return {false, "UNKNOWN with a certificate"};
      return {true, {}};
  }
}

}  // namespace largeness
