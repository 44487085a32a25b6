#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "largeness/certify.hpp"
#include "largeness/stallings.hpp"
#include "largeness/torus.hpp"

namespace largeness {

struct TorusConfig {
  CertifyConfig certify;
  std::size_t whitehead_budget = 10000;
  int pullback_iterations = 1000;
  std::size_t max_word_length = 1000000;  // longest image word built
};

class NotInjective : public std::invalid_argument {
 public:
  NotInjective()
      : std::invalid_argument(
            "endomorphism is not injective; reduce it to an injective endomorphism of a smaller free group first") {}
};

namespace torus_detail {

/// Delta and the data of the subgroup <Delta, s> with s acting as psi = phi^power.
struct Cover {
  Endomorphism phi;
  Word w;  // root of the witness element, first element of the basis
  long long power = 1;
  long long e = 1;  // psi(w) = w^e
  std::vector<Word> basis;
  std::vector<Word> images;
  Presentation presentation;
  std::vector<std::string> notes;
};

inline Word checked(Word w, const TorusConfig& cfg) {
  if (w.size() > cfg.max_word_length)
    throw BoundExceeded("image word longer than " + std::to_string(cfg.max_word_length) + " letters");
  return w;
}

inline long long checked_power(long long k, long long j) {
  long long e = 1;
  for (long long i = 0; i < j; ++i)
    if (__builtin_mul_overflow(e, k, &e)) throw BoundExceeded("exponent k^J does not fit in 64 bits");
  return e;
}

inline Presentation cover_presentation(const std::vector<Word>& images) {
  Presentation l;
  const auto r = images.size();
  for (std::size_t k = 0; k < r; ++k) l.generators.push_back("b" + std::to_string(k + 1));
  l.generators.push_back("s");
  const Word s = Word::generator(static_cast<int>(r));
  for (std::size_t k = 0; k < r; ++k)
    l.relators.push_back(s * Word::generator(static_cast<int>(k)) * s.inverse() * images[k].inverse());
  return l;
}

/// Build <Delta, s>. `avoid_two` doubles the power when psi(w) = w^2, and
/// `even` makes the power even (for k = -1). nullopt when w could not be
/// placed in a free basis of Delta within the budget.
inline std::optional<Cover> build_cover(const Endomorphism& e, const PeriodicWitness& wit, bool even, bool avoid_two,
                                        const TorusConfig& cfg, std::vector<std::string>& diag) {
  Cover c;
  c.phi = Endomorphism{e.rank, {}, e.names};
  for (int x = 0; x < e.rank; ++x)
    c.phi.images.push_back(checked(wit.v.inverse() * checked(endo_apply(e, Word::generator(x), wit.i), cfg) * wit.v, cfg));

  long long k = wit.k;
  c.w = wit.w;
  if (auto pp = is_proper_power(wit.w)) {
    c.w = pp->conjugator * pp->root * pp->conjugator.inverse();
    diag.push_back("witness element is a proper power; using its root " + format_word(c.w, e.generator_names()));
  }
  if (endo_apply(c.phi, c.w) != c.w.pow(k)) throw std::logic_error("phi(w) != w^k after taking the root");

  const StallingsGraph hall = hall_overgroup(c.w, e.rank);
  const Pullback pull = stable_pullback(c.phi, hall, cfg.pullback_iterations);
  diag.push_back("pullback: indices " + [&] {
    std::string s;
    for (auto i : pull.indices) s += (s.empty() ? "" : ",") + std::to_string(i);
    return s;
  }() + ", period " + std::to_string(pull.j));

  c.power = pull.j;
  if (even && c.power % 2 != 0) c.power *= 2;
  c.e = checked_power(k, c.power);
  if (avoid_two && c.e == 2) {
    c.power *= 2;
    c.e = 4;
    diag.push_back("psi(w) = w^2; passing to the index-2 cover so that psi(w) = w^4");
  }

  auto db = basis_with_element(pull.delta, e.rank, c.w, cfg.whitehead_budget);
  if (!db) {
    diag.push_back("w is not known to be primitive in Delta (Whitehead search budget " +
                   std::to_string(cfg.whitehead_budget) + ")");
    return std::nullopt;
  }
  if (db->via_whitehead)
    diag.push_back("w placed in a free basis of Delta by Whitehead moves (" +
                   std::to_string(db->whitehead_applications) + " automorphism applications)");
  c.basis = db->basis;
  for (const auto& b : c.basis) {
    Word img = b;
    for (long long step = 0; step < c.power; ++step) img = checked(endo_apply(c.phi, img), cfg);
    c.images.push_back(db->coordinates(img));
  }
  if (c.images[0] != Word::generator(0).pow(c.e)) throw std::logic_error("psi(w) is not w^e in basis coordinates");
  c.presentation = cover_presentation(c.images);
  return c;
}

inline Verdict wrap(const Endomorphism& e, const PeriodicWitness& wit, const Cover& c, Certificate inner,
                    std::vector<std::string> diag) {
  Verdict v;
  v.status = Status::large;
  MappingTorusCover m;
  m.endomorphism = e;
  m.witness = wit;
  m.power = c.power;
  m.basis = c.basis;
  m.images = c.images;
  m.presentation = c.presentation;
  m.inner = std::make_shared<const Certificate>(std::move(inner));
  v.certificate = Certificate{std::move(m)};
  v.diagnostics = std::move(diag);
  return v;
}

inline void check_inputs(const Endomorphism& e, const PeriodicWitness& wit) {
  e.validate();
  if (!endo_is_injective(e)) throw NotInjective();
  if (!witness_verify(e, wit)) throw std::invalid_argument("periodic witness fails: theta^i(w) != v w^k v^-1");
}

/// Smallest prime factor of |m| below 2^31, if any.
inline std::optional<std::uint64_t> small_prime_factor(long long m) {
  unsigned long long a = m < 0 ? 0ull - static_cast<unsigned long long>(m) : static_cast<unsigned long long>(m);
  if (a < 2) return std::nullopt;
  for (unsigned long long p = 2; p * p <= a && p < (1ull << 31); ++p)
    if (a % p == 0) return p;
  if (a < (1ull << 31)) return a;
  return std::nullopt;
}

}  // namespace torus_detail

/// Periodic witness with k = +-1: the cover has a relator s w s^-1 w^-1 and
/// is handed to the certifier.
inline Verdict torus_zz_pipeline(const Endomorphism& e, const PeriodicWitness& wit, const TorusConfig& cfg = {}) {
  torus_detail::check_inputs(e, wit);
  if (wit.k != 1 && wit.k != -1) throw std::invalid_argument("this pipeline needs k = 1 or k = -1");
  if (e.rank == 1) return certify(mapping_torus(e), cfg.certify);
  std::vector<std::string> diag;
  auto c = torus_detail::build_cover(e, wit, true, false, cfg, diag);
  if (!c) return Verdict{Status::unknown, std::nullopt, diag};
  Verdict inner = certify(c->presentation, cfg.certify);
  if (inner.status == Status::large) return torus_detail::wrap(e, wit, *c, std::move(*inner.certificate), diag);
  diag.push_back("subgroup <Delta, s> of rank " + std::to_string(c->basis.size()) + " + 1 not certified:");
  for (auto& d : inner.diagnostics) diag.push_back("  " + d);
  return Verdict{Status::unknown, std::nullopt, diag};
}

/// Periodic witness with |k| >= 2: the cover has a relator s w s^-1 w^-e, and
/// a character vanishing on s gives a vanishing Alexander polynomial over
/// F_p for p dividing 1 - e.
inline Verdict torus_bs_pipeline(const Endomorphism& e, const PeriodicWitness& wit, const TorusConfig& cfg = {}) {
  torus_detail::check_inputs(e, wit);
  if (wit.k == 1 || wit.k == -1) throw std::invalid_argument("this pipeline needs |k| >= 2");
  if (e.rank == 1) return certify(mapping_torus(e), cfg.certify);
  std::vector<std::string> diag;
  auto c = torus_detail::build_cover(e, wit, false, true, cfg, diag);
  if (!c) return Verdict{Status::unknown, std::nullopt, diag};
  const Presentation& l = c->presentation;
  auto p = torus_detail::small_prime_factor(1 - c->e);
  if (!p) throw BoundExceeded("no prime factor of 1 - e below 2^31");
  const Field field = Field::prime(*p);

  const AbelianInvariants ab = abelianization(l);
  if (ab.betti >= 2) {
    const Word s = Word::generator(l.rank() - 1);
    if (auto chi = character_killing(l, s, s)) {
      AlexMatrix a = alexander_matrix(l, *chi, field);
      if (auto nv = left_null_vector(a.entries, field)) {
        diag.push_back("character vanishing on s; Alexander polynomial zero over " + field.name());
        return torus_detail::wrap(e, wit, *c, Certificate{AlexanderZero{{}, l, *chi, field, a.entries, *nv}}, diag);
      }
    }
  }

  CertifyConfig inner_cfg = cfg.certify;
  if (std::find(inner_cfg.primes.begin(), inner_cfg.primes.end(), *p) == inner_cfg.primes.end())
    inner_cfg.primes.push_back(*p);
  Verdict inner = certify(l, inner_cfg);
  if (inner.status == Status::large) return torus_detail::wrap(e, wit, *c, std::move(*inner.certificate), diag);

  LowIndexOptions opt;
  opt.max_index = cfg.certify.max_index;
  opt.threads = std::max(1u, cfg.certify.threads);
  opt.node_limit = cfg.certify.node_limit;
  std::optional<std::pair<int, int>> big;  // index, betti
  try {
    for (const auto& t : low_index_subgroups(l, opt)) {
      int b = abelianization(subgroup_presentation(l, t)).betti;
      if (b >= 2) {
        big = {t.degree, b};
        break;
      }
    }
  } catch (const BoundExceeded&) {
    diag.push_back("subgroup search hit the node limit");
  }
  if (big)
    diag.push_back("subgroup of index " + std::to_string(big->first) + " with first Betti number " +
                   std::to_string(big->second) + " found, but no certificate");
  else
    diag.push_back("no finite-index subgroup with first Betti number >= 2 found (index <= " +
                   std::to_string(cfg.certify.max_index) + ")");
  return Verdict{Status::unknown, std::nullopt, diag};
}

/// Dispatch on the witness exponent.
inline Verdict torus_pipeline(const Endomorphism& e, const PeriodicWitness& wit, const TorusConfig& cfg = {}) {
  if (wit.k == 1 || wit.k == -1) return torus_zz_pipeline(e, wit, cfg);
  return torus_bs_pipeline(e, wit, cfg);
}

}  // namespace largeness
