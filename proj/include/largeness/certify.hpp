#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "largeness/abelian.hpp"
#include "largeness/alexander.hpp"
#include "largeness/certificate.hpp"
#include "largeness/classify.hpp"
#include "largeness/low_index.hpp"
#include "largeness/parallel.hpp"
#include "largeness/rewrite.hpp"

namespace largeness {

struct CertifyConfig {
  int max_index = 8;
  int chi_height = 3;
  std::vector<std::uint64_t> primes{2, 3, 5, 7};
  int budget = 2;                    // levels of nested low-index search
  unsigned threads = 1;
  std::size_t chi_limit = 256;       // characters tried per presentation
  std::size_t node_limit = 2000000;  // per low-index search

  void validate() const {
    if (max_index < 1 || chi_height < 1 || budget < 0 || chi_limit < 1)
      throw std::invalid_argument("numeric bounds must be positive");
    for (auto p : primes)
      if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  }
};

/// Coefficient vectors in [-height, height]^dim with coprime entries and first
/// nonzero entry positive, ordered by max |c| and then lexicographically.
inline std::vector<std::vector<long long>> primitive_vectors(std::size_t dim, int height, std::size_t limit) {
  std::vector<std::vector<long long>> out;
  for (int h = 1; h <= height && out.size() < limit; ++h) {
    std::vector<long long> c(dim, -h);
    while (true) {
      long long top = 0, g = 0;
      for (auto x : c) {
        top = std::max(top, std::llabs(x));
        g = std::gcd(g, x);
      }
      auto lead = std::find_if(c.begin(), c.end(), [](long long x) { return x != 0; });
      if (top == h && g == 1 && lead != c.end() && *lead > 0) {
        out.push_back(c);
        if (out.size() >= limit) break;
      }
      std::size_t k = dim;
      while (k > 0 && c[k - 1] == h) c[--k] = -h;
      if (k == 0) break;
      ++c[k - 1];
    }
  }
  return out;
}

/// A surjection onto Z killing u and v, when their images span a subgroup of
/// infinite index in ab(G).
inline std::optional<Chi> character_killing(const Presentation& p, const Word& u, const Word& v) {
  std::vector<Chi> basis;
  try {
    basis = hom_to_Z_basis(p);
  } catch (const NoSurjectionToZ&) {
    return std::nullopt;
  }
  IntMatrix m(2, basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    m(0, j) = basis[j](u);
    m(1, j) = basis[j](v);
  }
  auto snf = smith_normal_form(m);
  if (snf.rank() >= basis.size()) return std::nullopt;
  Chi chi{std::vector<Integer>(static_cast<std::size_t>(p.rank()))};
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t g = 0; g < chi.values.size(); ++g) chi.values[g] += snf.V(j, snf.rank()) * basis[j].values[g];
  Integer c = chi.content();
  for (auto& x : chi.values) x /= c;
  return chi;
}

namespace certify_detail {

struct Anchor {
  std::vector<CosetTable> chain;
  Presentation presentation;
  CommutatorData commutator;
};

struct Node {
  Presentation presentation;
  std::vector<CosetTable> chain;
  std::optional<Anchor> anchor;
  std::vector<CosetTable> since_anchor;
};

inline std::vector<CosetTable> extend(std::vector<CosetTable> chain, const CosetTable& t) {
  chain.push_back(t);
  return chain;
}

struct CheapResult {
  std::optional<Certificate> certificate;
  std::optional<Anchor> new_anchor;  // commutator relator whose words span a finite-index subgroup
  std::string route;
};

/// Routes needing no search: deficiency, proper powers, commutator relators,
/// and an anchored cover with abelianization other than Z^2.
inline CheapResult cheap_routes(const Node& n) {
  const Presentation& q = n.presentation;
  CheapResult r;
  if (q.deficiency() >= 2) {
    r.certificate = Certificate{DeficiencyAtLeastTwo{n.chain, q}};
    r.route = "deficiency";
    return r;
  }
  if (q.deficiency() < 1) return r;
  for (std::size_t i = 0; i < q.relators.size(); ++i)
    if (auto pp = is_proper_power(q.relators[i])) {
      r.certificate = Certificate{ProperPowerRelator{n.chain, q, i, pp->root, pp->exponent}};
      r.route = "proper power";
      return r;
    }
  if (q.deficiency() != 1) return r;
  std::optional<AbelianInvariants> ab;
  for (std::size_t i = 0; i < q.relators.size(); ++i) {
    auto c = is_commutator(q.relators[i]);
    if (c.decision != Decision::yes) continue;
    CommutatorData data{i, c.witness->u, c.witness->v, c.witness->conjugator};
    if (!ab) ab = abelianization(q);
    const std::vector<Word> uv{data.u, data.v};
    const std::size_t span = image_span_rank(q, uv).rank;
    if (span < static_cast<std::size_t>(ab->betti) || (ab->betti == 2 && !ab->torsion.empty())) {
      r.certificate = Certificate{CommutatorBetti{n.chain, q, data, *ab, span}};
      r.route = "commutator";
      return r;
    }
    if (!r.new_anchor) r.new_anchor = Anchor{n.chain, q, data};
  }
  if (n.anchor && !n.since_anchor.empty()) {
    if (!ab) ab = abelianization(q);
    if (!ab->is_free_rank_two()) {
      r.certificate = Certificate{BigFiniteCoverAbelianization{n.anchor->chain, n.anchor->presentation,
                                                               n.anchor->commutator, n.since_anchor, q, *ab}};
      r.route = "finite cover of a commutator presentation";
    }
  }
  return r;
}

struct SweepResult {
  std::optional<Certificate> certificate;
  std::size_t characters = 0;
  bool truncated = false;
};

inline SweepResult chi_sweep(const Node& n, const CertifyConfig& cfg) {
  SweepResult r;
  const Presentation& q = n.presentation;
  std::vector<Chi> basis;
  try {
    basis = hom_to_Z_basis(q);
  } catch (const NoSurjectionToZ&) {
    return r;
  }
  std::vector<Field> fields{Field::rationals()};
  for (auto p : cfg.primes) fields.push_back(Field::prime(p));
  auto coeffs = primitive_vectors(basis.size(), cfg.chi_height, cfg.chi_limit + 1);
  if (coeffs.size() > cfg.chi_limit) {
    coeffs.resize(cfg.chi_limit);
    r.truncated = true;
  }
  for (const auto& c : coeffs) {
    Chi chi{std::vector<Integer>(static_cast<std::size_t>(q.rank()))};
    for (std::size_t j = 0; j < basis.size(); ++j)
      for (std::size_t g = 0; g < chi.values.size(); ++g) chi.values[g] += c[j] * basis[j].values[g];
    ++r.characters;
    for (const auto& f : fields) {
      AlexMatrix a = alexander_matrix(q, chi, f);
      if (a.entries.empty()) break;
      auto v = left_null_vector(a.entries, f);
      if (!v) continue;
      r.certificate = Certificate{AlexanderZero{n.chain, q, chi, f, std::move(a.entries), std::move(*v)}};
      return r;
    }
  }
  return r;
}

struct Outcome {
  std::optional<Certificate> certificate;
  std::size_t subgroups = 0;
  bool bound_hit = false;
};

class Search {
 public:
  explicit Search(const CertifyConfig& cfg) : cfg_(cfg) {}

  /// All routes on one presentation; diagnostics only at the top level.
  Outcome run(Node n, int budget, int max_index, unsigned threads, std::vector<std::string>* diag) const {
    Outcome out;
    auto note = [&](const std::string& s) {
      if (diag) diag->push_back(s);
    };
    CheapResult cheap = cheap_routes(n);
    if (cheap.certificate) {
      out.certificate = std::move(cheap.certificate);
      return out;
    }
    if (cheap.new_anchor) {
      n.anchor = cheap.new_anchor;
      n.since_anchor.clear();
      note("commutator relator found; its words span a finite-index subgroup of ab(G) = Z^2");
    } else {
      note("no deficiency, proper-power or commutator conclusion");
    }

    SweepResult sweep = chi_sweep(n, cfg_);
    if (sweep.certificate) {
      out.certificate = std::move(sweep.certificate);
      return out;
    }
    note("character sweep: " + std::to_string(sweep.characters) + " characters of height <= " +
         std::to_string(cfg_.chi_height) + " over " + fields_name() + ", none with vanishing Alexander polynomial" +
         (sweep.truncated ? " (stopped at the character limit)" : ""));

    if (budget < 1 || max_index < 2) {
      note("subgroup search: not attempted (budget or index bound exhausted)");
      return out;
    }
    // index bounds 4, 8, 16, ... up to max_index; each stage handles the
    // subgroups not seen before, cheap checks first, then the recursion
    std::size_t nested = 0;
    bool hit = false;
    int low = 1;
    while (low < max_index) {
      const int high = std::min(max_index, std::max(4, 2 * low));
      LowIndexOptions opt;
      opt.max_index = high;
      opt.min_index = low + 1;
      opt.threads = threads;
      opt.node_limit = cfg_.node_limit;
      std::vector<CosetTable> tables;
      try {
        tables = low_index_subgroups(n.presentation, opt);
      } catch (const BoundExceeded&) {
        out.bound_hit = true;
        note("subgroup search: node limit " + std::to_string(cfg_.node_limit) + " exceeded at index <= " +
             std::to_string(high));
        break;
      }
      out.subgroups += tables.size();

      std::vector<Node> covers;
      const std::size_t quick_batch = 64 * static_cast<std::size_t>(threads);
      for (std::size_t first = 0; first < tables.size(); first += quick_batch) {
        const std::size_t count = std::min(quick_batch, tables.size() - first);
        auto part = parallel_map(count, threads, [&](std::size_t i) {
          const CosetTable& t = tables[first + i];
          std::pair<Node, std::optional<Certificate>> r;
          Node& c = r.first;
          c.presentation = subgroup_presentation(n.presentation, t);
          c.chain = extend(n.chain, t);
          c.anchor = n.anchor;
          if (n.anchor) c.since_anchor = extend(n.since_anchor, t);
          r.second = cheap_routes(c).certificate;
          return r;
        });
        for (auto& [c, cert] : part) {
          if (cert) {
            out.certificate = std::move(cert);
            return out;
          }
          covers.push_back(std::move(c));
        }
      }

      const std::size_t batch = 2 * static_cast<std::size_t>(threads);
      for (std::size_t first = 0; first < covers.size(); first += batch) {
        const std::size_t count = std::min(batch, covers.size() - first);
        auto deep = parallel_map(count, threads, [&](std::size_t i) {
          return run(covers[first + i], budget - 1, max_index / tables[first + i].degree, 1, nullptr);
        });
        for (auto& d : deep) {
          nested += d.subgroups;
          hit = hit || d.bound_hit;
          if (d.certificate) {
            out.certificate = std::move(d.certificate);
            return out;
          }
        }
      }
      low = high;
    }
    out.bound_hit = out.bound_hit || hit;
    note("subgroup search: " + std::to_string(out.subgroups) + " subgroup classes of index 2.." +
         std::to_string(low) + ", " + std::to_string(nested) + " more in nested searches (budget " +
         std::to_string(budget) + "), none certified" + (hit ? "; a nested search hit the node limit" : ""));
    return out;
  }

 private:
  std::string fields_name() const {
    std::string s = "Q";
    for (auto p : cfg_.primes) s += ",F" + std::to_string(p);
    return s;
  }

  const CertifyConfig& cfg_;
};

inline std::size_t certificate_depth(const Certificate& c) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BigFiniteCoverAbelianization>)
          return x.chain.size() + x.cover_chain.size();
        else if constexpr (requires { x.chain; })
          return x.chain.size();
        else
          return 0;
      },
      c.value);
}

inline bool has_commutator_relator(const Presentation& q) {
  if (q.deficiency() != 1) return false;
  for (const auto& r : q.relators)
    if (is_commutator(r).decision == Decision::yes) return true;
  return false;
}

}  // namespace certify_detail

/// Decide largeness by the routes in order: deficiency at least 2, small
/// shapes, proper-power relators, commutator relators, the character sweep
/// and the low-index sweep with recursion.
inline Verdict certify(const Presentation& p, const CertifyConfig& cfg = {}) {
  cfg.validate();
  p.validate();
  Verdict v;
  if (p.deficiency() >= 2) {
    v.status = Status::large;
    v.certificate = Certificate{DeficiencyAtLeastTwo{{}, p}};
    return v;
  }
  const Presentation q = simplify(p);
  v.diagnostics.push_back("deficiency " + std::to_string(q.deficiency()) + " after simplification (" +
                          std::to_string(q.rank()) + " generators, " + std::to_string(q.relators.size()) +
                          (q.relators.size() == 1 ? " relator)" : " relators)"));

  Classification cl = classify_presentation(q);
  if (cl.kind == Classification::Kind::not_large) {
    v.status = Status::not_large_known;
    v.certificate = Certificate{CitedNonLarge{cl.reason, cl.parameters}};
    return v;
  }
  std::optional<Certificate> cited;
  if (cl.kind == Classification::Kind::large) {
    cited = Certificate{CitedLarge{{}, q, cl.shape->n, cl.shape->l, cl.shape->m}};
    v.diagnostics.push_back("relator has the shape x^n y^l x^-n y^-m of a known large group; looking for a replayable route");
  }

  certify_detail::Search search(cfg);
  certify_detail::Node root{q, {}, std::nullopt, {}};
  const unsigned threads = std::max(1u, cfg.threads);
  // iterative deepening on the budget: shallow certificates are found before
  // any nested search starts
  certify_detail::Outcome out;
  for (int b = 0; b <= cfg.budget && !out.certificate; ++b)
    out = search.run(root, b, cfg.max_index, threads, b == cfg.budget ? &v.diagnostics : nullptr);
  if (out.certificate) {
    v.status = Status::large;
    v.certificate = std::move(out.certificate);
    v.diagnostics = {"certified by " + certificate_type(*v.certificate) + " at subgroup depth " +
                     std::to_string(certify_detail::certificate_depth(*v.certificate))};
    return v;
  }
  if (cited) {
    v.status = Status::large;
    v.certificate = std::move(cited);
    return v;
  }
  v.status = Status::unknown;
  if (certify_detail::has_commutator_relator(q))
    v.diagnostics.push_back(
        "deficiency 1 with a commutator relator: the group is Z x Z, or NARA with abelianization Z x Z, or large");
  return v;
}

}  // namespace largeness
