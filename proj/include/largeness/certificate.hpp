#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "largeness/abelian.hpp"
#include "largeness/alexander.hpp"
#include "largeness/coset_table.hpp"
#include "largeness/laurent.hpp"
#include "largeness/presentation.hpp"
#include "largeness/rewrite.hpp"
#include "largeness/torus.hpp"

namespace largeness {

/// Presentation of the stabilizer of coset 0, rewritten and simplified. Both
/// the certifier and the verifier descend subgroup chains through this.
inline Presentation subgroup_presentation(const Presentation& p, const CosetTable& t) {
  return simplify(reidemeister_schreier(p, t).presentation);
}

// Every certificate for a subgroup carries the chain of coset tables leading
// to it from the input group (each table is for the presentation produced by
// the previous step) and the presentation reached at the end.

struct DeficiencyAtLeastTwo {
  std::vector<CosetTable> chain;
  Presentation presentation;
};

struct ProperPowerRelator {
  std::vector<CosetTable> chain;
  Presentation presentation;
  std::size_t relator = 0;
  Word root;
  int exponent = 2;
};

struct AlexanderZero {
  std::vector<CosetTable> chain;
  Presentation presentation;
  Chi chi;
  Field field = Field::rationals();
  PolyMatrix matrix;                 // Alexander matrix, rows = non-pivot generators
  std::vector<LaurentPoly> witness;  // nonzero, witness * matrix = 0
};

/// relator = conjugator [u, v] conjugator^-1 in a deficiency 1 presentation.
struct CommutatorData {
  std::size_t relator = 0;
  Word u, v, conjugator;
};

struct CommutatorBetti {
  std::vector<CosetTable> chain;
  Presentation presentation;
  CommutatorData commutator;
  AbelianInvariants abelianization;
  std::size_t span_rank = 0;  // rank of the images of u, v
};

struct BigFiniteCoverAbelianization {
  std::vector<CosetTable> chain;  // to K, which has the commutator relator
  Presentation presentation;      // K
  CommutatorData commutator;
  std::vector<CosetTable> cover_chain;  // from K down to H
  Presentation cover_presentation;       // H
  AbelianInvariants cover_abelianization;
};

/// Two-generator one-relator x^n y^l x^-n y^-m with |n| > 1 or gcd(l, m) > 1.
struct CitedLarge {
  std::vector<CosetTable> chain;
  Presentation presentation;
  long long n = 0, l = 0, m = 0;
};

struct CitedNonLarge {
  std::string reason;  // "trivial", "cyclic", "Z^2", "BS(1,m)", "BS(l,m) coprime"
  std::vector<long long> parameters;
};

struct Certificate;

/// A finite-index subgroup <Delta, s> of a mapping torus presented as the
/// mapping torus of psi = phi^power restricted to Delta, where
/// phi(x) = v^-1 theta^i(x) v and s = (v^-1 t^i)^power.
struct MappingTorusCover {
  Endomorphism endomorphism;
  PeriodicWitness witness;
  long long power = 1;
  std::vector<Word> basis;             // free basis of Delta, words in F_n
  std::vector<Word> images;            // psi(basis[i]) in basis coordinates
  Presentation presentation;           // < b_1..b_r, s | s b_i s^-1 images[i]^-1 >
  std::shared_ptr<const Certificate> inner;  // largeness of the presentation
};

struct Certificate {
  std::variant<DeficiencyAtLeastTwo, ProperPowerRelator, AlexanderZero, CommutatorBetti, BigFiniteCoverAbelianization,
               CitedLarge, CitedNonLarge, MappingTorusCover>
      value;
};

inline std::string certificate_type(const Certificate& c) {
  static const char* names[] = {"DeficiencyAtLeastTwo",         "ProperPowerRelator", "AlexanderZero",
                                "CommutatorBetti",              "BigFiniteCoverAbelianization",
                                "CitedLarge",                   "CitedNonLarge",      "MappingTorusCover"};
  return names[c.value.index()];
}

enum class Status { large, not_large_known, unknown };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::large:
      return "LARGE";
    case Status::not_large_known:
      return "NOT_LARGE_KNOWN";
    default:
      return "UNKNOWN";
  }
}

struct Verdict {
  Status status = Status::unknown;
  std::optional<Certificate> certificate;
  std::vector<std::string> diagnostics;
};

// ---- JSON ----

using Json = nlohmann::json;

class CertificateFormatError : public std::runtime_error {
 public:
  explicit CertificateFormatError(const std::string& what) : std::runtime_error(what) {}
};

namespace json_detail {

inline Json integer(const Integer& v) {
  if (fits_int64(v)) return to_int64(v);
  return v.str();
}

inline Integer integer_from(const Json& j) {
  if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
  if (j.is_string()) return Integer(j.get<std::string>());
  throw CertificateFormatError("expected an integer");
}

inline Json rational(const Rational& r) {
  if (denominator(r) == 1) return integer(numerator(r));
  return r.str();
}

inline Rational rational_from(const Json& j) {
  if (j.is_string()) return Rational(j.get<std::string>());
  return Rational(integer_from(j));
}

inline Json word(const Word& w, const std::vector<std::string>& names) { return format_word(w, names); }

inline Word word_from(const Json& j, const std::vector<std::string>& names) {
  if (!j.is_string()) throw CertificateFormatError("expected a word");
  auto s = j.get<std::string>();
  if (s == "1") return Word{};
  return parse_word(s, names);
}

inline const Json& at(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw CertificateFormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace json_detail

inline Json to_json(const Presentation& p) {
  Json rel = Json::array();
  for (const auto& r : p.relators) rel.push_back(json_detail::word(r, p.generators));
  return Json{{"generators", p.generators}, {"relators", rel}};
}

inline Presentation presentation_from_json(const Json& j) {
  Presentation p;
  p.generators = json_detail::at(j, "generators").get<std::vector<std::string>>();
  for (const auto& r : json_detail::at(j, "relators")) p.relators.push_back(json_detail::word_from(r, p.generators));
  p.validate();
  return p;
}

inline Json to_json(const CosetTable& t) { return Json{{"degree", t.degree}, {"action", t.action}}; }

inline CosetTable coset_table_from_json(const Json& j) {
  CosetTable t;
  t.degree = json_detail::at(j, "degree").get<int>();
  t.action = json_detail::at(j, "action").get<std::vector<std::vector<int>>>();
  return t;
}

inline Json to_json(const AbelianInvariants& a) {
  Json tor = Json::array();
  for (const auto& d : a.torsion) tor.push_back(json_detail::integer(d));
  return Json{{"betti", a.betti}, {"torsion", tor}};
}

inline AbelianInvariants abelian_from_json(const Json& j) {
  AbelianInvariants a;
  a.betti = json_detail::at(j, "betti").get<int>();
  for (const auto& d : json_detail::at(j, "torsion")) a.torsion.push_back(json_detail::integer_from(d));
  return a;
}

/// [[exponent, coefficient], ...] in increasing exponent.
inline Json to_json(const LaurentPoly& f) {
  Json terms = Json::array();
  for (const auto& [e, c] : f.terms()) terms.push_back(Json::array({e, json_detail::rational(c)}));
  return terms;
}

inline LaurentPoly laurent_from_json(const Json& j, const Field& field) {
  LaurentPoly f(field);
  if (!j.is_array()) throw CertificateFormatError("expected a polynomial");
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2) throw CertificateFormatError("bad polynomial term");
    f.add_term(term[0].get<long long>(), field.reduce(json_detail::rational_from(term[1])));
  }
  return f;
}

inline Json to_json(const Endomorphism& e) {
  auto names = e.generator_names();
  Json im = Json::array();
  for (const auto& w : e.images) im.push_back(json_detail::word(w, names));
  return Json{{"generators", names}, {"images", im}};
}

inline Endomorphism endomorphism_from_json(const Json& j) {
  Endomorphism e;
  e.names = json_detail::at(j, "generators").get<std::vector<std::string>>();
  e.rank = static_cast<int>(e.names.size());
  for (const auto& w : json_detail::at(j, "images")) e.images.push_back(json_detail::word_from(w, e.names));
  e.validate();
  return e;
}

namespace json_detail {

inline Json chain(const std::vector<CosetTable>& c) {
  Json out = Json::array();
  for (const auto& t : c) out.push_back(to_json(t));
  return out;
}

inline std::vector<CosetTable> chain_from(const Json& j) {
  std::vector<CosetTable> out;
  if (!j.is_array()) throw CertificateFormatError("expected a list of coset tables");
  for (const auto& t : j) out.push_back(coset_table_from_json(t));
  return out;
}

inline Json commutator(const CommutatorData& c, const std::vector<std::string>& names) {
  return Json{{"relator", c.relator},
              {"u", word(c.u, names)},
              {"v", word(c.v, names)},
              {"conjugator", word(c.conjugator, names)}};
}

inline CommutatorData commutator_from(const Json& j, const std::vector<std::string>& names) {
  return CommutatorData{at(j, "relator").get<std::size_t>(), word_from(at(j, "u"), names), word_from(at(j, "v"), names),
                        word_from(at(j, "conjugator"), names)};
}

}  // namespace json_detail

Json to_json(const Certificate& c);
Certificate certificate_from_json(const Json& j);

namespace json_detail {

struct Writer {
  Json operator()(const DeficiencyAtLeastTwo& c) const {
    return Json{{"chain", chain(c.chain)}, {"presentation", to_json(c.presentation)}};
  }
  Json operator()(const ProperPowerRelator& c) const {
    return Json{{"chain", chain(c.chain)},
                {"presentation", to_json(c.presentation)},
                {"relator", c.relator},
                {"root", word(c.root, c.presentation.generators)},
                {"exponent", c.exponent}};
  }
  Json operator()(const AlexanderZero& c) const {
    Json chi = Json::array();
    for (const auto& v : c.chi.values) chi.push_back(integer(v));
    Json matrix = Json::array();
    for (const auto& row : c.matrix) {
      Json r = Json::array();
      for (const auto& f : row) r.push_back(to_json(f));
      matrix.push_back(r);
    }
    Json witness = Json::array();
    for (const auto& f : c.witness) witness.push_back(to_json(f));
    return Json{{"chain", chain(c.chain)}, {"presentation", to_json(c.presentation)}, {"chi", chi},
                {"field", c.field.name()}, {"matrix", matrix},                       {"witness", witness}};
  }
  Json operator()(const CommutatorBetti& c) const {
    return Json{{"chain", chain(c.chain)},
                {"presentation", to_json(c.presentation)},
                {"commutator", commutator(c.commutator, c.presentation.generators)},
                {"abelianization", to_json(c.abelianization)},
                {"span_rank", c.span_rank}};
  }
  Json operator()(const BigFiniteCoverAbelianization& c) const {
    return Json{{"chain", chain(c.chain)},
                {"presentation", to_json(c.presentation)},
                {"commutator", commutator(c.commutator, c.presentation.generators)},
                {"cover_chain", chain(c.cover_chain)},
                {"cover_presentation", to_json(c.cover_presentation)},
                {"cover_abelianization", to_json(c.cover_abelianization)}};
  }
  Json operator()(const CitedLarge& c) const {
    return Json{{"chain", chain(c.chain)}, {"presentation", to_json(c.presentation)}, {"n", c.n}, {"l", c.l}, {"m", c.m}};
  }
  Json operator()(const CitedNonLarge& c) const { return Json{{"reason", c.reason}, {"parameters", c.parameters}}; }
  Json operator()(const MappingTorusCover& c) const {
    auto names = c.endomorphism.generator_names();
    std::vector<std::string> bnames(c.presentation.generators.begin(), c.presentation.generators.end() - 1);
    Json basis = Json::array(), images = Json::array();
    for (const auto& b : c.basis) basis.push_back(word(b, names));
    for (const auto& b : c.images) images.push_back(word(b, bnames));
    return Json{{"endomorphism", to_json(c.endomorphism)},
                {"witness",
                 Json{{"w", word(c.witness.w, names)}, {"i", c.witness.i}, {"v", word(c.witness.v, names)}, {"k", c.witness.k}}},
                {"power", c.power},
                {"basis", basis},
                {"images", images},
                {"presentation", to_json(c.presentation)},
                {"inner", c.inner ? to_json(*c.inner) : Json()}};
  }
};

}  // namespace json_detail

inline Json to_json(const Certificate& c) {
  Json j = std::visit(json_detail::Writer{}, c.value);
  j["type"] = certificate_type(c);
  return j;
}

inline Certificate certificate_from_json(const Json& j) {
  using namespace json_detail;
  const std::string type = at(j, "type").get<std::string>();
  auto pres = [&](const char* key = "presentation") { return presentation_from_json(at(j, key)); };
  if (type == "DeficiencyAtLeastTwo") return {DeficiencyAtLeastTwo{chain_from(at(j, "chain")), pres()}};
  if (type == "ProperPowerRelator") {
    ProperPowerRelator c{chain_from(at(j, "chain")), pres(), at(j, "relator").get<std::size_t>(), {}, at(j, "exponent").get<int>()};
    c.root = word_from(at(j, "root"), c.presentation.generators);
    return {c};
  }
  if (type == "AlexanderZero") {
    AlexanderZero c;
    c.chain = chain_from(at(j, "chain"));
    c.presentation = pres();
    for (const auto& v : at(j, "chi")) c.chi.values.push_back(integer_from(v));
    c.field = Field::parse(at(j, "field").get<std::string>());
    for (const auto& row : at(j, "matrix")) {
      std::vector<LaurentPoly> r;
      for (const auto& f : row) r.push_back(laurent_from_json(f, c.field));
      c.matrix.push_back(std::move(r));
    }
    for (const auto& f : at(j, "witness")) c.witness.push_back(laurent_from_json(f, c.field));
    return {c};
  }
  if (type == "CommutatorBetti") {
    CommutatorBetti c;
    c.chain = chain_from(at(j, "chain"));
    c.presentation = pres();
    c.commutator = commutator_from(at(j, "commutator"), c.presentation.generators);
    c.abelianization = abelian_from_json(at(j, "abelianization"));
    c.span_rank = at(j, "span_rank").get<std::size_t>();
    return {c};
  }
  if (type == "BigFiniteCoverAbelianization") {
    BigFiniteCoverAbelianization c;
    c.chain = chain_from(at(j, "chain"));
    c.presentation = pres();
    c.commutator = commutator_from(at(j, "commutator"), c.presentation.generators);
    c.cover_chain = chain_from(at(j, "cover_chain"));
    c.cover_presentation = pres("cover_presentation");
    c.cover_abelianization = abelian_from_json(at(j, "cover_abelianization"));
    return {c};
  }
  if (type == "CitedLarge")
    return {CitedLarge{chain_from(at(j, "chain")), pres(), at(j, "n").get<long long>(), at(j, "l").get<long long>(),
                       at(j, "m").get<long long>()}};
  if (type == "CitedNonLarge")
    return {CitedNonLarge{at(j, "reason").get<std::string>(), at(j, "parameters").get<std::vector<long long>>()}};
  if (type == "MappingTorusCover") {
    MappingTorusCover c;
    c.endomorphism = endomorphism_from_json(at(j, "endomorphism"));
    auto names = c.endomorphism.generator_names();
    const Json& w = at(j, "witness");
    c.witness = PeriodicWitness{word_from(at(w, "w"), names), at(w, "i").get<long long>(), word_from(at(w, "v"), names),
                                at(w, "k").get<long long>()};
    c.power = at(j, "power").get<long long>();
    c.presentation = pres();
    if (c.presentation.generators.empty()) throw CertificateFormatError("empty presentation");
    std::vector<std::string> bnames(c.presentation.generators.begin(), c.presentation.generators.end() - 1);
    for (const auto& b : at(j, "basis")) c.basis.push_back(word_from(b, names));
    for (const auto& b : at(j, "images")) c.images.push_back(word_from(b, bnames));
    if (!at(j, "inner").is_null()) c.inner = std::make_shared<const Certificate>(certificate_from_json(at(j, "inner")));
    return {c};
  }
  throw CertificateFormatError("unknown certificate type '" + type + "'");
}

inline Json to_json(const Verdict& v) {
  return Json{{"status", to_string(v.status)},
              {"certificate", v.certificate ? to_json(*v.certificate) : Json()},
              {"diagnostics", v.diagnostics}};
}

inline Verdict verdict_from_json(const Json& j) {
  Verdict v;
  const auto s = json_detail::at(j, "status").get<std::string>();
  if (s == "LARGE")
    v.status = Status::large;
  else if (s == "NOT_LARGE_KNOWN")
    v.status = Status::not_large_known;
  else if (s == "UNKNOWN")
    v.status = Status::unknown;
  else
    throw CertificateFormatError("unknown status '" + s + "'");
  if (j.contains("certificate") && !j.at("certificate").is_null()) v.certificate = certificate_from_json(j.at("certificate"));
  if (j.contains("diagnostics")) v.diagnostics = j.at("diagnostics").get<std::vector<std::string>>();
  return v;
}

}  // namespace largeness
