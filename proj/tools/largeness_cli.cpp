#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "largeness/largeness.hpp"

namespace fs = std::filesystem;
using namespace largeness;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// drop '#' comment lines
std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t");
    if (first != std::string::npos && line[first] == '#') continue;
    out += line + "\n";
  }
  return out;
}

/// Inline presentation when the argument contains '<', otherwise a file path.
Presentation load_presentation(const std::string& arg) {
  if (arg.find('<') != std::string::npos) return parse_presentation(arg);
  return parse_presentation(strip_comments(read_file(arg)));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

long long to_int(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    throw InputError("bad integer for " + what + ": '" + s + "'");
  }
  if (used != s.size()) throw InputError("bad integer for " + what + ": '" + s + "'");
  return v;
}

Word witness_word(std::string s, const std::vector<std::string>& names) {
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t") + 1);
  if (s.empty() || s == "1") return {};
  return parse_word(s, names);
}

PeriodicWitness parse_witness(const std::string& text, const Endomorphism& e) {
  auto parts = split(text, ',');
  if (parts.size() != 4) throw InputError("witness must be w,i,v,k");
  auto names = e.generator_names();
  return PeriodicWitness{witness_word(parts[0], names), to_int(parts[1], "i"), witness_word(parts[2], names),
                         to_int(parts[3], "k")};
}

// YAML-like rendering for --format text
void render_text(const Json& j, std::ostream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      if (v.is_structured() && !v.empty()) {
        out << pad << k << ":\n";
        render_text(v, out, indent + 2);
      } else {
        out << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    bool flat = std::none_of(j.begin(), j.end(), [](const Json& x) { return x.is_structured(); });
    if (flat) {
      out << pad << j.dump() << "\n";
      return;
    }
    for (const auto& v : j) {
      out << pad << "-\n";
      render_text(v, out, indent + 2);
    }
  } else {
    out << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

struct Options {
  std::string input;
  std::string format = "json";
  unsigned threads = 1;
  int max_index = 8;
  int chi_height = 3;
  std::string primes = "2,3,5,7";
  int budget = 2;
  std::size_t chi_limit = 256;
  std::size_t node_limit = 2000000;
  std::string chi;
  std::string field = "Q";
  int index_class = 0;
  std::string endo;
  std::string witness;
  bool run_certify = false;
  std::string cert;
  std::string corpus = "corpus";
};

CertifyConfig certify_config(const Options& o) {
  CertifyConfig c;
  c.max_index = o.max_index;
  c.chi_height = o.chi_height;
  c.primes.clear();
  if (!o.primes.empty())
    for (const auto& s : split(o.primes, ',')) {
      long long v = to_int(s, "--primes");
      if (v < 2) throw InputError(s + " is not prime");
      c.primes.push_back(static_cast<std::uint64_t>(v));
    }
  c.budget = o.budget;
  c.threads = std::max(1u, o.threads);
  c.chi_limit = o.chi_limit;
  c.node_limit = o.node_limit;
  c.validate();
  return c;
}

Json config_json(const CertifyConfig& c) {
  return Json{{"max_index", c.max_index}, {"chi_height", c.chi_height}, {"primes", c.primes},
              {"budget", c.budget},       {"chi_limit", c.chi_limit},   {"node_limit", c.node_limit}};
}

Json verdict_document(const Presentation& p, const CertifyConfig& c, const Verdict& v) {
  Json doc = to_json(v);
  doc["presentation"] = to_json(p);
  doc["config"] = config_json(c);
  return doc;
}

Json cmd_ab(const Options& o) {
  auto p = load_presentation(o.input);
  auto ab = abelianization(p);
  Json doc = to_json(ab);
  doc["presentation"] = to_json(p);
  return doc;
}

Json cmd_alex(const Options& o) {
  auto p = load_presentation(o.input);
  const Field field = Field::parse(o.field);
  Chi chi;
  if (o.chi.empty()) {
    auto basis = hom_to_Z_basis(p);
    if (basis.size() != 1) throw InputError("--chi is required unless the first Betti number is 1");
    chi = basis[0];
  } else {
    for (const auto& s : split(o.chi, ',')) chi.values.push_back(Integer(to_int(s, "--chi")));
  }
  if (static_cast<int>(chi.values.size()) != p.rank())
    throw InputError("--chi needs one value per generator (" + std::to_string(p.rank()) + ")");
  if (!is_surjective_character(p, chi)) throw InputError("--chi is not a surjective homomorphism onto Z");
  LaurentPoly f = alexander_polynomial(p, chi, field);
  Json c = Json::array();
  for (const auto& v : chi.values) c.push_back(json_detail::integer(v));
  return Json{{"presentation", to_json(p)}, {"chi", c},           {"field", field.name()},
              {"polynomial", f.to_string()}, {"terms", to_json(f)}, {"zero", f.is_zero()}};
}

Json cmd_subgroups(const Options& o) {
  auto p = load_presentation(o.input);
  if (o.max_index < 1) throw InputError("--max-index must be positive");
  LowIndexOptions opt;
  opt.max_index = o.max_index;
  opt.threads = std::max(1u, o.threads);
  opt.node_limit = o.node_limit;
  Json classes = Json::array();
  int k = 0;
  for (const auto& t : low_index_subgroups(p, opt)) {
    auto rw = reidemeister_schreier(p, t);
    classes.push_back(Json{{"class", ++k},
                           {"index", t.degree},
                           {"conjugates", conjugacy_class_size(t)},
                           {"table", to_json(t)},
                           {"abelianization", to_json(abelianization(rw.presentation))}});
  }
  return Json{{"presentation", to_json(p)}, {"max_index", o.max_index}, {"classes", classes}};
}

Json cmd_rewrite(const Options& o) {
  auto p = load_presentation(o.input);
  LowIndexOptions opt;
  opt.max_index = o.max_index;
  opt.threads = std::max(1u, o.threads);
  opt.node_limit = o.node_limit;
  auto tables = low_index_subgroups(p, opt);
  if (o.index_class < 1 || o.index_class > static_cast<int>(tables.size()))
    throw InputError("--index-class must be between 1 and " + std::to_string(tables.size()));
  const CosetTable& t = tables[static_cast<std::size_t>(o.index_class - 1)];
  auto rw = reidemeister_schreier(p, t);
  Json gens = Json::array();
  for (std::size_t i = 0; i < rw.in_parent.size(); ++i)
    gens.push_back(Json{{"name", rw.presentation.generators[i]}, {"word", format_word(rw.in_parent[i], p.generators)}});
  Json transversal = Json::array();
  for (const auto& w : rw.transversal.rep) transversal.push_back(format_word(w, p.generators));
  return Json{{"presentation", to_json(p)},
              {"class", o.index_class},
              {"index", t.degree},
              {"table", to_json(t)},
              {"transversal", transversal},
              {"generators", gens},
              {"rewritten", to_json(rw.presentation)},
              {"simplified", to_json(simplify(rw.presentation))}};
}

Json cmd_certify(const Options& o) {
  auto p = load_presentation(o.input);
  auto cfg = certify_config(o);
  return verdict_document(p, cfg, certify(p, cfg));
}

Json cmd_torus(const Options& o) {
  Endomorphism e = parse_endomorphism(strip_comments(read_file(o.endo)));
  e.validate();
  const Presentation p = mapping_torus(e);
  if (!o.run_certify) {
    Json doc{{"endomorphism", to_json(e)}, {"presentation", to_json(p)}, {"injective", endo_is_injective(e)}};
    if (!o.witness.empty()) doc["witness_valid"] = witness_verify(e, parse_witness(o.witness, e));
    return doc;
  }
  if (o.witness.empty()) throw InputError("--certify needs --witness w,i,v,k");
  TorusConfig tc;
  tc.certify = certify_config(o);
  return verdict_document(p, tc.certify, torus_pipeline(e, parse_witness(o.witness, e), tc));
}

Json cmd_verify(const Options& o) {
  Json doc;
  try {
    doc = Json::parse(read_file(o.cert));
  } catch (const Json::parse_error& err) {
    throw InputError(std::string("certificate file is not JSON: ") + err.what());
  }
  Presentation p;
  if (!o.input.empty())
    p = load_presentation(o.input);
  else if (doc.is_object() && doc.contains("presentation"))
    p = presentation_from_json(doc.at("presentation"));
  else
    throw InputError("no presentation given and none in the certificate file");

  VerifyResult r;
  try {
    if (doc.contains("status"))
      r = explain_verdict(p, verdict_from_json(doc));
    else if (doc.contains("type"))
      r = explain_certificate(p, certificate_from_json(doc));
    else
      r = {false, "document holds neither a verdict nor a certificate"};
  } catch (const std::exception& err) {
    r = {false, std::string("malformed certificate: ") + err.what()};
  }
  Json out{{"result", r.ok}};
  if (!r.ok) out["reason"] = r.reason;
  return out;
}

Json cmd_batch(const Options& o) {
  if (!fs::is_directory(o.corpus)) throw InputError("no corpus directory " + o.corpus);
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(o.corpus))
    if (entry.path().extension() == ".pres") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  auto cfg = certify_config(o);
  Json results = Json::array();
  bool all = true;
  for (const auto& f : files) {
    auto p = load_presentation(f.string());
    Verdict v = certify(p, cfg);
    auto check = explain_verdict(p, v);
    Json r{{"name", f.stem().string()}, {"status", to_string(v.status)}, {"verified", check.ok}};
    if (v.certificate) r["certificate"] = certificate_type(*v.certificate);
    fs::path side = f;
    side.replace_extension(".expected");
    bool match = check.ok;
    if (fs::exists(side)) {
      std::istringstream in(read_file(side.string()));
      std::string expected;
      in >> expected;
      r["expected"] = expected;
      match = match && expected == to_string(v.status);
    }
    r["match"] = match;
    all = all && match;
    std::cerr << f.filename().string() << ": " << to_string(v.status) << (match ? "" : "  (mismatch)") << "\n";
    results.push_back(std::move(r));
  }
  return Json{{"corpus", fs::path(o.corpus).filename().string()}, {"results", results}, {"all_match", all}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Largeness certificates for finitely presented groups"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "text"}));

  auto input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "inline presentation '<gens | rels>' or a file ('-' for stdin)")->required();
  };
  auto bounds = [&](CLI::App* sub) {
    sub->add_option("--max-index", o.max_index, "largest subgroup index searched");
    sub->add_option("--chi-height", o.chi_height, "largest character coefficient in the sweep");
    sub->add_option("--primes", o.primes, "comma-separated primes for the sweep");
    sub->add_option("--budget", o.budget, "levels of nested subgroup search");
    sub->add_option("--chi-limit", o.chi_limit, "characters tried per presentation");
    sub->add_option("--node-limit", o.node_limit, "search nodes per subgroup enumeration");
  };

  auto* ab = app.add_subcommand("ab", "abelianization");
  input(ab);
  auto* alex = app.add_subcommand("alex", "Alexander polynomial for a character");
  input(alex);
  alex->add_option("--chi", o.chi, "character values v1,v2,...");
  alex->add_option("--field", o.field, "Q or Fp");
  auto* subgroups = app.add_subcommand("subgroups", "conjugacy classes of low-index subgroups");
  input(subgroups);
  subgroups->add_option("--max-index", o.max_index)->required();
  subgroups->add_option("--node-limit", o.node_limit);
  auto* rewrite = app.add_subcommand("rewrite", "presentation of one low-index subgroup");
  input(rewrite);
  rewrite->add_option("--index-class", o.index_class, "class number as listed by subgroups")->required();
  rewrite->add_option("--max-index", o.max_index);
  rewrite->add_option("--node-limit", o.node_limit);
  auto* cert = app.add_subcommand("certify", "decide largeness and emit a certificate");
  input(cert);
  bounds(cert);
  auto* torus = app.add_subcommand("torus", "mapping torus of a free group endomorphism");
  torus->add_option("--endo", o.endo, "endomorphism file")->required();
  torus->add_option("--witness", o.witness, "periodic witness w,i,v,k");
  torus->add_flag("--certify", o.run_certify, "run the certification pipeline");
  bounds(torus);
  auto* verify = app.add_subcommand("verify", "replay a certificate");
  verify->add_option("--cert", o.cert, "certificate or verdict JSON")->required();
  verify->add_option("input", o.input, "presentation (defaults to the one in the file)");
  auto* batch = app.add_subcommand("batch", "certify every .pres file of a corpus");
  batch->add_option("corpus", o.corpus, "corpus directory");
  bounds(batch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    Json doc;
    if (*ab) doc = cmd_ab(o);
    else if (*alex) doc = cmd_alex(o);
    else if (*subgroups) doc = cmd_subgroups(o);
    else if (*rewrite) doc = cmd_rewrite(o);
    else if (*cert) doc = cmd_certify(o);
    else if (*torus) doc = cmd_torus(o);
    else if (*verify) doc = cmd_verify(o);
    else doc = cmd_batch(o);
    if (o.format == "text")
      render_text(doc, std::cout, 0);
    else
      std::cout << doc.dump(2) << "\n";
    return 0;
  } catch (const BoundExceeded& e) {
    std::cerr << "resource bound exceeded: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
