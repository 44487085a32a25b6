#pragma once

#include <cctype>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "largeness/word.hpp"

namespace largeness {

struct Presentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;

  int rank() const { return static_cast<int>(generators.size()); }
  long deficiency() const { return static_cast<long>(generators.size()) - static_cast<long>(relators.size()); }

  void validate() const {
    for (std::size_t i = 0; i < generators.size(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (generators[i] == generators[j]) throw std::invalid_argument("duplicate generator name " + generators[i]);
    for (const Word& r : relators)
      if (r.max_generator() >= rank()) throw std::invalid_argument("relator uses a generator outside the presentation");
  }

  bool operator==(const Presentation&) const = default;
};

inline std::vector<std::string> numbered_names(std::string_view prefix, int count, int first = 1) {
  std::vector<std::string> names;
  for (int i = 0; i < count; ++i) names.push_back(std::string(prefix) + std::to_string(first + i));
  return names;
}

/// Renders w in the input grammar, grouping runs into powers: "x^2 y x^-2".
inline std::string format_word(const Word& w, std::span<const std::string> names) {
  if (w.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    auto g = static_cast<std::size_t>(generator_of(w[i]));
    long long e = static_cast<long long>(j - i) * sign_of(w[i]);
    if (!out.empty()) out += ' ';
    out += g < names.size() ? names[g] : "?" + std::to_string(g);
    if (e != 1) out += "^" + std::to_string(e);
    i = j;
  }
  return out;
}

inline std::string to_string(const Presentation& p) {
  std::string out = "< ";
  for (std::size_t i = 0; i < p.generators.size(); ++i) out += (i ? ", " : "") + p.generators[i];
  out += " | ";
  for (std::size_t i = 0; i < p.relators.size(); ++i) out += (i ? ", " : "") + format_word(p.relators[i], p.generators);
  out += p.relators.empty() ? ">" : " >";
  return out;
}

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Presentation presentation() {
    Presentation p;
    expect('<');
    skip_space();
    if (peek() != '|') {
      while (true) {
        skip_space();
        auto start = pos_;
        std::string name = identifier();
        if (index_.count(name)) fail("duplicate generator name '" + name + "'", start);
        index_[name] = static_cast<int>(p.generators.size());
        p.generators.push_back(name);
        skip_space();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect('|');
    skip_space();
    if (peek() != '>') {
      while (true) {
        p.relators.push_back(relator(",>"));
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
    }
    expect('>');
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input", pos_);
    return p;
  }

  void set_names(std::span<const std::string> names) {
    for (std::size_t i = 0; i < names.size(); ++i) index_[names[i]] = static_cast<int>(i);
  }

  // A relator, optionally "u = v" (stored as u v^-1), ended by one of `stops`
  // or end of input.
  Word relator(std::string_view stops) {
    skip_space();
    auto start = pos_;
    std::vector<Letter> lhs = word(stops);
    if (peek() == '=') {
      ++pos_;
      std::vector<Letter> rhs = word(stops);
      Word r = Word(lhs) * Word(rhs).inverse();
      if (lhs.empty() && rhs.empty()) fail("empty relator", start);
      return r;
    }
    if (lhs.empty()) fail("empty relator", start);
    return Word(lhs);
  }

  Word whole_word() {
    skip_space();
    std::vector<Letter> letters = word("");
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'", pos_);
    return Word(letters);
  }

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(what, line, col);
  }

 private:
  std::vector<Letter> word(std::string_view stops) {
    std::vector<Letter> letters;
    while (true) {
      skip_space();
      char c = peek();
      if (c == '\0' || c == '=' || stops.find(c) != std::string_view::npos) break;
      auto start = pos_;
      std::vector<Letter> factor;
      bool group = c == '(' || c == '[';
      if (c == '(') {
        ++pos_;
        factor = word(")");
        expect(')');
      } else if (c == '[') {
        ++pos_;
        Word u(word(","));
        expect(',');
        Word v(word("]"));
        expect(']');
        factor = commutator(u, v).letters();
      }
      std::string name = group ? std::string() : identifier();
      skip_space();
      long long exponent = 1;
      bool has_exponent = false;
      if (peek() == '^') {
        ++pos_;
        skip_space();
        exponent = integer();
        has_exponent = true;
      }
      if (!group) factor = resolve(name, start, has_exponent);
      for (long long k = 0; k < (exponent < 0 ? -exponent : exponent); ++k) {
        if (exponent > 0) {
          letters.insert(letters.end(), factor.begin(), factor.end());
        } else {
          for (auto it = factor.rbegin(); it != factor.rend(); ++it) letters.push_back(-*it);
        }
      }
    }
    return letters;
  }

  std::vector<Letter> resolve(const std::string& name, std::size_t at, bool has_exponent) const {
    if (auto it = index_.find(name); it != index_.end()) return {make_letter(it->second, 1)};
    auto single = [&](char c) -> std::optional<Letter> {
      std::string s(1, c);
      if (auto it = index_.find(s); it != index_.end()) return make_letter(it->second, 1);
      if (std::isupper(static_cast<unsigned char>(c))) {
        std::string lower(1, static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (auto it = index_.find(lower); it != index_.end()) return make_letter(it->second, -1);
      }
      return std::nullopt;
    };
    // Juxtaposed single-letter generators such as "abAB".
    std::vector<Letter> out;
    for (char c : name) {
      auto l = single(c);
      if (!l) fail("unknown generator '" + name + "'", at);
      out.push_back(*l);
    }
    if (out.size() > 1 && has_exponent) fail("exponent on a multi-letter token '" + name + "' is ambiguous", at);
    return out;
  }

  std::string identifier() {
    auto start = pos_;
    if (!std::isalpha(static_cast<unsigned char>(peek()))) fail("expected a generator name", pos_);
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  long long integer() {
    auto start = pos_;
    bool negative = false;
    if (peek() == '-' || peek() == '+') {
      negative = peek() == '-';
      ++pos_;
    }
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected an integer exponent", start);
    long long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1'000'000) fail("exponent too large", start);
      ++pos_;
    }
    return negative ? -v : v;
  }

  void expect(char c) {
    skip_space();
    if (peek() != c) fail(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::unordered_map<std::string, int> index_;
};

}  // namespace detail

/// Parses `< a, b | a b a^-1 b^-1, ... >`.
inline Presentation parse_presentation(std::string_view text) {
  return detail::Parser(text).presentation();
}

/// Parses a single word over the given generator names; an empty string is the identity.
inline Word parse_word(std::string_view text, std::span<const std::string> names) {
  detail::Parser parser(text);
  parser.set_names(names);
  return parser.whole_word();
}

}  // namespace largeness
