// Certify a presentation given on the command line and replay the result.
#include <iostream>

#include "largeness/largeness.hpp"

int main(int argc, char** argv) {
  using namespace largeness;
  const char* text = argc > 1 ? argv[1] : "<x, y | [x^2, y]>";
  Presentation p = parse_presentation(text);
  Verdict v = certify(p);
  std::cout << to_string(p) << "\n" << to_string(v.status);
  if (v.certificate) std::cout << " via " << certificate_type(*v.certificate);
  std::cout << "\n";
  for (const auto& d : v.diagnostics) std::cout << "  " << d << "\n";
  auto check = explain_verdict(p, v);
  std::cout << "replayed: " << (check.ok ? "ok" : check.reason) << "\n";
  return check.ok ? 0 : 1;
}
