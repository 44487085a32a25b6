// Mapping torus of x -> x, y -> y x with the periodic witness (x, 1, 1, 1).
#include <iostream>

#include "largeness/largeness.hpp"

int main() {
  using namespace largeness;
  Endomorphism e = parse_endomorphism("x -> x\ny -> y x");
  PeriodicWitness wit{Word::generator(0), 1, Word{}, 1};
  Verdict v = torus_pipeline(e, wit);
  Presentation g = mapping_torus(e);
  std::cout << to_string(g) << "\n" << to_string(v.status) << "\n";
  for (const auto& d : v.diagnostics) std::cout << "  " << d << "\n";
  std::cout << to_json(v).dump(2) << "\n";
  return explain_verdict(g, v).ok ? 0 : 1;
}
