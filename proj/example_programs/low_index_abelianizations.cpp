// Abelianizations of the low-index subgroups of a presentation.
#include <iostream>

#include "largeness/largeness.hpp"

int main(int argc, char** argv) {
  using namespace largeness;
  Presentation p = parse_presentation(argc > 1 ? argv[1] : "<a, b | a^-1 a^-1 b^-1 a^-1 b a b^-1 a b>");
  const int max_index = argc > 2 ? std::stoi(argv[2]) : 6;
  for (const auto& t : low_index_subgroups(p, max_index)) {
    AbelianInvariants ab = abelianization(reidemeister_schreier(p, t).presentation);
    std::cout << "index " << t.degree << ": Z^" << ab.betti;
    for (const auto& d : ab.torsion) std::cout << " x Z/" << d;
    std::cout << "\n";
  }
}
