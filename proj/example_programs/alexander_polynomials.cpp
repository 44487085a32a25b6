// Alexander polynomials of a few one-relator groups.
#include <iostream>

#include "largeness/largeness.hpp"

int main() {
  using namespace largeness;
  struct Case {
    const char* name;
    const char* text;
  };
  const Case cases[] = {
      {"trefoil", "<x, y | x y x y^-1 x^-1 y^-1>"},
      {"figure eight", "<x, y | y x y^-1 x y x^-1 y^-1 x y^-1 x^-1>"},
      {"BS(1,2)", "<x, y | x y x^-1 y^-2>"},
  };
  for (const auto& c : cases) {
    Presentation p = parse_presentation(c.text);
    auto basis = hom_to_Z_basis(p);
    if (basis.size() != 1) continue;
    for (auto field : {Field::rationals(), Field::prime(2), Field::prime(3)})
      std::cout << c.name << " over " << field.name() << ": " << alexander_polynomial(p, basis[0], field).to_string()
                << "\n";
  }
}
