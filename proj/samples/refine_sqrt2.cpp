// Refines the two real roots of x^2 - 2 to 100 bits, once from isolating
// intervals found by Descartes isolation and once for a polynomial whose
// coefficient sqrt(2) is only known through approximations.
#include <aqir/aqir.hpp>

#include <iostream>

int main() {
    using namespace aqir;

    const Polynomial f = Polynomial::from_integers({-2, 0, 1});
    RunConfig config;
    config.L = 100;
    const RefinementResult r = refine_all(f, isolate_roots(f), config);
    for (const RootInterval& iv : r.intervals) {
        std::cout << to_decimal(iv.a.to_rational(), 32, DecimalRounding::down) << " < root < "
                  << to_decimal(iv.b.to_rational(), 32, DecimalRounding::up) << '\n';
    }

    // x^2 - sqrt(2) x: roots 0 and sqrt(2)
    const Polynomial g = Polynomial::from_coefficients({0, Coefficient::sqrt(2, -1), 1});
    const std::vector<DyadicInterval> intervals{{Dyadic(-1), Dyadic(1)}, {Dyadic(1), Dyadic(2)}};
    const RefinementResult s = refine_all(g, intervals, config);
    std::cout << "bitstream root: " << to_decimal(s.intervals[1].a.to_rational(), 32) << '\n';
    return 0;
}
