// Characteristic polynomials of the Lame operator on its invariant spaces and
// exact real-root counts at a few moduli.
#include <iostream>

#include "qes/quad_extension.hpp"

int main() {
    using namespace qes;
    for (int n = 1; n <= 3; ++n) {
        const QuadSpace s = lame_space(n, param_a());
        const Spectrum sp = algebraic_spectrum(lame_pullback(n, param_a()), s);
        std::cout << "n = " << n << ", N = " << lame_N(n) << ", dim " << s.dimension() << "\n";
        std::cout << "  det(E - H) = " << sp.charpoly.to_string("E") << "   (a = k^2)\n";
        for (const char *k2 : {"1/4", "1/2", "3/4"}) {
            RootCount rc = real_roots_at(sp.charpoly, Rational::parse(k2));
            std::cout << "  k^2 = " << k2 << ": " << rc.real_distinct << " distinct real roots of " << rc.degree
                      << (rc.squarefree ? ", squarefree" : "") << "\n";
        }
    }
}
