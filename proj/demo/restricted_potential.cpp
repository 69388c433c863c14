#include "hurwitz/restriction.hpp"

#include <cstdio>

using namespace hurwitz;

int main() {
    const RestrictedPoint p{cplx(0.15, 1.25), {cplx(0.7, 0.2), cplx(-0.4, 0.5), cplx(0.6, -0.3), cplx(0.3, 0.8)},
                            cplx(0.2, -0.5)};

    std::printf("tau = %.3f%+.3fi, C1 = %.3f%+.3fi\n", p.tau.real(), p.tau.imag(), p.C1.real(), p.C1.imag());
    const cplx F = restricted_potential(p);
    std::printf("restricted potential F_R = %.12f%+.12fi\n\n", F.real(), F.imag());

    // A few structure constants from residues of lambda, next to the closed forms.
    const auto rc = restricted_constants(p);
    const int shown[][3] = {{0, 0, 2}, {0, 0, 0}, {1, 1, 4}, {4, 4, 5}, {0, 1, 5}, {5, 5, 5}};
    std::printf("%-14s %-34s %-34s\n", "c(x,y,z)", "residue sum", "closed form");
    for (const auto& s : shown) {
        const cplx a = rc.residue[std::size_t(s[0])][std::size_t(s[1])][std::size_t(s[2])];
        const cplx b = rc.closed_form[std::size_t(s[0])][std::size_t(s[1])][std::size_t(s[2])];
        char name[32];
        std::snprintf(name, sizeof name, "c(%s,%s,%s)", restricted_name(s[0]), restricted_name(s[1]),
                      restricted_name(s[2]));
        std::printf("%-14s %+.12f%+.12fi %+.12f%+.12fi\n", name, a.real(), a.imag(), b.real(), b.imag());
    }

    const auto th = theorem_check(p);
    std::printf("\nGW third derivatives compared: %zu, max discrepancy %.3e\n", th.entries.size(), th.max_discrepancy);
    return th.max_discrepancy < 1e-6 ? 0 : 1;
}
