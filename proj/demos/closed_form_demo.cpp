// Closed-form first angular spectrum of the 2x2 rotation normal form across
// the skewness boundary, plus the two 3D-map limits extracted from its
// Jacobian at the fixed point.

#include <cstdio>

#include "angular/models.hpp"
#include "angular/normalform.hpp"

using namespace angular;

int main() {
    std::printf("A(rho,phi) closed forms:\n");
    for (double rho : {1.0, 0.6, 0.2}) {
        NormalFormParams params{rho, Angle::radians(1.0)};
        ClosedFormResult r = sigma1_closed_form(params);
        std::printf("  rho=%.1f phi=1.0  sk=%.3f  %-18s [%.8f, %.8f]\n", rho, skewness(params),
                    to_string(r.case_label), r.spectrum.min(), r.spectrum.max());
    }
    NormalFormParams resonant{0.2, Angle::pi_fraction(1, 4)};
    ClosedFormResult r = sigma1_closed_form(resonant);
    std::printf("  rho=0.2 phi=pi/4 sk=%.3f  %-18s [%.8f, %.8f]\n", skewness(resonant),
                to_string(r.case_label), r.spectrum.min(), r.spectrum.max());

    Mat df = henon_jacobian({}, henon_fixed_point({}).point);
    MixedReduction red = mixed_from_matrix(df);
    ClosedFormResult s1 = sigma1_closed_form(red.params.normal);
    ClosedFormResult s2 = sigma2_mixed(red.params);
    std::printf("3D map limits: sigma_1 point %.8f, sigma_2 point %.8f\n", s1.spectrum.max(),
                s2.spectrum.max());
    return 0;
}
