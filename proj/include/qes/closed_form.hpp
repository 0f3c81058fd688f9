#pragma once

// Analytic QES spectra and wavefunction shapes for M = 1..4.
//
// Level labels follow the analytic cases:
//   M = 1: "0"
//   M = 2: "+", "-"                       E = 3 +- 2 i zeta - zeta^2  (plus)
//                                         E = 3 +- 2 zeta + zeta^2    (minus)
//   M = 3: "0", "+", "-"                  E_0 = 5 -+ zeta^2,
//                                         E_+- = 7 -+ zeta^2 +- 2 sqrt(1 -+ 4 zeta^2)
//   M = 4 minus: "++", "+-", "-+", "--"   (sigma, tau) of
//                                         E = 11 - 2 sigma zeta + zeta^2 + 4 tau sqrt(1 - sigma zeta + zeta^2)
//   M = 4 plus:  "+,+", "+,-", "-,+", "-,-" (quadratic sign, root sign) of
//                                         (eps + 8)(eps +- 4 i zeta) + 12 zeta^2 = 0, E = eps + 15 - zeta^2
// Square roots use the principal branch; for a negative radicand the two
// signs still give both conjugates, so the multiset is branch independent.

#include <functional>
#include <string>
#include <vector>

#include "qes/model.hpp"

namespace qes {

struct ClosedFormLevel {
    std::string label;
    std::function<complex(double zeta)> energy;
};

struct ClosedFormCase {
    int m = 0;
    Variant variant = Variant::minus;
    std::vector<ClosedFormLevel> levels;
};

// Throws unsupported_m for m outside 1..4.
ClosedFormCase closed_form_case(int m, Variant variant);

// Sorted spectrum of the closed forms. phi coefficients come from the
// analytic wavefunction shapes where those exist (all cases except plus
// M = 4 and the 1/zeta shapes at zeta = 0, which use the gauge operator's
// null vector).
Spectrum closed_form_energies(const PotentialSpec& spec, double tol_real = kDefaultTolReal);

// Unnormalised analytic wavefunction of one level (index into
// closed_form_case(...).levels). `evaluate` computes psi(x) straight from
// the hyperbolic expression; `phi_coeffs` is the polynomial factor
// psi / mu expanded in z = e^{2x} (same proportionality constant).
struct ClosedFormPsi {
    std::string descriptor;
    complex energy;
    std::vector<complex> phi_coeffs;
    std::function<complex(complex x)> evaluate;
};

// Throws unsupported_m (m > 4, or plus M = 4 which has no analytic shape)
// and zeta_zero for the shapes carrying 1/zeta (M = 3 "+"/"-", M = 4 minus).
ClosedFormPsi closed_form_psi(const PotentialSpec& spec, int level_index);

}  // namespace qes
