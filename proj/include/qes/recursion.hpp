#pragma once

// Three-term recursion for the energy polynomials R_n(E):
//
//   R_{n+1} = (E - b_n) R_n - a_n R_{n-1},   R_0 = 1, R_{-1} = 0
//   a_n = -+ 4 n (M - n) zeta^2
//   b_n = 4 n (M - 1 - n) + 2M - 1 -+ zeta^2
//
// (upper sign: plus variant). a_M vanishes, so R_M divides every R_{M+n}
// and its M roots are the QES energies.

#include <functional>
#include <span>
#include <vector>

#include "qes/model.hpp"

namespace qes {

// Coefficients in E, index k multiplies E^k.
struct EnergyPolynomial {
    std::vector<complex> coeffs;

    int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
    complex operator()(complex E) const;
};

EnergyPolynomial operator*(const EnergyPolynomial& lhs, const EnergyPolynomial& rhs);

struct RecursionCoeffs {
    std::function<double(int)> a;
    std::function<double(int)> b;
};

RecursionCoeffs recursion_coeffs(const PotentialSpec& spec);

// R_0..R_{n_max}. The overload taking explicit coefficients exists so
// callers can drive the recursion with modified coefficient functions.
std::vector<EnergyPolynomial> build_R(const PotentialSpec& spec, int n_max);
std::vector<EnergyPolynomial> build_R(const RecursionCoeffs& coeffs, int n_max);

// Rbar_0..Rbar_{n_max}: the same recursion with coefficients shifted by M,
// Rbar_{n+1} = (E - b_{M+n}) Rbar_n - a_{M+n} Rbar_{n-1}, Rbar_0 = 1.
std::vector<EnergyPolynomial> build_R_bar(const PotentialSpec& spec, int n_max);

// R_n(E) and dR_n/dE evaluated directly through the recursion, without
// expanding coefficients.
struct RecursionValue {
    complex value;
    complex derivative;
    double magnitude = 0.0;  // rounding scale of value
    complex second;          // d^2 R_n / dE^2
};
RecursionValue eval_R(const RecursionCoeffs& coeffs, int n, complex E);

// Roots of R_M(E) = 0 (Aberth-Ehrlich and Newton polishing, both on eval_R).
// Coalescing pairs (exceptional points) are replaced by the root of R_M'
// between them, which double precision resolves far better than either.
// Levels carry phi_from_R coefficients; at zeta = 0 the recursion
// decouples and the levels are the b_n with unit phi vectors.
Spectrum qes_energies_recursion(const PotentialSpec& spec, double tol_real = kDefaultTolReal);

// max_n ||R_{M+n} - R_M Rbar_n||_inf / (largest coefficient involved).
double factorization_check(const PotentialSpec& spec, int n_extra);

// c_n = R_n(E)/n! * (+-1/(2 i zeta))^n for n = 0..M-1, normalised so the
// highest nonzero coefficient is 1. Throws zeta_zero at zeta == 0 and
// not_an_eigenvalue when |R_M(E)| > 1e-8 * (rounding scale of R_M(E)).
std::vector<complex> phi_from_R(const PotentialSpec& spec, complex energy);

}  // namespace qes
