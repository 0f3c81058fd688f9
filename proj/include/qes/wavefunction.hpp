#pragma once

// psi(x) = mu(z) phi(z), z = e^{2x}, with the gauge factor
//   mu(z) = z^{(1-M)/2} exp((i zeta / 4)(z +- 1/z))
// and the Schroedinger residual r = -psi'' + V psi - E psi evaluated with
// analytic derivatives (d/dx = 2z d/dz through mu and phi).

#include <span>
#include <vector>

#include "qes/model.hpp"

namespace qes {

struct GaugeWavefunction {
    PotentialSpec spec;
    complex energy;
    std::vector<complex> phi_coeffs;
};

GaugeWavefunction make_wavefunction(const PotentialSpec& spec, const QesLevel& level);

// Principal branch for the half-integer power. Throws domain_error at z = 0.
complex gauge_factor(const PotentialSpec& spec, complex z);

// For |Re x| > 20 the value is assembled from its logarithm so that the
// individual factors do not overflow.
complex eval_psi(const GaugeWavefunction& wf, complex x);

struct PsiDerivatives {
    complex psi;
    complex d1;
    complex d2;
};
PsiDerivatives eval_psi_derivatives(const GaugeWavefunction& wf, complex x);

// (-d^2/dx^2 + V)(mu phi) at x for an arbitrary coefficient vector.
complex hamiltonian_action(const PotentialSpec& spec, std::span<const complex> phi_coeffs, complex x);

enum class ResidualMode { analytic, finite_difference };

// r(x) = -psi'' + (V - E) psi.
// analytic: max over samples of ode_residual_at, psi'' by the chain rule.
// finite_difference: 5-point stencil with step h, returning
// max |r| / max(|E psi|, |psi''|) with both maxima over the samples.
double ode_residual(const GaugeWavefunction& wf, std::span<const double> x_samples,
                    ResidualMode mode = ResidualMode::analytic, double h = 1e-3);

// |r(x)| / s(x) with s(x) = max(sum_n |c_n (psi_n)''|, |E| sum_n |c_n psi_n|),
// psi_n = mu z^n: the sizes of psi'' and E psi before cancellation between
// monomials. Finite at nodes of psi. A global max(|E psi|, |psi''|) would be
// dominated by the tails, where |psi''| ~ |V psi|, and could not see an
// energy error of 1e-3.
double ode_residual_at(const GaugeWavefunction& wf, double x);

// 33 Chebyshev nodes on [-3, 3], ascending.
std::vector<double> default_samples();
std::vector<double> chebyshev_samples(int count, double lo, double hi);

enum class PtPhase { unbroken, broken, indeterminate };

struct PtCheckResult {
    PtPhase phase = PtPhase::indeterminate;
    double theta = 0.0;          // fitted global phase of conj(psi(-x)) = e^{i theta} psi(x)
    double max_deviation = 0.0;  // relative to max |psi| over the samples
};

// Minus variant only (throws variant_mismatch otherwise). indeterminate
// when the energy is not real or psi vanishes on every sample.
PtCheckResult psi_pt_check(const GaugeWavefunction& wf, std::span<const double> x_samples,
                           double tol = 1e-8, double tol_real = kDefaultTolReal);

}  // namespace qes
