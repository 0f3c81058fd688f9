#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "qes/model.hpp"

namespace qes {

struct AberthOptions {
    int max_iterations = 500;
    // A root estimate z is accepted once |p(z)| <= residual_tol * sum_k |c_k| |z|^k,
    // i.e. its backward error is at the rounding level of the evaluation...
    double residual_tol = 4.0 * std::numeric_limits<double>::epsilon();
    // ... or once the Aberth correction falls below step_tol * max(1, |z|).
    double step_tol = 4.0 * std::numeric_limits<double>::epsilon();
    // ... or once a correction below stall_tol * max(1, |z|) fails to shrink.
    double stall_tol = 1e-10;
};

struct AberthResult {
    std::vector<complex> roots;
    int iterations = 0;
    double max_residual = 0.0;  // max_k |p(z_k)| / sum_j |c_j| |z_k|^j
};

// Evaluates p(E) = sum_k coeffs[k] E^k together with p'(E) by Horner;
// magnitude = sum_k |coeffs[k]| |E|^k bounds the rounding error of value.
struct PolyValue {
    complex value;
    complex derivative;
    double magnitude = 0.0;
};
PolyValue horner(std::span<const complex> coeffs, complex E);

// All roots of the polynomial with coefficients coeffs[k] of E^k by
// Aberth-Ehrlich simultaneous iteration. Initial guesses lie on a circle of
// radius 1 + max|coeff / lead| (Cauchy bound) about the root centroid,
// rotated off the real axis so conjugate-symmetric inputs do not stall.
// Throws non_convergence when the residual target is not reached within
// max_iterations.
AberthResult aberth_roots(std::span<const complex> coeffs, const AberthOptions& options = {});

// Same iteration for a polynomial known only through an evaluator (value,
// derivative and rounding magnitude), starting from the given estimates.
// The evaluator must describe a polynomial of degree initial.size().
using PolyEvaluator = std::function<PolyValue(complex)>;
AberthResult aberth_roots(const PolyEvaluator& eval, std::vector<complex> initial,
                          const AberthOptions& options = {});

// degree points on a circle about centre, offset from the real axis.
std::vector<complex> circle_guesses(std::size_t degree, complex centre, double radius);

}  // namespace qes
