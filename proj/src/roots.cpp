#include "qes/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qes/errors.hpp"

namespace qes {

PolyValue horner(std::span<const complex> coeffs, complex E) {
    complex p{}, dp{};
    double mag = 0.0;
    const double r = std::abs(E);
    for (std::size_t k = coeffs.size(); k-- > 0;) {
        dp = dp * E + p;
        p = p * E + coeffs[k];
        mag = mag * r + std::abs(coeffs[k]);
    }
    return {p, dp, mag};
}

std::vector<complex> circle_guesses(std::size_t degree, complex centre, double radius) {
    std::vector<complex> z(degree);
    for (std::size_t k = 0; k < degree; ++k) {
        const double angle =
            2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(degree) + 0.4;
        z[k] = centre + radius * std::polar(1.0, angle);
    }
    return z;
}

AberthResult aberth_roots(const PolyEvaluator& eval, std::vector<complex> z, const AberthOptions& options) {
    const std::size_t degree = z.size();
    AberthResult result;
    std::vector<bool> done(degree, false);
    std::vector<double> last(degree, std::numeric_limits<double>::infinity());
    for (int iter = 1; iter <= options.max_iterations && degree > 0; ++iter) {
        result.iterations = iter;
        bool active = false;
        for (std::size_t k = 0; k < degree; ++k) {
            if (done[k]) continue;
            const auto [p, dp, mag] = eval(z[k]);
            if (std::abs(p) <= options.residual_tol * mag) {
                done[k] = true;
                continue;
            }
            active = true;
            const complex ratio = p / dp;
            complex repulsion{};
            for (std::size_t j = 0; j < degree; ++j) {
                if (j != k) repulsion += 1.0 / (z[k] - z[j]);
            }
            const complex step = ratio / (1.0 - ratio * repulsion);
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
            z[k] -= step;
            const double size = std::abs(step), scale = std::max(1.0, std::abs(z[k]));
            // Rounding level reached, or the correction has stopped shrinking
            // once it is small: the evaluation noise floor.
            if (size <= options.step_tol * scale || (size <= options.stall_tol * scale && size >= 0.9 * last[k])) {
                done[k] = true;
            }
            last[k] = size;
        }
        if (!active) break;
    }

    for (const auto& root : z) {
        const auto v = eval(root);
        result.max_residual = std::max(result.max_residual, std::abs(v.value) / v.magnitude);
    }
    result.roots = std::move(z);
    if (!std::all_of(done.begin(), done.end(), [](bool d) { return d; })) {
        throw non_convergence("aberth_roots: residual target not reached after " +
                              std::to_string(options.max_iterations) + " iterations (degree " +
                              std::to_string(degree) + ")");
    }
    return result;
}

AberthResult aberth_roots(std::span<const complex> coeffs, const AberthOptions& options) {
    std::size_t size = coeffs.size();
    while (size > 0 && coeffs[size - 1] == complex{}) --size;
    if (size == 0) throw std::invalid_argument("aberth_roots: zero polynomial");
    const std::size_t degree = size - 1;
    if (degree == 0) return {};

    std::vector<complex> monic(size);
    for (std::size_t k = 0; k < size; ++k) monic[k] = coeffs[k] / coeffs[degree];

    double cauchy = 0.0;
    for (std::size_t k = 0; k < degree; ++k) cauchy = std::max(cauchy, std::abs(monic[k]));
    const complex centre = -monic[degree - 1] / static_cast<double>(degree);
    return aberth_roots([&monic](complex E) { return horner(monic, E); },
                        circle_guesses(degree, centre, 1.0 + cauchy), options);
}

}  // namespace qes
