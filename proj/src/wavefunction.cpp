#include "qes/wavefunction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qes/errors.hpp"

namespace qes {

namespace {

constexpr complex kI{0.0, 1.0};

// mu'/mu and its z-derivative.
struct GaugeLog {
    complex l;
    complex dl;
};

GaugeLog gauge_log_derivative(const PotentialSpec& spec, complex z) {
    const double s = variant_sign(spec.variant);
    const double half = 0.5 * (1 - spec.m);
    const complex z2 = z * z;
    return {half / z + 0.25 * kI * spec.zeta * (1.0 - s / z2),
            -half / z2 + s * 0.5 * kI * spec.zeta / (z2 * z)};
}

// Per-monomial pieces at one point, all divided by mu(z).
struct MonomialTerms {
    complex value;   // z^n
    complex second;  // (mu z^n)'' / mu, x-derivatives
};

std::vector<MonomialTerms> monomial_terms(const PotentialSpec& spec, std::size_t count, complex x) {
    const complex z = std::exp(2.0 * x);
    const auto [l, dl] = gauge_log_derivative(spec, z);
    std::vector<MonomialTerms> out(count);
    complex zn{1.0};  // z^n
    for (std::size_t n = 0; n < count; ++n) {
        const double dn = static_cast<double>(n);
        const complex d1 = dn * zn / z + l * zn;                                            // (z^n)' + L z^n
        const complex d2 = dn * (dn - 1.0) * zn / (z * z) + 2.0 * l * dn * zn / z + (dl + l * l) * zn;
        out[n] = {zn, 4.0 * z * d1 + 4.0 * z * z * d2};
        zn *= z;
    }
    return out;
}

complex poly_eval(std::span<const complex> c, complex z) {
    complex acc{};
    for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
    return acc;
}

}  // namespace

GaugeWavefunction make_wavefunction(const PotentialSpec& spec, const QesLevel& level) {
    return {spec, level.energy, level.phi_coeffs};
}

complex gauge_factor(const PotentialSpec& spec, complex z) {
    if (z == complex{}) throw domain_error("gauge_factor: z = 0 is outside the domain");
    const double s = variant_sign(spec.variant);
    return std::pow(z, 0.5 * (1 - spec.m)) * std::exp(0.25 * kI * spec.zeta * (z + s / z));
}

complex eval_psi(const GaugeWavefunction& wf, complex x) {
    if (std::abs(x.real()) <= 20.0) {
        const complex z = std::exp(2.0 * x);
        return gauge_factor(wf.spec, z) * poly_eval(wf.phi_coeffs, z);
    }
    // log psi = (1-M) x + (i zeta/4)(e^{2x} +- e^{-2x}) + 2kx + log(sum_n c_n e^{2(n-k)x}),
    // with k the top (Re x > 0) or bottom nonzero index.
    const auto& c = wf.phi_coeffs;
    std::size_t lo = 0, hi = c.size();
    while (lo < c.size() && c[lo] == complex{}) ++lo;
    while (hi > lo && c[hi - 1] == complex{}) --hi;
    if (lo == hi) return {};
    const std::size_t k = x.real() > 0 ? hi - 1 : lo;
    complex reduced{};
    for (std::size_t n = lo; n < hi; ++n) {
        reduced += c[n] * std::exp(2.0 * (static_cast<double>(n) - static_cast<double>(k)) * x);
    }
    const double s = variant_sign(wf.spec.variant);
    const complex log_mu = static_cast<double>(1 - wf.spec.m) * x +
                           0.25 * kI * wf.spec.zeta * (std::exp(2.0 * x) + s * std::exp(-2.0 * x));
    return std::exp(log_mu + 2.0 * static_cast<double>(k) * x + std::log(reduced));
}

PsiDerivatives eval_psi_derivatives(const GaugeWavefunction& wf, complex x) {
    const complex z = std::exp(2.0 * x);
    const complex mu = gauge_factor(wf.spec, z);
    const auto [l, dl] = gauge_log_derivative(wf.spec, z);
    complex phi{}, dphi{}, d2phi{};
    for (std::size_t k = wf.phi_coeffs.size(); k-- > 0;) {
        d2phi = d2phi * z + 2.0 * dphi;
        dphi = dphi * z + phi;
        phi = phi * z + wf.phi_coeffs[k];
    }
    const complex first = dphi + l * phi;
    const complex second = d2phi + 2.0 * l * dphi + (dl + l * l) * phi;
    return {mu * phi, mu * 2.0 * z * first, mu * (4.0 * z * first + 4.0 * z * z * second)};
}

complex hamiltonian_action(const PotentialSpec& spec, std::span<const complex> phi_coeffs, complex x) {
    const complex v = eval_potential(spec, x);
    const auto terms = monomial_terms(spec, phi_coeffs.size(), x);
    complex acc{};
    for (std::size_t n = 0; n < phi_coeffs.size(); ++n) acc += phi_coeffs[n] * (-terms[n].second + v * terms[n].value);
    return gauge_factor(spec, std::exp(2.0 * x)) * acc;
}

double ode_residual_at(const GaugeWavefunction& wf, double x) {
    const complex v = eval_potential(wf.spec, x);
    const auto terms = monomial_terms(wf.spec, wf.phi_coeffs.size(), x);
    complex r{};
    double s_second = 0.0, s_value = 0.0;
    for (std::size_t n = 0; n < wf.phi_coeffs.size(); ++n) {
        const complex c = wf.phi_coeffs[n];
        r += c * (-terms[n].second + (v - wf.energy) * terms[n].value);
        s_second += std::abs(c * terms[n].second);
        s_value += std::abs(c * terms[n].value);
    }
    // Common factor |mu| cancels.
    const double scale = std::max(s_second, std::abs(wf.energy) * s_value);
    if (!(scale > 0.0)) return 0.0;
    return std::abs(r) / scale;
}

double ode_residual(const GaugeWavefunction& wf, std::span<const double> x_samples, ResidualMode mode, double h) {
    if (x_samples.empty()) throw std::invalid_argument("ode_residual: empty sample list");
    if (mode == ResidualMode::analytic) {
        double worst = 0.0;
        for (double x : x_samples) worst = std::max(worst, ode_residual_at(wf, x));
        return worst;
    }
    double worst_r = 0.0, scale = 0.0;
    for (double x : x_samples) {
        const complex p0 = eval_psi(wf, x);
        const complex d2 = (-eval_psi(wf, x + 2 * h) + 16.0 * eval_psi(wf, x + h) - 30.0 * p0 +
                            16.0 * eval_psi(wf, x - h) - eval_psi(wf, x - 2 * h)) /
                           (12.0 * h * h);
        const complex r = -d2 + (eval_potential(wf.spec, x) - wf.energy) * p0;
        worst_r = std::max(worst_r, std::abs(r));
        scale = std::max({scale, std::abs(wf.energy * p0), std::abs(d2)});
    }
    return scale > 0.0 ? worst_r / scale : 0.0;
}

std::vector<double> chebyshev_samples(int count, double lo, double hi) {
    if (count < 1) throw std::invalid_argument("chebyshev_samples: count must be >= 1");
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(count));
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (int k = count - 1; k >= 0; --k) {
        xs.push_back(mid + half * std::cos((2.0 * k + 1.0) * std::numbers::pi / (2.0 * count)));
    }
    return xs;
}

std::vector<double> default_samples() { return chebyshev_samples(33, -3.0, 3.0); }

PtCheckResult psi_pt_check(const GaugeWavefunction& wf, std::span<const double> x_samples, double tol,
                           double tol_real) {
    if (wf.spec.variant != Variant::minus) {
        throw variant_mismatch("psi_pt_check: PT symmetry applies to the minus variant only");
    }
    PtCheckResult result;
    if (x_samples.empty() || classify(wf.energy, tol_real) != Reality::real) return result;

    std::vector<complex> direct, mirrored;
    double largest = 0.0;
    std::size_t anchor = 0;
    for (std::size_t k = 0; k < x_samples.size(); ++k) {
        direct.push_back(eval_psi(wf, x_samples[k]));
        mirrored.push_back(std::conj(eval_psi(wf, -x_samples[k])));
        if (std::abs(direct[k]) > largest) {
            largest = std::abs(direct[k]);
            anchor = k;
        }
    }
    if (!(largest > 0.0) || !std::isfinite(largest)) return result;

    const complex phase = mirrored[anchor] / direct[anchor];
    result.theta = std::arg(phase);
    const complex unit = std::polar(1.0, result.theta);
    for (std::size_t k = 0; k < x_samples.size(); ++k) {
        result.max_deviation = std::max(result.max_deviation, std::abs(mirrored[k] - unit * direct[k]) / largest);
    }
    result.phase = result.max_deviation <= tol ? PtPhase::unbroken : PtPhase::broken;
    return result;
}

}  // namespace qes
