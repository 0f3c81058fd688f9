#include "qes/closed_form.hpp"

#include <cmath>
#include <string>

#include "qes/errors.hpp"
#include "qes/gauge_matrix.hpp"

namespace qes {

namespace {

constexpr complex kI{0.0, 1.0};

complex csqrt(double radicand) { return std::sqrt(complex(radicand, 0.0)); }

// Roots of eps^2 + (8 + 4 i s zeta) eps + 4 i s zeta * 8 + 12 zeta^2 = 0.
complex plus_m4_energy(double zeta, double quad_sign, double root_sign) {
    const complex shift = 4.0 * kI * quad_sign * zeta;
    const complex b = 8.0 + shift;
    const complex c = 8.0 * shift + 12.0 * zeta * zeta;
    const complex disc = std::sqrt(b * b - 4.0 * c);
    const complex eps = 0.5 * (-b + root_sign * disc);
    return eps + 15.0 - zeta * zeta;
}

std::vector<complex> convolve(const std::vector<complex>& a, const std::vector<complex>& b) {
    std::vector<complex> out(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

void require_nonzero_zeta(double zeta, const char* what) {
    if (zeta == 0.0) throw zeta_zero(std::string("closed_form_psi: shape ") + what + " contains 1/zeta");
}

}  // namespace

ClosedFormCase closed_form_case(int m, Variant variant) {
    ClosedFormCase c{m, variant, {}};
    const double s = variant_sign(variant);
    switch (m) {
        case 1:
            c.levels.push_back({"0", [s](double z) { return complex(1.0 - s * z * z); }});
            break;
        case 2:
            for (double pm : {1.0, -1.0}) {
                const std::string label = pm > 0 ? "+" : "-";
                if (variant == Variant::plus) {
                    c.levels.push_back({label, [pm](double z) { return 3.0 + pm * 2.0 * kI * z - z * z; }});
                } else {
                    c.levels.push_back({label, [pm](double z) { return complex(3.0 + pm * 2.0 * z + z * z); }});
                }
            }
            break;
        case 3:
            c.levels.push_back({"0", [s](double z) { return complex(5.0 - s * z * z); }});
            for (double pm : {1.0, -1.0}) {
                c.levels.push_back({pm > 0 ? "+" : "-", [s, pm](double z) {
                                        return 7.0 - s * z * z + pm * 2.0 * csqrt(1.0 - s * 4.0 * z * z);
                                    }});
            }
            break;
        case 4:
            for (double sigma : {1.0, -1.0}) {
                for (double tau : {1.0, -1.0}) {
                    if (variant == Variant::minus) {
                        const std::string label = std::string(sigma > 0 ? "+" : "-") + (tau > 0 ? "+" : "-");
                        c.levels.push_back({label, [sigma, tau](double z) {
                                                return 11.0 - 2.0 * sigma * z + z * z +
                                                       4.0 * tau * csqrt(1.0 - sigma * z + z * z);
                                            }});
                    } else {
                        const std::string label =
                            std::string(sigma > 0 ? "+" : "-") + "," + (tau > 0 ? "+" : "-");
                        c.levels.push_back(
                            {label, [sigma, tau](double z) { return plus_m4_energy(z, sigma, tau); }});
                    }
                }
            }
            break;
        default:
            throw unsupported_m("closed forms exist for M = 1..4 only, got M = " + std::to_string(m));
    }
    return c;
}

ClosedFormPsi closed_form_psi(const PotentialSpec& spec, int level_index) {
    validate(spec);
    const auto cf = closed_form_case(spec.m, spec.variant);
    if (level_index < 0 || level_index >= static_cast<int>(cf.levels.size())) {
        throw std::out_of_range("closed_form_psi: level index out of range");
    }
    const double zeta = spec.zeta;
    const bool plus = spec.variant == Variant::plus;
    const complex energy = cf.levels[static_cast<std::size_t>(level_index)].energy(zeta);
    const std::string& label = cf.levels[static_cast<std::size_t>(level_index)].label;

    // Common gauge exponential e^{(i zeta / 2) cosh 2x} or e^{(i zeta / 2) sinh 2x}.
    auto gauge = [zeta, plus](complex x) {
        const complex h = plus ? std::cosh(2.0 * x) : std::sinh(2.0 * x);
        return std::exp(0.5 * kI * zeta * h);
    };
    const std::string g = plus ? "exp(i zeta/2 cosh 2x)" : "exp(i zeta/2 sinh 2x)";

    ClosedFormPsi out;
    out.energy = energy;
    switch (spec.m) {
        case 1:
            out.descriptor = g;
            out.phi_coeffs = {1.0};
            out.evaluate = gauge;
            break;
        case 2: {
            const double pm = label == "+" ? 1.0 : -1.0;
            const complex k = plus ? complex(pm) : pm * kI;
            out.descriptor = g + " (e^-x " + (pm > 0 ? "+ " : "- ") + (plus ? "" : "i ") + "e^x)";
            out.phi_coeffs = {1.0, k};
            out.evaluate = [gauge, k](complex x) { return gauge(x) * (std::exp(-x) + k * std::exp(x)); };
            break;
        }
        case 3: {
            if (label == "0") {
                if (plus) {
                    out.descriptor = g + " sinh 2x";
                    out.phi_coeffs = {-0.5, 0.0, 0.5};
                    out.evaluate = [gauge](complex x) { return gauge(x) * std::sinh(2.0 * x); };
                } else {
                    out.descriptor = g + " cosh 2x";
                    out.phi_coeffs = {0.5, 0.0, 0.5};
                    out.evaluate = [gauge](complex x) { return gauge(x) * std::cosh(2.0 * x); };
                }
                break;
            }
            require_nonzero_zeta(zeta, "M=3 +-");
            const double pm = label == "+" ? 1.0 : -1.0;
            const complex root = csqrt(1.0 - variant_sign(spec.variant) * 4.0 * zeta * zeta);
            const complex shift = (kI / zeta) * (1.0 + pm * root);
            out.descriptor = g + (plus ? " [2 cosh 2x" : " [2 sinh 2x") + " - (i/zeta)(1 " + (pm > 0 ? "+" : "-") +
                             (plus ? " sqrt(1 - 4 zeta^2))]" : " sqrt(1 + 4 zeta^2))]");
            out.phi_coeffs = {plus ? 1.0 : -1.0, -shift, 1.0};
            out.evaluate = [gauge, plus, shift](complex x) {
                const complex h = plus ? std::cosh(2.0 * x) : std::sinh(2.0 * x);
                return gauge(x) * (2.0 * h - shift);
            };
            break;
        }
        case 4: {
            if (plus) {
                throw unsupported_m("closed_form_psi: no analytic plus-variant M = 4 wavefunction; use the matrix route");
            }
            require_nonzero_zeta(zeta, "M=4");
            const double sigma = label[0] == '+' ? 1.0 : -1.0;
            const double tau = label[1] == '+' ? 1.0 : -1.0;
            const complex root = csqrt(1.0 - sigma * zeta + zeta * zeta);
            const complex shift = (kI / zeta) * (1.0 + tau * root);
            out.descriptor = g + " (e^-x " + (sigma > 0 ? "-" : "+") + " i e^x) [sinh 2x - (i/zeta)(1 " +
                             (tau > 0 ? "+" : "-") + " sqrt(1 " + (sigma > 0 ? "-" : "+") + " zeta + zeta^2))]";
            out.phi_coeffs = convolve({1.0, -sigma * kI}, {-0.5, -shift, 0.5});
            out.evaluate = [gauge, sigma, shift](complex x) {
                return gauge(x) * (std::exp(-x) - sigma * kI * std::exp(x)) * (std::sinh(2.0 * x) - shift);
            };
            break;
        }
        default:
            throw unsupported_m("closed_form_psi: M = " + std::to_string(spec.m));
    }
    return out;
}

Spectrum closed_form_energies(const PotentialSpec& spec, double tol_real) {
    validate(spec);
    const auto cf = closed_form_case(spec.m, spec.variant);
    std::vector<complex> values;
    for (const auto& level : cf.levels) values.push_back(level.energy(spec.zeta));
    const auto clustered = merge_clusters(values);

    const auto op = build_operator(spec);
    std::vector<QesLevel> levels;
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::vector<complex> phi;
        try {
            phi = closed_form_psi(spec, static_cast<int>(i)).phi_coeffs;
        } catch (const zeta_zero&) {
        } catch (const unsupported_m&) {
        }
        if (phi.empty()) {
            // Distinct null vectors for exact repeats (zeta = 0 is diagonal).
            const auto vectors = null_vectors(op, values[i]);
            std::size_t rank = 0;
            for (std::size_t j = 0; j < i; ++j) rank += values[j] == values[i] ? 1 : 0;
            phi = vectors[std::min(rank, vectors.size() - 1)];
        }
        levels.push_back({values[i], normalize_phi(std::move(phi)), Reality::real, {}, clustered[i]});
    }
    return finalize_spectrum(spec, std::move(levels), Method::closed_form, tol_real);
}

}  // namespace qes
