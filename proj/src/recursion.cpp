#include "qes/recursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "qes/errors.hpp"
#include "qes/roots.hpp"

namespace qes {

complex EnergyPolynomial::operator()(complex E) const { return horner(coeffs, E).value; }

EnergyPolynomial operator*(const EnergyPolynomial& lhs, const EnergyPolynomial& rhs) {
    if (lhs.coeffs.empty() || rhs.coeffs.empty()) return {};
    std::vector<complex> out(lhs.coeffs.size() + rhs.coeffs.size() - 1);
    for (std::size_t i = 0; i < lhs.coeffs.size(); ++i) {
        for (std::size_t j = 0; j < rhs.coeffs.size(); ++j) out[i + j] += lhs.coeffs[i] * rhs.coeffs[j];
    }
    return {std::move(out)};
}

RecursionCoeffs recursion_coeffs(const PotentialSpec& spec) {
    validate(spec);
    const double sign = variant_sign(spec.variant);
    const int m = spec.m;
    const double zeta2 = spec.zeta * spec.zeta;
    // n (M - n) is an exact integer, so a_M and a_0 are exactly zero.
    return RecursionCoeffs{
        [=](int n) { return -sign * 4.0 * static_cast<double>(n * (m - n)) * zeta2; },
        [=](int n) { return static_cast<double>(4 * n * (m - 1 - n) + 2 * m - 1) - sign * zeta2; },
    };
}

namespace {

// p_{n+1} = (E - b(n0 + n)) p_n - a(n0 + n) p_{n-1}, p_0 = 1, p_{-1} = 0.
std::vector<EnergyPolynomial> run_recursion(const RecursionCoeffs& rc, int offset, int n_max) {
    if (n_max < 0) throw std::invalid_argument("build_R: n_max must be >= 0");
    std::vector<EnergyPolynomial> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    out.push_back({{complex(1.0)}});
    for (int n = 0; n < n_max; ++n) {
        const auto& cur = out[static_cast<std::size_t>(n)].coeffs;
        std::vector<complex> next(cur.size() + 1);
        const double bn = rc.b(offset + n);
        for (std::size_t k = 0; k < cur.size(); ++k) {
            next[k + 1] += cur[k];
            next[k] -= bn * cur[k];
        }
        if (n > 0) {
            const double an = rc.a(offset + n);
            const auto& prev = out[static_cast<std::size_t>(n) - 1].coeffs;
            for (std::size_t k = 0; k < prev.size(); ++k) next[k] -= an * prev[k];
        }
        out.push_back({std::move(next)});
    }
    return out;
}

}  // namespace

std::vector<EnergyPolynomial> build_R(const PotentialSpec& spec, int n_max) {
    return build_R(recursion_coeffs(spec), n_max);
}

std::vector<EnergyPolynomial> build_R(const RecursionCoeffs& coeffs, int n_max) {
    return run_recursion(coeffs, 0, n_max);
}

std::vector<EnergyPolynomial> build_R_bar(const PotentialSpec& spec, int n_max) {
    return run_recursion(recursion_coeffs(spec), spec.m, n_max);
}

RecursionValue eval_R(const RecursionCoeffs& coeffs, int n, complex E) {
    complex prev{}, cur{1.0};
    complex dprev{}, dcur{};
    complex sprev{}, scur{};
    double mprev = 0.0, mcur = 1.0;
    const double absE = std::abs(E);
    for (int k = 0; k < n; ++k) {
        const double bk = coeffs.b(k);
        const double ak = k > 0 ? coeffs.a(k) : 0.0;
        const complex next = (E - bk) * cur - ak * prev;
        const complex dnext = cur + (E - bk) * dcur - ak * dprev;
        const complex snext = 2.0 * dcur + (E - bk) * scur - ak * sprev;
        const double mnext = (absE + std::abs(bk)) * mcur + std::abs(ak) * mprev;
        prev = cur;
        cur = next;
        dprev = dcur;
        dcur = dnext;
        sprev = scur;
        scur = snext;
        mprev = mcur;
        mcur = mnext;
    }
    return {cur, dcur, mcur, scur};
}

namespace {

// Newton on R_M through the recursion. At least two steps; continues while
// the correction keeps shrinking (double roots converge only linearly) and
// refuses steps that would jump to a neighbouring root.
complex polish_root(const RecursionCoeffs& rc, int m, complex E, double neighbour_distance) {
    double last_step = std::numeric_limits<double>::infinity();
    const complex start = E;
    for (int iter = 0; iter < 80; ++iter) {
        const auto v = eval_R(rc, m, E);
        if (v.value == complex{} || v.derivative == complex{}) break;
        const complex step = v.value / v.derivative;
        const double size = std::abs(step);
        if (!std::isfinite(size)) break;
        if (iter >= 2 && size >= last_step) break;
        if (std::abs(E - step - start) > 0.5 * neighbour_distance) break;
        E -= step;
        last_step = size;
        if (size <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(E))) break;
    }
    return E;
}

// Newton on R_M' for merged pairs; larger clusters keep their mean.
void refine_pairs(const RecursionCoeffs& rc, int m, std::vector<complex>& roots, const std::vector<bool>& merged) {
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (!merged[i]) continue;
        std::vector<std::size_t> members;
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (merged[j] && roots[j] == roots[i]) members.push_back(j);
        }
        if (members.size() != 2 || members.front() != i) continue;
        complex E = roots[i];
        const double limit = kCoalesceGap * std::max(1.0, std::abs(E));
        for (int iter = 0; iter < 20; ++iter) {
            const auto v = eval_R(rc, m, E);
            if (v.second == complex{}) break;
            const complex step = v.derivative / v.second;
            if (!std::isfinite(std::abs(step)) || std::abs(E - step - roots[i]) > limit) break;
            E -= step;
            if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(E))) break;
        }
        for (auto j : members) roots[j] = E;
    }
}

}  // namespace

Spectrum qes_energies_recursion(const PotentialSpec& spec, double tol_real) {
    validate(spec);
    const auto rc = recursion_coeffs(spec);
    const int m = spec.m;

    std::vector<QesLevel> levels;
    if (spec.zeta == 0.0) {
        std::vector<complex> values;
        for (int n = 0; n < m; ++n) values.emplace_back(rc.b(n));
        const auto clustered = merge_clusters(values);
        for (int n = 0; n < m; ++n) {
            std::vector<complex> phi(static_cast<std::size_t>(m));
            phi[static_cast<std::size_t>(n)] = 1.0;
            levels.push_back({values[static_cast<std::size_t>(n)], std::move(phi), Reality::real, {},
                              clustered[static_cast<std::size_t>(n)]});
        }
        return finalize_spectrum(spec, std::move(levels), Method::recursion, tol_real);
    }

    // Roots of R_M evaluated through the recursion itself: the monomial
    // coefficients of R_M are far too ill-conditioned beyond M ~ 5. Starting
    // circle: centroid sum(b_n)/M, radius from a Gershgorin-type bound.
    complex centre{};
    double spread = 0.0, coupling = 0.0;
    for (int n = 0; n < m; ++n) centre += rc.b(n);
    centre /= static_cast<double>(m);
    for (int n = 0; n < m; ++n) {
        spread = std::max(spread, std::abs(rc.b(n) - centre));
        coupling = std::max(coupling, std::sqrt(std::abs(rc.a(n))));
    }
    const auto found = aberth_roots(
        [&rc, m](complex E) {
            const auto v = eval_R(rc, m, E);
            return PolyValue{v.value, v.derivative, v.magnitude};
        },
        circle_guesses(static_cast<std::size_t>(m), centre, 1.0 + spread + 2.0 * coupling),
        AberthOptions{.max_iterations = 500, .residual_tol = 0.0});
    std::vector<complex> roots = found.roots;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (j != i) nearest = std::min(nearest, std::abs(roots[i] - roots[j]));
        }
        if (!std::isfinite(nearest)) nearest = std::max(1.0, std::abs(roots[i]));
        roots[i] = polish_root(rc, m, roots[i], nearest);
    }
    std::vector<std::vector<complex>> phis;
    for (const auto& r : roots) phis.push_back(phi_from_R(spec, r));
    const auto clustered = merge_clusters(roots, kCoalesceGap, [&](std::size_t i, std::size_t j) {
        return nearly_parallel(phis[i], phis[j]);
    });
    refine_pairs(rc, m, roots, clustered);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        levels.push_back({roots[i], phi_from_R(spec, roots[i]), Reality::real, {}, clustered[i]});
    }
    return finalize_spectrum(spec, std::move(levels), Method::recursion, tol_real);
}

double factorization_check(const PotentialSpec& spec, int n_extra) {
    if (n_extra < 1) throw std::invalid_argument("factorization_check: n_extra must be >= 1");
    const auto full = build_R(spec, spec.m + n_extra);
    const auto bar = build_R_bar(spec, n_extra);
    const auto& base = full[static_cast<std::size_t>(spec.m)];
    double worst = 0.0;
    for (int n = 1; n <= n_extra; ++n) {
        const auto& lhs = full[static_cast<std::size_t>(spec.m + n)];
        const auto rhs = base * bar[static_cast<std::size_t>(n)];
        double scale = 0.0;
        for (const auto& c : lhs.coeffs) scale = std::max(scale, std::abs(c));
        for (const auto& c : rhs.coeffs) scale = std::max(scale, std::abs(c));
        double dev = 0.0;
        const std::size_t len = std::max(lhs.coeffs.size(), rhs.coeffs.size());
        for (std::size_t k = 0; k < len; ++k) {
            const complex l = k < lhs.coeffs.size() ? lhs.coeffs[k] : complex{};
            const complex r = k < rhs.coeffs.size() ? rhs.coeffs[k] : complex{};
            dev = std::max(dev, std::abs(l - r));
        }
        worst = std::max(worst, dev / std::max(scale, std::numeric_limits<double>::min()));
    }
    return worst;
}

std::vector<complex> phi_from_R(const PotentialSpec& spec, complex energy) {
    validate(spec);
    if (spec.zeta == 0.0) {
        throw zeta_zero("phi_from_R: t = +-z/(2 i zeta) is singular at zeta = 0; use the matrix eigenvector path");
    }
    const auto rc = recursion_coeffs(spec);
    const auto check = eval_R(rc, spec.m, energy);
    if (std::abs(check.value) > 1e-8 * check.magnitude) {
        throw not_an_eigenvalue("phi_from_R: |R_M(E)| = " + std::to_string(std::abs(check.value)) +
                                " exceeds tolerance at E = (" + std::to_string(energy.real()) + ", " +
                                std::to_string(energy.imag()) + ")");
    }
    // The same three-term relation run upward from R_0 = 1 and downward from
    // R_M = 0, R_{M-1} = 1; each is accurate up to the peak of the
    // eigenvector, where the two are spliced. The peak is located in the
    // symmetric scaling R_n / sqrt|a_1 ... a_n|.
    const int m = spec.m;
    const auto count = static_cast<std::size_t>(m);
    std::vector<complex> up(count), down(count);
    up[0] = 1.0;
    if (m > 1) up[1] = energy - rc.b(0);
    for (int n = 1; n + 1 < m; ++n) {
        const auto i = static_cast<std::size_t>(n);
        up[i + 1] = (energy - rc.b(n)) * up[i] - rc.a(n) * up[i - 1];
    }
    down[count - 1] = 1.0;
    for (int n = m - 1; n >= 1; --n) {
        const auto i = static_cast<std::size_t>(n);
        const complex above = i + 1 < count ? down[i + 1] : complex{};
        down[i - 1] = ((energy - rc.b(n)) * down[i] - above) / rc.a(n);
    }
    std::size_t peak = 0;
    double best = -1.0, scale2 = 1.0;
    for (std::size_t i = 0; i < count; ++i) {
        if (i > 0) scale2 *= std::abs(rc.a(static_cast<int>(i)));
        const double weight = std::abs(up[i]) * std::abs(down[i]) / scale2;
        if (weight > best) {
            best = weight;
            peak = i;
        }
    }
    const complex join = down[peak] != complex{} ? up[peak] / down[peak] : complex{};
    for (std::size_t i = peak + 1; i < count; ++i) up[i] = down[i] * join;

    // t^n / n! folded into one running factor: s = +-1/(2 i zeta).
    const complex s = variant_sign(spec.variant) / complex(0.0, 2.0 * spec.zeta);
    std::vector<complex> phi(count);
    complex factor{1.0};
    for (std::size_t i = 0; i < count; ++i) {
        phi[i] = up[i] * factor;
        factor *= s / static_cast<double>(i + 1);
    }
    return normalize_phi(std::move(phi));
}

}  // namespace qes
