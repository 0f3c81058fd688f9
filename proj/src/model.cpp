#include "qes/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace qes {

void validate(const PotentialSpec& spec) {
    if (spec.m < 1) {
        throw std::invalid_argument("PotentialSpec: m must be >= 1, got " + std::to_string(spec.m));
    }
    if (!std::isfinite(spec.zeta)) {
        throw std::invalid_argument("PotentialSpec: zeta must be finite");
    }
}

std::string_view to_string(Variant v) noexcept { return v == Variant::plus ? "plus" : "minus"; }

std::string_view to_string(Reality r) noexcept { return r == Reality::real ? "real" : "complex"; }

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::closed_form: return "closed_form";
        case Method::matrix: return "matrix";
        case Method::recursion: return "recursion";
    }
    return "unknown";
}

Variant parse_variant(std::string_view text) {
    if (text == "plus" || text == "+") return Variant::plus;
    if (text == "minus" || text == "-") return Variant::minus;
    throw std::invalid_argument("unknown variant '" + std::string(text) + "'");
}

Method parse_method(std::string_view text) {
    if (text == "closed" || text == "closed_form") return Method::closed_form;
    if (text == "matrix") return Method::matrix;
    if (text == "recursion") return Method::recursion;
    throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

Reality classify(complex energy, double tol_real) {
    return std::abs(energy.imag()) <= tol_real * std::max(1.0, std::abs(energy)) ? Reality::real
                                                                                  : Reality::complex;
}

std::vector<complex> normalize_phi(std::vector<complex> coeffs) {
    double largest = 0.0;
    for (const auto& c : coeffs) largest = std::max(largest, std::abs(c));
    if (!(largest > 0.0) || !std::isfinite(largest)) {
        throw std::invalid_argument("normalize_phi: coefficient vector is zero or not finite");
    }
    std::size_t top = coeffs.size();
    while (top > 0 && coeffs[top - 1] == complex{}) --top;
    const complex lead = coeffs[top - 1];
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        coeffs[k] = k < top ? coeffs[k] / lead : complex{};
    }
    coeffs[top - 1] = 1.0;
    return coeffs;
}

namespace {

bool level_less(const QesLevel& a, const QesLevel& b) {
    if (a.energy.real() != b.energy.real()) return a.energy.real() < b.energy.real();
    return a.energy.imag() < b.energy.imag();
}

}  // namespace

Spectrum finalize_spectrum(const PotentialSpec& spec, std::vector<QesLevel> levels, Method method,
                           double tol_real) {
    std::stable_sort(levels.begin(), levels.end(), level_less);
    for (auto& level : levels) {
        level.reality = classify(level.energy, tol_real);
        level.pair_id.reset();
    }
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (levels[i].reality == Reality::real || levels[i].pair_id) continue;
        const complex target = std::conj(levels[i].energy);
        std::optional<std::size_t> best;
        double best_dist = 1e-6 * std::max(1.0, std::abs(target));
        for (std::size_t j = 0; j < levels.size(); ++j) {
            if (j == i || levels[j].reality == Reality::real || levels[j].pair_id) continue;
            const double d = std::abs(levels[j].energy - target);
            if (d <= best_dist) {
                best_dist = d;
                best = j;
            }
        }
        if (best) {
            levels[i].pair_id = *best;
            levels[*best].pair_id = i;
        }
    }
    return Spectrum{spec, std::move(levels), method};
}

double max_relative_imag(const Spectrum& s) {
    double worst = 0.0;
    for (const auto& level : s.levels) {
        worst = std::max(worst, std::abs(level.energy.imag()) / std::max(1.0, std::abs(level.energy)));
    }
    return worst;
}

std::vector<complex> energies(const Spectrum& s) {
    std::vector<complex> out;
    out.reserve(s.levels.size());
    for (const auto& level : s.levels) out.push_back(level.energy);
    return out;
}

double multiset_distance(std::span<const complex> a, std::span<const complex> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    const std::size_t n = a.size();
    std::vector<bool> used_a(n, false), used_b(n, false);
    double worst = 0.0;
    for (std::size_t round = 0; round < n; ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (used_a[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (used_b[j]) continue;
                const double d = std::abs(a[i] - b[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        used_a[bi] = used_b[bj] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

double multiset_distance(const Spectrum& a, const Spectrum& b) {
    const auto ea = energies(a);
    const auto eb = energies(b);
    return multiset_distance(ea, eb);
}

std::vector<bool> merge_clusters(std::vector<complex>& values, double gap, const CoalescedFn& coalesced) {
    const std::size_t n = values.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    auto close = [&](std::size_t i, std::size_t j, double g) {
        const double scale = std::max({1.0, std::abs(values[i]), std::abs(values[j])});
        return std::abs(values[i] - values[j]) < g * scale;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (close(i, j, gap) && (!coalesced || coalesced(i, j))) parent[find(i)] = find(j);
        }
    }
    std::vector<complex> sum(n);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        sum[find(i)] += values[i];
        ++count[find(i)];
    }
    std::vector<bool> flagged(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t root = find(i);
        if (count[root] > 1) {
            values[i] = sum[root] / static_cast<double>(count[root]);
            flagged[i] = true;
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (close(i, j, kDegenerateGap)) flagged[i] = flagged[j] = true;
        }
    }
    return flagged;
}

bool nearly_parallel(std::span<const complex> u, std::span<const complex> v) {
    complex dot{};
    double nu = 0.0, nv = 0.0;
    for (std::size_t k = 0; k < std::min(u.size(), v.size()); ++k) {
        dot += std::conj(u[k]) * v[k];
        nu += std::norm(u[k]);
        nv += std::norm(v[k]);
    }
    if (nu == 0.0 || nv == 0.0) return false;
    return std::abs(dot) / std::sqrt(nu * nv) > 1.0 - 1e-6;
}

complex eval_potential(const PotentialSpec& spec, complex x) {
    const complex two_x = 2.0 * x;
    const complex hyp = spec.variant == Variant::plus ? std::cosh(two_x) : std::sinh(two_x);
    const complex inner = spec.zeta * hyp - complex(0.0, spec.m);
    return -(inner * inner);
}

namespace {

complex transformed_potential(const PotentialSpec& spec, complex x, SymmetryTransform transform) {
    using std::numbers::pi;
    switch (transform) {
        case SymmetryTransform::parity_time:
            return std::conj(eval_potential(spec, -std::conj(x)));
        case SymmetryTransform::shift_time:
            return std::conj(eval_potential(spec, std::conj(complex(0.0, pi / 2) - x)));
    }
    return {};
}

}  // namespace

double check_symmetry(const PotentialSpec& spec, std::span<const complex> x_samples) {
    return check_symmetry(spec, x_samples, natural_transform(spec.variant));
}

double check_symmetry(const PotentialSpec& spec, std::span<const complex> x_samples,
                      SymmetryTransform transform) {
    if (x_samples.empty()) throw std::invalid_argument("check_symmetry: empty sample list");
    double worst = 0.0;
    for (const auto& x : x_samples) {
        worst = std::max(worst, std::abs(transformed_potential(spec, x, transform) - eval_potential(spec, x)));
    }
    return worst;
}

}  // namespace qes
