#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qes/gauge_matrix.hpp"
#include "qes/recursion.hpp"
#include "qes/scan.hpp"
#include "qes/wavefunction.hpp"

using namespace qes;

// Randomised invariants. Seeds are fixed so failures reproduce.

namespace {

struct Case {
    PotentialSpec spec;
};

std::vector<Case> random_cases(unsigned seed, int count, int m_max, double zeta_lo, double zeta_hi) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> md(1, m_max);
    std::uniform_real_distribution<double> zd(zeta_lo, zeta_hi);
    std::bernoulli_distribution vd(0.5);
    std::vector<Case> out;
    for (int k = 0; k < count; ++k) {
        const double sign = vd(rng) ? 1.0 : -1.0;
        out.push_back({{vd(rng) ? Variant::plus : Variant::minus, sign * zd(rng), md(rng)}});
    }
    return out;
}

double spectral_scale(const Spectrum& s) {
    double scale = 1.0;
    for (const auto& l : s.levels) scale = std::max(scale, std::abs(l.energy));
    return scale;
}

}  // namespace

TEST_CASE("matrix and recursion routes agree") {
    for (const auto& c : random_cases(101, 150, 20, 0.05, 5.0)) {
        INFO(to_string(c.spec.variant), " zeta=", c.spec.zeta, " M=", c.spec.m);
        const auto mat = eigen_spectrum(build_operator(c.spec), c.spec);
        const auto rec = qes_energies_recursion(c.spec);
        CHECK(multiset_distance(mat, rec) <= 1e-9 * spectral_scale(mat));
    }
}

TEST_CASE("factorization for random couplings") {
    for (const auto& c : random_cases(103, 60, 10, 0.05, 3.0)) {
        for (int n = 1; n <= 5; ++n) CHECK(factorization_check(c.spec, n) < 1e-9);
    }
}

TEST_CASE("minus spectra are real, plus spectra are conjugate closed") {
    for (const auto& c : random_cases(107, 150, 25, 0.0, 6.0)) {
        const auto s = eigen_spectrum(build_operator(c.spec), c.spec);
        if (c.spec.variant == Variant::minus) {
            CHECK(max_relative_imag(s) <= kDefaultTolReal);
        } else {
            std::vector<complex> conj;
            for (const auto& l : s.levels) conj.push_back(std::conj(l.energy));
            CHECK(multiset_distance(energies(s), conj) <= 1e-9 * spectral_scale(s));
            for (const auto& l : s.levels) {
                if (l.reality == Reality::complex) {
                    REQUIRE(l.pair_id.has_value());
                    CHECK(std::abs(s.levels[*l.pair_id].energy - std::conj(l.energy)) <= 1e-9 * spectral_scale(s));
                }
            }
        }
    }
}

TEST_CASE("spectrum is even in zeta") {
    for (const auto& c : random_cases(109, 60, 15, 0.05, 4.0)) {
        PotentialSpec flipped = c.spec;
        flipped.zeta = -c.spec.zeta;
        const auto a = eigen_spectrum(build_operator(c.spec), c.spec);
        const auto b = eigen_spectrum(build_operator(flipped), flipped);
        CHECK(multiset_distance(a, b) <= 1e-9 * spectral_scale(a));
    }
}

TEST_CASE("sum of energies equals sum of diagonal coefficients") {
    for (const auto& c : random_cases(113, 80, 30, 0.0, 5.0)) {
        const auto rc = recursion_coeffs(c.spec);
        double trace = 0.0;
        for (int n = 0; n < c.spec.m; ++n) trace += rc.b(n);
        complex sum = 0.0;
        for (const auto& l : qes_energies_recursion(c.spec).levels) sum += l.energy;
        CHECK(std::abs(sum - trace) <= 1e-9 * std::max(1.0, std::abs(trace)));
    }
}

TEST_CASE("every level solves the Schroedinger equation") {
    for (const auto& c : random_cases(127, 40, 10, 0.25, 2.0)) {
        for (auto method : {Method::matrix, Method::recursion}) {
            const auto s = compute_spectrum(c.spec, method);
            for (const auto& l : s.levels) {
                CHECK(ode_residual(make_wavefunction(c.spec, l), default_samples()) < 1e-8);
            }
        }
    }
}

TEST_CASE("symmetry of random potentials") {
    std::mt19937 rng(131);
    std::uniform_real_distribution<double> xd(-2.0, 2.0);
    for (const auto& c : random_cases(137, 80, 12, 0.0, 5.0)) {
        std::vector<complex> xs;
        for (int k = 0; k < 8; ++k) xs.emplace_back(xd(rng), 0.0);
        double scale = 1.0;
        for (const auto& x : xs) scale = std::max(scale, std::abs(eval_potential(c.spec, x)));
        CHECK(check_symmetry(c.spec, xs) <= 1e-13 * scale);
    }
}
