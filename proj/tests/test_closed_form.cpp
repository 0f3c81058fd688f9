#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracle.hpp"
#include "qes/closed_form.hpp"
#include "qes/errors.hpp"
#include "qes/gauge_matrix.hpp"
#include "qes/recursion.hpp"

using namespace qes;
using doctest::Approx;

namespace {

// |det(E - A)| relative to the sum of term magnitudes, all in 50 digits
double oracle_char_residual(bool plus, double zeta, int m, complex e) {
    const auto c = oracle::characteristic(oracle::gauged_matrix(plus, zeta, m));
    const oracle::cplx E(e.real(), e.imag());
    oracle::cplx value(0), power(1);
    oracle::real magnitude(0);
    for (const auto& ck : c) {
        value += ck * power;
        magnitude += abs(ck) * abs(power);
        power *= E;
    }
    return static_cast<double>(abs(value) / magnitude);
}

std::vector<oracle::cplx> to_oracle(const std::vector<complex>& v) {
    std::vector<oracle::cplx> out;
    for (const auto& c : v) out.emplace_back(c.real(), c.imag());
    return out;
}

}  // namespace

TEST_CASE("level tables") {
    CHECK(closed_form_case(1, Variant::plus).levels.size() == 1);
    CHECK(closed_form_case(2, Variant::minus).levels.size() == 2);
    CHECK(closed_form_case(3, Variant::plus).levels.size() == 3);
    const auto m4 = closed_form_case(4, Variant::minus);
    REQUIRE(m4.levels.size() == 4);
    CHECK(m4.levels[0].label == "++");
    CHECK(closed_form_case(4, Variant::plus).levels[3].label == "-,-");
    CHECK_THROWS_AS(closed_form_case(5, Variant::minus), unsupported_m);
    CHECK_THROWS_AS(closed_form_case(0, Variant::plus), unsupported_m);
    CHECK_THROWS_AS(closed_form_energies({Variant::plus, 1.0, 7}), unsupported_m);
}

TEST_CASE("frozen spectra") {
    // 40-digit references
    SUBCASE("plus M=4 zeta=1") {
        const std::vector<complex> frozen{{7.1715728752538099024, 0.8284271247461900976},
                                          {7.1715728752538099024, -0.8284271247461900976},
                                          {12.828427124746190098, 4.8284271247461900976},
                                          {12.828427124746190098, -4.8284271247461900976}};
        CHECK(multiset_distance(energies(closed_form_energies({Variant::plus, 1.0, 4})), frozen) < 1e-13);
    }
    SUBCASE("minus M=4 zeta=1") {
        const std::vector<complex> frozen{6.0, 7.0717967697244908259, 14.0, 20.928203230275509174};
        CHECK(multiset_distance(energies(closed_form_energies({Variant::minus, 1.0, 4})), frozen) < 1e-13);
    }
    SUBCASE("plus M=3 zeta=1/4") {
        const std::vector<complex> frozen{4.9375, 5.2054491924311227065, 8.6695508075688772935};
        CHECK(multiset_distance(energies(closed_form_energies({Variant::plus, 0.25, 3})), frozen) < 1e-13);
    }
    SUBCASE("minus M=3 zeta=1") {
        const std::vector<complex> frozen{3.5278640450004206072, 6.0, 12.472135954999579393};
        CHECK(multiset_distance(energies(closed_form_energies({Variant::minus, 1.0, 3})), frozen) < 1e-13);
    }
    SUBCASE("plus M=4 off the symmetric point") {
        const std::vector<complex> half{{7.11529196, 0.10050105}, {7.11529196, -0.10050105},
                                        {14.38470804, 2.10050105}, {14.38470804, -2.10050105}};
        CHECK(multiset_distance(energies(closed_form_energies({Variant::plus, 0.5, 4})), half) < 1e-8);
        const std::vector<complex> two{{4.79899791, 3.26941608}, {4.79899791, -3.26941608},
                                       {9.20100209, 11.26941608}, {9.20100209, -11.26941608}};
        CHECK(multiset_distance(energies(closed_form_energies({Variant::plus, 2.0, 4})), two) < 1e-8);
    }
}

TEST_CASE("closed forms are roots of the oracle determinant") {
    for (bool plus : {true, false}) {
        for (int m = 1; m <= 4; ++m) {
            for (double zeta : {-2.2, -0.4, 0.1, 0.5, 0.9, 1.7, 3.0}) {
                const auto cf = closed_form_case(m, plus ? Variant::plus : Variant::minus);
                for (const auto& level : cf.levels) CHECK(oracle_char_residual(plus, zeta, m, level.energy(zeta)) < 1e-14);
            }
        }
    }
}

TEST_CASE("analytic wavefunctions solve the equation") {
    // residual -psi'' + (V - E) psi computed entirely in the oracle
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> xd(-1.5, 1.5);
    for (bool plus : {true, false}) {
        for (int m = 1; m <= 4; ++m) {
            if (plus && m == 4) continue;
            for (double zeta : {0.3, 1.0, 1.9}) {
                const PotentialSpec spec{plus ? Variant::plus : Variant::minus, zeta, m};
                for (int k = 0; k < m; ++k) {
                    const auto shape = closed_form_psi(spec, k);
                    const auto coeffs = to_oracle(shape.phi_coeffs);
                    const oracle::cplx E(shape.energy.real(), shape.energy.imag());
                    for (int trial = 0; trial < 5; ++trial) {
                        const double x = xd(rng);
                        const oracle::cplx X(x);
                        const auto p = oracle::psi(plus, zeta, m, coeffs, X);
                        const auto d2 = oracle::psi_second(plus, zeta, m, coeffs, X);
                        const auto v = oracle::potential(plus, zeta, m, X);
                        const auto r = -d2 + (v - E) * p;
                        const double scale = static_cast<double>(abs(d2) + abs(v * p) + abs(E * p));
                        CHECK(static_cast<double>(abs(r)) <= 1e-12 * scale);
                        // the hyperbolic form and mu * phi are the same function
                        CHECK(std::abs(shape.evaluate(x) - oracle::to_double(p)) <= 1e-13 * std::max(1.0, std::abs(oracle::to_double(p))));
                    }
                }
            }
        }
    }
}

TEST_CASE("wavefunction examples") {
    const auto m1 = closed_form_psi({Variant::minus, 1.0, 1}, 0);
    for (double x : {-2.0, -0.3, 0.0, 1.1}) CHECK(std::abs(m1.evaluate(x)) == Approx(1.0));

    // cosh shape at the origin: e^{0} * 1
    const auto m3 = closed_form_psi({Variant::minus, 1.0, 3}, 0);
    CHECK(m3.energy == complex(6.0));
    CHECK(std::abs(m3.evaluate(0.0) - 1.0) < 1e-15);

    CHECK(std::abs(closed_form_psi({Variant::plus, 0.25, 3}, 0).evaluate(0.0)) < 1e-15);

    const auto lower = closed_form_psi({Variant::plus, 1.0, 2}, 1);
    CHECK(std::abs(lower.energy - complex(2.0, -2.0)) < 1e-15);
    CHECK(std::abs(lower.evaluate(0.0)) < 1e-15);

    CHECK_THROWS_AS(closed_form_psi({Variant::plus, 1.0, 4}, 0), unsupported_m);
    CHECK_THROWS_AS(closed_form_psi({Variant::minus, 0.0, 3}, 1), zeta_zero);
    CHECK_THROWS_AS(closed_form_psi({Variant::minus, 0.0, 4}, 0), zeta_zero);
    CHECK_NOTHROW(closed_form_psi({Variant::minus, 0.0, 3}, 0));
    CHECK_THROWS(closed_form_psi({Variant::minus, 1.0, 3}, 3));
}

TEST_CASE("zeta = 0 spectra keep distinct shapes") {
    const auto s = closed_form_energies({Variant::minus, 0.0, 3});
    REQUIRE(s.levels.size() == 3);
    CHECK(s.levels[0].energy == complex(5.0));
    CHECK(s.levels[1].energy == complex(5.0));
    CHECK(s.levels[0].degenerate);
    CHECK_FALSE(nearly_parallel(s.levels[0].phi_coeffs, s.levels[1].phi_coeffs));
}

TEST_CASE("agreement with the numeric routes") {
    for (auto v : {Variant::plus, Variant::minus}) {
        for (int m = 1; m <= 4; ++m) {
            for (int k = 0; k <= 60; ++k) {
                const double zeta = -3.0 + 0.1 * k;
                if (zeta == 0.0) continue;
                const PotentialSpec spec{v, zeta, m};
                const auto cf = closed_form_energies(spec);
                const auto mat = eigen_spectrum(build_operator(spec), spec);
                const auto rec = qes_energies_recursion(spec);
                CHECK(multiset_distance(cf, mat) < 1e-9);
                CHECK(multiset_distance(cf, rec) < 1e-9);
            }
        }
    }
}

TEST_CASE("plus M=3 turns complex past zeta = 1/2") {
    for (int k = 0; k <= 100; ++k) {
        const double zeta = 0.01 * k;
        const auto s = closed_form_energies({Variant::plus, zeta, 3});
        const bool all_real = max_relative_imag(s) <= kDefaultTolReal;
        CHECK(all_real == (zeta <= 0.5));
    }
}
