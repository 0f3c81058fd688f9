#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracle.hpp"
#include "qes/errors.hpp"
#include "qes/gauge_matrix.hpp"
#include "qes/recursion.hpp"

using namespace qes;
using doctest::Approx;

TEST_CASE("recursion coefficients") {
    const auto m2 = recursion_coeffs({Variant::minus, 1.0, 2});
    CHECK(m2.a(1) == 4.0);
    CHECK(m2.b(0) == 4.0);
    CHECK(m2.b(1) == 4.0);

    const auto p3 = recursion_coeffs({Variant::plus, 0.25, 3});
    CHECK(p3.b(0) == 4.9375);
    CHECK(p3.b(1) == 8.9375);
    CHECK(p3.b(2) == 4.9375);
    CHECK(p3.a(1) == -0.5);
    CHECK(p3.a(2) == -0.5);

    for (int m = 1; m <= 30; ++m) {
        for (double zeta : {0.1, 0.7, 3.3}) {
            const auto rc = recursion_coeffs({m % 2 ? Variant::plus : Variant::minus, zeta, m});
            CHECK(rc.a(0) == 0.0);
            CHECK(rc.a(m) == 0.0);
        }
    }
}

TEST_CASE("low-order polynomials") {
    const auto r = build_R({Variant::minus, 1.0, 2}, 2);
    REQUIRE(r.size() == 3);
    CHECK(r[0].coeffs == std::vector<complex>{1.0});
    CHECK(r[2].coeffs == std::vector<complex>{12.0, -8.0, 1.0});
    CHECK(std::abs(r[2](2.0)) < 1e-14);
    CHECK(std::abs(r[2](6.0)) < 1e-14);

    for (int m = 1; m <= 6; ++m) {
        for (auto v : {Variant::plus, Variant::minus}) {
            const PotentialSpec spec{v, 0.8, m};
            const auto r1 = build_R(spec, 1)[1];
            const double b0 = 2 * m - 1 - variant_sign(v) * 0.64;
            CHECK(r1.coeffs[0].real() == Approx(-b0));
            CHECK(r1.coeffs[1] == complex(1.0));
        }
    }

    // b_0 = 2 - 1 - 1 = 0: the single level sits at E = 1 - zeta^2 = 0
    CHECK(build_R({Variant::plus, 1.0, 1}, 1)[1].coeffs == std::vector<complex>{0.0, 1.0});
    CHECK_THROWS(build_R({Variant::plus, 1.0, 1}, -1));
}

TEST_CASE("monic of exact degree with real coefficients") {
    for (auto v : {Variant::plus, Variant::minus}) {
        for (double zeta : {0.0, 0.3, 2.0}) {
            const auto polys = build_R({v, zeta, 7}, 12);
            for (int n = 0; n <= 12; ++n) {
                const auto& p = polys[static_cast<std::size_t>(n)];
                CHECK(p.degree() == n);
                CHECK(p.coeffs.back() == complex(1.0));
                for (const auto& c : p.coeffs) CHECK(c.imag() == 0.0);
            }
        }
    }
}

TEST_CASE("R_M equals the dense characteristic polynomial") {
    // oracle: Faddeev-LeVerrier on the dense operator in 50 digits
    for (bool plus : {true, false}) {
        for (double zeta : {0.1, 1.0, 2.5}) {
            for (int m = 1; m <= 8; ++m) {
                const auto ref = oracle::characteristic(oracle::gauged_matrix(plus, zeta, m));
                const auto got = build_R({plus ? Variant::plus : Variant::minus, zeta, m}, m).back();
                REQUIRE(got.coeffs.size() == ref.size());
                double scale = 0.0, dev = 0.0;
                for (std::size_t k = 0; k < ref.size(); ++k) {
                    const auto r = oracle::to_double(ref[k]);
                    scale = std::max(scale, std::abs(r));
                    dev = std::max(dev, std::abs(r - got.coeffs[k]));
                }
                CHECK(dev <= 1e-12 * scale);
            }
        }
    }
}

TEST_CASE("energies from the recursion") {
    SUBCASE("minus M=3 zeta=1") {
        const auto s = qes_energies_recursion({Variant::minus, 1.0, 3});
        CHECK(s.method == Method::recursion);
        REQUIRE(s.levels.size() == 3);
        CHECK(s.levels[0].energy.real() == Approx(3.5278640450004206072).epsilon(1e-13));
        CHECK(s.levels[1].energy.real() == Approx(6.0).epsilon(1e-13));
        CHECK(s.levels[2].energy.real() == Approx(12.472135954999579393).epsilon(1e-13));
        for (const auto& l : s.levels) CHECK(l.reality == Reality::real);
    }
    SUBCASE("plus M=2 zeta=1 is a conjugate pair") {
        const auto s = qes_energies_recursion({Variant::plus, 1.0, 2});
        CHECK(std::abs(s.levels[0].energy - complex(2.0, -2.0)) < 1e-12);
        CHECK(std::abs(s.levels[1].energy - complex(2.0, 2.0)) < 1e-12);
        CHECK(s.levels[0].pair_id == 1u);
        CHECK(s.levels[1].reality == Reality::complex);
    }
    SUBCASE("zeta = 0 decouples") {
        const auto s = qes_energies_recursion({Variant::minus, 0.0, 3});
        CHECK(s.levels[0].energy == complex(5.0));
        CHECK(s.levels[1].energy == complex(5.0));
        CHECK(s.levels[2].energy == complex(9.0));
        CHECK(s.levels[0].degenerate);
        CHECK_FALSE(s.levels[2].degenerate);
    }
    SUBCASE("exceptional point at zeta = 1/2") {
        const auto s = qes_energies_recursion({Variant::plus, 0.5, 3});
        CHECK(std::abs(s.levels[0].energy - 4.75) < 1e-12);
        CHECK(std::abs(s.levels[1].energy - 6.75) < 1e-10);
        CHECK(std::abs(s.levels[2].energy - 6.75) < 1e-10);
        CHECK(s.levels[1].degenerate);
        CHECK(s.levels[2].degenerate);
    }
    SUBCASE("negative zeta mirrors positive zeta") {
        const auto a = qes_energies_recursion({Variant::minus, -1.7, 6});
        const auto b = qes_energies_recursion({Variant::minus, 1.7, 6});
        CHECK(multiset_distance(a, b) < 1e-10);
    }
}

TEST_CASE("factorization beyond n = M") {
    CHECK(factorization_check({Variant::minus, 1.0, 2}, 3) < 1e-10);
    CHECK(factorization_check({Variant::plus, 2.0, 4}, 2) < 1e-10);
    // a_1 = 0 for M = 1, so R_2 = (E - b_1)(E - b_0) = R_1 Rbar_1 identically
    CHECK(factorization_check({Variant::minus, 0.5, 1}, 1) == 0.0);
    CHECK_THROWS_AS(factorization_check({Variant::minus, 0.5, 1}, 0), std::invalid_argument);

    const auto full = build_R({Variant::minus, 0.5, 1}, 2);
    const auto bar = build_R_bar({Variant::minus, 0.5, 1}, 1);
    CHECK((full[1] * bar[1]).coeffs == full[2].coeffs);
}

TEST_CASE("phi coefficients from the recursion") {
    SUBCASE("minus M=2 E=6: phi = 1 + i z") {
        const auto phi = phi_from_R({Variant::minus, 1.0, 2}, 6.0);
        REQUIRE(phi.size() == 2);
        CHECK(phi[1] == complex(1.0));
        CHECK(std::abs(phi[1] / phi[0] - complex(0.0, 1.0)) < 1e-14);
    }
    SUBCASE("M=1 is constant") {
        const auto phi = phi_from_R({Variant::plus, 1.0, 1}, 0.0);
        CHECK(phi == std::vector<complex>{1.0});
    }
    SUBCASE("annihilates the gauged operator") {
        const PotentialSpec spec{Variant::minus, 0.5, 3};
        const complex E = 7.25 + 2.0 * std::sqrt(2.0);
        const auto phi = phi_from_R(spec, E);
        const auto op = build_operator(spec);
        const auto image = op.apply(phi);
        double worst = 0.0;
        for (std::size_t n = 0; n < phi.size(); ++n) worst = std::max(worst, std::abs(image[n] - E * phi[n]));
        CHECK(worst < 1e-9);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(phi_from_R({Variant::minus, 0.0, 3}, 5.0), zeta_zero);
        CHECK_THROWS_AS(phi_from_R({Variant::minus, 1.0, 3}, 4.0), not_an_eigenvalue);
    }
}

TEST_CASE("recursion evaluation derivatives") {
    const auto rc = recursion_coeffs({Variant::plus, 0.9, 6});
    const auto poly = build_R(rc, 6).back();
    const complex E(3.7, -1.2);
    const auto v = eval_R(rc, 6, E);
    CHECK(std::abs(v.value - poly(E)) <= 1e-12 * std::abs(poly(E)));
    const double h = 1e-5;
    const complex fd = (eval_R(rc, 6, E + h).value - eval_R(rc, 6, E - h).value) / (2 * h);
    CHECK(std::abs(v.derivative - fd) <= 1e-7 * std::abs(fd));
    const complex fd2 = (eval_R(rc, 6, E + h).derivative - eval_R(rc, 6, E - h).derivative) / (2 * h);
    CHECK(std::abs(v.second - fd2) <= 1e-7 * std::abs(fd2));
}
