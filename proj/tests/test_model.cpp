#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracle.hpp"
#include "qes/model.hpp"

using namespace qes;
using doctest::Approx;

namespace {

std::vector<complex> real_samples(int count, double lo, double hi) {
    std::vector<complex> xs;
    for (int k = 0; k < count; ++k) xs.emplace_back(lo + (hi - lo) * k / (count - 1), 0.0);
    return xs;
}

}  // namespace

TEST_CASE("potential at the origin") {
    const auto v = eval_potential({Variant::minus, 0.7, 2}, 0.0);
    CHECK(v.real() == Approx(4.0));
    CHECK(v.imag() == Approx(0.0));

    const auto w = eval_potential({Variant::plus, 1.0, 1}, 0.0);
    CHECK(w.real() == Approx(0.0));
    CHECK(w.imag() == Approx(2.0));
}

TEST_CASE("potential against the high-precision oracle") {
    // oracle: -(cosh 1 - i)^2 in 50 digits
    const complex frozen(-1.3810978455418157298, 3.086161269630487557);
    const auto ref = oracle::to_double(oracle::potential(true, 1, 1, oracle::cplx(oracle::real("0.5"))));
    CHECK(std::abs(ref - frozen) < 1e-15);
    CHECK(std::abs(eval_potential({Variant::plus, 1.0, 1}, 0.5) - frozen) < 1e-13);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> xd(-2.5, 2.5), zd(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
        const bool plus = trial % 2 == 0;
        const double zeta = zd(rng);
        const int m = 1 + trial % 7;
        const complex x(xd(rng), 0.3 * xd(rng));
        const auto expect = oracle::to_double(oracle::potential(plus, zeta, m, oracle::cplx(x.real(), x.imag())));
        const auto got = eval_potential({plus ? Variant::plus : Variant::minus, zeta, m}, x);
        CHECK(std::abs(got - expect) <= 1e-13 * std::max(1.0, std::abs(expect)));
    }
}

TEST_CASE("joint exponential form of both variants") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> xd(-3.0, 3.0), zd(-4.0, 4.0);
    for (int trial = 0; trial < 300; ++trial) {
        const double x = xd(rng), zeta = zd(rng);
        const int m = 1 + trial % 9;
        for (double s : {1.0, -1.0}) {
            const complex inner = zeta * (std::exp(2 * x) + s * std::exp(-2 * x)) / 2.0 - complex(0, m);
            const complex joint = -(inner * inner);
            const auto v = eval_potential({s > 0 ? Variant::plus : Variant::minus, zeta, m}, x);
            CHECK(std::abs(v - joint) <= 1e-13 * std::max(1.0, std::abs(joint)));
        }
    }
}

TEST_CASE("antilinear symmetries of the two families") {
    const auto xs = real_samples(64, -2.0, 2.0);
    CHECK(check_symmetry({Variant::minus, 1.3, 3}, xs) < 1e-12);
    CHECK(check_symmetry({Variant::plus, 0.7, 2}, xs) < 1e-12);
    CHECK(check_symmetry({Variant::minus, 1.3, 3}, xs, SymmetryTransform::parity_time) < 1e-12);
    CHECK(check_symmetry({Variant::plus, 0.7, 2}, xs, SymmetryTransform::shift_time) < 1e-12);

    // oracle at x = 0.5: |conj V(-x) - V(x)| = |4 Im(inner) Re(inner)| = 4 cosh 1
    const double cross = check_symmetry({Variant::plus, 1.0, 1}, std::vector<complex>{0.5},
                                        SymmetryTransform::parity_time);
    CHECK(cross == Approx(6.1723225392609751139).epsilon(1e-12));
    CHECK(check_symmetry({Variant::plus, 1.0, 1}, xs, SymmetryTransform::parity_time) > 1e-2);
    CHECK(check_symmetry({Variant::minus, 1.0, 1}, xs, SymmetryTransform::shift_time) > 1e-2);

    CHECK_THROWS_AS(check_symmetry({Variant::minus, 1.0, 1}, std::vector<complex>{}), std::invalid_argument);
}

TEST_CASE("symmetry holds on random real samples up to |x| = 5") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> xd(-5.0, 5.0), zd(-5.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const PotentialSpec spec{trial % 2 ? Variant::plus : Variant::minus, zd(rng), 1 + trial % 10};
        for (int k = 0; k < 16; ++k) {
            const complex x = xd(rng);
            const double scale = std::max(1.0, std::abs(eval_potential(spec, x)));
            CHECK(check_symmetry(spec, std::vector<complex>{x}) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(validate({Variant::plus, 1.0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(validate({Variant::plus, INFINITY, 2}), std::invalid_argument);
    CHECK_THROWS_AS(validate({Variant::plus, NAN, 2}), std::invalid_argument);
    CHECK_NOTHROW(validate({Variant::minus, -3.5, 1}));
    CHECK_NOTHROW(validate({Variant::minus, 0.0, 40}));
}

TEST_CASE("names round-trip") {
    CHECK(parse_variant("plus") == Variant::plus);
    CHECK(parse_variant("minus") == Variant::minus);
    CHECK(parse_method("closed") == Method::closed_form);
    CHECK(parse_method("matrix") == Method::matrix);
    CHECK(parse_method("recursion") == Method::recursion);
    CHECK_THROWS_AS(parse_variant("cosh"), std::invalid_argument);
    CHECK_THROWS_AS(parse_method("all"), std::invalid_argument);
    CHECK(to_string(Variant::minus) == "minus");
    CHECK(to_string(Reality::complex) == "complex");
}

TEST_CASE("reality classification is relative") {
    CHECK(classify({100.0, 5e-8}) == Reality::real);
    CHECK(classify({100.0, 2e-7}) == Reality::complex);
    CHECK(classify({0.0, 5e-10}) == Reality::real);
    CHECK(classify({0.0, 2e-9}) == Reality::complex);
    CHECK(classify({1.0, 1e-12}, 1e-15) == Reality::complex);
}

TEST_CASE("phi normalization") {
    const auto phi = normalize_phi({complex(2, 0), complex(0, 4), complex(0, 0)});
    CHECK(phi[1] == complex(1, 0));
    CHECK(std::abs(phi[0] - complex(0, -0.5)) < 1e-15);
    CHECK(phi[2] == complex(0, 0));
    // small but nonzero top coefficients are physical and kept
    const auto tiny = normalize_phi({complex(1, 0), complex(1e-20, 0)});
    CHECK(tiny[1] == complex(1, 0));
    CHECK(tiny[0].real() == Approx(1e20));
    CHECK_THROWS_AS(normalize_phi({0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("spectrum ordering and conjugate pairing") {
    std::vector<QesLevel> levels{
        {{6.0, 2.0}, {1.0}},
        {{4.0, 0.0}, {1.0}},
        {{6.0, -2.0}, {1.0}},
        {{3.0, 1.0}, {1.0}},
    };
    const auto s = finalize_spectrum({Variant::plus, 1.0, 4}, levels, Method::matrix);
    REQUIRE(s.levels.size() == 4);
    CHECK(s.levels[0].energy == complex(3.0, 1.0));
    CHECK(s.levels[1].energy == complex(4.0, 0.0));
    CHECK(s.levels[2].energy == complex(6.0, -2.0));
    CHECK(s.levels[3].energy == complex(6.0, 2.0));
    CHECK(s.levels[1].reality == Reality::real);
    CHECK_FALSE(s.levels[0].pair_id.has_value());
    CHECK(s.levels[2].pair_id == 3u);
    CHECK(s.levels[3].pair_id == 2u);
    CHECK(max_relative_imag(s) == Approx(1.0 / std::sqrt(10.0)));
}

TEST_CASE("multiset distance") {
    const std::vector<complex> a{1.0, 2.0, {3.0, 1.0}};
    const std::vector<complex> b{{3.0, 1.0}, 1.0 + 1e-9, 2.0};
    CHECK(multiset_distance(a, b) == Approx(1e-9).epsilon(1e-6));
    CHECK(std::isinf(multiset_distance(a, std::vector<complex>{1.0})));
    CHECK(multiset_distance(std::vector<complex>{5.0, 5.0}, std::vector<complex>{5.0, 6.0}) == Approx(1.0));
}

TEST_CASE("cluster merging") {
    SUBCASE("without a predicate every close pair merges") {
        std::vector<complex> v{{6.75, 1e-8}, {6.75, -1e-8}, 4.75};
        const auto flags = merge_clusters(v, 1e-7);
        CHECK(flags[0]);
        CHECK(flags[1]);
        CHECK_FALSE(flags[2]);
        CHECK(v[0] == complex(6.75, 0.0));
        CHECK(v[1] == complex(6.75, 0.0));
    }
    SUBCASE("the predicate vetoes distinct levels") {
        std::vector<complex> v{40.0, 40.0 + 1e-4};
        const auto flags = merge_clusters(v, 1e-5, [](std::size_t, std::size_t) { return false; });
        CHECK(v[0] == complex(40.0));
        CHECK(v[1] == complex(40.0 + 1e-4));
        CHECK_FALSE(flags[0]);
    }
    SUBCASE("values within the degenerate gap are flagged even when kept") {
        std::vector<complex> v{9.0, 9.0, 21.0};
        const auto flags = merge_clusters(v, 1e-5, [](std::size_t, std::size_t) { return false; });
        CHECK(flags[0]);
        CHECK(flags[1]);
        CHECK_FALSE(flags[2]);
    }
}

TEST_CASE("parallel vectors") {
    const std::vector<complex> u{1.0, complex(0, 2)};
    const std::vector<complex> v{complex(0, 3), -6.0};
    const std::vector<complex> w{1.0, 0.0};
    CHECK(nearly_parallel(u, v));
    CHECK_FALSE(nearly_parallel(u, w));
    CHECK_FALSE(nearly_parallel(u, std::vector<complex>{0.0, 0.0}));
}
