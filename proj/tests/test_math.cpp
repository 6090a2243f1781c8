#include <cmath>

#include "doctest.h"
#include "midcurve/errors.hpp"
#include "midcurve/math.hpp"

using namespace midcurve;

TEST_CASE("normal pdf and cdf reference values") {
    CHECK(math::norm_pdf(0.0) == doctest::Approx(0.39894228040143268).epsilon(1e-15));
    CHECK(math::norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(math::norm_cdf(1.0) == doctest::Approx(0.84134474606854295).epsilon(1e-15));
    CHECK(math::norm_cdf(-1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-15));
    CHECK(math::norm_cdf(1.96) == doctest::Approx(0.97500210485177957).epsilon(1e-15));
    CHECK(math::norm_cdf(-40.0) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(math::norm_cdf(40.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("inverse normal cdf is accurate and inverts the cdf") {
    CHECK(math::norm_cdf_inv(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(math::norm_cdf_inv(0.975) ==
          doctest::Approx(1.9599639845400542).epsilon(1e-14));
    CHECK(math::norm_cdf_inv(1e-9) ==
          doctest::Approx(-5.9978070150076869).epsilon(1e-13));
    for (double p : {1e-12, 1e-6, 0.025, 0.3, 0.5, 0.9, 0.999999, 1.0 - 1e-12}) {
        const double x = math::norm_cdf_inv(p);
        CHECK(math::norm_cdf(x) == doctest::Approx(p).epsilon(1e-11));
    }
    // The upper tail stops at 4: beyond that the roundtrip is limited by the
    // spacing of doubles near p = 1 (~1e-16 / phi(x)), not by the inverse.
    for (double x : {-8.0, -3.5, -1.0, 0.0, 0.25, 2.0, 4.0}) {
        CHECK(math::norm_cdf_inv(math::norm_cdf(x)) ==
              doctest::Approx(x).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)math::norm_cdf_inv(0.0), invalid_input);
    CHECK_THROWS_AS((void)math::norm_cdf_inv(1.0), invalid_input);
    CHECK_THROWS_AS((void)math::norm_cdf_inv(-0.1), invalid_input);
}

TEST_CASE("gauss-hermite rule integrates normal moments exactly") {
    for (int order : {16, 31, 64, 128}) {
        const auto rule = math::gauss_hermite(order);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(order));
        double m0 = 0.0, m1 = 0.0, m2 = 0.0, m4 = 0.0, m6 = 0.0;
        for (int i = 0; i < order; ++i) {
            const double z = rule.nodes[i], w = rule.weights[i];
            m0 += w;
            m1 += w * z;
            m2 += w * z * z;
            m4 += w * z * z * z * z;
            m6 += w * std::pow(z, 6);
            if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
        }
        CHECK(m0 == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(m1 == doctest::Approx(0.0).epsilon(1e-13));
        CHECK(m2 == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(m4 == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(m6 == doctest::Approx(15.0).epsilon(1e-12));
    }
}

TEST_CASE("gauss-hermite rule converges on a smooth non-polynomial") {
    // E[cos Z] = exp(-1/2) for Z ~ N(0,1).
    const double target = std::exp(-0.5);
    for (int order : {16, 64}) {
        const auto rule = math::gauss_hermite(order);
        double acc = 0.0;
        for (int i = 0; i < order; ++i)
            acc += rule.weights[i] * std::cos(rule.nodes[i]);
        CHECK(acc == doctest::Approx(target).epsilon(1e-13));
    }
    CHECK_THROWS_AS((void)math::gauss_hermite(0), invalid_input);
}

TEST_CASE("trapezoid handles uniform and non-uniform grids") {
    std::vector<double> x, y;
    for (int i = 0; i <= 1000; ++i) {
        x.push_back(i / 1000.0);
        y.push_back(x.back() * x.back());
    }
    CHECK(math::trapezoid(x, y) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    // Trapezoid is exact for affine integrands on any grid.
    std::vector<double> xs{0.0, 0.1, 0.35, 0.9, 2.0};
    std::vector<double> ys;
    for (double v : xs) ys.push_back(3.0 * v + 1.0);
    CHECK(math::trapezoid(xs, ys) == doctest::Approx(3.0 * 2.0 + 2.0).epsilon(1e-15));
    CHECK_THROWS_AS((void)math::trapezoid({1.0}, {1.0}), invalid_input);
}

TEST_CASE("brent finds bracketed roots and rejects others") {
    const double root = math::brent([](double v) { return std::cos(v) - v; }, 0.0, 1.0,
                                    1e-14, 0.0);
    CHECK(root == doctest::Approx(0.73908513321516064).epsilon(1e-12));
    CHECK_THROWS_AS((void)math::brent([](double v) { return v * v + 1.0; }, -1.0, 1.0,
                                      1e-12, 0.0),
                    numerical_error);
}

TEST_CASE("philox block matches the published vectors") {
    using block = std::array<std::uint32_t, 4>;
    CHECK(math::philox4x32_block({0u, 0u, 0u, 0u}, {0u, 0u}) ==
          block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(math::philox4x32_block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                 {0xffffffffu, 0xffffffffu}) ==
          block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(math::philox4x32_block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                 {0xa4093822u, 0x299f31d0u}) ==
          block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("philox counter API is a pure function of (counter, seed)") {
    using block = std::array<std::uint32_t, 4>;
    CHECK(math::philox4x32(0, 0) ==
          block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(math::philox4x32(1, 0) ==
          block{0xf8e4cca4u, 0x5cb200dbu, 0xb1a574ebu, 0x097eff67u});
    CHECK(math::philox4x32(2, 42) ==
          block{0xd36c0225u, 0xa8875dcbu, 0x9a4d6d99u, 0xc609a559u});
    CHECK(math::philox4x32(7, 11) == math::philox4x32(7, 11));
    CHECK(math::philox4x32(7, 11) != math::philox4x32(8, 11));
    CHECK(math::philox4x32(7, 11) != math::philox4x32(7, 12));
}

TEST_CASE("philox uniforms and normals have the right law") {
    const long n = 200000;
    double su = 0.0, su2 = 0.0, sz = 0.0, sz2 = 0.0, szw = 0.0;
    for (long i = 0; i < n; ++i) {
        const auto [u, v] = math::philox_uniform_pair(static_cast<std::uint64_t>(i), 99);
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        CHECK(v > 0.0);
        CHECK(v < 1.0);
        su += u + v;
        su2 += u * u + v * v;
        const auto [z, w] = math::philox_normal_pair(static_cast<std::uint64_t>(i), 99);
        sz += z + w;
        sz2 += z * z + w * w;
        szw += z * w;
    }
    const double nn = 2.0 * static_cast<double>(n);
    CHECK(su / nn == doctest::Approx(0.5).epsilon(2e-3));
    CHECK(su2 / nn - 0.25 == doctest::Approx(1.0 / 12.0).epsilon(1e-2));
    CHECK(std::abs(sz / nn) < 5e-3);
    CHECK(sz2 / nn == doctest::Approx(1.0).epsilon(1e-2));
    // The two lanes of one block are independent.
    CHECK(std::abs(szw / static_cast<double>(n)) < 8e-3);
}
