#include "irs/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace irs;

namespace
{
    constexpr double kPi = std::numbers::pi;
}

TEST_CASE("directional cosines of reference directions")
{
    const auto n = directional_cosines(AnglePair(0.0, 0.0));
    CHECK(n.a_x == 0.0);
    CHECK(n.a_y == 0.0);

    const auto grazing = directional_cosines(AnglePair(kPi / 2, 0.0));
    CHECK(grazing.a_x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(grazing.a_y == 0.0);

    const auto c = directional_cosines(AnglePair::from_degrees(20.0, 180.0));
    CHECK(c.a_x == doctest::Approx(-0.34202).epsilon(1e-5));
    CHECK(std::abs(c.a_y) < 1e-15);
}

TEST_CASE("combined cosines add the two directions")
{
    const AnglePair normal(0.0, 0.0);
    const auto zero = combined_cosines(normal, normal);
    CHECK(zero.a_x == 0.0);
    CHECK(zero.a_y == 0.0);

    const auto c30 = combined_cosines(normal, AnglePair::from_degrees(30.0, 0.0));
    CHECK(c30.a_x == doctest::Approx(0.5).epsilon(1e-15));

    const auto a20 = AnglePair::from_degrees(20.0, 0.0);
    CHECK(combined_cosines(a20, a20).a_x == doctest::Approx(0.68404).epsilon(1e-5));
}

TEST_CASE("combined cosines are symmetric and bounded")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> th(0.0, kPi / 2), ph(0.0, 2 * kPi);
    for (int i = 0; i < 10000; ++i)
    {
        const AnglePair a(th(rng), ph(rng)), b(th(rng), ph(rng));
        const auto ab = combined_cosines(a, b);
        const auto ba = combined_cosines(b, a);
        REQUIRE(ab == ba);
        REQUIRE(std::abs(ab.a_x) <= 2.0);
        REQUIRE(std::abs(ab.a_y) <= 2.0);
        const auto da = directional_cosines(a);
        REQUIRE(da.a_x * da.a_x + da.a_y * da.a_y <= 1.0 + 1e-15);
    }
}

TEST_CASE("directional cosines are 1-Lipschitz in each angle")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> th(0.0, kPi / 2 - 1e-3), ph(0.0, 2 * kPi - 1e-3);
    const double eps = 1e-4;
    for (int i = 0; i < 5000; ++i)
    {
        const double t = th(rng), p = ph(rng);
        const auto base = directional_cosines(AnglePair(t, p));
        const auto dt = directional_cosines(AnglePair(t + eps, p));
        const auto dp = directional_cosines(AnglePair(t, p + eps));
        REQUIRE(std::abs(dt.a_x - base.a_x) <= eps * (1 + 1e-9));
        REQUIRE(std::abs(dt.a_y - base.a_y) <= eps * (1 + 1e-9));
        REQUIRE(std::abs(dp.a_x - base.a_x) <= eps * (1 + 1e-9));
        REQUIRE(std::abs(dp.a_y - base.a_y) <= eps * (1 + 1e-9));
    }
}

TEST_CASE("angle pair validation")
{
    CHECK_THROWS_AS(AnglePair(-0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(AnglePair(kPi / 2 + 1e-9, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(AnglePair(0.1, 2 * kPi), std::invalid_argument);
    CHECK_THROWS_AS(AnglePair(0.1, -1e-12), std::invalid_argument);
    CHECK_THROWS_AS(AnglePair(std::nan(""), 0.0), std::invalid_argument);
    CHECK_NOTHROW(AnglePair(kPi / 2, 0.0));

    CHECK(AnglePair::from_degrees(90.0, 0.0).theta() == kPi / 2);
    CHECK(AnglePair::wrapped(0.3, -kPi / 2).phi() == doctest::Approx(1.5 * kPi));
    CHECK(AnglePair::wrapped(0.3, 2 * kPi).phi() == 0.0);
}

TEST_CASE("surface geometry")
{
    const IrsGeometry g(20, 10, 0.5, 0.25);
    CHECK(g.cell_count() == 200);
    CHECK(g.aperture_x() == 10.0);
    CHECK(g.aperture_y() == 2.5);
    CHECK(g.unit_cell_factor() == doctest::Approx(4 * kPi * 0.125));
    CHECK(g.max_gain() == doctest::Approx(200 * 4 * kPi * 0.125));
    CHECK(IrsGeometry::continuous_cell_factor() == doctest::Approx(4 * kPi));
    CHECK(g.axis(Axis::X).count == 20);
    CHECK(g.axis(Axis::Y).spacing == 0.25);

    CHECK(IrsGeometry(20, 20, 0.5, 0.5).unit_cell_factor() == doctest::Approx(kPi));

    CHECK_THROWS_AS(IrsGeometry(0, 1, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(IrsGeometry(1, -2, 0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(IrsGeometry(1, 1, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(IrsGeometry(1, 1, 0.5, -1.0), std::invalid_argument);
}

TEST_CASE("degree conversion")
{
    CHECK(deg_to_rad(180.0) == doctest::Approx(kPi));
    CHECK(rad_to_deg(kPi / 2) == doctest::Approx(90.0));
}
