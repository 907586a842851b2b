#include <cmath>
#include <random>

#include "doctest.h"
#include "symspace/errors.hpp"
#include "symspace/geometry.hpp"

using namespace symspace;

TEST_CASE("space parameters") {
    const auto h2 = make_space(1, 0);
    CHECK(h2.d == 2);
    CHECK(h2.rho == 0.5);
    const auto h3 = make_space(2, 0);
    CHECK(h3.d == 3);
    CHECK(h3.rho == 1.0);
    const auto q = make_space(2, 1);
    CHECK(q.d == 4);
    CHECK(q.rho == 2.0);
    CHECK_THROWS_AS(make_space(0, 1), DomainError);
    CHECK_THROWS_AS(make_space(2, -1), DomainError);
    CHECK_THROWS_AS(require_complex_case(make_space(1, 0)), DomainError);
    CHECK_NOTHROW(require_complex_case(make_space(4, 0)));
}

TEST_CASE("strip width") {
    const auto s = make_space(2, 1);
    CHECK(make_strip(s, 2.0).rho_p == 0.0);
    CHECK(make_strip(s, 1.5).rho_p == doctest::Approx(2.0 / 3.0));
    CHECK(make_strip(s, 4.0).rho_p == doctest::Approx(1.0));
    CHECK_THROWS_AS(make_strip(s, 1.0), DomainError);
}

TEST_CASE("density Delta against frozen values") {
    CHECK(density_delta(make_space(1, 0), 0.0) == 0.0);
    CHECK(density_delta(make_space(2, 0), 1.0) == doctest::Approx(5.52439138216726292).epsilon(1e-14));
    CHECK(density_delta(make_space(2, 1), 1.0) == doctest::Approx(40.0723927628674298).epsilon(1e-14));
    CHECK(density_ratio(make_space(2, 1), 0.0) == doctest::Approx(16.0));
    CHECK_THROWS_AS(density_delta(make_space(2, 0), -0.1), DomainError);
}

TEST_CASE("Iwasawa projection H") {
    const auto h3 = make_space(2, 0);
    CHECK(iwasawa_H(h3, {0.0, 0.0}) == 0.0);
    CHECK(iwasawa_H(h3, {1.0, 0.0}) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
    CHECK(iwasawa_H(h3, {0.3, -2.0}) >= 0.0);
    // In the model, H(v) is the distance-growth rate: for large r,
    // d(o, v a_r o) - r -> H(v).
    const Vec X{0.7, -0.4};
    const auto x = nbar_to_model(h3, X);
    const double r = 30.0;
    const double dist = hyperboloid_distance(horo_to_hyperboloid(h3, {Vec(2, 0.0), 0.0}),
                                             horo_to_hyperboloid(h3, {x, r}));
    CHECK(dist - r == doctest::Approx(iwasawa_H(h3, X)).epsilon(1e-12));
}

TEST_CASE("hyperboloid round trip") {
    const auto h3 = make_space(2, 0);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 50; ++i) {
        const HoroPoint p{{u(rng), u(rng)}, u(rng)};
        const auto v = horo_to_hyperboloid(h3, p);
        CHECK(-v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3] == doctest::Approx(-1.0).epsilon(1e-12));
        const auto q = hyperboloid_to_horo(h3, v);
        CHECK(q.t == doctest::Approx(p.t).epsilon(1e-12));
        CHECK(q.x[0] == doctest::Approx(p.x[0]).epsilon(1e-12));
        CHECK(q.x[1] == doctest::Approx(p.x[1]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(horo_to_hyperboloid(make_space(2, 1), {{0, 0, 0}, 0}), DomainError);
}

TEST_CASE("Cartan radius split and the E bound") {
    const auto h2 = make_space(1, 0);
    const auto id = cartan_radius(h2, {0.0}, 3.0);
    CHECK(id.radius == 3.0);
    CHECK(id.E == 0.0);
    // Brute-force model distance for |X| = 1, r = 2.
    const Vec X{1.0};
    const auto c = cartan_radius(h2, X, 2.0);
    const auto o = horo_to_hyperboloid(h2, {{0.0}, 0.0});
    const auto p = horo_to_hyperboloid(h2, {nbar_to_model(h2, X), 2.0});
    CHECK(c.radius == doctest::Approx(hyperboloid_distance(o, p)).epsilon(1e-13));
    CHECK(c.E == doctest::Approx(hyperboloid_distance(o, p) - 2.0 - iwasawa_H(h2, X)).epsilon(1e-9));
    CHECK(c.E >= 0.0);
    CHECK(c.E <= 2.0 * std::exp(-4.0));
    CHECK_THROWS_AS(cartan_radius(h2, X, -1.0), DomainError);
    CHECK_THROWS_AS(cartan_radius(h2, X, 800.0), DomainError);
}

TEST_CASE("dilation multiplies Haar measure on N-bar by e^{2 rho r}") {
    const auto h3 = make_space(2, 0);
    auto gauss = [](const Vec& X) { return std::exp(-(X[0] * X[0] + X[1] * X[1])); };
    auto skew = [](const Vec& X) { return std::exp(-std::pow(X[0] - 0.5, 2) - 2.0 * X[1] * X[1]) * (1.0 + 0.3 * X[0]); };
    CHECK(dilation_measure_ratio(h3, 1.0, gauss, 8.0) == doctest::Approx(std::exp(2.0)).epsilon(1e-8));
    CHECK(dilation_measure_ratio(h3, 0.5, skew, 8.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-8));
    const auto h2 = make_space(1, 0);
    auto rat1 = [](const Vec& X) { return 1.0 / std::pow(1.0 + X[0] * X[0], 4); };
    CHECK(dilation_measure_ratio(h2, 1.0, rat1, 200.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-8));
    const Vec X{2.0, -4.0};
    CHECK(dilate(h3, 0.0, X) == X);
    CHECK(dilate(h3, std::log(2.0), X)[1] == doctest::Approx(-2.0));
}

TEST_CASE("P-bar integrability against the Beta-function closed form") {
    const auto h3 = make_space(2, 0);
    const auto r = pbar_integral(h3, 1.0);
    CHECK(r.value == doctest::Approx(pbar_integral_exact(h3, 1.0)).epsilon(1e-10));
    CHECK(r.tail_drift < 1e-6);
    const auto h2 = make_space(1, 0);
    CHECK(pbar_integral(h2, 0.5).value == doctest::Approx(pbar_integral_exact(h2, 0.5)).epsilon(1e-9));
    CHECK(pbar_integral(h3, 2.0).value < r.value);
    CHECK_THROWS_AS(pbar_integral(h3, 0.0), DomainError);
    // Frozen: H^3, eps0 = 1: 2 pi * (1/2)(1/2) B(1, 1) = pi/2.
    CHECK(pbar_integral_exact(h3, 1.0) == doctest::Approx(M_PI / 2.0).epsilon(1e-14));
}

TEST_CASE("ball volumes via the Cartan and horocyclic integral formulas") {
    for (int m1 : {1, 2}) {
        const auto s = make_space(m1, 0);
        for (double R : {0.5, 1.0, 3.0})
            CHECK(ball_volume_horocyclic(s, R) == doctest::Approx(ball_volume_cartan(s, R)).epsilon(1e-6));
    }
    // Frozen: H^3, int_0^1 (2 sinh t)^2 dt = sinh(2) - 2.
    CHECK(ball_volume_cartan(make_space(2, 0), 1.0) == doctest::Approx(std::sinh(2.0) - 2.0).epsilon(1e-13));
}

TEST_CASE("Poincare disc conventions") {
    CHECK(disc_distance(0.0, 0.5) == doctest::Approx(2.0 * std::atanh(0.5)));
    const cplx a(0.3, 0.2), z(-0.1, 0.4), w(0.5, -0.2);
    CHECK(disc_distance(disc_translate(a, z), disc_translate(a, w)) == doctest::Approx(disc_distance(z, w)).epsilon(1e-13));
    CHECK(disc_poisson(0.0, std::polar(1.0, 0.7)) == doctest::Approx(1.0));
}
