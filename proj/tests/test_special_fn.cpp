#include <cmath>
#include <random>

#include "doctest.h"
#include "symspace/errors.hpp"
#include "symspace/special_fn.hpp"

using namespace symspace;

namespace {
bool close(cplx a, cplx b, double rel) { return std::abs(a - b) <= rel * std::max(1e-300, std::abs(b)); }
}  // namespace

TEST_CASE("complex Gamma") {
    CHECK(close(gamma_complex(1.0), 1.0, 1e-14));
    CHECK(close(gamma_complex(0.5), std::sqrt(M_PI), 1e-14));
    CHECK(close(gamma_complex(4.0), 6.0, 1e-14));
    // Frozen values (50-digit reference evaluation).
    CHECK(close(gamma_complex({-2.5, 1.0}), {-0.0417366258078936137, -0.0863691073697634847}, 1e-12));
    CHECK(close(gamma_complex({0.3, 45.0}), {2.22333050814764178e-31, 7.42784388680523983e-32}, 1e-12));
    CHECK(close(rgamma_complex({-3.2, 30.0}), {-3.43366351022348668e25, 8.34742513573538519e23}, 1e-12));
    CHECK_THROWS_AS(gamma_complex(0.0), PoleError);
    CHECK_THROWS_AS(gamma_complex(-3.0), PoleError);
    CHECK(rgamma_complex(-2.0) == cplx(0.0));
    // Real-axis agreement with the C library over the accuracy envelope.
    for (double x = 0.1; x < 50.0; x += 1.37) CHECK(close(gamma_complex(x), std::tgamma(x), 1e-12));
}

TEST_CASE("normalised Bessel function") {
    for (double x : {0.0, 0.3, 2.0, 9.0, 40.0}) {
        const double ref = x == 0.0 ? 1.0 : std::sin(x) / x;
        CHECK(std::abs(bessel_curly_J(0.5, x) - ref) < 1e-14);
    }
    CHECK(bessel_curly_J_at_zero(0.5) == doctest::Approx(1.0));
    // First zero of J_0.
    CHECK(std::abs(bessel_curly_J(0.0, 2.404825557695773)) < 1e-14);
    CHECK(close(bessel_curly_J(1.5, {3.0, 2.0}), {0.138366424963081857, -0.491459190145808147}, 1e-12));
    CHECK(close(bessel_curly_J(0.5, {20.0, 5.0}), {3.54446446371228797, 0.627933842359794831}, 1e-10));
    CHECK(close(bessel_curly_J(1.0, {15.0, -3.0}), {0.193679847681065740, 0.0812779734456688513}, 1e-10));
    CHECK(close(bessel_curly_J(2.0, 7.5), -0.0192913401286637135, 1e-12));
    CHECK(close(bessel_curly_J(0.0, {30.0, 1.0}), {-0.205672067884382159, 0.219964172875748622}, 1e-10));
    // Series agreement on |z| <= 1.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int i = 0; i < 20; ++i) {
        const cplx z(u(rng), u(rng));
        CHECK(close(bessel_curly_J(1.0, z), bessel_curly_J_series(1.0, z), 1e-12));
        CHECK(close(bessel_curly_J(0.5, z), std::sin(z) / z, 1e-12));
    }
    CHECK(std::abs(bessel_curly_J(1.5, 0.0) - bessel_curly_J_at_zero(1.5)) < 1e-15);
    // Integral representation of J_0: (pi/2) J_0(x) = int_0^{pi/2} cos(x sin th) d th.
    const auto g = PanelGrid::uniform(0.0, M_PI / 2, 8, 16);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::cos(5.3 * std::sin(g.nodes()[i]));
    CHECK(std::abs(bessel_curly_J(0.0, 5.3) - g.integrate(v)) < 1e-13);
}

TEST_CASE("c-function normalisation and closed forms") {
    for (auto [m1, m2] : {std::pair{1, 0}, {2, 0}, {4, 0}, {2, 1}, {3, 0}, {5, 2}}) {
        const CFunction cf(make_space(m1, m2));
        CHECK(std::abs(cf.c(cplx(0.0, -cf.space().rho)) - 1.0) < 1e-12);
    }
    const CFunction h3(make_space(2, 0));
    for (int i = 1; i <= 20; ++i) {
        const double l = 0.37 * i;
        CHECK(h3.plancherel(l) == doctest::Approx(l * l).epsilon(1e-10));
        CHECK(close(h3.c(l), 1.0 / cplx(0.0, l), 1e-12));
    }
    const CFunction h2(make_space(1, 0));
    CHECK(std::abs(h2.c(cplx(0.0, -0.5)) - 1.0) < 1e-14);
    for (double l : {0.1, 1.0, 3.3, 10.0})
        CHECK(h2.plancherel(l) == doctest::Approx(M_PI * l * std::tanh(M_PI * l)).epsilon(1e-11));
    // Frozen off-axis values.
    CHECK(close(CFunction(make_space(4, 0)).c({1.3, 0.4}), {-3.05339485827290689, -0.411338167435728287}, 1e-12));
    CHECK(close(CFunction(make_space(2, 1)).c(0.7), {-1.92686007162801279, -4.47823025418772438}, 1e-12));
    CHECK(close(CFunction(make_space(3, 0)).plancherel(cplx(5.0, 0.5)), {24.0528187540479470, 7.36310778185141235}, 1e-12));
    CHECK(CFunction(make_space(1, 0)).plancherel(40.0) == doctest::Approx(125.663706143591730).epsilon(1e-12));
    CHECK_THROWS_AS(h3.c(0.0), PoleError);
}

TEST_CASE("Plancherel density equals |1/c|^2 on the real line") {
    for (auto [m1, m2] : {std::pair{1, 0}, {4, 0}, {2, 1}, {6, 3}}) {
        const CFunction cf(make_space(m1, m2));
        for (double l : {0.05, 0.8, 7.0, 120.0}) {
            const double a = cf.plancherel(l), b = std::norm(cf.c_inv(l));
            CHECK(std::abs(a - b) <= 1e-10 * b);
        }
    }
}

TEST_CASE("derivative growth certificates of the c-function") {
    const CFunction h3(make_space(2, 0));
    const auto cert = validate_c_estimates(h3, 6);
    CHECK(cert.pass);
    CHECK(cert.holomorphy_residual < 1e-8);
    for (const auto& e : cert.entries) {
        if (e.order == 0 && e.imag_part == 0.0 && e.quantity == "|c(l)|^-2") CHECK(e.fitted == doctest::Approx(2.0).epsilon(0.01));
        if (e.order == 0 && e.imag_part == 0.0 && e.quantity == "c(-l)^-1") CHECK(e.fitted == doctest::Approx(1.0).epsilon(0.01));
        if (e.order >= 2 && e.quantity == "c(-l)^-1") CHECK((e.vanishes || e.constant < 1e-8));
    }
    for (auto [m1, m2] : {std::pair{1, 0}, {2, 1}}) {
        const auto c = validate_c_estimates(CFunction(make_space(m1, m2)), 4);
        CHECK(c.pass);
        CHECK(c.holomorphy_residual < 1e-8);
        for (const auto& e : c.entries)
            CHECK(e.fitted <= e.claimed + 0.15);
    }
    CHECK_THROWS_AS(validate_c_estimates(h3, 7), DomainError);
}
