#include <cmath>
#include <vector>

#include "doctest.h"
#include "symspace/errors.hpp"
#include "symspace/numerics.hpp"

using namespace symspace;

TEST_CASE("composite Gauss-Legendre integrates smooth functions to machine precision") {
    const auto g = PanelGrid::uniform(0.0, 3.0, 6, 16);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::exp(-g.nodes()[i]) * std::cos(2.0 * g.nodes()[i]);
    // int_0^3 e^{-x} cos 2x dx = [e^{-x}(2 sin 2x - cos 2x)/5]_0^3
    const double exact = (std::exp(-3.0) * (2.0 * std::sin(6.0) - std::cos(6.0)) + 1.0) / 5.0;
    CHECK(g.integrate(v) == doctest::Approx(exact).epsilon(1e-14));
}

TEST_CASE("panel interpolation and differentiation of an entire function") {
    const auto g = PanelGrid::graded(0.0, 8.0, 0.25, 1.0, 1.5, 16);
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::sin(g.nodes()[i]);
    for (double x : {0.0, 0.13, 1.0, 3.7, 7.99}) CHECK(g.interpolate(v, x) == doctest::Approx(std::sin(x)).epsilon(1e-12));
    const auto dv = g.differentiate(v);
    for (std::size_t i = 0; i < g.size(); i += 7) CHECK(std::abs(dv[i] - std::cos(g.nodes()[i])) < 1e-10);
}

TEST_CASE("piecewise grid respects knots") {
    const std::vector<double> knots{0.0, 1.0, 5.0};
    const std::vector<double> widths{0.25, 1.0};
    const auto g = PanelGrid::piecewise(knots, widths, 8);
    CHECK(g.panels() == 8);
    CHECK(g.breaks()[4] == 1.0);
    CHECK_THROWS_AS(PanelGrid::uniform(1.0, 0.0, 3), DomainError);
}

TEST_CASE("Cauchy and finite-difference derivatives") {
    auto f = [](cplx z) { return std::exp(2.0 * z); };
    for (int k = 0; k <= 6; ++k)
        CHECK(std::abs(cauchy_derivative(f, 0.3, k, 0.5) - std::pow(2.0, k) * std::exp(0.6)) <
              1e-12 * std::pow(2.0, k) * std::exp(0.6));
    auto g = [](double x) { return cplx(std::sin(x), 0.0); };
    CHECK(std::abs(fd_derivative(g, 1.0, 1, 1e-3) - std::cos(1.0)) < 1e-11);
    CHECK(std::abs(fd_derivative(g, 1.0, 2, 1e-2) + std::sin(1.0)) < 1e-9);
    CHECK(std::abs(fd_derivative(g, 1.0, 4, 5e-2) - std::sin(1.0)) < 1e-6);
}

TEST_CASE("smooth step is a C-infinity monotone transition") {
    CHECK(smooth_step(-1.0) == 0.0);
    CHECK(smooth_step(0.0) == 0.0);
    CHECK(smooth_step(1.0) == 1.0);
    CHECK(smooth_step(0.5) == doctest::Approx(0.5));
    double prev = 0.0;
    for (int i = 1; i < 100; ++i) {
        const double s = smooth_step(i / 100.0);
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("regression helpers") {
    std::vector<double> x{1, 2, 4, 8, 16}, y;
    for (double v : x) y.push_back(3.0 * std::pow(v, -1.5));
    const auto f = fit_loglog(x, y);
    CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-12));
    CHECK(std::exp(f.intercept) == doctest::Approx(3.0).epsilon(1e-12));
    const std::vector<double> a{1, 2, 3, 4}, b{10, 20, 25, 100}, c{4, 3, 2, 1};
    CHECK(spearman(a, b) == doctest::Approx(1.0));
    CHECK(spearman(a, c) == doctest::Approx(-1.0));
    const std::vector<double> z{1, -5, 2, 0.5};
    const auto e = right_envelope(z);
    CHECK(e[0] == 5.0);
    CHECK(e[2] == 2.0);
    CHECK(e[3] == 0.5);
}

TEST_CASE("parallel_for visits every index and propagates exceptions") {
    std::vector<int> hit(1000, 0);
    parallel_for(hit.size(), 4, [&](std::size_t i) { hit[i] += 1; });
    for (int h : hit) CHECK(h == 1);
    CHECK_THROWS_AS(parallel_for(10, 3, [](std::size_t i) {
                        if (i == 7) throw ConvergenceError("boom");
                    }),
                    ConvergenceError);
}
