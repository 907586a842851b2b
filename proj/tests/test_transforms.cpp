#include <cmath>
#include <map>
#include <memory>

#include "doctest.h"
#include "symspace/errors.hpp"
#include "symspace/geometry.hpp"
#include "symspace/transforms.hpp"

using namespace symspace;

namespace {

const SphericalTransform& engine(int m1, int m2) {
    static std::map<std::pair<int, int>, std::unique_ptr<SphericalTransform>> cache;
    auto& slot = cache[{m1, m2}];
    if (!slot) slot = std::make_unique<SphericalTransform>(SphericalTransform::standard(make_space(m1, m2)));
    return *slot;
}

double sup_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("inversion constant equals 1/(2 pi) and is stable across the family") {
    for (auto [m1, m2] : {std::pair{1, 0}, {2, 0}, {2, 1}, {4, 0}}) {
        const auto& T = engine(m1, m2);
        CHECK(T.kappa_inv() == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-10));
        for (auto sp : paley_wiener_family(3)) {
            const double k = T.measure_kappa([&](double l) { return sp.spectrum(l); });
            CHECK(std::abs(k / T.kappa_inv() - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("H^3 inversion of a Gaussian spectrum in closed form") {
    // kappa int_0^inf e^{-l^2} sin(lt)/(l sinh t) l^2 dl = t e^{-t^2/4} / (8 sqrt(pi) sinh t).
    const auto& T = engine(2, 0);
    const auto f = T.inverse([](double l) { return cplx(std::exp(-l * l)); });
    for (double t : {0.0, 0.3, 1.0, 2.5, 6.0, 11.0}) {
        const double ref = t == 0.0 ? 1.0 / (8.0 * std::sqrt(kPi)) : t * std::exp(-0.25 * t * t) / (8.0 * std::sqrt(kPi) * std::sinh(t));
        CHECK(std::abs(f(t) - ref) < 1e-12);
    }
}

TEST_CASE("Paley-Wiener round trip and Plancherel") {
    for (auto [m1, m2] : {std::pair{1, 0}, {2, 1}, {4, 0}}) {
        const auto& T = engine(m1, m2);
        auto fam = paley_wiener_family(42);
        REQUIRE(fam.size() == 10);
        std::vector<RadialFunction> fs;
        for (auto& sp : fam) {
            const RadialFunction f = paley_wiener_factory(T, sp);
            const SpectralFunction fh = spherical_transform(T, f);
            CHECK(T.spectral_rel_error(fh, [&](double l) { return sp.spectrum(l); }) < 1e-6);
            CHECK(T.l2_norm_sq(f) == doctest::Approx(1.0).epsilon(1e-6));
            CHECK(T.spectral_l2_norm_sq(fh) == doctest::Approx(T.l2_norm_sq(f)).epsilon(1e-6));
            const RadialFunction back = inverse_spherical(T, fh);
            CHECK(sup_diff(back.values, f.values) < 1e-6 * std::abs(f.values[0]));
            fs.push_back(f);
        }
        for (std::size_t i = 0; i < fs.size(); ++i)
            for (std::size_t j = i + 1; j < fs.size(); ++j) CHECK(sup_diff(fs[i].values, fs[j].values) > 1e-3);
    }
}

TEST_CASE("trivial inputs and tail detection") {
    const auto& T = engine(2, 1);
    const auto fh = T.forward(T.zero());
    for (auto v : fh.values) CHECK(v == cplx(0.0));
    const auto f = T.inverse([](double) { return cplx(0.0); });
    for (auto v : f.values) CHECK(v == cplx(0.0));
    CHECK_THROWS_AS(T.forward(T.sample([](double) { return cplx(1.0); })), ConvergenceError);
    CHECK_THROWS_AS(T.inverse([](double) { return cplx(1.0); }), ConvergenceError);
}

TEST_CASE("spherical transform bounded by L^p norm times phi_0 in L^p'") {
    for (auto [m1, m2] : {std::pair{1, 0}, {2, 1}}) {
        const auto& T = engine(m1, m2);
        const double p = 1.2, q = p / (p - 1.0);
        const double phinorm = T.phi0_lq_norm(q);
        for (auto sp : paley_wiener_family(5)) {
            const auto f = paley_wiener_factory(T, sp);
            const double bound = f.lp_norm(p) * phinorm;
            const auto fh = T.forward(f);
            for (auto v : fh.values) CHECK(std::abs(v) <= bound * (1.0 + 1e-10));
        }
    }
}

TEST_CASE("Abel transform: closed form, calibration and slice projection") {
    const auto& T3 = engine(2, 0);
    const AbelCalibration cal3 = calibrate_abel(T3);
    CHECK(cal3.kappa_N == doctest::Approx(1.0 / kPi).epsilon(1e-10));
    CHECK(cal3.C_B == doctest::Approx(2.0).epsilon(1e-10));
    // Spectrum e^{-l^2} on H^3: A f(t) = e^{-t^2/4} / (2 sqrt(pi)).
    PWSpec g = calibration_spec();
    const auto f0 = T3.inverse([&](double l) { return g.spectrum(l); });
    for (bool route_b : {false, true}) {
        const auto A = abel_transform(f0, cal3, route_b);
        for (double t : {0.0, 0.7, 2.0, 5.0}) CHECK(std::abs(A(t) - std::exp(-0.25 * t * t) / (2.0 * std::sqrt(kPi))) < 1e-12);
        CHECK(A(-1.3) == A(1.3));
    }
    for (auto [m1, m2] : {std::pair{1, 0}, {2, 0}, {4, 0}}) {
        const auto& T = engine(m1, m2);
        const AbelCalibration cal = m1 == 2 ? cal3 : calibrate_abel(T);
        for (auto sp : paley_wiener_family(9)) {
            const auto f = paley_wiener_factory(T, sp);
            const auto fh = T.forward(f);
            const auto A = abel_transform(f, cal);
            CHECK(T.spectral_rel_error(euclidean_ft(T, A), [&](double l) { return fh(l); }) < 1e-6);
            if (T.space().d == 3) {
                const auto B = abel_transform(f, cal, true);
                CHECK(sup_diff(A.values, B.values) < 1e-6 * std::abs(A.values[0]));
                CHECK(T.spectral_rel_error(euclidean_ft(T, B), [&](double l) { return fh(l); }) < 1e-6);
            }
        }
    }
    CHECK(calibrate_abel(engine(1, 0)).kappa_N == doctest::Approx(1.0 / kPi).epsilon(1e-10));
    CHECK_THROWS_AS(abel_horocyclic_raw(engine(2, 1).zero()), DomainError);
    CHECK_THROWS_AS(abel_hyperbolic3_raw(engine(1, 0).zero()), DomainError);
}

TEST_CASE("horocyclic route against the unscaled horocycle integral") {
    // e^{rho t} int_R f(r) dx with cosh r = cosh t + x^2 e^t / 2, at t and -t (H^2).
    const auto& T = engine(1, 0);
    PWSpec sp{0.8, 0.5, 0.1};
    const auto f = paley_wiener_factory(T, sp);
    const auto A = abel_horocyclic_raw(f);
    for (double t : {0.4, 1.3, 3.0}) {
        for (double sgn : {1.0, -1.0}) {
            const double tt = sgn * t;
            // x = e^{-tt/2} sinh y, y in [0, 12], covers radii beyond the t-grid.
            const PanelGrid yg = PanelGrid::uniform(0.0, 12.0, 96);
            cplx s = 0.0;
            for (std::size_t k = 0; k < yg.size(); ++k) {
                const double y = yg.nodes()[k];
                const double x = std::exp(-0.5 * tt) * std::sinh(y);
                const double r = std::acosh(std::cosh(tt) + 0.5 * x * x * std::exp(tt));
                s += yg.weights()[k] * f(r) * std::exp(-0.5 * tt) * std::cosh(y);
            }
            s *= 2.0 * std::exp(0.5 * tt);
            CHECK(std::abs(s - A(tt)) < 1e-9 * std::abs(A(0.0)));
        }
    }
}

TEST_CASE("Ray-Sarkar ratios") {
    const auto& T = engine(2, 0);
    const auto cal = calibrate_abel(T);
    const double p = 1.5, gp = 2.0 / p - 1.0;
    double lo = 1e300, hi = 0.0;
    for (auto sp : paley_wiener_family(1)) {
        const auto f = paley_wiener_factory(T, sp);
        const auto A = abel_transform(f, cal);
        const auto rep = ray_sarkar_check(A, f, p, p, 0.5 * gp);
        CHECK(std::isfinite(rep.ratio));
        CHECK(rep.ratio > 0.0);
        lo = std::min(lo, rep.ratio);
        hi = std::max(hi, rep.ratio);
        const auto lim = ray_sarkar_check(A, f, p, p, 0.0);
        CHECK(lim.ratio <= rep.ratio);
    }
    CHECK(hi / lo < 10.0);
    const auto z = abel_transform(T.zero(), cal);
    const auto rz = ray_sarkar_check(z, T.zero(), p, 1.0, 0.1);
    CHECK(rz.lhs == 0.0);
    CHECK(rz.ratio == 0.0);
    CHECK_THROWS_AS(ray_sarkar_check(z, T.zero(), 2.5, 1.0, 0.1), DomainError);
    CHECK_THROWS_AS(ray_sarkar_check(z, T.zero(), p, 4.0, 0.1), DomainError);
    CHECK_THROWS_AS(ray_sarkar_check(z, T.zero(), p, 1.0, 0.5), DomainError);
}

TEST_CASE("Helgason transform on the disc") {
    const auto s = make_space(1, 0);
    const auto& T = engine(1, 0);
    const double w = 0.35;
    SUBCASE("radial input reduces to the spherical transform") {
        auto fr = [&](cplx z) -> cplx {
            const double d = disc_distance(z, 0.0);
            return std::exp(-d * d / (2 * w * w));
        };
        const auto G = helgason_ft(s, fr, 0.0);
        const auto fh = T.forward(T.sample([&](double t) -> cplx { return std::exp(-t * t / (2 * w * w)); }));
        for (std::size_t i = 0; i < G.lgrid.size(); ++i) {
            const double l = G.lgrid.nodes()[i];
            for (std::size_t j = 0; j < G.thetas.size(); ++j) {
                CHECK(std::abs(G.at(i, j) - G.at(i, 0)) < 1e-8);
                if (std::abs(l) < T.lgrid().upper()) CHECK(std::abs(G.at(i, j) - fh(l)) < 1e-6);
            }
        }
    }
    SUBCASE("off-centre bump round trip") {
        const cplx z0 = std::polar(0.3, 0.7);
        auto f = [&](cplx z) -> cplx {
            const double d = disc_distance(z, z0);
            return std::exp(-d * d / (2 * w * w));
        };
        const auto F = helgason_ft(s, f, z0);
        CHECK(F.lgrid.size() == 64);
        CHECK(F.thetas.size() == 64);
        for (double r : {0.0, 0.2, 0.45, 0.6})
            for (int a = 0; a < 5; ++a) {
                const cplx z = std::polar(r, 1.3 * a);
                CHECK(std::abs(helgason_inverse(s, F, z, T.kappa_inv()) - f(z)) < 1e-4);
            }
    }
    SUBCASE("zero and domain") {
        const auto F = helgason_ft(s, [](cplx) { return cplx(0.0); }, 0.0);
        for (auto v : F.values) CHECK(v == cplx(0.0));
        CHECK(helgason_inverse(s, F, 0.2, T.kappa_inv()) == cplx(0.0));
        CHECK_THROWS_AS(helgason_ft(make_space(2, 0), [](cplx) { return cplx(0.0); }, 0.0), DomainError);
    }
}
