#include <cmath>

#include "doctest.h"
#include "symspace/errors.hpp"
#include "symspace/pdo_euclid.hpp"

using namespace symspace;

namespace {

GriddedFunction gaussian1d(double shift = 0.0) {
    return GriddedFunction::sample(1, 400, -10.0, 0.05, [shift](const Pt& x) {
        return cplx(std::exp(-(x[0] - shift) * (x[0] - shift)));
    });
}

double sup_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST_CASE("identity, translation and derivative symbols") {
    const auto f = gaussian1d();
    const auto id = apply_pdo(EuclidSymbol::multiplier(1, [](const Pt&) { return cplx(1.0); }), f);
    CHECK(sup_diff(id.values, f.values) < 1e-13);

    const double h = 0.3;
    const auto tr = apply_pdo(EuclidSymbol::multiplier(1, [h](const Pt& xi) { return std::polar(1.0, -2 * kPi * h * xi[0]); }), f);
    CHECK(sup_diff(tr.values, gaussian1d(h).values) < 1e-10);

    const auto df = apply_pdo(EuclidSymbol::multiplier(1, [](const Pt& xi) { return cplx(0.0, 2 * kPi * xi[0]); }, 1.0), f);
    for (std::size_t j = 0; j < f.n; ++j) {
        const double x = f.coord(j);
        CHECK(std::abs(df.values[j] - (-2.0 * x * std::exp(-x * x))) < 1e-8);
    }
}

TEST_CASE("x-dependent symbols by the direct Fourier sum") {
    const auto f = gaussian1d();
    auto a = EuclidSymbol::general(1, [](const Pt& x, const Pt& xi) {
        return (1.0 + 0.5 * std::sin(x[0])) * cplx(0.0, 2 * kPi * xi[0]);
    }, 1.0);
    const auto g = apply_pdo(a, f);
    for (std::size_t j = 0; j < f.n; j += 7) {
        const double x = f.coord(j);
        CHECK(std::abs(g.values[j] - (1.0 + 0.5 * std::sin(x)) * (-2.0 * x * std::exp(-x * x))) < 1e-8);
    }
    const auto at = apply_pdo_at(a, f, {{0.37, 0.0}, {-1.21, 0.0}});
    CHECK(std::abs(at[0] - (1.0 + 0.5 * std::sin(0.37)) * (-2.0 * 0.37 * std::exp(-0.37 * 0.37))) < 1e-8);
    CHECK(std::abs(at[1] - (1.0 + 0.5 * std::sin(-1.21)) * (2.42 * std::exp(-1.21 * 1.21))) < 1e-8);
}

TEST_CASE("two-dimensional grids") {
    const auto f = GriddedFunction::sample(2, 128, -8.0, 0.125, [](const Pt& x) {
        return cplx(std::exp(-x[0] * x[0] - 0.5 * x[1] * x[1]));
    });
    const Pt s{0.25, -0.5};
    const auto tr = apply_pdo(EuclidSymbol::multiplier(2, [s](const Pt& xi) {
        return std::polar(1.0, -2 * kPi * (s[0] * xi[0] + s[1] * xi[1]));
    }), f);
    const auto ref = GriddedFunction::sample(2, 128, -8.0, 0.125, [s](const Pt& x) {
        return cplx(std::exp(-(x[0] - s[0]) * (x[0] - s[0]) - 0.5 * (x[1] - s[1]) * (x[1] - s[1])));
    });
    CHECK(sup_diff(tr.values, ref.values) < 1e-10);
    auto dx2 = EuclidSymbol::general(2, [](const Pt& x, const Pt& xi) { return std::cos(x[0]) * cplx(0.0, 2 * kPi * xi[1]); }, 1.0);
    const auto out = apply_pdo_at(dx2, f, {{0.3, 0.7}, {-1.0, 0.2}});
    for (auto [k, x] : {std::pair{0, Pt{0.3, 0.7}}, {1, Pt{-1.0, 0.2}}})
        CHECK(std::abs(out[k] - std::cos(x[0]) * (-x[1]) * std::exp(-x[0] * x[0] - 0.5 * x[1] * x[1])) < 1e-8);
}

TEST_CASE("linearity, Parseval bound and modulation") {
    const auto f = gaussian1d(0.4);
    auto g = GriddedFunction::sample(1, 400, -10.0, 0.05, [](const Pt& x) { return cplx(x[0] * std::exp(-x[0] * x[0]), 0.3); });
    for (std::size_t j = 0; j < g.n; ++j) g.values[j] = cplx(g.values[j].real(), 0.3 * std::exp(-2.0 * g.coord(j) * g.coord(j)));
    auto m = EuclidSymbol::multiplier(1, [](const Pt& xi) { return std::exp(cplx(-0.1 * xi[0] * xi[0], xi[0])); });
    GriddedFunction sum = f;
    for (std::size_t j = 0; j < f.n; ++j) sum.values[j] = f.values[j] + 2.0 * g.values[j];
    const auto a = apply_pdo(m, f), b = apply_pdo(m, g), c = apply_pdo(m, sum);
    for (std::size_t j = 0; j < f.n; ++j) CHECK(std::abs(c.values[j] - a.values[j] - 2.0 * b.values[j]) < 1e-12);
    CHECK(grid_l2_norm(a) <= grid_l2_norm(f) * (1.0 + 1e-12));

    // e^{-2 pi i nu x} m(D) (e^{2 pi i nu x} f) = m(D + nu) f.
    const double nu = 0.8;
    GriddedFunction mod = f;
    for (std::size_t j = 0; j < f.n; ++j) mod.values[j] *= std::polar(1.0, 2 * kPi * nu * f.coord(j));
    auto lhs = apply_pdo(m, mod);
    for (std::size_t j = 0; j < f.n; ++j) lhs.values[j] *= std::polar(1.0, -2 * kPi * nu * f.coord(j));
    const auto rhs = apply_pdo(EuclidSymbol::multiplier(1, [&](const Pt& xi) { return m({0, 0}, {xi[0] + nu, 0}); }), f);
    CHECK(sup_diff(lhs.values, rhs.values) < 1e-10);
}

TEST_CASE("multiplier application equals the discrete spectral product") {
    // Direct O(n^2) DFT of the zero-padded data as an independent oracle.
    const auto f = GriddedFunction::sample(1, 48, -6.0, 0.25, [](const Pt& x) { return cplx(std::exp(-x[0] * x[0])); });
    auto mfun = [](double xi) { return cplx(1.0 / (1.0 + xi * xi), 0.2 * xi); };
    const auto out = apply_pdo(EuclidSymbol::multiplier(1, [&](const Pt& xi) { return mfun(xi[0]); }), f);
    const std::size_t M = 96;
    std::vector<cplx> F(M, 0.0);
    for (std::size_t k = 0; k < M; ++k)
        for (std::size_t j = 0; j < f.n; ++j) F[k] += f.values[j] * std::polar(1.0, -2 * kPi * double(k * j) / M);
    for (std::size_t j = 0; j < f.n; ++j) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < M; ++k) {
            const double xi = (k < M / 2 ? double(k) : double(k) - M) / (M * f.h);
            s += mfun(xi) * F[k] * std::polar(1.0, 2 * kPi * double(k * j) / M);
        }
        CHECK(std::abs(s / double(M) - out.values[j]) < 1e-12);
    }
}

TEST_CASE("aliasing and wraparound are reported") {
    const auto one = GriddedFunction::sample(1, 64, 0.0, 0.1, [](const Pt&) { return cplx(1.0); });
    const auto id = EuclidSymbol::multiplier(1, [](const Pt&) { return cplx(1.0); });
    CHECK_THROWS_AS(apply_pdo(id, one), ResolutionError);
    PdoOptions per;
    per.periodic = true;
    const auto same = apply_pdo(id, one, per);
    CHECK(sup_diff(same.values, one.values) < 1e-14);
    const auto osc = GriddedFunction::sample(1, 400, -10.0, 0.05, [](const Pt& x) {
        return cplx(std::cos(2 * kPi * 9.6 * x[0]) * std::exp(-x[0] * x[0]));
    });
    CHECK_THROWS_AS(apply_pdo(id, osc), ResolutionError);
    const auto zero = GriddedFunction::sample(1, 64, 0.0, 0.1, [](const Pt&) { return cplx(0.0); });
    CHECK(grid_l2_norm(apply_pdo(id, zero)) == 0.0);
}

TEST_CASE("symbol-class certificates") {
    auto a = EuclidSymbol::general(1, [](const Pt& x, const Pt& xi) {
        return cplx((1.0 + std::sin(x[0])) / std::sqrt(1.0 + xi[0] * xi[0]));
    });
    const auto c0 = validate_symbol(a, 3, 2);
    CHECK(c0.pass);
    CHECK(c0.fitted[0][0] == doctest::Approx(-1.0).epsilon(0.05));
    a.order = -1.0;
    CHECK(validate_symbol(a, 3, 2).pass);
    a.order = -1.5;
    CHECK_FALSE(validate_symbol(a, 1, 0).pass);

    const auto one = validate_symbol(EuclidSymbol::multiplier(1, [](const Pt&) { return cplx(1.0); }), 2, 2);
    CHECK(one.pass);
    CHECK(one.constant[0][0] == doctest::Approx(1.0).epsilon(1e-12));
    for (int al = 0; al <= 2; ++al)
        for (int be = 0; be <= 2; ++be)
            if (al + be > 0) CHECK(one.constant[al][be] == 0.0);

    const auto sing = validate_symbol(EuclidSymbol::multiplier(1, [](const Pt& xi) { return cplx(1.0 / std::abs(xi[0])); }), 1, 0);
    CHECK_FALSE(sing.pass);
    CHECK(sing.small_slope[0][0] == doctest::Approx(-1.0).epsilon(0.05));
    CHECK(std::abs(sing.worst.xi[0]) < 0.1);

    auto b2 = EuclidSymbol::general(2, [](const Pt& x, const Pt& xi) {
        return cplx(std::cos(x[0] - x[1]) / (1.0 + xi[0] * xi[0] + xi[1] * xi[1]));
    }, -2.0);
    CHECK(validate_symbol(b2, 2, 1).pass);
    CHECK_THROWS_AS(validate_symbol(b2, 5, 0), DomainError);
}

TEST_CASE("Hormander-Mihlin multipliers") {
    const auto riesz = hm_multiplier_check([](const Pt& xi) { return cplx(xi[0] / std::sqrt(xi[0] * xi[0] + 1e-2)); }, 1);
    CHECK(riesz.pass);
    double prev = 0.0;
    for (double tau : {0.5, 2.0, 8.0}) {
        const auto c = hm_multiplier_check([tau](const Pt& xi) { return std::exp(cplx(0.0, tau * std::log(std::abs(xi[0])))); }, 1);
        CHECK(c.pass);
        CHECK(c.A[1] == doctest::Approx(tau).epsilon(1e-4));
        CHECK(c.A[1] > prev);
        prev = c.A[1];
    }
    const auto c2 = hm_multiplier_check([](const Pt& xi) { return std::exp(cplx(0.0, 3.0 * std::log(std::hypot(xi[0], xi[1])))); }, 2);
    CHECK(c2.pass);
    CHECK(c2.A.size() == 3);
    const auto one = hm_multiplier_check([](const Pt&) { return cplx(1.0); }, 2);
    CHECK(one.pass);
    CHECK(one.A[1] == 0.0);
    CHECK(one.A[2] == 0.0);
    const auto bad = hm_multiplier_check([](const Pt& xi) { return cplx(std::sin(xi[0])); }, 1);
    CHECK_FALSE(bad.pass);
}

TEST_CASE("family uniformity") {
    std::vector<EuclidSymbol> tr, blow;
    for (int k = 0; k < 10; ++k) {
        const double tau = 0.37 * k;
        tr.push_back(EuclidSymbol::general(1, [tau](const Pt& x, const Pt& xi) {
            return cplx((1.0 + 0.5 * std::sin(x[0] + tau)) / std::sqrt(1.0 + xi[0] * xi[0]));
        }));
        const double amp = k + 1.0;
        blow.push_back(EuclidSymbol::multiplier(1, [amp](const Pt& xi) { return cplx(amp * std::exp(-xi[0] * xi[0])); }));
    }
    const auto ok = family_uniformity(tr, 2, 2);
    CHECK(ok.pass);
    CHECK(ok.spread < 2.0);
    const auto fail = family_uniformity(blow, 1, 0);
    CHECK_FALSE(fail.pass);
    CHECK(fail.spread == doctest::Approx(10.0).epsilon(1e-6));
    CHECK(fail.worst_index == 9);
}
