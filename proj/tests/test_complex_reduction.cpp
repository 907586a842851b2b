#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "symspace/complex_reduction.hpp"
#include "symspace/errors.hpp"
#include "symspace/pdo_symm.hpp"
#include "symspace/spherical.hpp"
#include "symspace/transforms.hpp"

using namespace symspace;

namespace {

AFunction gaussian(const WeylData& wd, double a) {
    return [wd, a](const AVec& H) { return cplx(std::exp(-a * adot(wd, H, H))); };
}

// W-invariant in lambda, order 0, with a genuine position dependence.
ComplexSymbol damped_symbol(const WeylData& wd) {
    return {[wd](const AVec& H, const AVec& l) {
                return cplx(std::exp(-adot(wd, l, l) / 8.0) * (1.0 + 0.3 * std::cos(H[0] + H[1])));
            },
            true};
}

ComplexSymbol rational_symbol(const WeylData& wd) {
    return {[wd](const AVec& H, const AVec& l) {
                const double b = 1.0 + 0.5 * std::cos(H[0]);
                const double q = adot(wd, l, l);
                return cplx((q + 2.0 + b) / (q + 1.0 + b));
            },
            true};
}

ComplexSymbol one_symbol() {
    return {[](const AVec&, const AVec&) { return cplx(1.0); }, true};
}

ComplexGrid rank_one_grid() {
    ComplexGrid g;
    g.n = 512;
    g.n_spectral = 512;
    g.n_lambda = 256;
    return g;
}

}  // namespace

TEST_CASE("Weyl groups are closed orthogonal groups of the right order") {
    const auto w1 = WeylData::rank_one();
    const auto w2 = WeylData::a2();
    CHECK(check_weyl(w1).pass);
    const auto c2 = check_weyl(w2);
    CHECK(c2.pass);
    CHECK(w2.order() == 6);
    int rotations = 0;
    for (int d : w2.det) rotations += d == 1;
    CHECK(rotations == 3);
    // rho is the sum of the positive roots: |rho|^2 = 8 for A2 with |alpha|^2 = 2.
    CHECK(adot(w2, w2.rho, w2.rho) == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(w2.dimension == 8);
}

TEST_CASE("phi is the Weyl denominator") {
    const auto w1 = WeylData::rank_one();
    for (double t : {-2.0, -0.3, 0.0, 0.7, 3.0}) CHECK(weyl_phi(w1, {t, 0}) == doctest::Approx(2 * std::sinh(t)).epsilon(1e-14));
    const auto w2 = WeylData::a2();
    for (AVec H : {AVec{0.3, 0.2}, AVec{-1.1, 0.7}, AVec{2.0, -1.5}}) {
        CHECK(weyl_phi(w2, H) == doctest::Approx(weyl_phi_product(w2, H)).epsilon(1e-12));
        for (std::size_t s = 0; s < w2.order(); ++s)
            CHECK(weyl_phi(w2, w2.act(s, H)) == doctest::Approx(w2.det[s] * weyl_phi(w2, H)).epsilon(1e-12));
    }
}

TEST_CASE("rank-one phi_lambda agrees with the ODE solution on H^3") {
    const auto w1 = WeylData::rank_one();
    const auto s = make_space(2, 0);
    double err = 0;
    for (double l : {0.0, 1e-7, 1e-3, 0.3, 2.0, 7.5})
        for (double t : {0.0, 1e-7, 3e-5, 0.01, 0.5, 2.0, 6.0})
            err = std::max(err, std::abs(phi_lambda_complex(w1, {l, 0}, {t, 0}) - phi_ode(s, l, t)));
    CHECK(err < 1e-8);
}

TEST_CASE("A2 phi_lambda matches high-precision values near walls and the origin") {
    const auto w2 = WeylData::a2();
    struct Ref {
        AVec l, H;
        double re, im;
    };
    // 50-digit evaluations of the closed formula.
    const std::vector<Ref> refs{
        {{0.7, 1.3}, {5e-5, 0.8}, 0.67144996552433514, -0.00042553636521729798},
        {{0.7, 1.3}, {2e-4, 0.8}, 0.67144995013919756, -0.00042553628162896656},
        {{3.1, -0.4}, {0.01, 0.02}, 0.99944483858657777, -9.5526111052936813e-8},
        {{1.1, 0.4}, {0.06, 0.08}, 0.99416327408671079, -2.0245942514398244e-6},
        {{1.1, 0.4}, {0.6, 0.8}, 0.56900598209472251, -0.0012023576471491321},
        {{2.0, 0.5}, {1.5, -0.7}, 0.13354061775951115, 0.020648220233216651},
        {{1e-6, 2.0}, {0.9, 1.2}, 0.19759389029745514, 0.010252974213631032},
        {{0.3, 0.2}, {3e-6, 2e-6}, 0.99999999999339438, -8.8166666665841056e-21},
    };
    for (const auto& r : refs) {
        const cplx v = phi_lambda_complex(w2, r.l, r.H);
        CHECK(std::abs(v - cplx(r.re, r.im)) < 1e-12);
    }
    CHECK(phi_lambda_complex(w2, {1.3, -0.2}, {0.0, 0.0}) == cplx(1.0));
}

TEST_CASE("A2 phi_lambda is W-invariant and continuous across the wall") {
    const auto w2 = WeylData::a2();
    const AVec l{1.3, 0.2}, H{0.9, -0.4};
    const cplx v = phi_lambda_complex(w2, l, H);
    for (std::size_t s = 0; s < w2.order(); ++s) {
        CHECK(std::abs(phi_lambda_complex(w2, l, w2.act(s, H)) - v) < 1e-13);
        CHECK(std::abs(phi_lambda_complex(w2, w2.act(s, l), H) - v) < 1e-13);
    }
    // The wall {H0 = 0}: exactly on it, and on both sides of the Taylor zone.
    for (double y : {0.8, 2.5}) {
        const cplx on = phi_lambda_complex(w2, {0.7, 1.3}, {0.0, y});
        for (double d : {5e-5, 9.9e-5, 1.01e-4, 3e-4}) {
            const cplx a = phi_lambda_complex(w2, {0.7, 1.3}, {d, y});
            CHECK(std::isfinite(on.real()));
            CHECK(std::abs(a - phi_lambda_complex(w2, {0.7, 1.3}, {-d, y})) < 1e-13);
            CHECK(std::abs(a - on) < 2e-6);  // even in d: O(d^2) away from the wall value
        }
    }
    // Series and direct branches meet without a jump: the switch is at
    // |H| (|lambda| + |rho|) = 1/2.
    const AVec dir{0.6, 0.8};
    const AVec lam{1.1, 0.4};
    {
        const double r0 = 0.5 / (anorm(w2, lam) + anorm(w2, w2.rho));
        const double r1 = r0 * (1 - 1e-13), r2 = r0 * (1 + 1e-13);
        const cplx a = phi_lambda_complex(w2, lam, {r1 * dir[0], r1 * dir[1]});
        const cplx b = phi_lambda_complex(w2, lam, {r2 * dir[0], r2 * dir[1]});
        CHECK(std::abs(a - b) < 1e-13);
    }
}

TEST_CASE("c-function and Plancherel density") {
    const auto w1 = WeylData::rank_one();
    CHECK(std::abs(c_complex(w1, {2.0, 0}) - cplx(0, -0.5)) < 1e-15);
    CHECK(plancherel_complex(w1, {2.0, 0}) == doctest::Approx(4.0));
    const auto w2 = WeylData::a2();
    const AVec l{0.4, 1.7};
    CHECK(plancherel_complex(w2, l) == doctest::Approx(1.0 / std::norm(c_complex(w2, l))).epsilon(1e-13));
    CHECK_THROWS_AS(c_complex(w2, {0.0, 1.0}), PoleError);
}

TEST_CASE("antisymmetry chain phi, g = f phi and its Fourier transform") {
    for (const auto& wd : {WeylData::rank_one(), WeylData::a2()}) {
        const auto rep = antisymmetry_chain(wd, gaussian(wd, 1.0));
        CHECK(rep.pass);
        CHECK(rep.fourier_residual < 1e-10);
    }
}

TEST_CASE("spherical transform equals c(-lambda) F g on rank one, cross-checked with the radial engine") {
    const auto w1 = WeylData::rank_one();
    const auto grid = rank_one_grid();
    const auto f = gaussian(w1, 1.0);
    const std::vector<AVec> ls{{0.25, 0}, {1.0, 0}, {2.5, 0}, {5.0, 0}};
    for (const auto& q : reduction_ratio(w1, f, ls, grid)) CHECK(std::abs(q - 1.0) < 1e-10);

    // Independent route: the radial spherical transform of H^3.
    const auto T = SphericalTransform::standard(make_space(2, 0));
    const auto fh = T.forward(T.sample([](double t) { return cplx(std::exp(-t * t)); }));
    for (const auto& l : ls) {
        const cplx F = euclidean_fourier(w1, reduce(w1, f), l, grid.L, grid.n);
        const cplx ratio = fh(l[0]) / (c_complex(w1, {-l[0], 0}) * F);
        CHECK(std::abs(ratio - 1.0) < 1e-6);
    }
}

TEST_CASE("A2 spherical transform by quadrature equals c(-lambda) F g") {
    const auto w2 = WeylData::a2();
    for (const auto& q : reduction_ratio(w2, gaussian(w2, 1.0), {{0.5, 0.2}, {2.0, -1.0}, {3.0, 1.5}}))
        CHECK(std::abs(q - 1.0) < 1e-10);
}

TEST_CASE("kappa_W is frozen once and does not drift across operator-function pairs") {
    for (const auto& wd : {WeylData::rank_one(), WeylData::a2()}) {
        const auto grid = wd.rank == 1 ? rank_one_grid() : ComplexGrid{};
        const std::vector<AVec> xs = wd.rank == 1
                                         ? std::vector<AVec>{{0.3, 0}, {0.9, 0}, {1.7, 0}, {-1.2, 0}, {2.6, 0}}
                                         : std::vector<AVec>{{0.3, 0.1}, {0.9, -0.7}, {-1.2, 0.5}, {1.6, 1.1}, {0.0, -1.9}};
        const auto kw = calibrate_kappa_w(wd, xs, grid);
        CHECK(kw.value == doctest::Approx(1.0).epsilon(1e-10));
        const double tol = wd.rank == 1 ? 1e-6 : 1e-4;

        struct Pair {
            ComplexSymbol sigma;
            AFunction f;
        };
        const std::vector<Pair> pairs{
            {one_symbol(), gaussian(wd, 0.85)},
            {damped_symbol(wd), gaussian(wd, 1.0)},
            {damped_symbol(wd), gaussian(wd, 1.3)},
            {rational_symbol(wd), gaussian(wd, 1.0)},
            {rational_symbol(wd), [wd](const AVec& H) {
                 const double q = adot(wd, H, H);
                 return cplx(std::exp(-q) * (1.0 + q / 4.0));
             }},
        };
        for (const auto& p : pairs) {
            const auto R = apply_psdo_complex(wd, p.sigma, p.f, xs, grid);
            CHECK(std::abs(R.ratio - kw.value) <= tol);
            CHECK(R.residual <= tol);
        }
    }
}

TEST_CASE("rank-one complex route agrees with the spherical route on H^3") {
    const auto w1 = WeylData::rank_one();
    const auto s = make_space(2, 0);
    const auto T = SphericalTransform::standard(s);
    const auto sym = SpaceSymbol::radial_symbol(s, [](double t, cplx l) {
        const double b = 1.0 + 0.5 * std::cos(t);
        return (l * l + 2.0 + b) / (l * l + 1.0 + b);
    });
    const auto radial = apply_radial_psdo(T, sym, T.sample([](double t) { return cplx(std::exp(-t * t)); }));
    const std::vector<AVec> xs{{0.3, 0}, {0.9, 0}, {1.7, 0}, {2.6, 0}};
    const auto R = apply_psdo_complex(w1, rational_symbol(w1), gaussian(w1, 1.0), xs, rank_one_grid());
    for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(R.psi[i] - radial(xs[i][0])) < 1e-6);
}

TEST_CASE("a symbol that is not W-invariant is rejected") {
    const auto w2 = WeylData::a2();
    const ComplexSymbol bad{[](const AVec&, const AVec& l) { return cplx(1.0 + 0.1 * std::tanh(l[0])); }, false};
    CHECK_THROWS_AS(apply_psdo_complex(w2, bad, gaussian(w2, 1.0), {{0.1, 0.2}}), DomainError);
}

TEST_CASE("Calderon-Vaillancourt class check") {
    const auto w1 = WeylData::rank_one();
    const auto w2 = WeylData::a2();
    const auto c1 = cv_symbol_check(w1, damped_symbol(w1));
    CHECK(c1.pass);
    CHECK(c1.max_order == 1);
    const auto c2 = cv_symbol_check(w2, rational_symbol(w2));
    CHECK(c2.pass);
    CHECK(c2.max_order == 2);
    const auto one = cv_symbol_check(w2, one_symbol());
    CHECK(one.pass);
    CHECK(one.constant[1][0] == 0.0);

    // Linear growth in lambda violates the bound already at alpha = beta = 0.
    const ComplexSymbol grow{[w2](const AVec&, const AVec& l) { return cplx(std::sqrt(1.0 + adot(w2, l, l))); }, true};
    const auto g = cv_symbol_check(w2, grow);
    CHECK_FALSE(g.pass);
    CHECK(g.growth[0][0] == doctest::Approx(1.0).epsilon(0.05));

    // Bounded but not W-invariant.
    const ComplexSymbol skew{[](const AVec&, const AVec& l) { return cplx(1.0 + 0.1 * std::tanh(l[0])); }, true};
    const auto k = cv_symbol_check(w2, skew);
    CHECK_FALSE(k.pass);
    CHECK(k.w_residual > 1e-3);
}
