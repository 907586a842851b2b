#include "symspace/complex_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include "symspace/errors.hpp"

namespace symspace {

namespace {

using ld = long double;
using cld = std::complex<long double>;

constexpr double kWallTol = 1e-4;  // relative distance |alpha(H)| / |alpha| treated as "on the wall"
constexpr double kSeriesRadius = 0.5;

std::array<double, 4> mat_mul(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

std::array<double, 4> reflection(const AVec& a) {
    const double aa = a[0] * a[0] + a[1] * a[1];
    return {1 - 2 * a[0] * a[0] / aa, -2 * a[0] * a[1] / aa, -2 * a[1] * a[0] / aa, 1 - 2 * a[1] * a[1] / aa};
}

double mat_dist(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double d = 0;
    for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

int count_roots(const WeylData& wd) { return static_cast<int>(wd.positive_roots.size()); }

ld ldot(const WeylData& wd, const AVec& a, const AVec& b) {
    ld s = static_cast<ld>(a[0]) * b[0];
    if (wd.rank == 2) s += static_cast<ld>(a[1]) * b[1];
    return s;
}

cld ipow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        case 2: return {-1, 0};
        default: return {0, -1};
    }
}

// sum_s det(s) e^{i <s lambda, H>} directly.
cld alt_exp_direct(const WeylData& wd, const AVec& lambda, const AVec& H) {
    cld sum = 0;
    for (std::size_t s = 0; s < wd.order(); ++s) {
        const ld arg = ldot(wd, wd.act(s, lambda), H);
        sum += static_cast<ld>(wd.det[s]) * cld(std::cos(arg), std::sin(arg));
    }
    return sum;
}

// sum_{k >= N} (i^k / k!) sum_s det(s) <s lambda, H>^k; the lower terms cancel.
cld alt_exp_series(const WeylData& wd, const AVec& lambda, const AVec& H, int terms = 16) {
    const int N = count_roots(wd);
    std::vector<ld> x(wd.order());
    for (std::size_t s = 0; s < wd.order(); ++s) x[s] = ldot(wd, wd.act(s, lambda), H);
    cld sum = 0;
    ld fact = 1;
    for (int k = 1; k < N; ++k) fact *= k;
    for (int k = N; k < N + terms; ++k) {
        if (k > 0) fact *= k;
        ld a = 0;
        for (std::size_t s = 0; s < wd.order(); ++s) a += wd.det[s] * std::pow(x[s], k);
        sum += ipow(k) * (a / fact);
    }
    return sum;
}

ld phi_product_ld(const WeylData& wd, const AVec& H) {
    ld p = 1;
    for (const auto& a : wd.positive_roots) p *= 2 * std::sinh(ldot(wd, a, H));
    return p;
}

ld pi_ld(const WeylData& wd, const AVec& mu) {
    ld p = 1;
    for (const auto& a : wd.positive_roots) p *= ldot(wd, a, mu);
    return p;
}

// Nearest wall of H: index of the root with the smallest |alpha(H)| / |alpha|.
std::pair<int, double> nearest_wall(const WeylData& wd, const AVec& v) {
    int best = -1;
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < wd.positive_roots.size(); ++j) {
        const auto& a = wd.positive_roots[j];
        const double d = std::abs(adot(wd, a, v)) / anorm(wd, a);
        if (d < dist) {
            dist = d;
            best = static_cast<int>(j);
        }
    }
    return {best, dist};
}

}  // namespace

WeylData WeylData::rank_one() {
    WeylData wd;
    wd.type = "A1";
    wd.rank = 1;
    wd.W = {{1, 0, 0, 1}, {-1, 0, 0, 1}};
    wd.det = {1, -1};
    wd.positive_roots = {{1.0, 0.0}};
    wd.rho = {1.0, 0.0};
    wd.dimension = 3;
    return wd;
}

WeylData WeylData::a2() {
    WeylData wd;
    wd.type = "A2";
    wd.rank = 2;
    // a = {x in R^3 : sum x = 0} in the orthonormal basis (1,-1,0)/sqrt2, (1,1,-2)/sqrt6.
    const AVec a1{std::sqrt(2.0), 0.0};
    const AVec a2{-1.0 / std::sqrt(2.0), std::sqrt(1.5)};
    const AVec a3{1.0 / std::sqrt(2.0), std::sqrt(1.5)};
    wd.positive_roots = {a1, a2, a3};
    wd.rho = {a1[0] + a2[0] + a3[0], a1[1] + a2[1] + a3[1]};
    wd.dimension = 8;
    // Generate W from the two simple reflections.
    const std::array<double, 4> id{1, 0, 0, 1};
    std::vector<std::array<double, 4>> gens{reflection(a1), reflection(a2)};
    wd.W = {id};
    wd.det = {1};
    for (std::size_t i = 0; i < wd.W.size(); ++i) {
        for (const auto& g : gens) {
            const auto m = mat_mul(g, wd.W[i]);
            bool seen = false;
            for (const auto& w : wd.W) seen = seen || mat_dist(w, m) < 1e-12;
            if (!seen) {
                wd.W.push_back(m);
                wd.det.push_back(-wd.det[i]);
            }
        }
    }
    return wd;
}

AVec WeylData::act(std::size_t s, const AVec& v) const {
    const auto& m = W[s];
    if (rank == 1) return {m[0] * v[0], 0.0};
    return {m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]};
}

double adot(const WeylData& wd, const AVec& a, const AVec& b) {
    return wd.rank == 1 ? a[0] * b[0] : a[0] * b[0] + a[1] * b[1];
}

double anorm(const WeylData& wd, const AVec& a) { return std::sqrt(adot(wd, a, a)); }

WeylCheck check_weyl(const WeylData& wd) {
    WeylCheck c;
    const std::array<double, 4> id{1, 0, 0, 1};
    auto embed = [&](const std::array<double, 4>& m) {
        return wd.rank == 1 ? std::array<double, 4>{m[0], 0, 0, 1} : m;
    };
    bool closed = true;
    for (std::size_t i = 0; i < wd.order(); ++i) {
        const auto a = embed(wd.W[i]);
        const std::array<double, 4> at{a[0], a[2], a[1], a[3]};
        c.orthogonality = std::max(c.orthogonality, mat_dist(mat_mul(at, a), id));
        const double det = a[0] * a[3] - a[1] * a[2];
        closed = closed && std::abs(det - wd.det[i]) < 1e-12;
        bool inv = false;
        for (std::size_t j = 0; j < wd.order(); ++j) {
            const auto b = embed(wd.W[j]);
            inv = inv || mat_dist(b, at) < 1e-12;
            const auto p = mat_mul(a, b);
            bool in = false;
            for (std::size_t k = 0; k < wd.order(); ++k) in = in || mat_dist(embed(wd.W[k]), p) < 1e-12;
            closed = closed && in;
        }
        closed = closed && inv;
    }
    c.closed = closed;
    c.order_ok = wd.order() == (wd.rank == 1 ? 2u : 6u);
    c.pass = c.closed && c.order_ok && c.orthogonality < 1e-12;
    return c;
}

double weyl_phi(const WeylData& wd, const AVec& H) {
    ld s = 0;
    for (std::size_t k = 0; k < wd.order(); ++k) s += wd.det[k] * std::exp(ldot(wd, wd.act(k, wd.rho), H));
    return static_cast<double>(s);
}

double weyl_phi_product(const WeylData& wd, const AVec& H) { return static_cast<double>(phi_product_ld(wd, H)); }

double weyl_pi(const WeylData& wd, const AVec& mu) { return static_cast<double>(pi_ld(wd, mu)); }

cplx c_complex(const WeylData& wd, const AVec& lambda) {
    const cld pil = ipow(count_roots(wd)) * pi_ld(wd, lambda);
    if (pil == cld(0)) throw PoleError("c(lambda) has a pole on the walls");
    const cld c = pi_ld(wd, wd.rho) / pil;
    return {static_cast<double>(c.real()), static_cast<double>(c.imag())};
}

double plancherel_complex(const WeylData& wd, const AVec& lambda) {
    const ld r = pi_ld(wd, lambda) / pi_ld(wd, wd.rho);
    return static_cast<double>(r * r);
}

cplx phi_lambda_complex(const WeylData& wd, const AVec& lambda, const AVec& H) {
    const int N = count_roots(wd);
    const double hn = anorm(wd, H);
    if (hn == 0.0) return 1.0;
    const double ln = anorm(wd, lambda);
    const ld pirho = pi_ld(wd, wd.rho);
    const ld phi = phi_product_ld(wd, H);

    // lambda = 0: phi_0(H) = prod alpha(H) / sinh alpha(H).
    if (ln == 0.0) {
        ld p = 1;
        for (const auto& a : wd.positive_roots) {
            const ld t = ldot(wd, a, H);
            p *= t == 0 ? 1.0L : t / std::sinh(t);
        }
        return static_cast<double>(p);
    }

    // Ratio N(lambda, H) / pi(i lambda) with N the alternating exponential sum;
    // pi(i lambda) = i^N pi(lambda).  Near a lambda-wall both factors vanish
    // linearly, so the quotient is expanded along the wall normal.
    auto numerator_over_pi = [&](const std::function<cld(const AVec&)>& Nfun) -> cld {
        const auto [j, dist] = nearest_wall(wd, lambda);
        // Outside 1e-3 / (1 + |H|) the direct quotient loses at most ~1e-13
        // (the rotated lambda carries double rounding); inside, three odd
        // Taylor terms are exact to rounding.
        if (dist * (1.0 + hn) > 1e-3) return Nfun(lambda) / (ipow(N) * pi_ld(wd, lambda));
        const AVec& a = wd.positive_roots[j];
        const double an = anorm(wd, a);
        const AVec m{a[0] / an, wd.rank == 2 ? a[1] / an : 0.0};
        const double delta = adot(wd, a, lambda) / an;
        const AVec lw{lambda[0] - delta * m[0], lambda[1] - delta * m[1]};
        // N(lw + delta m) = sum_{k odd} delta^k / k! sum_s det(s) (i <s m, H>)^k e^{i <s lw, H>}.
        cld acc = 0;
        for (std::size_t s = 0; s < wd.order(); ++s) {
            const ld u = ldot(wd, wd.act(s, m), H);
            const ld arg = ldot(wd, wd.act(s, lw), H);
            const cld e(std::cos(arg), std::sin(arg));
            const cld iu(0, u);
            const cld term = iu + iu * iu * iu * static_cast<ld>(delta * delta) / 6.0L +
                             std::pow(iu, 5) * static_cast<ld>(std::pow(delta, 4)) / 120.0L;
            acc += static_cast<ld>(wd.det[s]) * term * e;
        }
        ld rest = an;  // pi(lambda) / delta = |alpha| prod_{beta != alpha} <beta, lambda>
        for (std::size_t b = 0; b < wd.positive_roots.size(); ++b)
            if (static_cast<int>(b) != j) rest *= ldot(wd, wd.positive_roots[b], lambda);
        return acc / (ipow(N) * rest);
    };

    cld q;
    if (hn * (ln + anorm(wd, wd.rho)) < kSeriesRadius) {
        // Near the origin: both N and phi by their alternating power series.
        const cld Nq = numerator_over_pi([&](const AVec& l) { return alt_exp_series(wd, l, H); });
        ld D = 0, fact = 1;
        std::vector<ld> x(wd.order());
        for (std::size_t s = 0; s < wd.order(); ++s) x[s] = ldot(wd, wd.act(s, wd.rho), H);
        for (int k = 1; k < N + 16; ++k) {
            fact *= k;
            if (k < N) continue;
            ld a = 0;
            for (std::size_t s = 0; s < wd.order(); ++s) a += wd.det[s] * std::pow(x[s], k);
            D += a / fact;
        }
        q = pirho * Nq / D;
    } else {
        const auto [jw, dist] = nearest_wall(wd, H);
        if (dist < kWallTol) {
            // H near a wall: three odd terms of the Taylor expansion along its normal.
            const AVec& a = wd.positive_roots[jw];
            const double an = anorm(wd, a);
            const AVec n{a[0] / an, wd.rank == 2 ? a[1] / an : 0.0};
            const double delta = adot(wd, a, H) / an;
            const AVec Hw{H[0] - delta * n[0], H[1] - delta * n[1]};
            auto Nfun = [&](const AVec& l) {
                cld acc = 0;
                for (std::size_t s = 0; s < wd.order(); ++s) {
                    const AVec sl = wd.act(s, l);
                    const cld iu(0, ldot(wd, sl, n));
                    const ld arg = ldot(wd, sl, Hw);
                    const cld e(std::cos(arg), std::sin(arg));
                    const ld d = delta;
                    acc += static_cast<ld>(wd.det[s]) * (iu + std::pow(iu, 3) * d * d / 6.0L +
                                                         std::pow(iu, 5) * std::pow(d, 4) / 120.0L) * e;
                }
                return acc;  // N / delta
            };
            // phi / delta, with 2 sinh(x) / delta kept finite on the wall itself.
            ld phid = 1;
            for (std::size_t b = 0; b < wd.positive_roots.size(); ++b) {
                const ld x = ldot(wd, wd.positive_roots[b], H);
                if (static_cast<int>(b) == jw) {
                    phid *= x == 0 ? 2.0L * an : 2 * std::sinh(x) / static_cast<ld>(delta);
                } else {
                    phid *= 2 * std::sinh(x);
                }
            }
            q = pirho * numerator_over_pi(Nfun) / phid;
        } else {
            q = pirho * numerator_over_pi([&](const AVec& l) { return alt_exp_direct(wd, l, H); }) / phi;
        }
    }
    return {static_cast<double>(q.real()), static_cast<double>(q.imag())};
}

AFunction reduce(const WeylData& wd, AFunction f) {
    return [wd, f = std::move(f)](const AVec& H) { return f(H) * weyl_phi(wd, H); };
}

GriddedFunction sample_on_grid(const WeylData& wd, const AFunction& f, double L, int n) {
    const double h = 2 * L / n;
    return GriddedFunction::sample(wd.rank, static_cast<std::size_t>(n), -L, h,
                                   [&](const Pt& x) { return f(AVec{x[0], wd.rank == 2 ? x[1] : 0.0}); });
}

namespace {

// Trapezoidal sum of u(H) e^{-i<lambda,H>} over the sampled grid.
cplx grid_fourier(const WeylData& wd, const GriddedFunction& u, const AVec& lambda) {
    const double h = u.h;
    cld sum = 0;
    if (wd.rank == 1) {
        for (std::size_t j = 0; j < u.n; ++j) {
            const ld arg = -static_cast<ld>(lambda[0]) * u.coord(j);
            sum += cld(u.values[j].real(), u.values[j].imag()) * cld(std::cos(arg), std::sin(arg));
        }
        sum *= h;
    } else {
        // Separable phases: e^{-i(l0 x + l1 y)}.
        std::vector<cplx> ex(u.n), ey(u.n);
        for (std::size_t j = 0; j < u.n; ++j) {
            ex[j] = std::polar(1.0, -lambda[0] * u.coord(j));
            ey[j] = std::polar(1.0, -lambda[1] * u.coord(j));
        }
        for (std::size_t i = 0; i < u.n; ++i) {
            double re = 0, im = 0;
            const cplx* row = u.values.data() + i * u.n;
            for (std::size_t j = 0; j < u.n; ++j) {
                re += row[j].real() * ey[j].real() - row[j].imag() * ey[j].imag();
                im += row[j].real() * ey[j].imag() + row[j].imag() * ey[j].real();
            }
            const cplx r = cplx(re, im) * ex[i];
            sum += cld(r.real(), r.imag());
        }
        sum *= static_cast<ld>(h) * h;
    }
    return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

AVec grid_point(const WeylData& wd, const GriddedFunction& u, std::size_t idx) {
    if (wd.rank == 1) return {u.coord(idx), 0.0};
    return {u.coord(idx / u.n), u.coord(idx % u.n)};
}

}  // namespace

cplx euclidean_fourier(const WeylData& wd, const AFunction& g, const AVec& lambda, double L, int n) {
    return grid_fourier(wd, sample_on_grid(wd, g, L, n), lambda);
}

cplx spherical_transform_complex(const WeylData& wd, const AFunction& f, const AVec& lambda, double L, int n) {
    const auto u = sample_on_grid(wd, f, L, n);
    const double cell = wd.rank == 1 ? u.h : u.h * u.h;
    const AVec ml{-lambda[0], -lambda[1]};
    cplx sum = 0;
    for (std::size_t idx = 0; idx < u.values.size(); ++idx) {
        const AVec H = grid_point(wd, u, idx);
        const double ph = weyl_phi_product(wd, H);
        if (ph == 0.0 || u.values[idx] == cplx(0)) continue;
        sum += u.values[idx] * phi_lambda_complex(wd, ml, H) * (ph * ph);
    }
    return sum * cell / static_cast<double>(wd.order());
}

AntisymmetryReport antisymmetry_chain(const WeylData& wd, const AFunction& f, const ComplexGrid& grid,
                                      std::uint64_t seed) {
    AntisymmetryReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    const AFunction g = reduce(wd, f);
    double phi_scale = 0, g_scale = 0;
    for (int k = 0; k < 24; ++k) {
        const AVec H{3.0 * U(rng), wd.rank == 2 ? 3.0 * U(rng) : 0.0};
        const double p = weyl_phi(wd, H);
        const cplx gv = g(H);
        phi_scale = std::max(phi_scale, std::abs(p));
        g_scale = std::max(g_scale, std::abs(gv));
        for (std::size_t s = 0; s < wd.order(); ++s) {
            const AVec sH = wd.act(s, H);
            rep.phi_residual = std::max(rep.phi_residual, std::abs(weyl_phi(wd, sH) - wd.det[s] * p));
            rep.g_residual = std::max(rep.g_residual, std::abs(g(sH) - static_cast<double>(wd.det[s]) * gv));
        }
    }
    rep.phi_residual /= std::max(phi_scale, 1e-300);
    rep.g_residual /= std::max(g_scale, 1e-300);

    // The grid is symmetric under x -> -x but not under the other reflections,
    // so the Fourier side is evaluated with a grid fine enough that the
    // trapezoidal rule is exact to rounding.
    const auto u = sample_on_grid(wd, g, grid.L, grid.n);
    double f_scale = 0;
    for (int k = 0; k < 6; ++k) {
        const AVec l{2.0 * U(rng), wd.rank == 2 ? 2.0 * U(rng) : 0.0};
        const cplx F = grid_fourier(wd, u, l);
        f_scale = std::max(f_scale, std::abs(F));
        for (std::size_t s = 0; s < wd.order(); ++s) {
            const cplx Fs = grid_fourier(wd, u, wd.act(s, l));
            rep.fourier_residual = std::max(rep.fourier_residual, std::abs(Fs - static_cast<double>(wd.det[s]) * F));
        }
    }
    rep.fourier_residual /= std::max(f_scale, 1e-300);
    rep.pass = rep.phi_residual <= 1e-10 && rep.g_residual <= 1e-10 && rep.fourier_residual <= 1e-10;
    return rep;
}

std::vector<cplx> reduction_ratio(const WeylData& wd, const AFunction& f, const std::vector<AVec>& lambdas,
                                  const ComplexGrid& grid) {
    const auto u = sample_on_grid(wd, reduce(wd, f), grid.L, grid.n);
    std::vector<cplx> out;
    out.reserve(lambdas.size());
    for (const auto& l : lambdas) {
        const cplx fh = spherical_transform_complex(wd, f, l, grid.L, grid.n_spectral);
        const AVec ml{-l[0], -l[1]};
        out.push_back(fh / (c_complex(wd, ml) * grid_fourier(wd, u, l)));
    }
    return out;
}

ReductionRoutes apply_psdo_complex(const WeylData& wd, const ComplexSymbol& sigma, const AFunction& f,
                                   const std::vector<AVec>& xs, const ComplexGrid& grid) {
    if (!sigma.w_invariant) throw DomainError("apply_psdo_complex: sigma must be W-invariant in lambda");
    ReductionRoutes R;
    R.xs = xs;
    const int r = wd.rank;

    // Route 1: spherical transform on a uniform lambda grid, then the inversion
    // formula with sigma inserted.
    const int nl = grid.n_lambda;
    const double hl = 2 * grid.Lambda / nl;
    std::vector<AVec> ls;
    std::vector<double> wl;
    const double cell = r == 1 ? hl : hl * hl;
    for (int i = 0; i < nl; ++i) {
        if (r == 1) {
            ls.push_back({-grid.Lambda + (i + 0.5) * hl, 0.0});
        } else {
            for (int j = 0; j < nl; ++j) ls.push_back({-grid.Lambda + (i + 0.5) * hl, -grid.Lambda + (j + 0.5) * hl});
        }
    }
    for (const auto& l : ls) wl.push_back(cell * plancherel_complex(wd, l));
    // The forward quadrature sum_H f phi^2 phi_{-lambda} is evaluated through
    // phi_{-lambda}(H) phi(H) = c(-lambda) sum_s det(s) e^{-i <s lambda, H>},
    // which makes it separable on the tensor grid (grid points on the walls
    // carry phi = 0 in both forms).
    const auto fphi = sample_on_grid(wd, reduce(wd, f), grid.L, grid.n_spectral);
    std::vector<cplx> fh(ls.size());
    parallel_for(ls.size(), default_jobs(), [&](std::size_t k) {
        cplx acc = 0;
        for (std::size_t s = 0; s < wd.order(); ++s)
            acc += static_cast<double>(wd.det[s]) * grid_fourier(wd, fphi, wd.act(s, ls[k]));
        const AVec ml{-ls[k][0], -ls[k][1]};
        fh[k] = c_complex(wd, ml) * acc / static_cast<double>(wd.order());
    });
    const double kappa = std::pow(2 * kPi, -r) / static_cast<double>(wd.order());
    R.psi.resize(xs.size());
    R.lhs.resize(xs.size());
    parallel_for(xs.size(), default_jobs(), [&](std::size_t i) {
        cplx sum = 0;
        for (std::size_t k = 0; k < ls.size(); ++k) sum += wl[k] * sigma(xs[i], ls[k]) * fh[k] * phi_lambda_complex(wd, ls[k], xs[i]);
        R.psi[i] = kappa * sum;
        R.lhs[i] = weyl_phi(wd, xs[i]) * R.psi[i];
    });

    // Route 2: Euclidean operator with symbol sigma(x, 2 pi xi) on g = f phi.
    const auto u = sample_on_grid(wd, reduce(wd, f), grid.L, grid.n);
    const auto a = EuclidSymbol::general(r, [&](const Pt& x, const Pt& xi) {
        return sigma(AVec{x[0], r == 2 ? x[1] : 0.0}, AVec{2 * kPi * xi[0], r == 2 ? 2 * kPi * xi[1] : 0.0});
    });
    std::vector<Pt> pts;
    for (const auto& x : xs) pts.push_back({x[0], x[1]});
    PdoOptions opt;
    opt.jobs = default_jobs();
    R.rhs = apply_pdo_at(a, u, pts, opt);

    cplx num = 0;
    double den = 0, scale = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        num += std::conj(R.rhs[i]) * R.lhs[i];
        den += std::norm(R.rhs[i]);
        scale = std::max(scale, std::abs(R.rhs[i]));
    }
    R.ratio = den > 0 ? num / den : cplx(0);
    for (std::size_t i = 0; i < xs.size(); ++i)
        R.residual = std::max(R.residual, std::abs(R.lhs[i] - R.ratio * R.rhs[i]) / std::max(scale, 1e-300));
    return R;
}

KappaW calibrate_kappa_w(const WeylData& wd, const std::vector<AVec>& xs, const ComplexGrid& grid) {
    const ComplexSymbol one{[](const AVec&, const AVec&) { return cplx(1.0); }, true};
    const AFunction gauss = [&wd](const AVec& H) { return cplx(std::exp(-adot(wd, H, H))); };
    const auto R = apply_psdo_complex(wd, one, gauss, xs, grid);
    return {R.ratio.real(), R.ratio.imag()};
}

namespace {

// Mixed finite difference of sigma in the coordinates (H0, H1, l0, l1).
cplx mixed_fd(const std::function<cplx(const std::array<double, 4>&)>& F, std::array<double, 4> p,
              const std::array<int, 4>& ord, const std::array<double, 4>& step, int from = 0) {
    for (int v = from; v < 4; ++v) {
        if (ord[v] == 0) continue;
        auto g = [&, v](double t) {
            auto q = p;
            q[v] = t;
            return mixed_fd(F, q, ord, step, v + 1);
        };
        return fd_derivative(g, p[v], ord[v], step[v]);
    }
    return F(p);
}

std::vector<std::array<int, 2>> multi_indices(int rank, int total) {
    std::vector<std::array<int, 2>> out;
    if (rank == 1) {
        out.push_back({total, 0});
    } else {
        for (int a = 0; a <= total; ++a) out.push_back({a, total - a});
    }
    return out;
}

}  // namespace

CVCertificate cv_symbol_check(const WeylData& wd, const ComplexSymbol& sigma) {
    CVCertificate cert;
    const int r = wd.rank;
    cert.max_order = r / 2 + 1;
    const int M = cert.max_order;
    cert.constant.assign(M + 1, std::vector<double>(M + 1, 0.0));
    cert.growth.assign(M + 1, std::vector<double>(M + 1, 0.0));

    std::vector<AVec> Hs = r == 1 ? std::vector<AVec>{{-2.0, 0}, {-0.7, 0}, {0.0, 0}, {0.9, 0}, {2.5, 0}}
                                  : std::vector<AVec>{{0.0, 0.0}, {0.8, -0.3}, {-1.1, 0.6}, {1.9, 1.4}, {-0.4, -2.2}};
    std::vector<AVec> dirs;
    if (r == 1) {
        dirs = {{1.0, 0}, {-1.0, 0}};
    } else {
        for (int k = 0; k < 4; ++k) {
            const double th = 0.37 + k * kPi / 4;
            dirs.push_back({std::cos(th), std::sin(th)});
        }
    }
    const int nm = 16;
    std::vector<double> mags(nm);
    for (int k = 0; k < nm; ++k) mags[k] = std::pow(10.0, -2.0 + 5.0 * k / (nm - 1));

    auto F = [&](const std::array<double, 4>& p) { return sigma(AVec{p[0], p[1]}, AVec{p[2], p[3]}); };
    double base = 0;
    for (int al = 0; al <= M; ++al) {
        for (int be = 0; be <= M; ++be) {
            std::vector<double> sup(nm, 0.0);
            for (int k = 0; k < nm; ++k) {
                for (const auto& H : Hs) {
                    for (const auto& d : dirs) {
                        const std::array<double, 4> p{H[0], H[1], mags[k] * d[0], mags[k] * d[1]};
                        const std::array<double, 4> step{0.05, 0.05, 0.05 * (1 + mags[k]), 0.05 * (1 + mags[k])};
                        for (const auto& ia : multi_indices(r, al)) {
                            for (const auto& ib : multi_indices(r, be)) {
                                const std::array<int, 4> ord{ib[0], ib[1], ia[0], ia[1]};
                                sup[k] = std::max(sup[k], std::abs(mixed_fd(F, p, ord, step)));
                            }
                        }
                    }
                }
            }
            if (al == 0 && be == 0) base = *std::max_element(sup.begin(), sup.end());
            cert.constant[al][be] = *std::max_element(sup.begin(), sup.end());
            // Growth exponent of the running maximum over |lambda| >= 10, ignoring
            // entries at rounding level.
            std::vector<double> env(nm);
            for (int k = 0; k < nm; ++k) env[k] = std::max(sup[k], k > 0 ? env[k - 1] : 0.0);
            std::vector<double> x, y;
            for (int k = 0; k < nm; ++k)
                if (mags[k] >= 10.0 && env[k] > 1e-9 * std::max(base, 1.0)) {
                    x.push_back(mags[k]);
                    y.push_back(env[k]);
                }
            cert.growth[al][be] = x.size() >= 3 ? fit_loglog(x, y).slope : 0.0;
        }
    }

    // W-invariance in lambda.
    double wres = 0, scale = 0;
    for (const auto& H : Hs)
        for (const auto& d : dirs)
            for (double m : {0.3, 2.0, 17.0}) {
                const AVec l{m * d[0], m * d[1]};
                const cplx v = sigma(H, l);
                scale = std::max(scale, std::abs(v));
                for (std::size_t s = 0; s < wd.order(); ++s) wres = std::max(wres, std::abs(sigma(H, wd.act(s, l)) - v));
            }
    cert.w_residual = wres / std::max(scale, 1e-300);

    bool ok = cert.w_residual <= 1e-10;
    for (int al = 0; al <= M; ++al)
        for (int be = 0; be <= M; ++be) ok = ok && std::isfinite(cert.constant[al][be]) && cert.growth[al][be] <= 0.15;
    cert.pass = ok;
    return cert;
}

}  // namespace symspace
