#include "symspace/pdo_euclid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include <fftw3.h>

#include "symspace/errors.hpp"

namespace symspace {

namespace {

// FFTW's planner is not thread-safe; plan creation and destruction are serialised.
std::mutex g_plan_mutex;

void fft_inplace(std::vector<cplx>& data, int dim, std::size_t M, int sign) {
    auto* p = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(g_plan_mutex);
        const int m = static_cast<int>(M);
        plan = dim == 1 ? fftw_plan_dft_1d(m, p, p, sign, FFTW_ESTIMATE)
                        : fftw_plan_dft_2d(m, m, p, p, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    fftw_destroy_plan(plan);
}

// Padded spectrum of a gridded function with its frequency axis.
struct Spectrum {
    int dim = 1;
    std::size_t M = 0;
    double x0 = 0.0;
    std::vector<double> freq;  // per-axis frequencies k/(M h), signed
    std::vector<cplx> F;       // M^dim coefficients
};

Spectrum make_spectrum(const GriddedFunction& f, const PdoOptions& opt) {
    if (f.dim != 1 && f.dim != 2) throw DomainError("apply_pdo: dimension must be 1 or 2");
    const std::size_t n = f.n;
    const std::size_t total = f.dim == 1 ? n : n * n;
    if (n < 2 || f.values.size() != total) throw DomainError("apply_pdo: sample count does not match the grid");
    double fmax = 0.0;
    for (auto v : f.values) fmax = std::max(fmax, std::abs(v));
    if (!opt.periodic && fmax > 0.0) {
        double edge = 0.0;
        if (f.dim == 1) {
            edge = std::max(std::abs(f.values.front()), std::abs(f.values.back()));
        } else {
            for (std::size_t i = 0; i < n; ++i)
                edge = std::max({edge, std::abs(f.values[i]), std::abs(f.values[(n - 1) * n + i]),
                                 std::abs(f.values[i * n]), std::abs(f.values[i * n + n - 1])});
        }
        if (edge > opt.wrap_tol * fmax)
            throw ResolutionError("apply_pdo: input does not vanish at the grid boundary (wraparound)");
    }
    Spectrum S;
    S.dim = f.dim;
    S.M = opt.periodic ? n : 2 * n;
    S.x0 = f.x0;
    const std::size_t M = S.M;
    S.freq.resize(M);
    for (std::size_t k = 0; k < M; ++k) {
        const double ks = k < M / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(M);
        S.freq[k] = ks / (static_cast<double>(M) * f.h);
    }
    S.F.assign(f.dim == 1 ? M : M * M, 0.0);
    if (f.dim == 1) {
        std::copy(f.values.begin(), f.values.end(), S.F.begin());
    } else {
        for (std::size_t i = 0; i < n; ++i)
            std::copy(f.values.begin() + i * n, f.values.begin() + (i + 1) * n, S.F.begin() + i * M);
    }
    fft_inplace(S.F, f.dim, M, FFTW_FORWARD);
    // Aliasing monitor: energy in the outer 10% of the band on any axis.
    double total_e = 0.0, outer = 0.0;
    const double edge_k = 0.45 * static_cast<double>(M);
    auto outer_k = [&](std::size_t k) {
        const double ks = k < M / 2 ? static_cast<double>(k) : static_cast<double>(M) - static_cast<double>(k);
        return ks >= edge_k;
    };
    for (std::size_t idx = 0; idx < S.F.size(); ++idx) {
        const double e = std::norm(S.F[idx]);
        total_e += e;
        const bool o = f.dim == 1 ? outer_k(idx) : (outer_k(idx / M) || outer_k(idx % M));
        if (o) outer += e;
    }
    if (total_e > 0.0 && outer > opt.alias_tol * total_e)
        throw ResolutionError("apply_pdo: spectral mass near the Nyquist frequency (aliasing)");
    return S;
}

cplx sum_at(const EuclidSymbol& a, const Spectrum& S, const Pt& x, double fmax) {
    const std::size_t M = S.M;
    const double cut = 1e-17 * fmax;
    const double norm = S.dim == 1 ? 1.0 / M : 1.0 / (static_cast<double>(M) * M);
    if (S.dim == 1) {
        cplx acc = 0.0;
        for (std::size_t k = 0; k < M; ++k) {
            if (std::abs(S.F[k]) <= cut) continue;
            const double xi = S.freq[k];
            acc += a(x, {xi, 0.0}) * S.F[k] * std::polar(1.0, 2.0 * kPi * xi * (x[0] - S.x0));
        }
        return acc * norm;
    }
    std::vector<cplx> e1(M), e2(M);
    for (std::size_t k = 0; k < M; ++k) {
        e1[k] = std::polar(1.0, 2.0 * kPi * S.freq[k] * (x[0] - S.x0));
        e2[k] = std::polar(1.0, 2.0 * kPi * S.freq[k] * (x[1] - S.x0));
    }
    cplx acc = 0.0;
    for (std::size_t k1 = 0; k1 < M; ++k1)
        for (std::size_t k2 = 0; k2 < M; ++k2) {
            const cplx F = S.F[k1 * M + k2];
            if (std::abs(F) <= cut) continue;
            acc += a(x, {S.freq[k1], S.freq[k2]}) * F * e1[k1] * e2[k2];
        }
    return acc * norm;
}

double max_abs(const std::vector<cplx>& v) {
    double m = 0.0;
    for (auto z : v) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

EuclidSymbol EuclidSymbol::multiplier(int dim, std::function<cplx(const Pt& xi)> m, double order) {
    EuclidSymbol s;
    s.dim = dim;
    s.order = order;
    s.x_independent = true;
    s.eval = [m = std::move(m)](const Pt&, const Pt& xi) { return m(xi); };
    return s;
}

EuclidSymbol EuclidSymbol::general(int dim, std::function<cplx(const Pt& x, const Pt& xi)> a, double order) {
    EuclidSymbol s;
    s.dim = dim;
    s.order = order;
    s.eval = std::move(a);
    return s;
}

GriddedFunction GriddedFunction::sample(int dim, std::size_t n, double x0, double h,
                                        const std::function<cplx(const Pt&)>& f) {
    GriddedFunction g;
    g.dim = dim;
    g.n = n;
    g.x0 = x0;
    g.h = h;
    if (dim == 1) {
        g.values.resize(n);
        for (std::size_t j = 0; j < n; ++j) g.values[j] = f({g.coord(j), 0.0});
    } else {
        g.values.resize(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g.values[i * n + j] = f({g.coord(i), g.coord(j)});
    }
    return g;
}

GriddedFunction apply_pdo(const EuclidSymbol& a, const GriddedFunction& f, const PdoOptions& opt) {
    if (a.dim != f.dim) throw DomainError("apply_pdo: symbol and data dimensions differ");
    Spectrum S = make_spectrum(f, opt);
    GriddedFunction out = f;
    const std::size_t n = f.n, M = S.M;
    if (a.x_independent) {
        const Pt zero{0.0, 0.0};
        for (std::size_t idx = 0; idx < S.F.size(); ++idx) {
            const Pt xi = f.dim == 1 ? Pt{S.freq[idx], 0.0} : Pt{S.freq[idx / M], S.freq[idx % M]};
            S.F[idx] *= a(zero, xi);
        }
        fft_inplace(S.F, f.dim, M, FFTW_BACKWARD);
        const double norm = f.dim == 1 ? 1.0 / M : 1.0 / (static_cast<double>(M) * M);
        if (f.dim == 1) {
            for (std::size_t j = 0; j < n; ++j) out.values[j] = S.F[j] * norm;
        } else {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) out.values[i * n + j] = S.F[i * M + j] * norm;
        }
        return out;
    }
    const double fmax = max_abs(S.F);
    const std::size_t total = out.values.size();
    parallel_for(total, opt.jobs, [&](std::size_t idx) {
        const Pt x = f.dim == 1 ? Pt{f.coord(idx), 0.0} : Pt{f.coord(idx / n), f.coord(idx % n)};
        out.values[idx] = sum_at(a, S, x, fmax);
    });
    return out;
}

std::vector<cplx> apply_pdo_at(const EuclidSymbol& a, const GriddedFunction& f, const std::vector<Pt>& xs,
                               const PdoOptions& opt) {
    if (a.dim != f.dim) throw DomainError("apply_pdo: symbol and data dimensions differ");
    const Spectrum S = make_spectrum(f, opt);
    const double fmax = max_abs(S.F);
    std::vector<cplx> out(xs.size());
    parallel_for(xs.size(), opt.jobs, [&](std::size_t i) { out[i] = sum_at(a, S, xs[i], fmax); });
    return out;
}

double grid_l2_norm(const GriddedFunction& f) {
    double s = 0.0;
    for (auto v : f.values) s += std::norm(v);
    return std::sqrt(s * std::pow(f.h, f.dim));
}

// --- certificates ---------------------------------------------------------

namespace {

// Mixed derivative d^ord over the variables (x1, x2, xi1, xi2) by nested
// Richardson-extrapolated central differences.
cplx mixed_derivative(const std::function<cplx(const std::array<double, 4>&)>& g, std::array<double, 4> v,
                      const std::array<int, 4>& ord, const std::array<double, 4>& step, int var = 0) {
    while (var < 4 && ord[var] == 0) ++var;
    if (var == 4) return g(v);
    auto slice = [&](double s) {
        std::array<double, 4> w = v;
        w[var] = s;
        return mixed_derivative(g, w, ord, step, var + 1);
    };
    return fd_derivative(slice, v[var], ord[var], step[var]);
}

// Multi-indices of total order k in `dim` variables.
std::vector<std::array<int, 2>> multi_indices(int dim, int k) {
    std::vector<std::array<int, 2>> out;
    if (dim == 1) return {{k, 0}};
    for (int i = 0; i <= k; ++i) out.push_back({i, k - i});
    return out;
}

std::vector<double> log_space(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    return v;
}

std::vector<Pt> directions(int dim, int count) {
    std::vector<Pt> d;
    if (dim == 1) return {{1.0, 0.0}, {-1.0, 0.0}};
    for (int i = 0; i < count; ++i) {
        const double th = 0.31 + 2.0 * kPi * i / count;  // avoids the coordinate axes
        d.push_back({std::cos(th), std::sin(th)});
    }
    return d;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y, double empty_value) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (y[i] > 0.0 && std::isfinite(y[i])) {
            xs.push_back(x[i]);
            ys.push_back(y[i]);
        }
    if (xs.size() < 3) return empty_value;
    return fit_loglog(xs, ys).slope;
}

}  // namespace

SymbolCertificate validate_symbol(const EuclidSymbol& a, int max_alpha, int max_beta, const SymbolSampling& plan) {
    if (max_alpha < 0 || max_alpha > 4 || max_beta < 0 || max_beta > 4)
        throw DomainError("validate_symbol: derivative orders must lie in [0, 4]");
    if (a.dim != 1 && a.dim != 2) throw DomainError("validate_symbol: dimension must be 1 or 2");
    SymbolCertificate cert;
    cert.order = a.order;
    cert.max_alpha = max_alpha;
    cert.max_beta = max_beta;
    const std::size_t NA = max_alpha + 1, NB = max_beta + 1;
    cert.constant.assign(NA, std::vector<double>(NB, 0.0));
    cert.fitted.assign(NA, std::vector<double>(NB, 0.0));
    cert.small_slope.assign(NA, std::vector<double>(NB, 0.0));
    cert.entry_pass.assign(NA, std::vector<bool>(NB, false));

    // x samples: the grid itself in 1-d, a diagonal-type subset in 2-d.
    std::vector<Pt> xs;
    for (std::size_t i = 0; i < plan.xs.size(); ++i)
        xs.push_back(a.dim == 1 ? Pt{plan.xs[i], 0.0} : Pt{plan.xs[i], plan.xs[(2 * i + 1) % plan.xs.size()]});
    const auto mags = log_space(plan.xi_min, plan.xi_max, plan.xi_count);
    const auto dirs = directions(a.dim, plan.directions);
    auto g = [&](const std::array<double, 4>& v) { return a({v[0], v[1]}, {v[2], v[3]}); };

    double amax = 0.0;
    for (const auto& x : xs)
        for (double r : mags)
            for (const auto& u : dirs) amax = std::max(amax, std::abs(a(x, {r * u[0], r * u[1]})));
    bool finite_everywhere = std::isfinite(amax);
    double worst_ratio = -1.0;

    for (std::size_t al = 0; al < NA; ++al) {
        for (std::size_t be = 0; be < NB; ++be) {
            std::vector<double> sup_by_mag(mags.size(), 0.0);
            double C = 0.0;
            for (std::size_t im = 0; im < mags.size(); ++im) {
                const double r = mags[im];
                const double hxi = plan.hxi_rel * (1.0 + r);
                const double noise = 1e-13 * amax * std::pow(4.0, static_cast<double>(al + be)) /
                                     (std::pow(hxi, static_cast<double>(al)) * std::pow(plan.hx, static_cast<double>(be)));
                for (const auto& x : xs)
                    for (const auto& u : dirs)
                        for (const auto& ia : multi_indices(a.dim, static_cast<int>(al)))
                            for (const auto& ib : multi_indices(a.dim, static_cast<int>(be))) {
                                const std::array<double, 4> v{x[0], x[1], r * u[0], r * u[1]};
                                const std::array<int, 4> ord{ib[0], ib[1], ia[0], ia[1]};
                                const std::array<double, 4> step{plan.hx, plan.hx, hxi, hxi};
                                double d = std::abs(mixed_derivative(g, v, ord, step));
                                if (!std::isfinite(d)) finite_everywhere = false;
                                if (d <= noise) d = 0.0;
                                sup_by_mag[im] = std::max(sup_by_mag[im], d);
                                const double ratio = d / std::pow(1.0 + r, a.order - static_cast<double>(al));
                                C = std::max(C, ratio);
                                if (ratio > worst_ratio) {
                                    worst_ratio = ratio;
                                    cert.worst = {static_cast<int>(al), static_cast<int>(be), x, {r * u[0], r * u[1]}, ratio};
                                }
                            }
            }
            std::vector<double> xl, yl, xs_small, ys_small;
            for (std::size_t im = 0; im < mags.size(); ++im) {
                if (mags[im] >= 10.0) {
                    xl.push_back(1.0 + mags[im]);
                    yl.push_back(sup_by_mag[im]);
                }
                if (mags[im] <= 0.1) {
                    xs_small.push_back(mags[im]);
                    ys_small.push_back(sup_by_mag[im]);
                }
            }
            const double fit = fitted_slope(xl, yl, -std::numeric_limits<double>::infinity());
            const double small = fitted_slope(xs_small, ys_small, 0.0);
            cert.constant[al][be] = C;
            cert.fitted[al][be] = fit;
            cert.small_slope[al][be] = small;
            cert.entry_pass[al][be] = std::isfinite(C) && fit <= a.order - static_cast<double>(al) + 0.15 &&
                                      small >= -0.15;
        }
    }
    cert.pass = finite_everywhere;
    for (const auto& row : cert.entry_pass)
        for (bool b : row) cert.pass = cert.pass && b;
    return cert;
}

MultiplierCertificate hm_multiplier_check(const std::function<cplx(const Pt&)>& m, int dim) {
    if (dim != 1 && dim != 2) throw DomainError("hm_multiplier_check: dimension must be 1 or 2");
    MultiplierCertificate cert;
    cert.dim = dim;
    const int J = dim / 2 + 1;
    const auto mags = log_space(1e-3, 1e3, 49);
    const auto dirs = directions(dim, 5);
    auto g = [&](const std::array<double, 4>& v) { return m({v[2], v[3]}); };
    double mmax = 0.0;
    for (double r : mags)
        for (const auto& u : dirs) mmax = std::max(mmax, std::abs(m({r * u[0], r * u[1]})));
    cert.pass = std::isfinite(mmax);
    for (int j = 0; j <= J; ++j) {
        std::vector<double> sup(mags.size(), 0.0);
        for (std::size_t im = 0; im < mags.size(); ++im) {
            const double r = mags[im];
            const double h = 0.05 * std::min(r, 1.0);  // resolves |xi| < 1 at its own scale
            for (const auto& u : dirs)
                for (const auto& ig : multi_indices(dim, j)) {
                    const std::array<double, 4> v{0.0, 0.0, r * u[0], r * u[1]};
                    const std::array<int, 4> ord{0, 0, ig[0], ig[1]};
                    const std::array<double, 4> step{1.0, 1.0, h, h};
                    double d = std::abs(mixed_derivative(g, v, ord, step)) * std::pow(r, j);
                    if (!std::isfinite(d)) cert.pass = false;
                    if (d <= 1e-11 * mmax * std::pow(4.0, j)) d = 0.0;
                    sup[im] = std::max(sup[im], d);
                }
        }
        double A = 0.0;
        for (double s : sup) A = std::max(A, s);
        std::vector<double> xl, yl, xs, ys;
        for (std::size_t im = 0; im < mags.size(); ++im) {
            if (mags[im] >= 10.0) {
                xl.push_back(mags[im]);
                yl.push_back(sup[im]);
            }
            if (mags[im] <= 0.1) {
                xs.push_back(mags[im]);
                ys.push_back(sup[im]);
            }
        }
        const double ls = fitted_slope(xl, yl, 0.0), ss = fitted_slope(xs, ys, 0.0);
        cert.A.push_back(A);
        cert.large_slope.push_back(ls);
        cert.small_slope.push_back(ss);
        cert.pass = cert.pass && std::isfinite(A) && ls <= 0.15 && ss >= -0.15;
    }
    return cert;
}

FamilyCertificate family_uniformity(const std::vector<EuclidSymbol>& fam, int max_alpha, int max_beta,
                                    double max_spread, const SymbolSampling& plan) {
    if (fam.empty()) throw DomainError("family_uniformity: empty family");
    FamilyCertificate fc;
    fc.members.resize(fam.size());
    parallel_for(fam.size(), default_jobs(),
                 [&](std::size_t i) { fc.members[i] = validate_symbol(fam[i], max_alpha, max_beta, plan); });
    const std::size_t NA = max_alpha + 1, NB = max_beta + 1;
    fc.max_constant.assign(NA, std::vector<double>(NB, 0.0));
    fc.min_constant.assign(NA, std::vector<double>(NB, std::numeric_limits<double>::infinity()));
    double c00 = 0.0;
    for (const auto& m : fc.members) c00 = std::max(c00, m.constant[0][0]);
    fc.pass = true;
    for (std::size_t i = 0; i < fam.size(); ++i) {
        if (!fc.members[i].pass && fc.pass) {
            fc.pass = false;
            fc.worst_index = static_cast<int>(i);
        }
    }
    double worst_spread = 1.0;
    int worst_member = 0;
    for (std::size_t al = 0; al < NA; ++al)
        for (std::size_t be = 0; be < NB; ++be) {
            int arg = 0;
            for (std::size_t i = 0; i < fam.size(); ++i) {
                const double c = fc.members[i].constant[al][be];
                if (c > fc.max_constant[al][be]) {
                    fc.max_constant[al][be] = c;
                    arg = static_cast<int>(i);
                }
                fc.min_constant[al][be] = std::min(fc.min_constant[al][be], c);
            }
            // Entries at rounding level (e.g. vanishing x-derivatives) carry no information.
            if (fc.max_constant[al][be] <= 1e-8 * c00) continue;
            const double spread = fc.min_constant[al][be] > 0.0 ? fc.max_constant[al][be] / fc.min_constant[al][be]
                                                                 : std::numeric_limits<double>::infinity();
            if (spread > worst_spread) {
                worst_spread = spread;
                worst_member = arg;
            }
        }
    fc.spread = worst_spread;
    if (fc.spread > max_spread) {
        if (fc.pass) fc.worst_index = worst_member;
        fc.pass = false;
    }
    return fc;
}

}  // namespace symspace
