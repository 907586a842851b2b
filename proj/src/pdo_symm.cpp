#include "symspace/pdo_symm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <tuple>

#include "symspace/errors.hpp"
#include "symspace/geometry.hpp"
#include "symspace/spherical.hpp"

namespace symspace {

namespace {

constexpr double kTailTol = 1e-10;

double plancherel_at(const CFunction& cf, double l) { return cf.plancherel(cplx(l, 0.0)).real(); }

std::vector<double> log_space(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a * std::pow(b / a, static_cast<double>(i) / (n - 1));
    return v;
}

// Lagrange weights for extrapolating values at the points `e` to 0.
std::vector<double> extrapolation_weights(const std::vector<double>& e) {
    std::vector<double> w(e.size(), 1.0);
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = 0; j < e.size(); ++j)
            if (i != j) w[i] *= e[j] / (e[j] - e[i]);
    return w;
}

// Relative size of the last panel of a spectral integrand.
double tail_ratio(const PanelGrid& g, const std::vector<double>& mag) {
    double m = 0.0, tail = 0.0;
    const std::size_t start = g.size() - static_cast<std::size_t>(g.order());
    for (std::size_t i = 0; i < mag.size(); ++i) {
        m = std::max(m, mag[i]);
        if (i >= start) tail = std::max(tail, mag[i]);
    }
    return m > 0.0 ? tail / m : 0.0;
}

std::function<cplx(double)> symbol_at(const SpaceSymbol& sigma, cplx x, int d) {
    if (sigma.flavor == SpaceSymbol::Flavor::General) {
        if (d != 2) throw DomainError("general symbols are supported on the disc (d = 2) only");
        return [&sigma, x](double l) { return sigma.at_point(x, l); };
    }
    const double r = d == 2 ? disc_distance(x, 0.0) : std::abs(x.real());
    return [&sigma, r](double l) { return sigma.at_radius(r, l); };
}

RadialFunction profile_eps(const SphericalTransform& T, const std::function<cplx(double)>& sx, double eps) {
    const auto& lg = T.lgrid();
    const auto& tg = T.tgrid();
    std::vector<cplx> wv(lg.size());
    std::vector<double> mag(lg.size());
    for (std::size_t i = 0; i < lg.size(); ++i) {
        const double l = lg.nodes()[i];
        const cplx v = sx(l) * std::exp(-eps * l * l) * T.plancherel(i);
        mag[i] = std::abs(v);
        wv[i] = lg.weights()[i] * v;
    }
    if (tail_ratio(lg, mag) > kTailTol)
        throw ConvergenceError("kernel: sigma(x, lambda) e^{-eps lambda^2} |c|^{-2} is not negligible at the end of the "
                               "lambda-grid; supply a decaying symbol or eps > 0");
    RadialFunction out{T.space(), tg, std::vector<cplx>(tg.size())};
    for (std::size_t j = 0; j < tg.size(); ++j) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < lg.size(); ++i) acc += wv[i] * T.phi(i, j);
        out.values[j] = T.kappa_inv() * acc;
    }
    return out;
}

double sup_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double double_factorial_odd(int k) {  // (2k-1)!!
    double v = 1.0;
    for (int j = 1; j <= 2 * k - 1; j += 2) v *= j;
    return v;
}

// The separation grid depends only on the space, eps and the radii, not on
// the symbol; its spherical-function table is shared within the process.
std::shared_ptr<const PhiTable> shared_phi_table(const SpaceParams& s, const PanelGrid& g, const std::vector<double>& ts) {
    using Key = std::tuple<int, int, double, std::size_t, std::vector<double>>;
    static std::mutex mtx;
    static std::map<Key, std::shared_ptr<const PhiTable>> cache;
    const Key key{s.m1, s.m2, g.upper(), g.size(), ts};
    {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
    }
    auto tab = std::make_shared<const PhiTable>(phi_table(s, g.nodes(), ts));
    std::lock_guard<std::mutex> lk(mtx);
    return cache.emplace(key, tab).first->second;
}

}  // namespace

// --- symbols ----------------------------------------------------------------

cplx SpaceSymbol::at_radius(double r, cplx lambda) const {
    if (flavor == Flavor::Radial) return radial(r, lambda);
    return general(std::tanh(0.5 * r), lambda);
}

cplx SpaceSymbol::at_point(cplx z, cplx lambda) const {
    if (flavor == Flavor::General) return general(z, lambda);
    return radial(disc_distance(z, 0.0), lambda);
}

SpaceSymbol SpaceSymbol::multiplier(const SpaceParams& s, std::function<cplx(cplx)> m) {
    SpaceSymbol out;
    out.space = s;
    out.flavor = Flavor::Radial;
    out.x_independent = true;
    out.radial = [m](double, cplx l) { return m(l); };
    out.general = [m](cplx, cplx l) { return m(l); };
    return out;
}

SpaceSymbol SpaceSymbol::radial_symbol(const SpaceParams& s, std::function<cplx(double, cplx)> sigma) {
    SpaceSymbol out;
    out.space = s;
    out.flavor = Flavor::Radial;
    out.radial = std::move(sigma);
    return out;
}

SpaceSymbol SpaceSymbol::disc_symbol(const SpaceParams& s, std::function<cplx(cplx, cplx)> sigma) {
    if (s.d != 2) throw DomainError("disc_symbol: requires d = 2");
    SpaceSymbol out;
    out.space = s;
    out.flavor = Flavor::General;
    out.general = std::move(sigma);
    return out;
}

double eta_global(double t) { return smooth_step(std::abs(t) - 1.0); }
double eta_local(double t) { return 1.0 - eta_global(t); }
double spectral_cutoff(double lambda) { return smooth_step(std::abs(lambda) - 1.0); }

StripCheck strip_check(const SpaceSymbol& sigma, double width, std::span<const double> radii) {
    StripCheck out;
    out.width = width;
    std::vector<double> rs(radii.begin(), radii.end());
    if (rs.empty()) rs = {0.0, 0.5, 1.5, 3.0};
    for (double r : rs) {
        for (int k = 0; k <= 40; ++k) {
            const double x = -20.0 + k;
            for (double y : {0.0, 0.5 * width, width}) {
                auto f = [&](cplx l) { return sigma.at_radius(r, l); };
                const cplx v = f(cplx(x, y));
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
                    out.finite = false;
                    continue;
                }
                out.max_abs = std::max(out.max_abs, std::abs(v));
                const double h = 1e-4;
                auto d4 = [&](cplx dir) {
                    return (-f(cplx(x, y) + 2.0 * h * dir) + 8.0 * f(cplx(x, y) + h * dir) -
                            8.0 * f(cplx(x, y) - h * dir) + f(cplx(x, y) - 2.0 * h * dir)) /
                           (12.0 * h);
                };
                const cplx dx = d4(1.0), dy = d4(kI);
                const double scale = std::abs(dx) + std::abs(v) / (1.0 + std::abs(x)) + 1e-300;
                out.cr_residual = std::max(out.cr_residual, std::abs(dy - kI * dx) / scale);
            }
        }
    }
    out.pass = out.finite && out.cr_residual < 1e-6;
    return out;
}

// --- application --------------------------------------------------------------

RadialFunction apply_radial_psdo(const SphericalTransform& T, const SpaceSymbol& sigma, const RadialFunction& f) {
    const SpectralFunction fh = T.forward(f);
    const auto& lg = T.lgrid();
    const auto& tg = T.tgrid();
    const double tmax = tg.upper();
    // Tail check at a few radii.
    for (double r : {0.0, 1.0, 0.25 * tmax}) {
        std::vector<double> mag(lg.size());
        for (std::size_t i = 0; i < lg.size(); ++i)
            mag[i] = std::abs(sigma.at_radius(r, lg.nodes()[i]) * fh.values[i]) * T.plancherel(i);
        if (tail_ratio(lg, mag) > kTailTol)
            throw ConvergenceError("apply_radial_psdo: sigma f^ |c|^{-2} is not negligible at the end of the lambda-grid");
        if (sigma.x_independent) break;
    }
    RadialFunction out{T.space(), tg, std::vector<cplx>(tg.size())};
    std::vector<cplx> base(lg.size());
    for (std::size_t i = 0; i < lg.size(); ++i) base[i] = lg.weights()[i] * fh.values[i] * T.plancherel(i);
    std::vector<cplx> mult;
    if (sigma.x_independent) {
        mult.resize(lg.size());
        for (std::size_t i = 0; i < lg.size(); ++i) mult[i] = sigma.at_radius(0.0, lg.nodes()[i]);
    }
    parallel_for(tg.size(), default_jobs(), [&](std::size_t j) {
        const double t = tg.nodes()[j];
        cplx acc = 0.0;
        for (std::size_t i = 0; i < lg.size(); ++i) {
            const cplx m = sigma.x_independent ? mult[i] : sigma.at_radius(t, lg.nodes()[i]);
            acc += m * base[i] * T.phi(i, j);
        }
        out.values[j] = T.kappa_inv() * acc;
    });
    return out;
}

std::vector<cplx> apply_psdo_2d(const SpaceSymbol& sigma, const std::function<cplx(cplx)>& f, cplx center,
                                const std::vector<cplx>& xs, double kappa_inv, const HelgasonGrid& g) {
    const SpaceParams& s = sigma.space;
    if (s.d != 2) throw DomainError("apply_psdo_2d: requires d = 2");
    const BoundaryFunction F = helgason_ft(s, f, center, g);
    std::vector<cplx> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const cplx x = xs[i];
        out[i] = helgason_inverse(s, F, x, kappa_inv, [&](double l) { return sigma.at_point(x, l); });
    }
    return out;
}

RadialFunction kernel_profile(const SphericalTransform& T, const SpaceSymbol& sigma, cplx x, const KernelOptions& opt) {
    const auto sx = symbol_at(sigma, x, T.space().d);
    if (!opt.richardson) return profile_eps(T, sx, opt.eps);
    const std::vector<double> eps{1e-2, 1e-3, 1e-4};
    std::vector<RadialFunction> v;
    for (double e : eps) v.push_back(profile_eps(T, sx, e));
    const double d1 = sup_abs_diff(v[0].values, v[1].values), d2 = sup_abs_diff(v[1].values, v[2].values);
    double scale = 0.0;
    for (auto z : v[2].values) scale = std::max(scale, std::abs(z));
    if (d2 > d1 + 1e-12 * scale) throw ConvergenceError("kernel: eps-extrapolation does not converge");
    const auto w = extrapolation_weights(eps);
    RadialFunction out = v[2];
    for (std::size_t j = 0; j < out.values.size(); ++j)
        out.values[j] = w[0] * v[0].values[j] + w[1] * v[1].values[j] + w[2] * v[2].values[j];
    return out;
}

cplx kernel_K(const SphericalTransform& T, const SpaceSymbol& sigma, cplx x, cplx y, const KernelOptions& opt) {
    if (T.space().d != 2) throw DomainError("kernel_K: disc points require d = 2 (use kernel_K_radial)");
    return kernel_profile(T, sigma, x, opt)(disc_distance(x, y));
}

cplx kernel_K_radial(const SphericalTransform& T, const SpaceSymbol& sigma, double rx, double dist,
                     const KernelOptions& opt) {
    if (sigma.flavor != SpaceSymbol::Flavor::Radial) throw DomainError("kernel_K_radial: radial symbol required");
    const auto sx = [&](double l) { return sigma.at_radius(rx, l); };
    if (!opt.richardson) return profile_eps(T, sx, opt.eps)(dist);
    const SpaceParams& s = T.space();
    const cplx x = s.d == 2 ? cplx(std::tanh(0.5 * rx)) : cplx(rx);
    return kernel_profile(T, sigma, x, opt)(dist);
}

cplx kernel_apply(const SphericalTransform& T, const SpaceSymbol& sigma, const std::function<cplx(cplx)>& f,
                  cplx center, cplx x, KernelPart part, const KernelOptions& opt, const DiscQuadrature& q) {
    const SpaceParams& s = T.space();
    if (s.d != 2) throw DomainError("kernel_apply: requires d = 2");
    const RadialFunction k = kernel_profile(T, sigma, x, opt);
    const PanelGrid rg = PanelGrid::uniform(0.0, q.radius, q.radial_panels);
    const int M = q.angular_points;
    cplx acc = 0.0;
    for (std::size_t i = 0; i < rg.size(); ++i) {
        const double r = rg.nodes()[i];
        const double wr = rg.weights()[i] * density_delta(s, r) / M;  // d theta / 2 pi, trapezoidal
        const double rho_disc = std::tanh(0.5 * r);
        for (int a = 0; a < M; ++a) {
            const cplx y = disc_translate(center, std::polar(rho_disc, 2.0 * kPi * a / M));
            const cplx fy = f(y);
            if (fy == cplx(0.0)) continue;
            const double dist = disc_distance(x, y);
            double w = 1.0;
            if (part == KernelPart::Local) w = eta_local(dist);
            if (part == KernelPart::Global) w = eta_global(dist);
            if (w == 0.0) continue;
            acc += wr * w * fy * k(dist);
        }
    }
    return acc;
}

LocalGlobal split_local_global(const SphericalTransform& T, const SpaceSymbol& sigma, const std::function<cplx(cplx)>& f,
                               cplx center, cplx x, const KernelOptions& opt, const DiscQuadrature& q) {
    LocalGlobal out;
    out.total = kernel_apply(T, sigma, f, center, x, KernelPart::Total, opt, q);
    out.local = kernel_apply(T, sigma, f, center, x, KernelPart::Local, opt, q);
    out.global = kernel_apply(T, sigma, f, center, x, KernelPart::Global, opt, q);
    out.partition_residual = std::abs(out.local + out.global - out.total);
    return out;
}

// --- separation and extraction ------------------------------------------------

double position_radius(const ZSample& z, double s) {
    // 2 sinh^2(R/2) = cosh r cosh s + sinh r sinh s cos(theta) - 1
    //               = 2 sinh^2((r+s)/2) - 2 sinh r sinh s sin^2(theta/2).
    const double a = std::sinh(0.5 * (z.r + s));
    const double b = std::sin(0.5 * z.theta);
    const double v = a * a - std::sinh(z.r) * std::sinh(s) * b * b;
    return 2.0 * std::asinh(std::sqrt(std::max(0.0, v)));
}

std::vector<ZSample> z_samples(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<ZSample> out(count);
    for (auto& z : out) {
        z.r = 2.5 * unit();
        z.theta = kPi * unit();
    }
    return out;
}

struct ExtractedSymbol::Impl {
    SpaceSymbol sigma;
    SpaceParams s;
    CFunction cf{SpaceParams{}};
    std::vector<ZSample> zs;
    SeparationOptions opt;
    double c0 = 1.0;
    double mu_bessel = 0.0;  // (d-2)/2
    bool even_d = true;
    int k_chain = 0;         // applications of d/d lambda (1/lambda)
    double E = 1.0;          // chain constant

    // Chain grid and the weight Phi |c|^{-2} on it.
    PanelGrid lg;
    std::vector<double> w;
    double lmax = 0.0;
    // H = chi H + (1 - chi) H: the low part (which carries the cutoff ramp)
    // is transformed on the chain panels, the smooth high part by a uniform
    // trapezoidal convolution with B^.
    double chi_lo = 20.0, chi_width = 20.0;
    double dmu = 0.25;
    // B^(omega) on a uniform grid.
    double W = 200.0, domega = 0.01;
    std::vector<double> bhat;
    // Separation grid and the per-radius columns phi_lambda(t) |c|^{-2}.
    PanelGrid zg;
    std::vector<double> zg_planch;
    std::map<double, std::vector<double>> phi_cols;
    std::mutex mtx;
    std::map<std::tuple<double, double, double>, std::shared_ptr<const std::vector<cplx>>> qcache, hcache, fine_cache,
        low_cache;

    // Domination data.
    std::vector<double> ts, zeta0, Cz;
    double spread = 0, integral = 0, slope = 0;
    bool dom_pass = false;

    double chi(double mu) const { return 1.0 - smooth_step((mu - chi_lo) / chi_width); }

    double B(double t) const {
        return opt.kappa_inv * c0 * eta_local(t) * std::sqrt(density_ratio(s, t));
    }

    double bhat_at(double om) const {
        om = std::abs(om);
        if (om >= W) return 0.0;
        const double u = om / domega;
        long i0 = static_cast<long>(std::floor(u)) - 2;
        i0 = std::clamp(i0, 0L, static_cast<long>(bhat.size()) - 6);
        double acc = 0.0;
        for (int a = 0; a < 6; ++a) {
            double L = 1.0;
            for (int b = 0; b < 6; ++b)
                if (b != a) L *= (u - (i0 + b)) / static_cast<double>(a - b);
            acc += L * bhat[i0 + a];
        }
        return acc;
    }

    std::shared_ptr<const std::vector<cplx>> q_table(const ZSample& z, double s_) {
        const auto key = std::make_tuple(z.r, z.theta, s_);
        {
            std::lock_guard<std::mutex> lk(mtx);
            auto it = qcache.find(key);
            if (it != qcache.end()) return it->second;
        }
        const double r = position_radius(z, s_);
        std::vector<cplx> F(lg.size());
        for (std::size_t i = 0; i < lg.size(); ++i) F[i] = w[i] == 0.0 ? cplx(0.0) : w[i] * sigma.at_radius(r, lg.nodes()[i]);
        for (int k = 0; k < k_chain; ++k) {
            for (std::size_t i = 0; i < lg.size(); ++i) F[i] /= lg.nodes()[i];
            F = lg.differentiate(F);
        }
        auto p = std::make_shared<const std::vector<cplx>>(std::move(F));
        std::lock_guard<std::mutex> lk(mtx);
        qcache.emplace(key, p);
        return p;
    }

    // int_0^{pi/2} v(mu sin theta) sin^a theta d theta with v interpolated on lg,
    // theta-panels aligned with the lambda-breaks below mu; v vanishes for lambda < 1.
    cplx theta_integral(const std::vector<cplx>& v, double mu, int a) const {
        if (mu <= 1.0) return 0.0;
        std::vector<double> th{std::asin(1.0 / mu)};
        for (double b : lg.breaks())
            if (b > 1.0 && b < mu) th.push_back(std::asin(b / mu));
        th.push_back(0.5 * kPi);
        static thread_local std::vector<double> gx, gw;
        if (gx.empty()) gauss_legendre(16, gx, gw);
        cplx acc = 0.0;
        for (std::size_t p = 0; p + 1 < th.size(); ++p) {
            const double lo = th[p], hi = th[p + 1];
            if (hi <= lo) continue;
            const double c = 0.5 * (hi + lo), h = 0.5 * (hi - lo);
            for (std::size_t n = 0; n < gx.size(); ++n) {
                const double t = c + h * gx[n];
                const double st = std::sin(t);
                acc += h * gw[n] * (a == 1 ? st : 1.0) * lg.interpolate(std::span<const cplx>(v), mu * st);
            }
        }
        return acc;
    }

    // H on the chain grid: h (even d) or q (odd d).
    std::shared_ptr<const std::vector<cplx>> h_table(const ZSample& z, double s_) {
        const auto key = std::make_tuple(z.r, z.theta, s_);
        {
            std::lock_guard<std::mutex> lk(mtx);
            auto it = hcache.find(key);
            if (it != hcache.end()) return it->second;
        }
        const auto q = q_table(z, s_);
        std::vector<cplx> H;
        if (!even_d) {
            H = *q;
        } else {
            const std::vector<cplx> dq = lg.differentiate(*q);
            H.resize(lg.size());
            for (std::size_t i = 0; i < lg.size(); ++i) H[i] = theta_integral(dq, lg.nodes()[i], 1);
        }
        auto p = std::make_shared<const std::vector<cplx>>(std::move(H));
        std::lock_guard<std::mutex> lk(mtx);
        hcache.emplace(key, p);
        return p;
    }

    std::shared_ptr<const std::vector<cplx>> fine_table(const ZSample& z, double s_) {
        const auto key = std::make_tuple(z.r, z.theta, s_);
        {
            std::lock_guard<std::mutex> lk(mtx);
            auto it = fine_cache.find(key);
            if (it != fine_cache.end()) return it->second;
        }
        const auto H = h_table(z, s_);
        const std::size_t n = static_cast<std::size_t>(std::floor(lmax / dmu));
        std::vector<cplx> Hf(n + 1);
        for (std::size_t j = 0; j <= n; ++j) {
            const double mu = j * dmu;
            const double w = 1.0 - chi(mu);
            Hf[j] = w == 0.0 ? cplx(0.0) : w * lg.interpolate(std::span<const cplx>(*H), mu);
        }
        auto p = std::make_shared<const std::vector<cplx>>(std::move(Hf));
        std::lock_guard<std::mutex> lk(mtx);
        if (fine_cache.size() > 4096) fine_cache.clear();
        fine_cache.emplace(key, p);
        return p;
    }

    // int_0^inf cos(mu t) chi(mu) H(mu) e^{-eps mu^2} d mu on the chain panels.
    cplx low_transform(const std::vector<cplx>& H, double t, double eps) const {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < lg.size(); ++i) {
            const double mu = lg.nodes()[i];
            const double c = chi(mu);
            if (c == 0.0) break;
            acc += lg.weights()[i] * c * std::cos(mu * t) * std::exp(-eps * mu * mu) * H[i];
        }
        return acc;
    }

    // (E / 2) weight * chi * H on the chain nodes carrying the low part.
    std::shared_ptr<const std::vector<cplx>> low_table(const ZSample& z, double s_) {
        const auto key = std::make_tuple(z.r, z.theta, s_);
        {
            std::lock_guard<std::mutex> lk(mtx);
            auto it = low_cache.find(key);
            if (it != low_cache.end()) return it->second;
        }
        const auto H = h_table(z, s_);
        std::vector<cplx> v;
        for (std::size_t i = 0; i < lg.size(); ++i) {
            const double c = chi(lg.nodes()[i]);
            if (c == 0.0) break;
            v.push_back(0.5 * E * lg.weights()[i] * c * (*H)[i]);
        }
        auto p = std::make_shared<const std::vector<cplx>>(std::move(v));
        std::lock_guard<std::mutex> lk(mtx);
        if (low_cache.size() > 4096) low_cache.clear();
        low_cache.emplace(key, p);
        return p;
    }

    cplx az_eval(const ZSample& z, double s_, double y) {
        const double c = 2.0 * kPi * y;
        if (std::abs(c) + W > lmax) throw DomainError("a_z: |y| beyond the configured y_max");
        const auto lo = low_table(z, s_);
        cplx low = 0.0;
        for (std::size_t i = 0; i < lo->size(); ++i) {
            if ((*lo)[i] == cplx(0.0)) continue;
            const double mu = lg.nodes()[i];
            low += (*lo)[i] * (bhat_at(c - mu) + bhat_at(c + mu));
        }
        const auto Hf = fine_table(z, s_);
        const long jlo = static_cast<long>(std::ceil((c - W) / dmu));
        const long jhi = static_cast<long>(std::floor((c + W) / dmu));
        cplx acc = 0.0;
        for (long j = jlo; j <= jhi; ++j) {
            const std::size_t aj = static_cast<std::size_t>(std::labs(j));
            const cplx h = (*Hf)[aj];
            if (h == cplx(0.0)) continue;
            acc += h * bhat_at(c - j * dmu);
        }
        return low + 0.5 * E * dmu * acc;
    }

    const std::vector<double>& phi_column(double t) {
        {
            std::lock_guard<std::mutex> lk(mtx);
            auto it = phi_cols.find(t);
            if (it != phi_cols.end()) return it->second;
        }
        std::vector<double> col(zg.size());
        const double tt[1] = {t};
        const PhiTable tab = phi_table(s, zg.nodes(), std::span<const double>(tt, 1));
        for (std::size_t i = 0; i < zg.size(); ++i) col[i] = tab(i, 0) * zg_planch[i];
        std::lock_guard<std::mutex> lk(mtx);
        return phi_cols.emplace(t, std::move(col)).first->second;
    }

    void check_eps(double eps) const {
        if (eps <= 0.0 || std::sqrt(40.0 / eps) > zg.upper() * (1.0 + 1e-12))
            throw DomainError("separation: eps below the regularisation the grid was built for");
    }

    cplx K1(const ZSample& z, double s_, double t, double eps) {
        check_eps(eps);
        const double el = eta_local(t);
        if (el == 0.0) return 0.0;
        const auto& col = phi_column(t);
        const double r = position_radius(z, s_);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < zg.size(); ++i) {
            const double l = zg.nodes()[i];
            acc += zg.weights()[i] * sigma.at_radius(r, l) * col[i] * std::exp(-eps * l * l);
        }
        return opt.kappa_inv * el * density_delta(s, t) * acc;
    }

    cplx K0(const ZSample& z, double s_, double t, double eps) const {
        check_eps(eps);
        const double el = eta_local(t);
        if (el == 0.0 || t <= 0.0) return 0.0;
        const double r = position_radius(z, s_);
        cplx acc = 0.0;
        for (std::size_t i = 0; i < zg.size(); ++i) {
            const double l = zg.nodes()[i];
            const double ph = spectral_cutoff(l);
            if (ph == 0.0) continue;
            acc += zg.weights()[i] * ph * sigma.at_radius(r, l) * bessel_curly_J(mu_bessel, l * t).real() *
                   zg_planch[i] * std::exp(-eps * l * l);
        }
        const double sq = std::sqrt(std::pow(t, s.d - 1) * density_delta(s, t));
        return opt.kappa_inv * c0 * el * sq * acc;
    }
};

const SpaceParams& ExtractedSymbol::space() const { return impl_->s; }
const std::vector<ZSample>& ExtractedSymbol::zs() const { return impl_->zs; }
const std::vector<double>& ExtractedSymbol::t_values() const { return impl_->ts; }
const PanelGrid& ExtractedSymbol::chain_grid() const { return impl_->lg; }

cplx ExtractedSymbol::kernel_K1(const ZSample& z, double s, double t, double eps) const { return impl_->K1(z, s, t, eps); }
cplx ExtractedSymbol::kernel_K0(const ZSample& z, double s, double t, double eps) const { return impl_->K0(z, s, t, eps); }

cplx ExtractedSymbol::kernel_K0_chain(const ZSample& z, double s, double t, double eps) const {
    const double b = impl_->B(t);
    if (b == 0.0 || t <= 0.0) return 0.0;
    const auto Hf = impl_->fine_table(z, s);
    cplx acc = impl_->low_transform(*impl_->h_table(z, s), t, eps) / impl_->dmu;
    for (std::size_t j = 0; j < Hf->size(); ++j) {
        const double mu = j * impl_->dmu;
        acc += (*Hf)[j] * std::cos(mu * t) * std::exp(-eps * mu * mu);
    }
    return b * impl_->E * impl_->dmu * acc;
}

cplx ExtractedSymbol::zeta(const ZSample& z, double s, double t) const {
    return impl_->K1(z, s, t, impl_->opt.eps) - impl_->K0(z, s, t, impl_->opt.eps);
}

std::vector<cplx> ExtractedSymbol::q_values(const ZSample& z, double s) const { return *impl_->q_table(z, s); }

cplx ExtractedSymbol::g_value(const ZSample& z, double s, double mu) const {
    if (!impl_->even_d) throw DomainError("g is defined by the even-dimensional chain only");
    const auto q = impl_->q_table(z, s);
    return impl_->theta_integral(*q, std::abs(mu), 0);
}

cplx ExtractedSymbol::h_value(const ZSample& z, double s, double mu) const {
    mu = std::abs(mu);
    if (mu <= 1.0) return 0.0;
    const auto H = impl_->h_table(z, s);
    return impl_->lg.interpolate(std::span<const cplx>(*H), mu);
}

HBounds ExtractedSymbol::h_bounds(const ZSample& z, double mu_max) const {
    HBounds out;
    const auto& lg = impl_->lg;
    const double hs = 0.05;
    std::vector<double> env_mu, env_v;
    for (int beta = 0; beta <= 2; ++beta) {
        double C = 0.0;
        for (double s0 : impl_->opt.s_values) {
            std::vector<cplx> Hb(lg.size());
            for (std::size_t i = 0; i < lg.size(); ++i) {
                auto f = [&](double s_) { return (*impl_->h_table(z, s_))[i]; };
                Hb[i] = fd_derivative(f, s0, beta, hs);
            }
            const std::vector<cplx> dH = lg.differentiate(Hb);
            for (std::size_t i = 0; i < lg.size(); ++i) {
                const double mu = lg.nodes()[i];
                if (mu > mu_max) break;
                const double v = std::abs(Hb[i]) + (1.0 + mu) * std::abs(dH[i]);
                C = std::max(C, v);
                if (beta == 0 && s0 == impl_->opt.s_values.front() && mu >= 10.0) {
                    env_mu.push_back(mu);
                    env_v.push_back(v);
                }
            }
        }
        out.C.push_back(C);
    }
    const auto env = right_envelope(env_v);
    out.growth = env_mu.size() >= 2 ? fit_loglog(env_mu, env).slope : 0.0;
    out.pass = std::all_of(out.C.begin(), out.C.end(), [](double c) { return std::isfinite(c); }) && out.growth <= 0.15;
    return out;
}

const std::vector<double>& ExtractedSymbol::zeta0() const { return impl_->zeta0; }
const std::vector<double>& ExtractedSymbol::zeta_constants() const { return impl_->Cz; }
double ExtractedSymbol::zeta_spread() const { return impl_->spread; }
double ExtractedSymbol::zeta0_integral() const { return impl_->integral; }
double ExtractedSymbol::zeta0_small_t_slope() const { return impl_->slope; }
bool ExtractedSymbol::domination_pass() const { return impl_->dom_pass; }

EuclidSymbol ExtractedSymbol::az(const ZSample& z) const {
    auto impl = impl_;
    return EuclidSymbol::general(1, [impl, z](const Pt& x, const Pt& xi) { return impl->az_eval(z, x[0], xi[0]); }, 0.0);
}

cplx ExtractedSymbol::az_direct(const ZSample& z, double s, double y, double eps) const {
    const PanelGrid xg = PanelGrid::uniform(0.0, 2.0, 16);
    cplx acc = 0.0;
    for (std::size_t i = 0; i < xg.size(); ++i) {
        const double x = xg.nodes()[i];
        acc += xg.weights()[i] * std::cos(2.0 * kPi * x * y) * impl_->K0(z, s, x, eps);
    }
    return 2.0 * acc;
}

ExtractedSymbol separate_kernel(const SpaceSymbol& sigma, const std::vector<ZSample>& zs, const SeparationOptions& opt) {
    if (sigma.flavor != SpaceSymbol::Flavor::Radial) throw DomainError("separate_kernel: radial symbol required");
    if (zs.empty()) throw DomainError("separate_kernel: no z-samples");
    const SpaceParams& s = sigma.space;
    if (opt.validate) {
        const int amax = (s.d + 1) / 2 + 1;
        if (sigma.lambda_order < amax)
            throw DomainError("separate_kernel: symbol declares fewer lambda-derivatives than required");
        const EuclidSymbol a = EuclidSymbol::general(
            1, [&sigma](const Pt& x, const Pt& xi) { return sigma.at_radius(std::abs(x[0]), xi[0]); }, 0.0);
        SymbolSampling plan;
        plan.xs = {0.3, 0.9, 1.7, 2.6};
        plan.xi_min = 1e-2;
        plan.xi_max = 1e3;
        plan.xi_count = 16;
        const SymbolCertificate cert = validate_symbol(a, amax, 1, plan);
        if (!cert.pass) throw DomainError("separate_kernel: symbol fails the derivative hypotheses");
        if (sigma.even)
            for (double r : plan.xs)
                for (double l : {0.3, 2.0, 17.0, 250.0})
                    if (std::abs(sigma.at_radius(r, l) - sigma.at_radius(r, -l)) > 1e-10 * (1.0 + std::abs(sigma.at_radius(r, l))))
                        throw DomainError("separate_kernel: symbol flagged even is not even in lambda");
    }

    auto impl = std::make_shared<ExtractedSymbol::Impl>();
    impl->sigma = sigma;
    impl->s = s;
    impl->cf = CFunction(s);
    impl->zs = zs;
    impl->opt = opt;
    impl->c0 = local_bessel_c0(s);
    impl->mu_bessel = 0.5 * (s.d - 2);
    impl->even_d = s.d % 2 == 0;
    if (impl->even_d) {
        const int k = (s.d - 2) / 2;
        impl->k_chain = k;
        impl->E = std::tgamma(k + 0.5) * std::sqrt(kPi) * std::pow(2.0, k - 1) * 2.0 / kPi;
    } else {
        const int k = (s.d - 1) / 2;
        impl->k_chain = k;
        impl->E = bessel_curly_J_at_zero(k - 0.5) * double_factorial_odd(k);
    }

    // Chain grid: fine panels across the cutoff ramp, geometric beyond.
    impl->lmax = 2.0 * kPi * 1.25 * opt.y_max + impl->W + 10.0;
    std::vector<double> br{0.0, 0.5, 1.0};
    for (int k = 1; k <= 16; ++k) br.push_back(1.0 + k / 16.0);
    while (br.back() < impl->lmax) {
        double next = std::max(br.back() * 1.2, br.back() + 0.5);
        if (br.back() < 2.0 * impl->chi_lo + impl->chi_width) next = std::min(next, br.back() + 2.0);
        br.push_back(std::min(impl->lmax, next));
    }
    impl->lg = PanelGrid(br, 16);
    impl->w.resize(impl->lg.size());
    for (std::size_t i = 0; i < impl->lg.size(); ++i) {
        const double l = impl->lg.nodes()[i];
        const double ph = spectral_cutoff(l);
        impl->w[i] = ph == 0.0 ? 0.0 : ph * plancherel_at(impl->cf, l);
    }

    // B^(omega) = 2 int_0^2 B(t) cos(omega t) dt.
    {
        const PanelGrid tg = PanelGrid::uniform(0.0, 2.0, 64);
        std::vector<double> Bv(tg.size());
        for (std::size_t i = 0; i < tg.size(); ++i) Bv[i] = tg.weights()[i] * impl->B(tg.nodes()[i]);
        const std::size_t n = static_cast<std::size_t>(impl->W / impl->domega) + 8;
        impl->bhat.resize(n);
        parallel_for(n, default_jobs(), [&](std::size_t j) {
            const double om = j * impl->domega;
            double acc = 0.0;
            for (std::size_t i = 0; i < tg.size(); ++i) acc += Bv[i] * std::cos(om * tg.nodes()[i]);
            impl->bhat[j] = 2.0 * acc;
        });
    }

    // Separation grid and columns.
    {
        const double L = std::ceil(std::sqrt(40.0 / opt.eps));
        std::vector<double> br2;
        for (int k = 0; k <= 32; ++k) br2.push_back(k / 16.0);
        while (br2.back() < L) br2.push_back(br2.back() + 2.0);
        impl->zg = PanelGrid(br2, 16);
        impl->zg_planch.resize(impl->zg.size());
        for (std::size_t i = 0; i < impl->zg.size(); ++i) impl->zg_planch[i] = plancherel_at(impl->cf, impl->zg.nodes()[i]);
    }
    impl->ts = opt.t_values;
    if (impl->ts.empty()) {
        for (double t : log_space(0.1, 1.0, 14)) impl->ts.push_back(t);
        for (int k = 1; k <= 10; ++k) impl->ts.push_back(1.0 + k / 10.0);
    }
    {
        const auto tab = shared_phi_table(s, impl->zg, impl->ts);
        for (std::size_t j = 0; j < impl->ts.size(); ++j) {
            std::vector<double> col(impl->zg.size());
            for (std::size_t i = 0; i < impl->zg.size(); ++i) col[i] = (*tab)(i, j) * impl->zg_planch[i];
            impl->phi_cols.emplace(impl->ts[j], std::move(col));
        }
    }

    // Domination of zeta over the samples.
    const std::size_t nt = impl->ts.size();
    std::vector<std::vector<double>> per_z(zs.size(), std::vector<double>(nt, 0.0));
    parallel_for(zs.size(), default_jobs(), [&](std::size_t iz) {
        for (double s0 : opt.s_values)
            for (std::size_t j = 0; j < nt; ++j) {
                const double t = impl->ts[j];
                const double v = std::abs(impl->K1(zs[iz], s0, t, opt.eps) - impl->K0(zs[iz], s0, t, opt.eps));
                per_z[iz][j] = std::max(per_z[iz][j], v);
            }
    });
    impl->zeta0.assign(nt, 0.0);
    for (const auto& pz : per_z)
        for (std::size_t j = 0; j < nt; ++j) impl->zeta0[j] = std::max(impl->zeta0[j], pz[j]);
    auto trapz = [&](const std::vector<double>& v) {
        double a = v[0] * impl->ts[0];  // [0, t_0]: bounded integrand
        for (std::size_t j = 0; j + 1 < nt; ++j) a += 0.5 * (v[j] + v[j + 1]) * (impl->ts[j + 1] - impl->ts[j]);
        return a;
    };
    impl->integral = trapz(impl->zeta0);
    double cmin = 1e300, cmax = 0.0;
    for (const auto& pz : per_z) {
        const double c = impl->integral > 0.0 ? trapz(pz) / impl->integral : 0.0;
        impl->Cz.push_back(c);
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    impl->spread = cmin > 0.0 ? cmax / cmin : (cmax > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
    std::vector<double> st, sv;
    for (std::size_t j = 0; j < nt; ++j)
        if (impl->ts[j] <= 0.4 && impl->zeta0[j] > 0.0) {
            st.push_back(impl->ts[j]);
            sv.push_back(impl->zeta0[j]);
        }
    impl->slope = st.size() >= 2 ? fit_loglog(st, sv).slope : 0.0;
    impl->dom_pass = std::isfinite(impl->integral) && impl->slope > -1.0 && impl->spread <= 2.0;

    ExtractedSymbol es;
    es.impl_ = impl;
    return es;
}

EuclidSymbol extract_az(const ExtractedSymbol& es, const ZSample& z) { return es.az(z); }

SymbolSampling az_sampling() {
    SymbolSampling plan;
    // A wide s-range: the s-derivatives peak where the geodesic through z
    // passes the regions of strongest position dependence.
    plan.xs = {-3.0, -2.1, -1.3, -0.6, 0.0, 0.6, 1.3, 2.1, 3.0};
    plan.xi_min = 1e-3;
    plan.xi_max = 1e2;
    plan.xi_count = 12;
    return plan;
}

// --- transference ----------------------------------------------------------------

TransferenceReport transference_radial(const SphericalTransform& T, const AbelCalibration& cal, const SpaceSymbol& sigma,
                                       const RadialFunction& f, const TransferenceOptions& opt) {
    if (sigma.flavor != SpaceSymbol::Flavor::Radial) throw DomainError("transference_radial: radial symbol required");
    if (!sigma.even) throw DomainError("transference_radial: symbol must be even in lambda");
    const SpaceParams& s = T.space();
    TransferenceReport rep;
    const RadialFunction psi = apply_radial_psdo(T, sigma, f);
    for (int i = 0; i < opt.points; ++i) {
        const double t = opt.t_lo + (opt.t_hi - opt.t_lo) * i / std::max(1, opt.points - 1);
        rep.ts.push_back(t);
        rep.lhs.push_back(std::exp(s.rho * t) * eta_global(t) * psi(t));
    }
    const AbelTransform A = abel_transform(f, cal);
    const std::size_t n = static_cast<std::size_t>(std::llround(2.0 * opt.s_max / opt.h)) + 1;
    const GriddedFunction u = GriddedFunction::sample(1, n, -opt.s_max, opt.h, [&](const Pt& x) { return A(x[0]); });
    for (auto v : u.values) rep.scale = std::max(rep.scale, std::abs(v));

    const CFunction cf(s);
    const double k2pi = 2.0 * kPi * T.kappa_inv();
    const bool with_a2 = opt.include_a2;
    const EuclidSymbol a = EuclidSymbol::general(
        1,
        [&](const Pt& x, const Pt& xi) -> cplx {
            const double t = x[0];
            const double e = eta_global(t);
            if (e == 0.0) return 0.0;
            const double l = 2.0 * kPi * xi[0];
            const cplx a1 = k2pi * e * sigma.at_radius(t, l) * cf.c_minus_inv(cplx(l, 0.0));
            if (a1 == cplx(0.0)) return 0.0;
            if (!with_a2) return a1;
            return a1 * (1.0 + hc_remainder(s, cplx(l, 0.0), t).a);
        },
        0.0);
    std::vector<Pt> xs;
    for (double t : rep.ts) xs.push_back({t, 0.0});
    rep.rhs = apply_pdo_at(a, u, xs);
    for (std::size_t i = 0; i < rep.ts.size(); ++i) {
        rep.residual.push_back(std::abs(rep.lhs[i] - rep.rhs[i]));
        rep.sup_residual = std::max(rep.sup_residual, rep.residual.back());
    }
    rep.pass = rep.sup_residual <= 1e-4 * rep.scale;
    return rep;
}

double transference_truncation_slope(const TransferenceReport& truncated) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < truncated.ts.size(); ++i) {
        const double l = std::abs(truncated.lhs[i]);
        if (l > 0.0 && truncated.residual[i] > 0.0) {
            x.push_back(truncated.ts[i]);
            y.push_back(std::log(truncated.residual[i] / l));
        }
    }
    if (x.size() < 2) throw ConvergenceError("transference_truncation_slope: too few usable samples");
    return fit_line(x, y).slope;
}

// --- strip shift -------------------------------------------------------------------

StripShiftReport strip_shift_integral(const SpaceSymbol& sigma, double x_radius, const ContourSpec& spec,
                                      std::span<const double> Ts_in) {
    const SpaceParams& s = sigma.space;
    if (spec.gamma < 0.0) throw DomainError("strip_shift_integral: gamma must be >= 0");
    if (spec.l > sigma.lambda_order) throw DomainError("strip_shift_integral: l exceeds the declared derivative order");
    if (2 * spec.l <= s.d + 1) throw DomainError("strip_shift_integral: need l > (d+1)/2");
    if (spec.eps.size() < 2) throw DomainError("strip_shift_integral: need at least two eps values");
    if (spec.gamma > 0.0 && !strip_check(sigma, spec.gamma, std::span<const double>(&x_radius, 1)).pass)
        throw DomainError("strip_shift_integral: symbol is not holomorphic on the requested strip");
    StripShiftReport rep;
    rep.Ts.assign(Ts_in.begin(), Ts_in.end());
    if (rep.Ts.empty()) rep.Ts = log_space(1.0, 100.0, 41);

    const CFunction cf(s);
    auto theta0 = [&](double l) {
        const cplx z(l, spec.gamma);
        return sigma.at_radius(x_radius, z) * cf.c_minus_inv(z);
    };
    // Range: where theta0 itself is negligible, else where the weakest regulariser is.
    double peak = 0.0;
    for (int k = -100; k <= 100; ++k) peak = std::max(peak, std::abs(theta0(0.1 * k + 0.05)));
    double L = 0.0;
    for (double c : {8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0}) {
        double m = 0.0;
        for (int k = 0; k <= 64; ++k) {
            const double l = c + k * 0.25;
            m = std::max({m, std::abs(theta0(l)), std::abs(theta0(-l))});
        }
        if (m <= 1e-16 * peak) {
            L = c;
            break;
        }
    }
    const double emin = *std::min_element(spec.eps.begin(), spec.eps.end());
    if (L == 0.0) L = std::min(700.0, std::ceil(std::sqrt(40.0 / emin)));
    const double Tmax = *std::max_element(rep.Ts.begin(), rep.Ts.end());
    int panels = static_cast<int>(std::ceil(2.0 * L / std::min(0.5, 10.0 / std::max(Tmax, 1.0))));
    if (panels % 2) ++panels;  // break at lambda = 0
    const PanelGrid g = PanelGrid::uniform(-L, L, panels);
    std::vector<cplx> th(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) th[i] = g.weights()[i] * theta0(g.nodes()[i]);

    for (double e : spec.eps) {
        std::vector<cplx> reg(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            const cplx z(g.nodes()[i], spec.gamma);
            reg[i] = th[i] * std::exp(-e * z * z);
        }
        std::vector<cplx> row(rep.Ts.size());
        parallel_for(rep.Ts.size(), default_jobs(), [&](std::size_t k) {
            cplx acc = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) acc += reg[i] * std::exp(kI * (g.nodes()[i] * rep.Ts[k]));
            row[k] = acc;
        });
        rep.I_eps.push_back(std::move(row));
    }
    const auto w = extrapolation_weights(spec.eps);
    const std::size_t m = spec.eps.size();
    const auto w2 = extrapolation_weights({spec.eps[m - 2], spec.eps[m - 1]});
    double scale = 0.0;
    for (auto v : rep.I_eps.back()) scale = std::max(scale, std::abs(v));
    for (std::size_t k = 0; k < rep.Ts.size(); ++k) {
        cplx lim = 0.0;
        for (std::size_t j = 0; j < m; ++j) lim += w[j] * rep.I_eps[j][k];
        rep.I.push_back(lim);
        for (std::size_t j = 0; j + 2 < m; ++j) {
            const double d1 = std::abs(rep.I_eps[j][k] - rep.I_eps[j + 1][k]);
            const double d2 = std::abs(rep.I_eps[j + 1][k] - rep.I_eps[j + 2][k]);
            if (d2 > d1 + 1e-12 * scale) throw ConvergenceError("strip_shift_integral: eps-extrapolation is unstable");
        }
    }
    // Drift at T = 1 (the sample closest to it).
    std::size_t k1 = 0;
    for (std::size_t k = 0; k < rep.Ts.size(); ++k)
        if (std::abs(rep.Ts[k] - 1.0) < std::abs(rep.Ts[k1] - 1.0)) k1 = k;
    const cplx lim2 = w2[0] * rep.I_eps[m - 2][k1] + w2[1] * rep.I_eps[m - 1][k1];
    rep.drift_T1 = std::abs(rep.I[k1] - lim2);

    double imax = 0.0;
    for (auto v : rep.I) imax = std::max(imax, std::abs(v));
    std::vector<double> mags;
    for (auto v : rep.I) mags.push_back(std::abs(v));
    const auto env = right_envelope(mags);
    std::vector<double> ft, fv;
    for (std::size_t k = 0; k < rep.Ts.size(); ++k) {
        rep.constant = std::max(rep.constant, std::pow(rep.Ts[k], spec.l) * mags[k]);
        if (rep.Ts[k] >= 10.0 && env[k] > 1e-12 * imax) {
            ft.push_back(rep.Ts[k]);
            fv.push_back(env[k]);
        }
    }
    rep.slope = ft.size() >= 3 ? fit_loglog(ft, fv).slope : -std::numeric_limits<double>::infinity();
    rep.pass = rep.slope <= -spec.l + 0.3;
    return rep;
}

SpaceSymbol strip_witness(const SpaceParams& s, int l) {
    if (l < 1) throw DomainError("strip_witness: l >= 1");
    const CFunction cf(s);
    SpaceSymbol out = SpaceSymbol::multiplier(s, [cf, l](cplx z) -> cplx {
        const double x = z.real();
        if (x == 0.0) return 0.0;
        const double sg = (l % 2 == 1 && x < 0.0) ? -1.0 : 1.0;
        return cf.c(-z) * sg * std::pow(std::abs(x), l - 1) * std::exp(-z * z);
    });
    out.even = l % 2 == 0;
    out.lambda_order = l;
    return out;
}

PowerGaussianBound power_gaussian_bound(int n, double eps) {
    if (n < 1 || eps <= 0.0) throw DomainError("power_gaussian_bound: n >= 1, eps > 0");
    PowerGaussianBound out;
    const double h = 0.5 * n;
    out.bound = std::pow(h, h) * std::exp(-h) * std::pow(eps, -h);
    out.maximizer = std::sqrt(n / (2.0 * eps));
    out.at_maximizer = std::pow(out.maximizer, n) * std::exp(-eps * out.maximizer * out.maximizer);
    for (int k = 0; k <= 20000; ++k) {
        const double l = 4.0 * out.maximizer * k / 20000.0;
        out.sampled_sup = std::max(out.sampled_sup, std::pow(l, n) * std::exp(-eps * l * l));
    }
    return out;
}

// --- global profile and norm laboratory ---------------------------------------------

GlobalProfile global_kernel_profile(const SphericalTransform& T, const SpaceSymbol& sigma, double p) {
    const SpaceParams& s = T.space();
    if (s.d != 3) throw DomainError("global_kernel_profile: implemented for d = 3");
    if (p < 1.0 || p > 2.0) throw DomainError("global_kernel_profile: p in [1, 2]");
    const RadialFunction k = T.inverse([&](double l) { return sigma.at_radius(0.0, l); });
    GlobalProfile out;
    out.claimed_rate = (2.0 / p) * s.rho;
    double k0 = std::abs(k.values[0]);
    for (auto v : k.values) k0 = std::max(k0, std::abs(v));
    std::vector<double> fr, fl;
    for (std::size_t j = 0; j < k.grid.size(); ++j) {
        const double r = k.grid.nodes()[j];
        if (r > 10.0) break;
        const double v = eta_global(r) * std::abs(k.values[j]);
        out.rs.push_back(r);
        out.values.push_back(v);
        if (r >= 2.0 && v > 1e-13 * k0) {
            fr.push_back(r);
            fl.push_back(std::log(v));
        }
    }
    if (fr.size() < 3) {
        out.fitted_rate = std::numeric_limits<double>::infinity();
    } else {
        out.fitted_rate = -fit_line(fr, fl).slope;
    }
    out.pass = out.fitted_rate >= out.claimed_rate - 0.1;
    return out;
}

NormLabReport norm_lab(const SphericalTransform& T, const SpaceSymbol& sigma, double p, const std::vector<PWSpec>& family,
                       std::span<const double> translates) {
    if (family.empty() || translates.empty()) throw DomainError("norm_lab: empty family or translate list");
    NormLabReport rep;
    rep.translates.assign(translates.begin(), translates.end());
    for (const auto& sp : family) {
        std::vector<double> row;
        for (double sh : translates) {
            auto F = [&](double l) { return 0.5 * (sp.spectrum(l - sh) + sp.spectrum(l + sh)); };
            const RadialFunction f = T.inverse(F);
            RadialFunction g;
            if (sigma.x_independent)
                g = T.inverse([&](double l) { return sigma.at_radius(0.0, l) * F(l); });
            else
                g = apply_radial_psdo(T, sigma, f);
            const double ratio = g.lp_norm(p) / f.lp_norm(p);
            row.push_back(ratio);
            rep.max_ratio = std::max(rep.max_ratio, ratio);
        }
        rep.ratios.push_back(std::move(row));
    }
    std::vector<double> per(translates.size(), 0.0);
    for (const auto& row : rep.ratios)
        for (std::size_t k = 0; k < row.size(); ++k) per[k] = std::max(per[k], row[k]);
    rep.trend = per.size() >= 2 ? fit_line(rep.translates, per).slope : 0.0;
    rep.spearman = per.size() >= 2 ? spearman(rep.translates, rep.ratios[0]) : 0.0;
    return rep;
}

SphericalTransform norm_lab_engine(const SpaceParams& s) {
    return SphericalTransform(s, PanelGrid::uniform(0.0, 20.0, 40), PanelGrid::uniform(0.0, 20.0, 80));
}

}  // namespace symspace
