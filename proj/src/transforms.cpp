#include "symspace/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "symspace/errors.hpp"
#include "symspace/geometry.hpp"
#include "symspace/special_fn.hpp"

namespace symspace {

namespace {

constexpr double kTailTol = 1e-10;

double plancherel_density(const CFunction& cf, double l) { return cf.plancherel(cplx(l, 0.0)).real(); }

}  // namespace

// --- RadialFunction / SpectralFunction ------------------------------------

cplx RadialFunction::operator()(double t) const {
    t = std::abs(t);
    if (t > grid.upper()) return 0.0;
    return grid.interpolate(std::span<const cplx>(values), t);
}

double RadialFunction::lp_norm(double p) const {
    if (!(p >= 1.0)) throw DomainError("lp_norm: p must be >= 1");
    const auto& t = grid.nodes();
    const auto& w = grid.weights();
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) s += w[i] * std::pow(std::abs(values[i]), p) * density_delta(space, t[i]);
    return std::pow(s, 1.0 / p);
}

cplx SpectralFunction::operator()(double lambda) const {
    if (even) lambda = std::abs(lambda);
    if (lambda > grid.upper() || lambda < grid.lower()) return 0.0;
    return grid.interpolate(std::span<const cplx>(values), lambda);
}

// --- SphericalTransform ---------------------------------------------------

SphericalTransform::SphericalTransform(const SpaceParams& s, PanelGrid tgrid, PanelGrid lgrid, int jobs)
    : s_(s), tg_(std::move(tgrid)), lg_(std::move(lgrid)) {
    if (tg_.lower() != 0.0 || lg_.lower() != 0.0)
        throw DomainError("SphericalTransform: t- and lambda-grids must start at 0");
    tab_ = phi_table(s_, lg_.nodes(), tg_.nodes(), jobs);
    const CFunction cf(s_);
    planch_.resize(lg_.size());
    for (std::size_t i = 0; i < lg_.size(); ++i) planch_[i] = plancherel_density(cf, lg_.nodes()[i]);
    delta_.resize(tg_.size());
    for (std::size_t j = 0; j < tg_.size(); ++j) delta_[j] = density_delta(s_, tg_.nodes()[j]);
    const PWSpec cal = calibration_spec();
    kappa_ = measure_kappa([&](double l) { return cal.spectrum(l); });
}

SphericalTransform SphericalTransform::standard(const SpaceParams& s, int jobs) {
    return SphericalTransform(s, PanelGrid::uniform(0.0, 20.0, 40), PanelGrid::uniform(0.0, 12.0, 48), jobs);
}

RadialFunction SphericalTransform::zero() const {
    return RadialFunction{s_, tg_, std::vector<cplx>(tg_.size(), 0.0)};
}

RadialFunction SphericalTransform::sample(const std::function<cplx(double)>& f) const {
    RadialFunction r = zero();
    for (std::size_t j = 0; j < tg_.size(); ++j) r.values[j] = f(tg_.nodes()[j]);
    return r;
}

SpectralFunction SphericalTransform::forward(const RadialFunction& f) const {
    std::vector<cplx> fv(tg_.size());
    const bool same_grid = f.grid.nodes() == tg_.nodes();
    for (std::size_t j = 0; j < tg_.size(); ++j) fv[j] = same_grid ? f.values[j] : f(tg_.nodes()[j]);
    // Tail test on the lambda = 0 row: the integrand at the last node against the total mass.
    const std::size_t last = tg_.size() - 1;
    double mass = 0.0;
    for (std::size_t j = 0; j < tg_.size(); ++j) mass += tg_.weights()[j] * std::abs(fv[j]) * delta_[j] * tab_(0, j);
    const double edge = std::abs(fv[last]) * delta_[last] * tab_(0, last);
    if (edge > kTailTol * std::max(mass, 1e-300) && edge > 1e-300)
        throw ConvergenceError("spherical_transform: f does not decay before the end of the t-grid");
    SpectralFunction out{lg_, std::vector<cplx>(lg_.size(), 0.0), true};
    for (std::size_t i = 0; i < lg_.size(); ++i) {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < tg_.size(); ++j) acc += tg_.weights()[j] * fv[j] * delta_[j] * tab_(i, j);
        out.values[i] = acc;
    }
    return out;
}

RadialFunction SphericalTransform::inverse_raw(const std::function<cplx(double)>& h) const {
    std::vector<cplx> hv(lg_.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < lg_.size(); ++i) {
        hv[i] = h(lg_.nodes()[i]);
        mass += lg_.weights()[i] * std::abs(hv[i]) * planch_[i];
    }
    const std::size_t last = lg_.size() - 1;
    const double edge = std::abs(hv[last]) * planch_[last];
    if (edge > kTailTol * std::max(mass, 1e-300) && edge > 1e-300)
        throw ConvergenceError("inverse_spherical: spectrum does not decay before the end of the lambda-grid");
    RadialFunction out = zero();
    for (std::size_t j = 0; j < tg_.size(); ++j) {
        cplx acc = 0.0;
        for (std::size_t i = 0; i < lg_.size(); ++i) acc += lg_.weights()[i] * hv[i] * planch_[i] * tab_(i, j);
        out.values[j] = acc;
    }
    return out;
}

RadialFunction SphericalTransform::inverse(const std::function<cplx(double)>& h) const {
    RadialFunction f = inverse_raw(h);
    for (auto& v : f.values) v *= kappa_;
    return f;
}

RadialFunction SphericalTransform::inverse(const SpectralFunction& h) const {
    if (!h.even) throw DomainError("inverse_spherical: spectrum must be even");
    const bool same_grid = h.grid.nodes() == lg_.nodes();
    return inverse([&](double l) -> cplx {
        if (same_grid) {
            const auto it = std::lower_bound(lg_.nodes().begin(), lg_.nodes().end(), l);
            return h.values[static_cast<std::size_t>(it - lg_.nodes().begin())];
        }
        return h(l);
    });
}

double SphericalTransform::l2_norm_sq(const RadialFunction& f) const {
    double s = 0.0;
    for (std::size_t j = 0; j < tg_.size(); ++j) s += tg_.weights()[j] * std::norm(f(tg_.nodes()[j])) * delta_[j];
    return s;
}

double SphericalTransform::spectral_l2_norm_sq(const SpectralFunction& h) const {
    double s = 0.0;
    for (std::size_t i = 0; i < lg_.size(); ++i) s += lg_.weights()[i] * std::norm(h(lg_.nodes()[i])) * planch_[i];
    return kappa_ * s;
}

double SphericalTransform::spectral_rel_error(const SpectralFunction& a, const std::function<cplx(double)>& b) const {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lg_.size(); ++i) {
        const double l = lg_.nodes()[i];
        const cplx bv = b(l);
        num += lg_.weights()[i] * std::norm(a(l) - bv) * planch_[i];
        den += lg_.weights()[i] * std::norm(bv) * planch_[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double SphericalTransform::measure_kappa(const std::function<cplx(double)>& h) const {
    // Least-squares ratio between h and the transform of its unnormalised inverse.
    const SpectralFunction back = forward(inverse_raw(h));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < lg_.size(); ++i) {
        const cplx hv = h(lg_.nodes()[i]);
        const double w = lg_.weights()[i] * planch_[i];
        num += w * (std::conj(back.values[i]) * hv).real();
        den += w * std::norm(back.values[i]);
    }
    if (den <= 0.0) throw DomainError("measure_kappa: calibration spectrum vanishes");
    return num / den;
}

double SphericalTransform::phi0_lq_norm(double q) const {
    if (std::isinf(q)) return 1.0;
    if (!(q > 2.0)) throw DomainError("phi0_lq_norm: q must exceed 2");
    // Row 0 is the smallest lambda node; phi_lambda -> phi_0 quadratically, so
    // evaluate phi_0 directly.
    const std::vector<cplx> p0 = phi_ode_profile(s_, 0.0, tg_.nodes());
    double s = 0.0;
    for (std::size_t j = 0; j < tg_.size(); ++j) s += tg_.weights()[j] * std::pow(std::abs(p0[j]), q) * delta_[j];
    return std::pow(s, 1.0 / q);
}

SpectralFunction spherical_transform(const SphericalTransform& T, const RadialFunction& f) { return T.forward(f); }
RadialFunction inverse_spherical(const SphericalTransform& T, const SpectralFunction& h) { return T.inverse(h); }

// --- Paley-Wiener family ---------------------------------------------------

cplx PWSpec::spectrum(double l) const {
    const double l2 = l * l;
    return scale * std::exp(-a * l2) * (1.0 + b * l2 + c * l2 * l2);
}

RadialFunction paley_wiener_factory(const SphericalTransform& T, PWSpec& spec) {
    if (!(spec.a > 0.0)) throw DomainError("paley_wiener_factory: a must be positive");
    spec.scale = 1.0;
    double n2 = 0.0;
    for (std::size_t i = 0; i < T.lgrid().size(); ++i)
        n2 += T.lgrid().weights()[i] * std::norm(spec.spectrum(T.lgrid().nodes()[i])) * T.plancherel(i);
    n2 *= T.kappa_inv();
    spec.scale = 1.0 / std::sqrt(n2);
    const PWSpec frozen = spec;
    return T.inverse([frozen](double l) { return frozen.spectrum(l); });
}

std::vector<PWSpec> paley_wiener_family(std::uint64_t seed, int count) {
    std::mt19937_64 rng(seed);
    // Unit uniforms from the raw 64-bit stream (portable across standard libraries).
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<PWSpec> out;
    for (int k = 0; k < count; ++k) {
        PWSpec s;
        s.a = 0.5 + unit();
        s.b = unit();
        s.c = 0.2 * unit();
        out.push_back(s);
    }
    return out;
}

// --- Abel transform -------------------------------------------------------

cplx AbelTransform::operator()(double t) const {
    t = std::abs(t);
    if (t > grid.upper()) return 0.0;
    return grid.interpolate(std::span<const cplx>(values), t);
}

AbelTransform abel_horocyclic_raw(const RadialFunction& f) {
    require_hyperboloid_model(f.space, "abel_transform (horocyclic route)");
    const int d = f.space.d;
    const double T = f.grid.upper();
    // Integral over the horocycle through a_t: after rescaling the model
    // translation x by e^{t/2} and writing |u| = sqrt(2) sinh v,
    //   A(t) = omega_{d-2} 2^{(d-1)/2} int_0^inf f(r) sinh^{d-2} v cosh v dv,
    //   cosh r = cosh t + sinh^2 v.
    const double omega = d == 2 ? 2.0 : 2.0 * std::pow(kPi, 0.5 * (d - 1)) / std::tgamma(0.5 * (d - 1));
    const double pref = omega * std::pow(2.0, 0.5 * (d - 1));
    const double V = std::asinh(std::sqrt(std::cosh(T)));
    const PanelGrid vg = PanelGrid::uniform(0.0, V, static_cast<int>(std::ceil(V / 0.25)));
    const std::size_t last = f.grid.size() - 1;
    // The integrand at v = V is f(T) times roughly e^{(d-1)T/2}.
    if (std::abs(f.values[last]) * std::exp(0.5 * (d - 1) * T) > kTailTol * std::max(1e-300, std::abs(f.values[0])) &&
        std::abs(f.values[last]) > 1e-300)
        throw ConvergenceError("abel_transform: f does not decay before the end of the t-grid");
    AbelTransform A{f.grid, std::vector<cplx>(f.grid.size(), 0.0)};
    for (std::size_t j = 0; j < f.grid.size(); ++j) {
        const double t = f.grid.nodes()[j];
        const double sh = std::sinh(0.5 * t);
        cplx acc = 0.0;
        for (std::size_t k = 0; k < vg.size(); ++k) {
            const double v = vg.nodes()[k];
            const double sv = std::sinh(v);
            // Cancellation-free radius: sinh^2(r/2) = sinh^2(t/2) + sinh^2(v)/2.
            const double r = 2.0 * std::asinh(std::sqrt(sh * sh + 0.5 * sv * sv));
            if (r > T) continue;
            acc += vg.weights()[k] * f(r) * std::pow(sv, d - 2) * std::cosh(v);
        }
        A.values[j] = pref * acc;
    }
    return A;
}

AbelTransform abel_hyperbolic3_raw(const RadialFunction& f) {
    if (f.space.d != 3 || f.space.m2 != 0) throw DomainError("abel_transform (route B): requires d = 3, m2 = 0");
    const PanelGrid& g = f.grid;
    const std::size_t P = g.panels();
    const int n = g.order();
    // Full-panel integrals of f(r) sinh r, accumulated from the right.
    std::vector<cplx> tail(P + 1, 0.0);
    for (std::size_t p = P; p-- > 0;) {
        cplx s = 0.0;
        for (int k = 0; k < n; ++k) {
            const std::size_t i = p * n + k;
            s += g.weights()[i] * f.values[i] * std::sinh(g.nodes()[i]);
        }
        tail[p] = tail[p + 1] + s;
    }
    std::vector<double> xr, wr;
    gauss_legendre(n, xr, wr);
    AbelTransform A{g, std::vector<cplx>(g.size(), 0.0)};
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double t = g.nodes()[j];
        const std::size_t p = j / n;
        const double b = g.breaks()[p + 1];
        // Partial panel [t, b] with its own Gauss rule on the interpolant.
        cplx s = 0.0;
        for (int k = 0; k < n; ++k) {
            const double r = 0.5 * (b + t) + 0.5 * (b - t) * xr[k];
            s += 0.5 * (b - t) * wr[k] * f(r) * std::sinh(r);
        }
        A.values[j] = s + tail[p + 1];
    }
    return A;
}

SpectralFunction euclidean_ft(const SphericalTransform& T, const AbelTransform& A) {
    SpectralFunction out{T.lgrid(), std::vector<cplx>(T.lgrid().size(), 0.0), true};
    const auto& t = A.grid.nodes();
    const auto& w = A.grid.weights();
    for (std::size_t i = 0; i < T.lgrid().size(); ++i) {
        const double l = T.lgrid().nodes()[i];
        cplx acc = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) acc += w[j] * A.values[j] * std::cos(l * t[j]);
        out.values[i] = 2.0 * acc;  // even extension to the whole line
    }
    return out;
}

namespace {

double ls_ratio(const std::vector<cplx>& target, const std::vector<cplx>& raw, const std::vector<double>& w) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
        num += w[i] * (std::conj(raw[i]) * target[i]).real();
        den += w[i] * std::norm(raw[i]);
    }
    return num / den;
}

}  // namespace

AbelCalibration calibrate_abel(const SphericalTransform& T) {
    require_hyperboloid_model(T.space(), "calibrate_abel");
    PWSpec spec = calibration_spec();
    const RadialFunction f0 = paley_wiener_factory(T, spec);
    const SpectralFunction fhat = T.forward(f0);
    const AbelTransform A = abel_horocyclic_raw(f0);
    const SpectralFunction FA = euclidean_ft(T, A);
    std::vector<double> w(T.lgrid().size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = T.lgrid().weights()[i] * T.plancherel(i);
    AbelCalibration cal;
    cal.kappa_N = ls_ratio(fhat.values, FA.values, w);
    if (T.space().d == 3) {
        // Route B is pinned to route A on the same calibration function.
        const AbelTransform B = abel_hyperbolic3_raw(f0);
        std::vector<cplx> a(A.values);
        for (auto& v : a) v *= cal.kappa_N;
        cal.C_B = ls_ratio(a, B.values, A.grid.weights());
    }
    return cal;
}

AbelTransform abel_transform(const RadialFunction& f, const AbelCalibration& cal, bool route_b) {
    AbelTransform A = route_b ? abel_hyperbolic3_raw(f) : abel_horocyclic_raw(f);
    const double k = route_b ? cal.C_B : cal.kappa_N;
    if (k == 0.0) throw DomainError("abel_transform: route not calibrated");
    for (auto& v : A.values) v *= k;
    return A;
}

RaySarkarReport ray_sarkar_check(const AbelTransform& A, const RadialFunction& f, double p, double r, double beta) {
    if (!(p > 1.0 && p < 2.0)) throw DomainError("ray_sarkar_check: p must lie in (1, 2)");
    const double gp = 2.0 / p - 1.0;
    if (!(r >= 1.0 && r < 1.0 / gp)) throw DomainError("ray_sarkar_check: r must lie in [1, 1/gamma_p)");
    const bool limit_case = beta == 0.0 && r == p;
    if (!limit_case && !(beta > 0.0 && beta < gp * r))
        throw DomainError("ray_sarkar_check: beta must lie in (0, gamma_p r) (or beta = 0 with r = p)");
    const double rho = f.space.rho;
    double s = 0.0;
    for (std::size_t j = 0; j < A.grid.size(); ++j) {
        const double t = A.grid.nodes()[j];
        s += A.grid.weights()[j] * std::pow(std::abs(A.values[j]), r) * std::exp(rho * beta * t);
    }
    RaySarkarReport rep;
    rep.lhs = std::pow(2.0 * s, 1.0 / r);
    rep.rhs = f.lp_norm(p);
    rep.ratio = rep.rhs > 0.0 ? rep.lhs / rep.rhs : 0.0;
    return rep;
}

// --- Helgason Fourier transform on the disc --------------------------------

BoundaryFunction helgason_ft(const SpaceParams& s, const std::function<cplx(cplx)>& f, cplx center,
                             const HelgasonGrid& g, int jobs) {
    if (s.d != 2) throw DomainError("helgason_ft: implemented for the disc (d = 2) only");
    if (std::abs(center) >= 1.0) throw DomainError("helgason_ft: center must lie in the disc");
    BoundaryFunction F;
    F.lgrid = PanelGrid::uniform(-g.Lambda, g.Lambda, g.lambda_panels);
    const int nb = g.boundary_points;
    F.thetas.resize(nb);
    for (int j = 0; j < nb; ++j) F.thetas[j] = 2.0 * kPi * j / nb;
    // Geodesic polar quadrature about `center`; dg = sinh s ds dtheta / pi.
    struct QPoint {
        cplx z;
        cplx fw;  // f(z) * weight
    };
    std::vector<QPoint> pts;
    const PanelGrid sg = PanelGrid::uniform(0.0, g.radius, g.radial_panels);
    for (std::size_t k = 0; k < sg.size(); ++k) {
        const double sr = sg.nodes()[k];
        const double rr = std::tanh(0.5 * sr);
        // Angular Fourier modes of P(z, b)^{rho - i lambda} decay like rr^n.
        int na = static_cast<int>(std::ceil(-33.0 / std::log(rr))) + 16;
        na = std::clamp(na, 16, g.max_angular_points);
        for (int a = 0; a < na; ++a) {
            const cplx w = std::polar(rr, 2.0 * kPi * a / na);
            const cplx z = disc_translate(center, w);
            const double wt = sg.weights()[k] * std::sinh(sr) * (2.0 * kPi / na) / kPi;
            const cplx fz = f(z);
            if (fz != 0.0) pts.push_back({z, fz * wt});
        }
    }
    F.values.assign(F.lgrid.size() * nb, 0.0);
    // log P(z, b) for every quadrature point and boundary node.
    std::vector<double> logP(pts.size() * nb);
    for (std::size_t q = 0; q < pts.size(); ++q)
        for (int j = 0; j < nb; ++j) logP[q * nb + j] = std::log(disc_poisson(pts[q].z, std::polar(1.0, F.thetas[j])));
    parallel_for(F.lgrid.size(), jobs, [&](std::size_t i) {
        const cplx e = cplx(s.rho, -F.lgrid.nodes()[i]);
        for (int j = 0; j < nb; ++j) {
            cplx acc = 0.0;
            for (std::size_t q = 0; q < pts.size(); ++q) acc += pts[q].fw * std::exp(e * logP[q * nb + j]);
            F.values[i * nb + j] = acc;
        }
    });
    return F;
}

cplx helgason_inverse(const SpaceParams& s, const BoundaryFunction& F, cplx z, double kappa_inv) {
    return helgason_inverse(s, F, z, kappa_inv, nullptr);
}

cplx helgason_inverse(const SpaceParams& s, const BoundaryFunction& F, cplx z, double kappa_inv,
                      const std::function<cplx(double)>& weight) {
    if (s.d != 2) throw DomainError("helgason_inverse: implemented for the disc (d = 2) only");
    if (std::abs(z) >= 1.0) throw DomainError("helgason_inverse: point must lie in the disc");
    const CFunction cf(s);
    const std::size_t nb = F.thetas.size();
    std::vector<double> logP(nb);
    for (std::size_t j = 0; j < nb; ++j) logP[j] = std::log(disc_poisson(z, std::polar(1.0, F.thetas[j])));
    cplx acc = 0.0;
    for (std::size_t i = 0; i < F.lgrid.size(); ++i) {
        const double l = F.lgrid.nodes()[i];
        const cplx e(s.rho, l);
        cplx inner = 0.0;
        for (std::size_t j = 0; j < nb; ++j) inner += F.at(i, j) * std::exp(e * logP[j]);
        const cplx w = weight ? weight(l) : cplx(1.0);
        acc += F.lgrid.weights()[i] * plancherel_density(cf, l) * w * inner / static_cast<double>(nb);
    }
    return 0.5 * kappa_inv * acc;
}

}  // namespace symspace
