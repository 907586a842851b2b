#include "symspace/spherical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "symspace/errors.hpp"
#include "symspace/geometry.hpp"

namespace symspace {

namespace {

namespace ode = boost::numeric::odeint;
using State = std::array<double, 4>;  // Re v, Im v, Re v', Im v'

constexpr double kStart = 1e-3;  // switch-over from the series start to the integrator

// phi = 2F1(a, b; c; -sinh^2 t) and its t-derivative, for small t.
void hypergeometric_start(const SpaceParams& s, cplx lambda, double t, cplx& u, cplx& du) {
    const cplx a = 0.5 * (s.rho + kI * lambda), b = 0.5 * (s.rho - kI * lambda);
    const double c = 0.5 * s.d;
    const double sh = std::sinh(t);
    const double z = -sh * sh;
    cplx term = 1.0, sum = 1.0;
    cplx dterm = a * b / c, dsum = dterm;  // series of 2F1(a+1, b+1; c+1; z) * ab/c
    for (int k = 0; k < 60; ++k) {
        term *= (a + double(k)) * (b + double(k)) / ((c + k) * (k + 1.0)) * z;
        dterm *= (a + double(k + 1)) * (b + double(k + 1)) / ((c + k + 1.0) * (k + 1.0)) * z;
        sum += term;
        dsum += dterm;
        if (std::abs(term) < 1e-18 * std::abs(sum) && std::abs(dterm) < 1e-18 * std::abs(dsum)) break;
    }
    u = sum;
    du = -std::sinh(2.0 * t) * dsum;
}

// Scaled radial equation for v = e^{rho t} u:
//   v'' + q v' + (lambda^2 - rho q) v = 0,  q = Delta'/Delta - 2 rho  (-> 0 as t -> inf).
struct ScaledRadial {
    SpaceParams s;
    cplx lambda2;
    void operator()(const State& y, State& dy, double t) const {
        const double e = std::expm1(2.0 * t);
        const double q = (s.m1 + s.m2) * 2.0 / e - s.m2 * 2.0 / (e + 2.0);
        const cplx v(y[0], y[1]), dv(y[2], y[3]);
        const cplx ddv = -q * dv - (lambda2 - s.rho * q) * v;
        dy[0] = y[2];
        dy[1] = y[3];
        dy[2] = ddv.real();
        dy[3] = ddv.imag();
    }
};

}  // namespace

std::vector<cplx> phi_ode_profile(const SpaceParams& s, cplx lambda, std::span<const double> ts) {
    std::vector<cplx> out(ts.size());
    std::vector<double> later;  // radii handled by the integrator
    std::vector<std::size_t> later_idx;
    double prev = -1.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = std::abs(ts[i]);
        if (t > kPhiTMax) throw DomainError("phi_ode: t must lie in [0, 50]");
        if (t < prev) throw DomainError("phi_ode_profile: radii must be ascending in |t|");
        prev = t;
        if (t <= kStart) {
            cplx u, du;
            hypergeometric_start(s, lambda, t, u, du);
            out[i] = u;
        } else {
            later.push_back(t);
            later_idx.push_back(i);
        }
    }
    if (later.empty()) return out;

    cplx u0, du0;
    hypergeometric_start(s, lambda, kStart, u0, du0);
    const double e0 = std::exp(s.rho * kStart);
    const cplx v0 = e0 * u0, dv0 = e0 * (du0 + s.rho * u0);
    State y{v0.real(), v0.imag(), dv0.real(), dv0.imag()};

    // odeint needs strictly increasing observation times; repeated radii
    // share one observation.
    std::vector<double> times{kStart};
    for (double t : later)
        if (t > times.back()) times.push_back(t);
    std::vector<cplx> vals;
    vals.reserve(times.size());
    auto observer = [&](const State& st, double t) { vals.push_back(std::exp(-s.rho * t) * cplx(st[0], st[1])); };
    auto stepper = ode::make_controlled(1e-14, 1e-13, ode::runge_kutta_fehlberg78<State>());
    const ScaledRadial sys{s, lambda * lambda};
    try {
        ode::integrate_times(stepper, sys, y, times.begin(), times.end(), 1e-5, observer,
                             ode::max_step_checker(2000000));
    } catch (const ode::step_adjustment_error& e) {
        std::ostringstream os;
        os << "phi_ode: step-size failure for lambda = " << lambda << " (" << e.what() << ")";
        throw ConvergenceError(os.str());
    } catch (const ode::no_progress_error& e) {
        std::ostringstream os;
        os << "phi_ode: integrator made no progress for lambda = " << lambda << " (" << e.what() << ")";
        throw ConvergenceError(os.str());
    }
    for (std::size_t i = 0; i < later.size(); ++i) {
        const auto pos = std::lower_bound(times.begin(), times.end(), later[i]) - times.begin();
        out[later_idx[i]] = vals[pos];
    }
    return out;
}

cplx phi_ode(const SpaceParams& s, cplx lambda, double t) {
    const double ts[1] = {t};
    return phi_ode_profile(s, lambda, ts)[0];
}

PhiTable phi_table(const SpaceParams& s, std::span<const double> lambdas, std::span<const double> ts, int jobs) {
    PhiTable tab;
    tab.lambdas.assign(lambdas.begin(), lambdas.end());
    tab.ts.assign(ts.begin(), ts.end());
    tab.values.assign(lambdas.size() * ts.size(), 0.0);
    parallel_for(lambdas.size(), jobs, [&](std::size_t i) {
        const auto row = phi_ode_profile(s, lambdas[i], ts);
        for (std::size_t j = 0; j < ts.size(); ++j) tab.values[i * ts.size() + j] = row[j].real();
    });
    return tab;
}

// ---------------------------------------------------------------- local Bessel

double local_bessel_c0(const SpaceParams& s) {
    return std::pow(2.0, s.rho) / bessel_curly_J_at_zero(0.5 * (s.d - 2));
}

namespace {

cplx local_term(const SpaceParams& s, cplx lambda, double t, int m) {
    const double mu = 0.5 * (s.d - 2) + m;
    return local_bessel_c0(s) * std::pow(density_ratio(s, t), -0.5) * std::pow(t, 2 * m) *
           bessel_curly_J(mu, lambda * t);
}

// Solve the small dense least-squares problem min |A x - b| by normal equations.
std::vector<double> least_squares(const std::vector<std::vector<double>>& A, const std::vector<double>& b) {
    const std::size_t n = A.front().size();
    std::vector<std::vector<double>> N(n, std::vector<double>(n + 1, 0.0));
    for (std::size_t r = 0; r < A.size(); ++r)
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) N[i][j] += A[r][i] * A[r][j];
            N[i][n] += A[r][i] * b[r];
        }
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t piv = i;
        for (std::size_t r = i + 1; r < n; ++r)
            if (std::abs(N[r][i]) > std::abs(N[piv][i])) piv = r;
        std::swap(N[i], N[piv]);
        if (N[i][i] == 0.0) throw ConvergenceError("phi_local_bessel: singular fit");
        for (std::size_t r = 0; r < n; ++r) {
            if (r == i) continue;
            const double f = N[r][i] / N[i][i];
            for (std::size_t c = i; c <= n; ++c) N[r][c] -= f * N[i][c];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = N[i][n] / N[i][i];
    return x;
}

}  // namespace

LocalBesselResult phi_local_bessel(const SpaceParams& s, cplx lambda, double t, int M) {
    t = std::abs(t);
    if (t > 1.0) throw DomainError("phi_local_bessel: the local expansion needs t <= 1");
    if (M < 0 || M > 4) throw DomainError("phi_local_bessel: M must be in [0, 4]");
    LocalBesselResult r;
    if (t == 0.0) {
        r.value = 1.0;
        return r;
    }
    cplx v = local_term(s, lambda, t, 0);
    if (M >= 1) {
        // Fit a_1..a_M at this t on real spectral samples.
        std::vector<std::vector<double>> A;
        std::vector<double> b;
        for (int j = 1; j <= M + 8; ++j) {
            const double l = 0.5 * j;
            std::vector<double> row;
            for (int m = 1; m <= M; ++m) row.push_back(local_term(s, l, t, m).real());
            A.push_back(row);
            b.push_back(phi_ode(s, l, t).real() - local_term(s, l, t, 0).real());
        }
        r.a_m = least_squares(A, b);
        for (int m = 1; m <= M; ++m) v += r.a_m[m - 1] * local_term(s, lambda, t, m);
    }
    r.value = v;
    r.residual = std::abs(v - phi_ode(s, lambda, t));
    const double lt = std::abs(lambda) * t;
    r.envelope = std::pow(t, 2 * (M + 1));
    if (lt > 1.0) r.envelope *= std::pow(lt, -(0.5 * (s.d - 1) + M + 1));
    return r;
}

// ------------------------------------------------------------ Harish-Chandra

HCSeries::HCSeries(const SpaceParams& s, cplx lambda, int K) : s_(s), lambda_(lambda) {
    if (K < 0) throw DomainError("HCSeries: K must be >= 0");
    // Poles at lambda = -i n, n >= 1.
    const double n_near = std::round(-lambda.imag());
    if (n_near >= 1.0 && n_near <= K && std::abs(lambda - cplx(0.0, -n_near)) < 1e-6) {
        lambda_ += 1e-5;
        perturbed_ = true;
    }
    const cplx il = kI * lambda_;
    g_.assign(K + 1, 0.0);
    g_[0] = 1.0;
    for (int n = 1; n <= K; ++n) {
        const cplx den = 2.0 * n * (double(n) - il);
        if (std::abs(den) < 1e-8) throw PoleError("HCSeries: lambda on a pole of Gamma_k");
        cplx acc = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double B = (j % 2 == 0) ? s.m1 + 2.0 * s.m2 : double(s.m1);
            acc += B * (il - s.rho - 2.0 * (n - j)) * g_[n - j];
        }
        g_[n] = -acc / den;
    }
}

cplx HCSeries::series(double t) const { return 1.0 + remainder(t); }

cplx HCSeries::remainder(double t) const {
    const double q = std::exp(-2.0 * t);
    cplx acc = 0.0;
    for (std::size_t k = g_.size(); k-- > 1;) acc = (acc + g_[k]) * q;  // Horner in q
    return acc;
}

namespace {

cplx hc_direct(const SpaceParams& s, cplx lambda, double t, int K) {
    const CFunction cf(s);
    const HCSeries plus(s, lambda, K), minus(s, -lambda, K);
    const cplx lp = plus.lambda(), lm = -minus.lambda();  // after any perturbation
    const cplx a = cf.c(lp) * std::exp((kI * lp - s.rho) * t) * plus.series(t);
    const cplx b = cf.c(-lm) * std::exp((-kI * lm - s.rho) * t) * minus.series(t);
    return a + b;
}

}  // namespace

cplx phi_hc_series(const SpaceParams& s, cplx lambda, double t, int K) {
    t = std::abs(t);
    if (t < 0.1) throw DomainError("phi_hc_series: needs t >= 1/10");
    if (lambda.imag() < 0.0) lambda = -lambda;  // phi is even in lambda
    if (lambda.imag() > s.rho + 0.1 + 1e-12) throw DomainError("phi_hc_series: Im lambda beyond rho + 1/10");
    if (std::abs(lambda) < 0.05) {
        // c(lambda) has a pole at 0; phi is entire in lambda, so use the mean
        // value over a small circle.
        constexpr int P = 32;
        cplx acc = 0.0;
        for (int j = 0; j < P; ++j) acc += hc_direct(s, lambda + 0.1 * std::polar(1.0, 2.0 * kPi * (j + 0.5) / P), t, K);
        return acc / double(P);
    }
    return hc_direct(s, lambda, t, K);
}

HCRemainder hc_remainder(const SpaceParams& s, cplx lambda, double t) {
    t = std::abs(t);
    if (t < 0.1) throw DomainError("hc_remainder: needs t >= 1/10");
    // Enough terms that e^{-2Kt} times polynomial growth of Gamma_k is negligible.
    const int K = std::clamp(static_cast<int>(std::ceil(45.0 / t)) + 10, 20, 2000);
    HCRemainder r;
    r.t = t;
    r.terms = K;
    const HCSeries hs(s, lambda, K);
    r.lambda = hs.lambda();
    r.perturbed = hs.perturbed();
    r.a = hs.remainder(t);
    const double q = std::exp(-2.0 * t);
    cplx acc = 0.0;
    const auto& g = hs.coefficients();
    for (std::size_t k = g.size(); k-- > 1;) acc = acc * q + (-2.0 * double(k)) * g[k];
    r.d_t = acc * q;
    r.d_lambda[0] = r.a;
    auto f = [&](cplx l) { return HCSeries(s, l, K).remainder(t); };
    // Poles of a(., t) sit at -i n, n >= 1: keep the circle clear of them.
    const double radius = std::min(0.25, 0.5 * std::abs(r.lambda - cplx(0.0, -std::max(1.0, std::round(-r.lambda.imag())))));
    for (int a = 1; a <= 3; ++a) r.d_lambda[a] = cauchy_derivative(f, r.lambda, a, radius, 32);
    return r;
}

RemainderCertificate hc_remainder_certificate(const SpaceParams& s, double t) {
    RemainderCertificate c;
    const int n = 30;
    std::vector<double> lam(n);
    std::array<std::vector<double>, 4> mag;
    for (int i = 0; i < n; ++i) lam[i] = std::pow(100.0, double(i) / (n - 1));
    for (int i = 0; i < n; ++i) {
        const auto r = hc_remainder(s, lam[i], t);
        for (int a = 0; a < 4; ++a) {
            mag[a].push_back(std::abs(r.d_lambda[a]));
            c.constant[a] = std::max(c.constant[a], std::abs(r.d_lambda[a]) * std::pow(1.0 + lam[i], a));
        }
        c.dt_constant = std::max(c.dt_constant, std::abs(r.d_t));
    }
    c.pass = true;
    for (int a = 0; a < 4; ++a) {
        std::vector<double> x, y;
        for (int i = 0; i < n; ++i)
            if (lam[i] >= 5.0 && mag[a][i] > 1e-15) {
                x.push_back(1.0 + lam[i]);
                y.push_back(mag[a][i]);
            }
        c.fitted[a] = x.size() >= 3 ? fit_loglog(x, y).slope : -std::numeric_limits<double>::infinity();
        if (c.fitted[a] > -a + 0.3) c.pass = false;
    }
    return c;
}

// ------------------------------------------------------------ product formula

double phi_product_identity_check(const SpaceParams& s, double lambda, cplx x, cplx y) {
    if (s.d != 2) throw DomainError("phi_product_identity_check: needs d = 2 (disc model)");
    if (std::abs(x) >= 1.0 || std::abs(y) >= 1.0) throw DomainError("phi_product_identity_check: points must lie in the disc");
    const cplx ep(s.rho, lambda), em(s.rho, -lambda);
    auto integrand = [&](double th) {
        const cplx b = std::polar(1.0, th);
        return std::exp(ep * std::log(disc_poisson(x, b)) + em * std::log(disc_poisson(y, b)));
    };
    // Periodic trapezoid rule with doubling until converged.
    int n = 64;
    cplx sum = 0.0;
    for (int j = 0; j < n; ++j) sum += integrand(2.0 * kPi * j / n);
    cplx prev = sum / double(n);
    for (; n <= (1 << 18); n *= 2) {
        for (int j = 0; j < n; ++j) sum += integrand(2.0 * kPi * (j + 0.5) / n);
        const cplx cur = sum / double(2 * n);
        if (std::abs(cur - prev) < 1e-14 * std::max(1.0, std::abs(cur))) {
            prev = cur;
            break;
        }
        prev = cur;
        if (n == (1 << 18)) throw ConvergenceError("phi_product_identity_check: boundary quadrature did not converge");
    }
    return std::abs(phi_ode(s, lambda, disc_distance(x, y)) - prev);
}

// ------------------------------------------------------------------- router

cplx SphericalEvaluator::operator()(cplx lambda, double t) const {
    t = std::abs(t);
    switch (method_) {
        case Method::ODE: return phi_ode(s_, lambda, t);
        case Method::LocalBessel: return phi_local_bessel(s_, lambda, t, 0).value;
        case Method::HCSeries: return phi_hc_series(s_, lambda, t, hc_terms_);
        case Method::Auto:
            if (t >= 5.0 && std::abs(lambda) >= 20.0 && std::abs(lambda.imag()) <= s_.rho)
                return phi_hc_series(s_, lambda, t, hc_terms_);
            if (t > kPhiTMax) return phi_hc_series(s_, lambda, t, hc_terms_);
            return phi_ode(s_, lambda, t);
    }
    return phi_ode(s_, lambda, t);
}

}  // namespace symspace
