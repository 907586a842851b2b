#include "symspace/special_fn.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>

#include <boost/math/special_functions/bessel.hpp>

#include "symspace/errors.hpp"

namespace symspace {

namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

const double kHalfLog2Pi = 0.5 * std::log(2.0 * kPi);
const double kLogPi = std::log(kPi);

bool is_pole(cplx z) {
    if (z.imag() != 0.0 || z.real() > 0.0) return false;
    return z.real() == std::nearbyint(z.real());
}

// log Gamma for Re z >= 1/2 (Lanczos, g = 7).
cplx lgamma_right(cplx z) {
    z -= 1.0;
    cplx x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + static_cast<double>(i));
    const cplx t = z + kLanczosG + 0.5;
    return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(x);
}

// log sin(w), stable for large |Im w|.
cplx log_sin(cplx w) {
    if (std::abs(w.imag()) < 20.0) return std::log(std::sin(w));
    const cplx log2i = std::log(cplx(0.0, 2.0));
    if (w.imag() > 0.0) return -kI * w + std::log(std::exp(2.0 * kI * w) - 1.0) - log2i;
    return kI * w + std::log(1.0 - std::exp(-2.0 * kI * w)) - log2i;
}

}  // namespace

cplx lgamma_complex(cplx z) {
    if (is_pole(z)) throw PoleError("lgamma_complex: pole at non-positive integer");
    if (z.real() >= 0.5) return lgamma_right(z);
    return kLogPi - log_sin(kPi * z) - lgamma_right(1.0 - z);
}

cplx gamma_complex(cplx z) {
    if (is_pole(z)) throw PoleError("gamma_complex: pole at non-positive integer");
    if (z.real() >= 0.5) return std::exp(lgamma_right(z));
    // Reflection in product form keeps full accuracy near the real axis.
    if (std::abs(z.imag()) < 20.0) return kPi / (std::sin(kPi * z) * std::exp(lgamma_right(1.0 - z)));
    return std::exp(lgamma_complex(z));
}

cplx rgamma_complex(cplx z) {
    if (is_pole(z)) return 0.0;
    if (z.real() >= 0.5) return std::exp(-lgamma_right(z));
    if (std::abs(z.imag()) < 20.0) return std::sin(kPi * z) * std::exp(lgamma_right(1.0 - z)) / kPi;
    return std::exp(log_sin(kPi * z) + lgamma_right(1.0 - z) - kLogPi);
}

double bessel_curly_J_at_zero(double mu) {
    return std::sqrt(kPi) * std::tgamma(mu + 0.5) / (2.0 * std::tgamma(mu + 1.0));
}

cplx bessel_curly_J_series(double mu, cplx z) {
    const cplx w = -0.25 * z * z;
    cplx term = 1.0 / std::tgamma(mu + 1.0);
    cplx sum = term;
    for (int k = 0; k < 400; ++k) {
        term *= w / ((k + 1.0) * (k + mu + 1.0));
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum) && k > 2) break;
    }
    return 0.5 * std::sqrt(kPi) * std::tgamma(mu + 0.5) * sum;
}

namespace {

// Hankel asymptotic expansion of J_mu(z)/z^mu for Re z > 0, |z| large.
cplx bessel_ratio_hankel(double mu, cplx z) {
    const double m4 = 4.0 * mu * mu;
    cplx P = 0.0, Q = 0.0;
    cplx ak = 1.0;  // a_k(mu) / z^k
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 60; ++k) {
        const double mag = std::abs(ak);
        if (mag > prev) break;  // asymptotic series started to diverge
        prev = mag;
        const int sgn = ((k / 2) % 2 == 0) ? 1 : -1;
        if (k % 2 == 0)
            P += static_cast<double>(sgn) * ak;
        else
            Q += static_cast<double>(sgn) * ak;
        if (mag < 1e-17) break;
        const double odd = 2.0 * k + 1.0;
        ak *= (m4 - odd * odd) / (8.0 * (k + 1.0)) / z;
    }
    const cplx omega = z - 0.5 * mu * kPi - 0.25 * kPi;
    const cplx J = std::sqrt(2.0 / (kPi * z)) * (P * std::cos(omega) - Q * std::sin(omega));
    return J * std::exp(-mu * std::log(z));
}

}  // namespace

cplx bessel_curly_J(double mu, cplx z) {
    if (mu < 0.0) throw DomainError("bessel_curly_J: mu must be >= 0");
    const double K = std::tgamma(mu + 0.5) * std::sqrt(kPi) * std::pow(2.0, mu - 1.0);
    if (z.imag() == 0.0) {
        const double x = std::abs(z.real());
        if (x < 1.0) return bessel_curly_J_series(mu, x);
        return K * boost::math::cyl_bessel_j(mu, x) / std::pow(x, mu);
    }
    if (std::abs(z) <= 12.0) return bessel_curly_J_series(mu, z);
    if (z.real() < 0.0) z = -z;  // even function
    return K * bessel_ratio_hankel(mu, z);
}

cplx CFunction::c(cplx l) const {
    const cplx il = kI * l;
    const double dhalf = 0.5 * s_.d;
    const cplx a = 0.5 * (s_.rho + il);
    const cplx b = 0.25 * (s_.m1 + 2.0) + 0.5 * il;
    const cplx logpre = (s_.rho - il) * std::log(2.0) + std::lgamma(dhalf);
    // For large |lambda| the individual Gamma factors over/underflow; combine the logarithms.
    if (std::abs(l) > 30.0 && !is_pole(a) && !is_pole(b))
        return std::exp(logpre + lgamma_complex(il) - lgamma_complex(a) - lgamma_complex(b));
    return std::exp(logpre) * gamma_complex(il) * rgamma_complex(a) * rgamma_complex(b);
}

cplx CFunction::c_inv(cplx l) const {
    const cplx il = kI * l;
    const double dhalf = 0.5 * s_.d;
    const cplx a = 0.5 * (s_.rho + il);
    const cplx b = 0.25 * (s_.m1 + 2.0) + 0.5 * il;
    const cplx logpart = -(s_.rho - il) * std::log(2.0) - std::lgamma(dhalf) + lgamma_complex(a) +
                         lgamma_complex(b);
    if (std::abs(l) > 30.0 && !is_pole(il)) return std::exp(logpart - lgamma_complex(il));
    return rgamma_complex(il) * std::exp(logpart);
}

namespace {

double nearest_lower_pole(const SpaceParams& s) { return std::min(s.rho, 0.5 * (s.m1 + 2.0)); }

GrowthEntry fit_growth(const std::string& name, int order, double imag, double claimed,
                       const std::vector<double>& lam, const std::vector<double>& mag,
                       const std::vector<double>& noise) {
    GrowthEntry e;
    e.quantity = name;
    e.order = order;
    e.imag_part = imag;
    e.claimed = claimed;
    bool vanish = true;
    double cst = 0.0;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        const double scale = std::pow(1.0 + std::hypot(lam[i], imag), claimed);
        cst = std::max(cst, mag[i] / scale);
        if (mag[i] <= noise[i]) continue;  // indistinguishable from rounding noise
        vanish = false;
        if (lam[i] >= 10.0) {
            x.push_back(std::hypot(lam[i], imag));
            y.push_back(mag[i]);
        }
    }
    e.constant = cst;
    e.vanishes = vanish;
    if (vanish || x.size() < 3) {
        e.fitted = -std::numeric_limits<double>::infinity();
        e.pass = std::isfinite(cst);
        return e;
    }
    e.fitted = fit_loglog(x, y).slope;
    e.pass = std::isfinite(cst) && e.fitted <= claimed + 0.15;
    return e;
}

// Cauchy-integral derivative with a radius adapted to the distance from the
// pole set, plus an estimate of its rounding-noise floor.
void sample_derivative(const std::function<cplx(cplx)>& f, cplx l, int a, double dist, double& mag,
                       double& noise) {
    const double r = 0.5 * dist;
    mag = std::abs(cauchy_derivative(f, l, a, r));
    noise = a == 0 ? 0.0 : 1e-13 * 2.0 * std::abs(f(l)) * std::tgamma(a + 1.0) / std::pow(r, a);
}

}  // namespace

GrowthCertificate validate_c_estimates(const CFunction& cf, int max_order) {
    if (max_order < 0 || max_order > 6) throw DomainError("validate_c_estimates: max_order must be in [0, 6]");
    const SpaceParams& s = cf.space();
    const int n = 60;
    std::vector<double> lam(n);
    for (int i = 0; i < n; ++i) lam[i] = 0.1 * std::pow(2000.0, static_cast<double>(i) / (n - 1));
    GrowthCertificate cert;
    const double p0 = nearest_lower_pole(s);
    auto cminus = [&](cplx l) { return cf.c_minus_inv(l); };
    auto planch = [&](cplx l) { return cf.plancherel(l); };
    for (double im : {0.0, 0.5 * s.rho, s.rho}) {
        for (int a = 0; a <= max_order; ++a) {
            std::vector<double> mag(n), noise(n);
            for (int i = 0; i < n; ++i) {
                const cplx l(lam[i], im);
                sample_derivative(cminus, l, a, std::abs(l - cplx(0.0, -p0)), mag[i], noise[i]);
            }
            cert.entries.push_back(fit_growth("c(-l)^-1", a, im, 0.5 * (s.d - 1) - a, lam, mag, noise));
        }
    }
    for (int a = 0; a <= max_order; ++a) {
        std::vector<double> mag(n), noise(n);
        for (int i = 0; i < n; ++i)
            sample_derivative(planch, cplx(lam[i], 0.0), a, std::hypot(lam[i], p0), mag[i], noise[i]);
        cert.entries.push_back(fit_growth("|c(l)|^-2", a, 0.0, (s.d - 1.0) - a, lam, mag, noise));
    }
    for (const auto& e : cert.entries) cert.pass = cert.pass && e.pass;
    // Holomorphy proxy on a 20 x 20 polar grid of the closed upper half-disc |l| <= 200.
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double r = 0.1 * std::pow(2000.0, i / 19.0);
        for (int j = 0; j < 20; ++j) {
            const double th = kPi * j / 19.0;
            cplx l = std::polar(r, th);
            const double h = 1e-3 * (1.0 + r);
            if (l.imag() < 2.0 * h) l.imag(2.0 * h);
            // Fourth-order central differences along both axes.
            auto d4 = [&](cplx step) {
                return (8.0 * (cminus(l + step) - cminus(l - step)) - (cminus(l + 2.0 * step) - cminus(l - 2.0 * step))) /
                       (12.0 * h);
            };
            const cplx fx = d4(h);
            const cplx fy = d4(kI * h);
            const double scale = std::abs(fx) + std::abs(cminus(l)) / (1.0 + r);
            worst = std::max(worst, std::abs(fx + kI * fy) / scale);
        }
    }
    cert.holomorphy_residual = worst;
    return cert;
}

}  // namespace symspace
