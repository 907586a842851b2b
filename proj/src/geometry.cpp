#include "symspace/geometry.hpp"

#include <cmath>

#include <boost/math/special_functions/beta.hpp>

#include "symspace/errors.hpp"

namespace symspace {

namespace {

double norm2(const Vec& v) {
    double s = 0;
    for (double a : v) s += a * a;
    return s;
}

// Surface area of the unit sphere S^{n-1} in R^n (n = 1 gives 2: two points).
double sphere_area(int n) { return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n); }
// Volume of the unit ball in R^n.
double ball_volume_unit(int n) { return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0); }

void check_dim(const SpaceParams& s, const Vec& X, const char* op) {
    if (static_cast<int>(X.size()) != s.d - 1)
        throw DomainError(std::string(op) + ": N-bar coordinate must have d-1 components");
}

}  // namespace

double iwasawa_c0(const SpaceParams& s) { return 4.0 / (s.m1 + s.m2); }

double iwasawa_killing_constant(const SpaceParams& s) { return 1.0 / (4.0 * (s.m1 + 4 * s.m2)); }

double iwasawa_H(const SpaceParams& s, const Vec& X, const Vec& Y) {
    const double c0 = iwasawa_c0(s);
    const double a = c0 * norm2(X);
    if (Y.empty()) return std::log1p(a);
    const double b = 1.0 + a;
    return 0.5 * std::log(b * b + 4.0 * c0 * norm2(Y));
}

Vec nbar_to_model(const SpaceParams& s, const Vec& X) {
    check_dim(s, X, "nbar_to_model");
    const double k = std::sqrt(iwasawa_c0(s));
    Vec x(X);
    for (double& v : x) v *= k;
    return x;
}

Vec horo_to_hyperboloid(const SpaceParams& s, const HoroPoint& p) {
    require_hyperboloid_model(s, "horo_to_hyperboloid");
    if (static_cast<int>(p.x.size()) != s.d - 1) throw DomainError("horo_to_hyperboloid: bad dimension");
    if (std::abs(p.t) > kCoshCap) throw DomainError("horo_to_hyperboloid: |t| beyond the cosh cap");
    const double x2 = norm2(p.x);
    const double et = std::exp(p.t), emt = std::exp(-p.t);
    Vec v(s.d + 1);
    v[0] = 0.5 * (et * (1.0 + x2) + emt);
    for (int i = 0; i < s.d - 1; ++i) v[i + 1] = p.x[i] * et;
    v[s.d] = 0.5 * (et * (1.0 - x2) - emt);  // (1 - |x|^2 - y^2)/(2y) with y = e^{-t}
    return v;
}

HoroPoint hyperboloid_to_horo(const SpaceParams& s, const Vec& v) {
    require_hyperboloid_model(s, "hyperboloid_to_horo");
    if (static_cast<int>(v.size()) != s.d + 1) throw DomainError("hyperboloid_to_horo: bad dimension");
    const double y = 1.0 / (v[0] + v[s.d]);
    HoroPoint p;
    p.t = -std::log(y);
    p.x.resize(s.d - 1);
    for (int i = 0; i < s.d - 1; ++i) p.x[i] = v[i + 1] * y;
    return p;
}

double hyperboloid_distance(const Vec& a, const Vec& b) {
    if (a.size() != b.size() || a.empty()) throw DomainError("hyperboloid_distance: size mismatch");
    double ip = -a[0] * b[0];
    for (std::size_t i = 1; i < a.size(); ++i) ip += a[i] * b[i];
    const double c = std::max(1.0, -ip);
    if (!std::isfinite(c)) throw DomainError("hyperboloid_distance: overflow");
    return std::acosh(c);
}

CartanSplit cartan_radius(const SpaceParams& s, const Vec& X, double r) {
    require_hyperboloid_model(s, "cartan_radius");
    check_dim(s, X, "cartan_radius");
    if (r < 0.0) throw DomainError("cartan_radius: r must be >= 0");
    if (r > kCoshCap) throw DomainError("cartan_radius: r beyond the documented cap 700");
    const double x2 = iwasawa_c0(s) * norm2(X);  // |x|^2 in model units
    const double A = 1.0 + x2;
    const double u = std::exp(-2.0 * r);
    // cosh D = cosh r + |x|^2 e^r / 2  rewritten as D = r + log A + E with
    // E = log(((A+u) + sqrt((A+u)^2 - 4u)) / (2A)), rationalised below.
    const double root = std::sqrt((A + u) * (A + u) - 4.0 * u);
    CartanSplit c;
    c.H = std::log1p(x2);
    c.E = std::log1p(2.0 * u * x2 / (A * (root + A - u)));
    c.radius = r + c.H + c.E;
    return c;
}

Vec dilate(const SpaceParams& s, double r, const Vec& X) {
    check_dim(s, X, "dilate");
    Vec y(X);
    const double f = std::exp(-r);
    for (double& v : y) v *= f;
    return y;
}

double integrate_nbar(const SpaceParams& s, const std::function<double(const Vec&)>& h, double L,
                      int panels_per_axis) {
    const int n = s.d - 1;
    if (n < 1 || n > 3) throw DomainError("integrate_nbar: supports 1 <= d-1 <= 3");
    if (n == 3) panels_per_axis = std::min(panels_per_axis, 8);
    const PanelGrid g = PanelGrid::uniform(-L, L, panels_per_axis, 16);
    const auto& x = g.nodes();
    const auto& w = g.weights();
    const std::size_t m = x.size();
    double total = 0.0;
    Vec p(n);
    if (n == 1) {
        for (std::size_t i = 0; i < m; ++i) {
            p[0] = x[i];
            total += w[i] * h(p);
        }
    } else if (n == 2) {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                p[0] = x[i];
                p[1] = x[j];
                total += w[i] * w[j] * h(p);
            }
    } else {
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t k = 0; k < m; ++k) {
                    p[0] = x[i];
                    p[1] = x[j];
                    p[2] = x[k];
                    total += w[i] * w[j] * w[k] * h(p);
                }
    }
    return total;
}

double dilation_measure_ratio(const SpaceParams& s, double r, const std::function<double(const Vec&)>& h,
                              double L) {
    const double base = integrate_nbar(s, h, L);
    // The dilated integrand is spread over e^{r} times the box.
    const double dil = integrate_nbar(s, [&](const Vec& X) { return h(dilate(s, r, X)); }, L * std::exp(r));
    return dil / base;
}

namespace {

double pbar_tail(double a, double c0, int n, double R) {
    // int_R^inf (1 + c0 s^2)^{-a} s^{n-1} ds expanded in powers of 1/(c0 s^2).
    double sum = 0.0;
    for (int k = 0; k < 200; ++k) {
        double coef = 1.0;  // binom(-a, k)
        for (int j = 0; j < k; ++j) coef *= (-a - j) / (j + 1.0);
        const double term = coef * std::pow(c0, -a - k) * std::pow(R, n - 2.0 * a - 2.0 * k) /
                            (2.0 * a + 2.0 * k - n);
        sum += term;
        if (k >= 2 && std::abs(term) < 1e-17 * std::abs(sum)) return sum;
    }
    throw ConvergenceError("pbar_integral: tail expansion did not converge");
}

double pbar_core(const SpaceParams& s, double eps0, double R, double& tail) {
    const int n = s.d - 1;
    const double c0 = iwasawa_c0(s);
    const double a = (1.0 + eps0) * s.rho;
    const double unit = 1.0 / std::sqrt(c0);
    const PanelGrid g = PanelGrid::graded(0.0, R, 0.25 * unit, unit, 1.4, 20);
    double body = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.nodes()[i];
        body += g.weights()[i] * std::pow(1.0 + c0 * x * x, -a) * std::pow(x, n - 1);
    }
    tail = pbar_tail(a, c0, n, R);
    return sphere_area(n) * (body + tail);
}

}  // namespace

PbarResult pbar_integral(const SpaceParams& s, double eps0) {
    require_hyperboloid_model(s, "pbar_integral");
    if (!(eps0 > 0.0)) throw DomainError("pbar_integral: eps0 must be > 0");
    const double R = 20.0 / std::sqrt(iwasawa_c0(s));
    PbarResult res;
    double t1 = 0, t2 = 0;
    res.value = pbar_core(s, eps0, R, t1);
    const double v2 = pbar_core(s, eps0, 2.0 * R, t2);
    res.tail = sphere_area(s.d - 1) * t1;
    res.tail_drift = std::abs(v2 - res.value);
    if (res.tail_drift > 1e-6 * std::max(1.0, std::abs(res.value)))
        throw ConvergenceError("pbar_integral: tail extrapolation unstable");
    return res;
}

double pbar_integral_exact(const SpaceParams& s, double eps0) {
    require_hyperboloid_model(s, "pbar_integral_exact");
    const int n = s.d - 1;
    const double a = (1.0 + eps0) * s.rho;
    const double c0 = iwasawa_c0(s);
    return sphere_area(n) * 0.5 * std::pow(c0, -0.5 * n) * boost::math::beta(0.5 * n, a - 0.5 * n);
}

double ball_volume_cartan(const SpaceParams& s, double R) {
    if (R < 0) throw DomainError("ball_volume_cartan: R must be >= 0");
    if (R == 0) return 0.0;
    const PanelGrid g = PanelGrid::uniform(0.0, R, std::max(4, static_cast<int>(std::ceil(4 * R))), 20);
    double v = 0;
    for (std::size_t i = 0; i < g.size(); ++i) v += g.weights()[i] * density_delta(s, g.nodes()[i]);
    return v;
}

double ball_volume_horocyclic(const SpaceParams& s, double R) {
    require_hyperboloid_model(s, "ball_volume_horocyclic");
    if (R < 0) throw DomainError("ball_volume_horocyclic: R must be >= 0");
    if (R == 0) return 0.0;
    const int n = s.d - 1;
    // dg = 2^{d-1}/|S^{d-1}| dvol, and dvol = e^{(d-1)t} dx dt at (x, e^{-t}).
    const double norm = std::pow(2.0, n) / sphere_area(s.d);
    // t = R cos(theta) removes the square-root endpoint behaviour at |t| = R.
    const PanelGrid g = PanelGrid::uniform(0.0, kPi, 40, 20);
    double v = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double th = g.nodes()[i];
        const double t = R * std::cos(th);
        const double gap = 2.0 * std::sinh(0.5 * (R + t)) * std::sinh(0.5 * (R - t));  // cosh R - cosh t
        const double smax = std::sqrt(std::max(0.0, 2.0 * gap * std::exp(-t)));
        v += g.weights()[i] * std::exp(n * t) * ball_volume_unit(n) * std::pow(smax, n) * R * std::sin(th);
    }
    return norm * v;
}

double disc_distance(cplx z, cplx w) {
    const double r = std::abs((z - w) / (1.0 - std::conj(w) * z));
    return 2.0 * std::atanh(r);
}

cplx disc_translate(cplx a, cplx z) { return (z + a) / (1.0 + std::conj(a) * z); }

double disc_poisson(cplx z, cplx b) { return (1.0 - std::norm(z)) / std::norm(z - b); }

}  // namespace symspace
