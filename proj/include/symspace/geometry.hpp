#pragma once
// Concrete realisations of the Iwasawa / Cartan data for real hyperbolic
// spaces H^d (m2 = 0) in the hyperboloid and upper-half-space models, plus
// the Poincare-disc conventions used for d = 2.
//
// Coordinates.  A point n_x a_t . o of the horocyclic decomposition is the
// upper-half-space point (x, e^{-t}); n_x is the horizontal translation by
// x in R^{d-1}.  The N-bar coordinate X used by `iwasawa_H` is related to the
// model translation by x = sqrt(c0) X with c0 = 4/(m1+m2), so that
// H(X) = log(1 + c0 |X|^2) holds verbatim.

#include <functional>
#include <vector>

#include "symspace/numerics.hpp"
#include "symspace/space.hpp"

namespace symspace {

using Vec = std::vector<double>;

// Largest geodesic parameter accepted by model-distance computations
// (cosh overflows in double precision just beyond 710).
inline constexpr double kCoshCap = 700.0;

struct HoroPoint {
    Vec x;         // horocyclic coordinate, size d-1 (model translation)
    double t = 0;  // geodesic parameter
};

// Iwasawa constant c0 with c0^{-1} = (m1+m2)/4.
double iwasawa_c0(const SpaceParams& s);
// The constant the same formula takes when X is normalised by the Killing
// form (-B(X, theta X) = |X|^2): 1/(4(m1+4 m2)).  Reported as a diagnostic.
double iwasawa_killing_constant(const SpaceParams& s);

// H(v) = 1/2 log([1 + c0|X|^2]^2 + 4 c0 |Y|^2) >= 0 (Y empty when m2 = 0).
double iwasawa_H(const SpaceParams& s, const Vec& X, const Vec& Y = {});

// Hyperboloid model {v : -v0^2 + |v'|^2 = -1, v0 > 0} in R^{d+1}.
Vec horo_to_hyperboloid(const SpaceParams& s, const HoroPoint& p);
HoroPoint hyperboloid_to_horo(const SpaceParams& s, const Vec& v);
// Geodesic distance between two hyperboloid points (brute-force oracle).
double hyperboloid_distance(const Vec& a, const Vec& b);

// Model translation corresponding to an N-bar coordinate X (x = sqrt(c0) X).
Vec nbar_to_model(const SpaceParams& s, const Vec& X);

// Cartan radius [v a_r]^+ = r + H(v) + E(v, r), with E evaluated in a
// cancellation-free closed form.
struct CartanSplit {
    double radius = 0;  // [v a_r]^+
    double H = 0;       // H(v)
    double E = 0;       // radius - r - H
};
CartanSplit cartan_radius(const SpaceParams& s, const Vec& X, double r);

// Dilation delta_r(X) = e^{-r} X on the alpha root space.
Vec dilate(const SpaceParams& s, double r, const Vec& X);

// Integral over N-bar = R^{d-1} (Lebesgue measure in X) of a function of X,
// by tensor Gauss-Legendre on [-L, L]^{d-1}; d-1 <= 3.
double integrate_nbar(const SpaceParams& s, const std::function<double(const Vec&)>& h, double L,
                      int panels_per_axis = 24);
// Ratio  int h(delta_r X) dX / int h(X) dX  (expected e^{2 rho r}).
double dilation_measure_ratio(const SpaceParams& s, double r, const std::function<double(const Vec&)>& h,
                              double L);

// int_{N-bar} e^{-(1+eps0) rho H(v)} dv with analytic tail; throws
// ConvergenceError if the tail expansion fails to converge.
struct PbarResult {
    double value = 0;
    double tail = 0;       // contribution of [R, inf)
    double tail_drift = 0;  // change when the split point R is doubled
};
PbarResult pbar_integral(const SpaceParams& s, double eps0);
// Closed form of the same integral via the Beta function (oracle).
double pbar_integral_exact(const SpaceParams& s, double eps0);

// Volume (in the measure with int f = int f(a_t) Delta(t) dt) of the metric
// ball of radius R: via Delta, and via the horocyclic integral formula.
double ball_volume_cartan(const SpaceParams& s, double R);
double ball_volume_horocyclic(const SpaceParams& s, double R);

// Poincare disc (d = 2).  Distance from the origin is 2 artanh|z|.
double disc_distance(cplx z, cplx w);
// Mobius isometry sending 0 to a: z -> (z + a)/(1 + conj(a) z).
cplx disc_translate(cplx a, cplx z);
// Poisson kernel P(z, b) = (1-|z|^2)/|z-b|^2 = e^{<z, b>}, |b| = 1.
double disc_poisson(cplx z, cplx b);

}  // namespace symspace
