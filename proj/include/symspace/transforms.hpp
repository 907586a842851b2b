#pragma once
// Spherical transform and its inversion, the Abel transform (two routes),
// the Paley-Wiener test family and the Helgason Fourier transform on the
// Poincare disc.
//
// Conventions.  For a K-biinvariant f,
//     f^(lambda) = int_0^inf f(a_t) phi_lambda(a_t) Delta(t) dt,
//     f(a_t)     = kappa_inv int_0^inf f^(lambda) phi_lambda(a_t) |c(lambda)|^{-2} d lambda,
// with kappa_inv calibrated once per transform engine (expected 1/(2 pi)).

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "symspace/numerics.hpp"
#include "symspace/space.hpp"
#include "symspace/spherical.hpp"

namespace symspace {

// K-biinvariant function sampled at the nodes of a radial grid [0, T_max].
struct RadialFunction {
    SpaceParams space;
    PanelGrid grid;
    std::vector<cplx> values;

    // Interpolated value; even in t and zero beyond T_max.
    cplx operator()(double t) const;
    // (int |f|^p Delta dt)^{1/p}.
    double lp_norm(double p) const;
};

// Even function of the spectral parameter, stored on [0, Lambda].
struct SpectralFunction {
    PanelGrid grid;
    std::vector<cplx> values;
    bool even = true;

    cplx operator()(double lambda) const;
};

// Precomputed spherical-function table on a (t, lambda) grid pair; the
// transform engine used by every radial computation.
class SphericalTransform {
public:
    SphericalTransform(const SpaceParams& s, PanelGrid tgrid, PanelGrid lgrid, int jobs = default_jobs());
    // t in [0, 20] (panels 0.5) and lambda in [0, 12] (panels 0.25), 16 nodes per panel.
    static SphericalTransform standard(const SpaceParams& s, int jobs = default_jobs());

    const SpaceParams& space() const { return s_; }
    const PanelGrid& tgrid() const { return tg_; }
    const PanelGrid& lgrid() const { return lg_; }
    double phi(std::size_t il, std::size_t it) const { return tab_(il, it); }
    double plancherel(std::size_t il) const { return planch_[il]; }
    double delta(std::size_t it) const { return delta_[it]; }

    // Normalisation of the inversion formula, measured once at construction
    // on the spectrum e^{-lambda^2} and frozen.
    double kappa_inv() const { return kappa_; }

    SpectralFunction forward(const RadialFunction& f) const;
    RadialFunction inverse(const SpectralFunction& h) const;
    RadialFunction inverse(const std::function<cplx(double)>& h) const;
    // Inversion without the calibrated constant (kappa = 1).
    RadialFunction inverse_raw(const std::function<cplx(double)>& h) const;

    RadialFunction zero() const;
    RadialFunction sample(const std::function<cplx(double)>& f) const;

    // int |f|^2 Delta dt and kappa_inv int |f^|^2 |c|^{-2} d lambda.
    double l2_norm_sq(const RadialFunction& f) const;
    double spectral_l2_norm_sq(const SpectralFunction& h) const;
    // Relative Plancherel-weighted L^2 distance between two spectra.
    double spectral_rel_error(const SpectralFunction& a, const std::function<cplx(double)>& b) const;
    // Inversion constant measured on the spectrum h (kappa_inv when h = e^{-l^2}).
    double measure_kappa(const std::function<cplx(double)>& h) const;
    // ||phi_0||_{L^q} for q in (2, inf] (q = inf gives 1), on the t-grid.
    double phi0_lq_norm(double q) const;

private:
    SpaceParams s_;
    PanelGrid tg_, lg_;
    PhiTable tab_;
    std::vector<double> planch_, delta_;
    double kappa_ = 1.0;
};

// Free-function forms.
SpectralFunction spherical_transform(const SphericalTransform& T, const RadialFunction& f);
RadialFunction inverse_spherical(const SphericalTransform& T, const SpectralFunction& h);

// Paley-Wiener test function with spectrum e^{-a l^2}(1 + b l^2 + c l^4),
// scaled to unit L^2 norm.
struct PWSpec {
    double a = 1.0, b = 0.0, c = 0.0;
    double scale = 1.0;  // filled in by the factory
    cplx spectrum(double lambda) const;
};
RadialFunction paley_wiener_factory(const SphericalTransform& T, PWSpec& spec);
// Spectrum e^{-lambda^2} used to calibrate kappa_inv.
inline PWSpec calibration_spec() { return PWSpec{1.0, 0.0, 0.0, 1.0}; }
// Ten deterministic, pairwise distinct specs derived from `seed`.
std::vector<PWSpec> paley_wiener_family(std::uint64_t seed, int count = 10);

// Abel transform A f(t) = e^{rho t} int_{N-bar} f(v a_t) dv on the t-grid of f.
struct AbelTransform {
    PanelGrid grid;
    std::vector<cplx> values;  // on grid nodes, t >= 0 (even extension)
    cplx operator()(double t) const;
};
// Route A: horocyclic integral in the upper-half-space model (m2 = 0),
// without normalisation (Lebesgue measure in the model coordinate x).
AbelTransform abel_horocyclic_raw(const RadialFunction& f);
// Route B (d = 3): int_{|t|}^inf f(r) sinh r dr, without normalisation.
AbelTransform abel_hyperbolic3_raw(const RadialFunction& f);

// Normalisation constants of both routes, calibrated once so that the
// Euclidean Fourier transform of A f equals f^.
struct AbelCalibration {
    double kappa_N = 0;  // route A
    double C_B = 0;      // route B (d = 3 only; 0 otherwise)
};
AbelCalibration calibrate_abel(const SphericalTransform& T);
AbelTransform abel_transform(const RadialFunction& f, const AbelCalibration& cal, bool route_b = false);
// Euclidean Fourier transform  int_R A(t) e^{-i lambda t} dt  on the lambda-grid of T.
SpectralFunction euclidean_ft(const SphericalTransform& T, const AbelTransform& A);

// Mapping-property check of the Abel transform:
//   (int |A f|^r e^{rho beta |t|} dt)^{1/r} / ||f||_{L^p}.
struct RaySarkarReport {
    double lhs = 0, rhs = 0, ratio = 0;
};
RaySarkarReport ray_sarkar_check(const AbelTransform& A, const RadialFunction& f, double p, double r, double beta);

// Helgason Fourier transform on the Poincare disc (d = 2):
//   f~(lambda, b) = int f(z) P(z, b)^{rho - i lambda} dg(z),  dg = dArea / pi,
//   f(z) = kappa_inv / 2 int_R int_B f~(lambda, b) P(z, b)^{rho + i lambda} |c(lambda)|^{-2} d lambda db/2pi.
struct BoundaryFunction {
    PanelGrid lgrid;              // lambda in [-Lambda, Lambda]
    std::vector<double> thetas;   // boundary angles (uniform)
    std::vector<cplx> values;     // [i * thetas.size() + j]
    cplx at(std::size_t il, std::size_t ib) const { return values[il * thetas.size() + ib]; }
};
struct HelgasonGrid {
    double Lambda = 16.0;
    int lambda_panels = 4;      // 16 nodes each: 64 lambda nodes
    int boundary_points = 64;
    double radius = 2.5;        // hyperbolic radius of the region around `center` carrying f
    int radial_panels = 5;
    int max_angular_points = 256;  // angular nodes adapt to the Poisson-kernel decay per radius
};
BoundaryFunction helgason_ft(const SpaceParams& s, const std::function<cplx(cplx)>& f, cplx center,
                             const HelgasonGrid& g = {}, int jobs = default_jobs());
cplx helgason_inverse(const SpaceParams& s, const BoundaryFunction& F, cplx z, double kappa_inv);
// The same with the spectral weight w(lambda) inserted (the disc form of Psi_sigma).
cplx helgason_inverse(const SpaceParams& s, const BoundaryFunction& F, cplx z, double kappa_inv,
                      const std::function<cplx(double)>& weight);

}  // namespace symspace
