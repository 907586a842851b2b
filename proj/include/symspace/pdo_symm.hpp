#pragma once
// The pseudo-differential operator Psi_sigma on a rank-one symmetric space:
//   Psi_sigma f(x) = kappa int sigma(x, lambda) f^(lambda) phi_lambda(x) |c(lambda)|^{-2} d lambda
// (radial inputs) and its Helgason-transform form on the disc, the kernel
// realisation K(x, y) = kappa int sigma(x, lambda) phi_lambda(d(x, y)) |c|^{-2} d lambda,
// the split into local and global parts by a cutoff at radius 1..2, the
// separation K_1 = K_0 + zeta of the local kernel and the Euclidean symbols
// a_z(s, y) extracted from K_0, the transference identity through the Abel
// transform, a strip-shifted oscillatory integral with its decay fit, a
// global kernel decay profile and an empirical norm ratio laboratory.
//
// Conventions.  eta(t) = smooth_step(t - 1) (0 for t <= 1, 1 for t >= 2),
// eta_loc = 1 - eta; Phi(lambda) = smooth_step(|lambda| - 1).  The Euclidean
// side uses u^(xi) = int u e^{-2 pi i x xi} dx, so lambda = 2 pi xi.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "symspace/numerics.hpp"
#include "symspace/pdo_euclid.hpp"
#include "symspace/space.hpp"
#include "symspace/special_fn.hpp"
#include "symspace/transforms.hpp"

namespace symspace {

// Spectral symbol sigma(position, lambda).  The radial flavour depends on the
// position only through its Cartan radius r; the general flavour (d = 2) is a
// function of the disc point.  Both accept complex lambda so that strip
// evaluation is available whenever the formula is holomorphic.
struct SpaceSymbol {
    enum class Flavor { Radial, General };
    SpaceParams space;
    Flavor flavor = Flavor::Radial;
    bool even = true;             // sigma(x, -lambda) = sigma(x, lambda)
    bool x_independent = false;   // a multiplier m(lambda)
    int lambda_order = 4;         // lambda-derivatives the symbol is declared to have
    std::function<cplx(double r, cplx lambda)> radial;
    std::function<cplx(cplx z, cplx lambda)> general;

    // Value at a point of radius r (radial flavour; general flavour uses z = tanh(r/2)).
    cplx at_radius(double r, cplx lambda) const;
    // Value at a disc point (radial flavour uses r = 2 artanh|z|).
    cplx at_point(cplx z, cplx lambda) const;

    static SpaceSymbol multiplier(const SpaceParams& s, std::function<cplx(cplx)> m);
    static SpaceSymbol radial_symbol(const SpaceParams& s, std::function<cplx(double, cplx)> sigma);
    static SpaceSymbol disc_symbol(const SpaceParams& s, std::function<cplx(cplx, cplx)> sigma);
};

// Local and global cutoffs.
double eta_global(double t);
double eta_local(double t);
// Spectral cutoff used by the kernel separation: 0 for |lambda| <= 1, 1 for |lambda| >= 2.
double spectral_cutoff(double lambda);

// Holomorphy of sigma(r, .) on the strip |Im lambda| <= width: finiteness and
// the Cauchy-Riemann residual |d_y sigma - i d_x sigma| relative to the local scale.
struct StripCheck {
    double width = 0;
    double max_abs = 0;
    double cr_residual = 0;
    bool finite = true;
    bool pass = false;  // finite and cr_residual < 1e-6
};
StripCheck strip_check(const SpaceSymbol& sigma, double width, std::span<const double> radii = {});

// Psi_sigma f on the t-grid of T (radial f, radial sigma).  Throws
// ConvergenceError when sigma f^ |c|^{-2} is not negligible at the end of the lambda-grid.
RadialFunction apply_radial_psdo(const SphericalTransform& T, const SpaceSymbol& sigma, const RadialFunction& f);

// Psi_sigma f at disc points through the Helgason transform of f (d = 2); f is
// concentrated within g.radius of `center`.
std::vector<cplx> apply_psdo_2d(const SpaceSymbol& sigma, const std::function<cplx(cplx)>& f, cplx center,
                                const std::vector<cplx>& xs, double kappa_inv, const HelgasonGrid& g = {});

// Kernel realisation.  sigma(x, lambda) e^{-eps lambda^2} must be negligible at
// the end of the lambda-grid of T (ConvergenceError otherwise).  With
// `richardson`, the values at eps = 1e-2, 1e-3, 1e-4 are extrapolated to eps = 0
// (ConvergenceError if the sequence does not settle).
struct KernelOptions {
    double eps = 0.0;
    bool richardson = false;
};
// k_x(r) = kappa int sigma(x, lambda) phi_lambda(a_r) |c|^{-2} d lambda on the t-grid of T,
// for the position x of radius `rx` (radial flavour) or disc point `x` (general flavour).
RadialFunction kernel_profile(const SphericalTransform& T, const SpaceSymbol& sigma, cplx x,
                              const KernelOptions& opt = {});
// K(x, y) for disc points (d = 2).
cplx kernel_K(const SphericalTransform& T, const SpaceSymbol& sigma, cplx x, cplx y, const KernelOptions& opt = {});
// K(x, y) for a radial symbol on any space, given the radius of x and d(x, y).
cplx kernel_K_radial(const SphericalTransform& T, const SpaceSymbol& sigma, double rx, double dist,
                     const KernelOptions& opt = {});

// int f(y) K(x, y) w(d(x, y)) dg(y) on the disc, with f concentrated within
// `radius` of `center`, by geodesic polar quadrature about the centre.
enum class KernelPart { Total, Local, Global };
struct DiscQuadrature {
    double radius = 3.0;
    int radial_panels = 12;
    int angular_points = 128;
};
cplx kernel_apply(const SphericalTransform& T, const SpaceSymbol& sigma, const std::function<cplx(cplx)>& f,
                  cplx center, cplx x, KernelPart part = KernelPart::Total, const KernelOptions& opt = {},
                  const DiscQuadrature& q = {});

struct LocalGlobal {
    cplx local = 0, global = 0, total = 0;
    double partition_residual = 0;  // |local + global - total|
};
LocalGlobal split_local_global(const SphericalTransform& T, const SpaceSymbol& sigma,
                               const std::function<cplx(cplx)>& f, cplx center, cplx x,
                               const KernelOptions& opt = {}, const DiscQuadrature& q = {});

// ---------------------------------------------------------------------------
// Kernel separation and symbol extraction.

// z = k_theta a_r; the point z a_s has Cartan radius
//   cosh r(z, s) = cosh r cosh s + sinh r sinh s cos theta.
struct ZSample {
    double r = 0.0, theta = 0.0;
};
double position_radius(const ZSample& z, double s);
// Deterministic samples with r in [0, 2.5], theta in [0, pi].
std::vector<ZSample> z_samples(int count, std::uint64_t seed);

struct SeparationOptions {
    double kappa_inv = 1.0 / (2.0 * kPi);  // inversion constant (the calibrated value)
    std::vector<double> s_values{-1.0, 0.0, 1.0};
    std::vector<double> t_values;           // default: 24 radii in [0.1, 2]
    double eps = 1e-4;                      // regulariser of the conditionally convergent integrals
    double y_max = 100.0;                   // largest |y| at which a_z is evaluated
    bool validate = true;                   // check the derivative hypotheses of sigma first
};

struct HBounds {
    std::vector<double> C;          // sup_mu |d_s^beta h| + (1+mu) |d_s^beta d_mu h|, beta = 0..2
    double growth = 0;              // fitted growth exponent of the beta = 0 envelope on mu in [10, mu_max]
    bool pass = false;
};

class ExtractedSymbol {
public:
    struct Impl;
    const SpaceParams& space() const;
    const std::vector<ZSample>& zs() const;
    const std::vector<double>& t_values() const;

    // Direct lambda-integral forms (regularised by e^{-eps lambda^2}):
    //   K_1(z a_s, t) = eta_loc(t) Delta(t) kappa int sigma phi_lambda(t) |c|^{-2}
    //   K_0(z a_s, t) = kappa c0 eta_loc(t) (t^{d-1} Delta(t))^{1/2} int Phi sigma J_{(d-2)/2}(lambda t) |c|^{-2}
    cplx kernel_K1(const ZSample& z, double s, double t, double eps) const;
    cplx kernel_K0(const ZSample& z, double s, double t, double eps) const;
    // K_0 through the q -> (g ->) h chain: B(t) E_d int_0^inf cos(mu t) H(mu) e^{-eps mu^2} d mu,
    // with mu truncated at the end of the chain grid (use eps > 0 when H decays slowly).
    cplx kernel_K0_chain(const ZSample& z, double s, double t, double eps) const;
    cplx zeta(const ZSample& z, double s, double t) const;

    // Chain intermediates on the internal lambda-grid (nodes returned by chain_grid()).
    const PanelGrid& chain_grid() const;
    std::vector<cplx> q_values(const ZSample& z, double s) const;
    // Even d: g(mu) and h(mu) at arbitrary mu; odd d: h is q (the cosine chain).
    cplx g_value(const ZSample& z, double s, double mu) const;
    cplx h_value(const ZSample& z, double s, double mu) const;
    HBounds h_bounds(const ZSample& z, double mu_max = 100.0) const;

    // Domination of zeta: zeta0(t) = max over samples of |zeta|, per-z constants
    // C_z = int sup_s |zeta_z| / int zeta0 and their spread.
    const std::vector<double>& zeta0() const;
    const std::vector<double>& zeta_constants() const;
    double zeta_spread() const;
    double zeta0_integral() const;
    double zeta0_small_t_slope() const;  // log-log slope on t <= 0.4 (integrable iff > -1)
    bool domination_pass() const;

    // a_z(s, y) = int e^{-2 pi i x y} K_0(z a_s, x) dx as a Euclidean symbol (x-slot s, xi-slot y).
    EuclidSymbol az(const ZSample& z) const;
    // The same by direct x-quadrature of the regularised K_0 (reference for decaying symbols).
    cplx az_direct(const ZSample& z, double s, double y, double eps) const;

    std::shared_ptr<Impl> impl_;
};

// Validates sigma (derivative bounds up to order [(d+1)/2]+1, evenness) and
// builds the separation data on the given z-samples.  Throws DomainError when
// the hypothesis check fails.
ExtractedSymbol separate_kernel(const SpaceSymbol& sigma, const std::vector<ZSample>& zs,
                                const SeparationOptions& opt = {});
EuclidSymbol extract_az(const ExtractedSymbol& es, const ZSample& z);
// Sampling plan used for the a_z certificates (s in [-3, 3], |y| in [1e-3, 1e2]).
SymbolSampling az_sampling();

// ---------------------------------------------------------------------------
// Transference through the Abel transform:
//   e^{rho t} eta(t) Psi_sigma f(a_t) = (a_1(t, D) + a_2(t, D)) (A f)(t),
//   a_1(t, xi) = 2 pi kappa eta(t) sigma(t, 2 pi xi) / c(-2 pi xi),  a_2 = a_1 a(2 pi xi, t).
struct TransferenceOptions {
    double t_lo = 2.0, t_hi = 6.0;
    int points = 41;
    double s_max = 20.0, h = 0.05;   // uniform grid carrying A f
    bool include_a2 = true;          // false: drop the Harish-Chandra remainder
};
struct TransferenceReport {
    std::vector<double> ts;
    std::vector<cplx> lhs, rhs;
    std::vector<double> residual;
    double sup_residual = 0;
    double scale = 0;        // sup |A f|
    bool pass = false;       // sup_residual <= 1e-4 scale
};
TransferenceReport transference_radial(const SphericalTransform& T, const AbelCalibration& cal,
                                       const SpaceSymbol& sigma, const RadialFunction& f,
                                       const TransferenceOptions& opt = {});
// Fitted slope of log(|residual without a_2| / |lhs|) against t.
double transference_truncation_slope(const TransferenceReport& truncated);

// ---------------------------------------------------------------------------
// Strip-shifted oscillatory integral
//   I(T) = int_R theta_eps(x, lambda + i gamma) e^{i lambda T} d lambda,
//   theta_eps(x, lambda) = sigma(x, lambda) / c(-lambda) e^{-eps lambda^2}.
struct ContourSpec {
    double gamma = 0.0;
    int l = 2;
    std::vector<double> eps{1e-2, 1e-3, 1e-4};
};
struct StripShiftReport {
    std::vector<double> Ts;
    std::vector<cplx> I;                    // eps -> 0 limits
    std::vector<std::vector<cplx>> I_eps;   // [eps index][T index]
    double slope = 0;          // fitted exponent of |I| against T (tail, T >= 10)
    double constant = 0;       // sup T^l |I(T)|
    double drift_T1 = 0;       // limit from all eps vs from the two smallest, at T = 1
    bool pass = false;         // slope <= -l + 0.3
};
StripShiftReport strip_shift_integral(const SpaceSymbol& sigma, double x_radius, const ContourSpec& spec,
                                      std::span<const double> Ts = {});
// Witness with I(T) ~ T^{-l} exactly: sigma_l(lambda) = c(-lambda) sgn(lambda)^l |lambda|^{l-1} e^{-lambda^2}
// (real line only; used with gamma = 0).
SpaceSymbol strip_witness(const SpaceParams& s, int l);

struct PowerGaussianBound {
    double bound = 0;       // (n/2)^{n/2} e^{-n/2} eps^{-n/2}
    double maximizer = 0;   // sqrt(n / (2 eps))
    double at_maximizer = 0;
    double sampled_sup = 0; // sup over a fine lambda grid
};
PowerGaussianBound power_gaussian_bound(int n, double eps);

// ---------------------------------------------------------------------------
// Global kernel profile (d = 3): |eta(r) K(o, a_r)| for r in [1, 10] with an
// exponential fit on [2, 10] (where eta = 1) above the round-off floor; the
// claimed rate is (2/p) rho.
struct GlobalProfile {
    std::vector<double> rs, values;
    double fitted_rate = 0;   // -slope of log|values| on r in [2, 10]
    double claimed_rate = 0;
    bool pass = false;        // fitted_rate >= claimed_rate - 0.1
};
GlobalProfile global_kernel_profile(const SphericalTransform& T, const SpaceSymbol& sigma, double p);

// ---------------------------------------------------------------------------
// Norm ratios ||Psi_sigma f||_p / ||f||_p over Paley-Wiener functions and their
// spectral translates (spectrum (F(lambda - s) + F(lambda + s)) / 2).
struct NormLabReport {
    std::vector<double> translates;
    std::vector<std::vector<double>> ratios;  // [member][translate]
    double max_ratio = 0;
    double trend = 0;          // slope of the per-translate maximum against the translate
    double spearman = 0;       // rank correlation of member 0's ratios with the translate
};
NormLabReport norm_lab(const SphericalTransform& T, const SpaceSymbol& sigma, double p,
                       const std::vector<PWSpec>& family, std::span<const double> translates);
// Engine with lambda in [0, 20] used by the norm laboratory.
SphericalTransform norm_lab_engine(const SpaceParams& s);

}  // namespace symspace
