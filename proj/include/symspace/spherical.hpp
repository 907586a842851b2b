#pragma once
// Elementary spherical functions phi_lambda(a_t) on a rank-one space, by three
// independent methods:
//   * the radial eigen-equation  u'' + (Delta'/Delta) u' = -(lambda^2 + rho^2) u,
//     integrated from a hypergeometric start near t = 0 (reference method);
//   * the local Bessel expansion  c0 (t^{d-1}/Delta)^{1/2} sum_m t^{2m} a_m J_{(d-2)/2+m}(lambda t);
//   * the Harish-Chandra series  c(l) e^{(il-rho)t} sum_k Gamma_k(l) e^{-2kt} + (l -> -l).

#include <array>
#include <span>
#include <vector>

#include "symspace/numerics.hpp"
#include "symspace/space.hpp"
#include "symspace/special_fn.hpp"

namespace symspace {

// Largest radius accepted by the ODE evaluator.
inline constexpr double kPhiTMax = 50.0;

// phi_lambda(a_t) by the radial ODE, t in [0, 50] (|t| used for t < 0).
cplx phi_ode(const SpaceParams& s, cplx lambda, double t);
// The same along an ascending list of radii with a single integration.
std::vector<cplx> phi_ode_profile(const SpaceParams& s, cplx lambda, std::span<const double> ts);

// Table phi_{lambda_i}(a_{t_j}) for real lambda, row-major (lambda-major),
// computed with one integration per lambda, in parallel.
struct PhiTable {
    std::vector<double> lambdas, ts;
    std::vector<double> values;
    double operator()(std::size_t i, std::size_t j) const { return values[i * ts.size() + j]; }
};
PhiTable phi_table(const SpaceParams& s, std::span<const double> lambdas, std::span<const double> ts,
                   int jobs = default_jobs());

// Normalising constant of the local expansion, fixed by phi_lambda(e) = 1.
double local_bessel_c0(const SpaceParams& s);

struct LocalBesselResult {
    cplx value;                 // truncated expansion
    double residual = 0;        // |value - phi_ode|
    double envelope = 0;        // shape of the E_{M+1} bound (constant not included)
    std::vector<double> a_m;    // fitted coefficients a_1(t)..a_M(t) (a_0 = 1)
};
// Local expansion up to order M (M = 0 exact; M >= 1 with a_m(t) fitted by
// least squares against the ODE on a fixed lambda sample); t in [0, 1].
LocalBesselResult phi_local_bessel(const SpaceParams& s, cplx lambda, double t, int M = 0);

// Harish-Chandra coefficients Gamma_0 = 1, ..., Gamma_K for one lambda.
class HCSeries {
public:
    HCSeries(const SpaceParams& s, cplx lambda, int K);
    cplx lambda() const { return lambda_; }
    // True when lambda was moved off a pole of the Gamma_k by 1e-5.
    bool perturbed() const { return perturbed_; }
    const std::vector<cplx>& coefficients() const { return g_; }
    // Phi_lambda(t) e^{-(i lambda - rho) t} = sum_{k <= K} Gamma_k e^{-2kt}.
    cplx series(double t) const;
    // a(lambda, t) = sum_{1 <= k <= K} Gamma_k e^{-2kt}.
    cplx remainder(double t) const;

private:
    SpaceParams s_;
    cplx lambda_;
    bool perturbed_ = false;
    std::vector<cplx> g_;
};

// phi_lambda(a_t) by the Harish-Chandra expansion truncated at K, t >= 1/10.
cplx phi_hc_series(const SpaceParams& s, cplx lambda, double t, int K);

struct HCRemainder {
    cplx lambda;
    double t = 0;
    cplx a;                          // a(lambda, t), summed to convergence
    std::array<cplx, 4> d_lambda{};  // d^alpha a / d lambda^alpha, alpha = 0..3
    cplx d_t;                        // d a / dt
    int terms = 0;                   // series terms used
    bool perturbed = false;
};
HCRemainder hc_remainder(const SpaceParams& s, cplx lambda, double t);

// Fitted decay of |d^alpha_lambda a(lambda, t)| in (1 + |Re lambda|), alpha <= 3,
// at fixed t, over real lambda in [1, 100].
struct RemainderCertificate {
    std::array<double, 4> fitted{};   // fitted exponents
    std::array<double, 4> constant{}; // sup |d^alpha a| (1+|l|)^alpha
    double dt_constant = 0;           // sup |d_t a|
    bool pass = false;                // fitted[alpha] <= -alpha + 0.3 (or below noise)
};
RemainderCertificate hc_remainder_certificate(const SpaceParams& s, double t);

// d = 2 (disc model): |phi_lambda(d(x,y)) - (1/2pi) int P(x,b)^{1/2+il} P(y,b)^{1/2-il} db|.
double phi_product_identity_check(const SpaceParams& s, double lambda, cplx x, cplx y);

// Router over the three evaluators.  `Auto` uses the Harish-Chandra series
// for t >= 5 with |lambda| >= 20 (where the ODE must resolve many
// oscillations) and the ODE everywhere else.
class SphericalEvaluator {
public:
    enum class Method { ODE, LocalBessel, HCSeries, Auto };
    SphericalEvaluator(SpaceParams s, Method m = Method::Auto, int hc_terms = 40)
        : s_(s), method_(m), hc_terms_(hc_terms) {}
    cplx operator()(cplx lambda, double t) const;
    const SpaceParams& space() const { return s_; }
    Method method() const { return method_; }

private:
    SpaceParams s_;
    Method method_;
    int hc_terms_;
};

}  // namespace symspace
