#pragma once
// Complex symmetric spaces G/K (G complex semisimple) of rank r <= 2.  On the
// flat a = R^r everything is explicit:
//   phi(H)       = sum_{s in W} det(s) e^{<s rho, H>} = prod_{alpha > 0} 2 sinh alpha(H),
//   phi_lambda(H) = c(lambda) sum_{s in W} det(s) e^{i <s lambda, H>} / phi(H),
//   c(lambda)     = pi(rho) / pi(i lambda),   pi(mu) = prod_{alpha > 0} <alpha, mu>,
// with rho the sum of the positive roots (every root has multiplicity 2), so
// that phi_lambda(0) = 1 and c(-i rho) = 1.  With the integration formula
//   int_{G/K} f = (1/|W|) int_a f(H) phi(H)^2 dH,
// the spherical transform f^(lambda) = (1/|W|) int_a f phi_{-lambda} phi^2 dH
// equals c(-lambda) F g(lambda) for g = f phi and F g(lambda) = int g e^{-i<lambda,H>} dH,
// and the inversion reads f = (2 pi)^{-r} / |W| int_{a*} f^ phi_lambda |c|^{-2} d lambda.
// For sigma(H, .) W-invariant the operator
//   Psi_sigma f(H) = (2 pi)^{-r} / |W| int_{a*} sigma(H, lambda) f^(lambda) phi_lambda(H) |c(lambda)|^{-2} d lambda
// satisfies phi(H) Psi_sigma f(H) = kappa_W * sigma(H, D) g(H) with kappa_W = 1,
// the right-hand side being a Euclidean pseudo-differential operator.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "symspace/numerics.hpp"
#include "symspace/pdo_euclid.hpp"

namespace symspace {

using AVec = std::array<double, 2>;  // point of a or a*; second slot unused in rank 1

struct WeylData {
    std::string type;                           // "A1" or "A2"
    int rank = 1;
    std::vector<std::array<double, 4>> W;       // r x r matrices, row-major (rank 1 uses entry 0)
    std::vector<int> det;                       // det(s) = +-1
    std::vector<AVec> positive_roots;
    AVec rho{};                                 // sum of the positive roots
    int dimension = 3;                          // dim G/K = r + 2 #roots

    // SL(2, C)/SU(2) (= H^3 with rho = 1) and SL(3, C)/SU(3).
    static WeylData rank_one();
    static WeylData a2();

    std::size_t order() const { return W.size(); }
    AVec act(std::size_t s, const AVec& v) const;
};

double adot(const WeylData& wd, const AVec& a, const AVec& b);
double anorm(const WeylData& wd, const AVec& a);

// Closure of W under composition and inversion, orthogonality and det consistency.
struct WeylCheck {
    double orthogonality = 0;    // max |s^T s - 1|
    bool closed = false;         // products and inverses stay in W
    bool order_ok = false;       // |W| = 2 (A1) or 6 (A2)
    bool pass = false;
};
WeylCheck check_weyl(const WeylData& wd);

// phi(H) by the alternating sum over W.
double weyl_phi(const WeylData& wd, const AVec& H);
// The same by the product formula (used for division near the walls).
double weyl_phi_product(const WeylData& wd, const AVec& H);
// pi(mu) = prod_{alpha > 0} <alpha, mu>.
double weyl_pi(const WeylData& wd, const AVec& mu);
// c(lambda) = pi(rho) / pi(i lambda) for real lambda (infinite on the walls).
cplx c_complex(const WeylData& wd, const AVec& lambda);
// |c(lambda)|^{-2} = pi(lambda)^2 / pi(rho)^2.
double plancherel_complex(const WeylData& wd, const AVec& lambda);

// phi_lambda(H) for real lambda, with the removable singularities at the
// walls (|alpha(H)| < 1e-4 |alpha|) filled by a three-term Taylor expansion
// along the wall normal, and a power series near the origin.
cplx phi_lambda_complex(const WeylData& wd, const AVec& lambda, const AVec& H);

// Uniform grids used by both routes: H in [-L, L)^r with n points per axis,
// lambda in [-Lambda, Lambda)^r with n_lambda points per axis (trapezoidal,
// spectrally accurate for the smooth decaying integrands involved).
struct ComplexGrid {
    double L = 8.0;
    int n = 64;
    double Lambda = 12.0;
    int n_lambda = 64;
    int n_spectral = 96;  // H-points per axis for the spherical transform in route 1
};

using AFunction = std::function<cplx(const AVec&)>;

// g = f phi.
AFunction reduce(const WeylData& wd, AFunction f);
GriddedFunction sample_on_grid(const WeylData& wd, const AFunction& f, double L, int n);
// F g(lambda) = int g(H) e^{-i <lambda, H>} dH by the trapezoidal rule on [-L, L)^r.
cplx euclidean_fourier(const WeylData& wd, const AFunction& g, const AVec& lambda, double L, int n);
// f^(lambda) = (1/|W|) int f phi_{-lambda} phi^2 dH by the trapezoidal rule.
cplx spherical_transform_complex(const WeylData& wd, const AFunction& f, const AVec& lambda, double L, int n);

// Antisymmetry chain phi(sH) = det(s) phi(H), g(sH) = det(s) g(H),
// F g(s lambda) = det(s) F g(lambda), as relative residuals over samples.
struct AntisymmetryReport {
    double phi_residual = 0, g_residual = 0, fourier_residual = 0;
    bool pass = false;  // all <= 1e-10
};
AntisymmetryReport antisymmetry_chain(const WeylData& wd, const AFunction& f, const ComplexGrid& g = {},
                                      std::uint64_t seed = 1);

// f^(lambda) / (c(-lambda) F g(lambda)) at the given lambdas (expected constant, = 1).
std::vector<cplx> reduction_ratio(const WeylData& wd, const AFunction& f, const std::vector<AVec>& lambdas,
                                  const ComplexGrid& g = {});

struct ComplexSymbol {
    std::function<cplx(const AVec& H, const AVec& lambda)> eval;
    bool w_invariant = true;  // sigma(H, s lambda) = sigma(H, lambda)
    cplx operator()(const AVec& H, const AVec& l) const { return eval(H, l); }
};

struct ReductionRoutes {
    std::vector<AVec> xs;
    std::vector<cplx> psi;     // route 1: Psi_sigma f(x) (spectral formula)
    std::vector<cplx> lhs;     // phi(x) Psi_sigma f(x)
    std::vector<cplx> rhs;     // route 2: sigma(x, D) g(x) (Euclidean engine on the grid)
    cplx ratio = 0;            // least-squares lhs / rhs
    double residual = 0;       // max |lhs - ratio rhs| / max |rhs|
};
ReductionRoutes apply_psdo_complex(const WeylData& wd, const ComplexSymbol& sigma, const AFunction& f,
                                   const std::vector<AVec>& xs, const ComplexGrid& g = {});

// kappa_W measured once on (sigma = 1, f = e^{-|H|^2}) and frozen.
struct KappaW {
    double value = 0;
    double imag = 0;
};
KappaW calibrate_kappa_w(const WeylData& wd, const std::vector<AVec>& xs, const ComplexGrid& g = {});

// Calderon-Vaillancourt class check: |d_H^beta d_lambda^alpha sigma| <= C for
// |alpha|, |beta| <= [r/2] + 1, sampled by finite differences, together with
// the W-invariance residual in lambda.
struct CVCertificate {
    int max_order = 1;
    std::vector<std::vector<double>> constant;  // [|alpha|][|beta|]
    std::vector<std::vector<double>> growth;    // fitted exponent in |lambda| of the same
    double w_residual = 0;
    bool pass = false;                          // growth <= 0.15 everywhere and w_residual <= 1e-10
};
CVCertificate cv_symbol_check(const WeylData& wd, const ComplexSymbol& sigma);

}  // namespace symspace
