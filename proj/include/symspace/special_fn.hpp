#pragma once
// Complex Gamma, the normalised Bessel function J_mu(z) = J_mu(z)/z^mu *
// Gamma(mu+1/2) sqrt(pi) 2^{mu-1}, and the Harish-Chandra c-function.

#include <string>
#include <vector>

#include "symspace/numerics.hpp"
#include "symspace/space.hpp"

namespace symspace {

// Gamma(z); throws PoleError at non-positive integers.
cplx gamma_complex(cplx z);
// A branch of log Gamma(z) (only exp of it is meaningful); throws at poles.
cplx lgamma_complex(cplx z);
// 1/Gamma(z), entire (zero at the poles of Gamma), overflow-safe.
cplx rgamma_complex(cplx z);

// Normalised Bessel function (entire in z, even).
cplx bessel_curly_J(double mu, cplx z);
// Its value at z = 0: sqrt(pi) Gamma(mu+1/2) / (2 Gamma(mu+1)).
double bessel_curly_J_at_zero(double mu);
// Direct power series (reference; accurate for |z| <~ 12).
cplx bessel_curly_J_series(double mu, cplx z);

// Harish-Chandra c-function
//   c(l) = 2^{rho - i l} Gamma((m1+m2+1)/2) Gamma(i l)
//          / [Gamma((rho + i l)/2) Gamma((m1+2)/4 + i l/2)],
// normalised so that c(-i rho) = 1.
class CFunction {
public:
    explicit CFunction(SpaceParams s) : s_(s) {}
    const SpaceParams& space() const { return s_; }

    cplx c(cplx lambda) const;
    // 1 / c(l), entire part handled through 1/Gamma(i l).
    cplx c_inv(cplx lambda) const;
    // c(-l)^{-1}: holomorphic on Im l >= 0.
    cplx c_minus_inv(cplx lambda) const { return c_inv(-lambda); }
    // c(l)^{-1} c(-l)^{-1}; equals |c(l)|^{-2} for real l (0 at l = 0).
    cplx plancherel(cplx lambda) const { return c_inv(lambda) * c_inv(-lambda); }
    double plancherel(double lambda) const { return plancherel(cplx(lambda, 0.0)).real(); }

private:
    SpaceParams s_;
};

// Fitted power-law certificate for one derivative order of one quantity.
struct GrowthEntry {
    std::string quantity;   // "c(-l)^-1" or "|c(l)|^-2"
    int order = 0;
    double imag_part = 0;   // Im lambda of the sampled line
    double claimed = 0;     // claimed exponent
    double fitted = 0;      // fitted exponent of the upper envelope (-inf if it vanishes)
    double constant = 0;    // sup |f^{(a)}| / (1+|l|)^{claimed}
    bool vanishes = false;  // derivative identically ~0 on the samples
    bool pass = false;
};

struct GrowthCertificate {
    std::vector<GrowthEntry> entries;
    bool pass = true;
    double holomorphy_residual = 0;  // Cauchy-Riemann residual of c(-l)^{-1}
};

// Samples derivatives of c(-l)^{-1} (claimed (1+|l|)^{(d-1)/2 - a}) on lines
// 0 <= Im l <= rho and of |c(l)|^{-2} (claimed (1+|l|)^{d-1-a}) on the real
// line, for l in [0.1, 200]; pass iff each fitted exponent <= claimed + 0.15.
GrowthCertificate validate_c_estimates(const CFunction& cf, int max_order);

}  // namespace symspace
