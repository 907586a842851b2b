#pragma once
// Euclidean pseudo-differential operators a(x, D) on R^n (n = 1, 2):
//     a(x, D) u(x) = int e^{2 pi i x xi} a(x, xi) u^(xi) d xi,  u^(xi) = int u(x) e^{-2 pi i x xi} dx,
// applied by discrete Fourier quadrature on a uniform grid, together with
// sampled certificates for the symbol classes S^m, for Hormander-Mihlin
// multipliers and for uniformity over families of symbols.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "symspace/numerics.hpp"

namespace symspace {

using Pt = std::array<double, 2>;  // second component unused when n = 1

struct EuclidSymbol {
    int dim = 1;
    double order = 0.0;        // declared order m
    bool x_independent = false;
    std::function<cplx(const Pt& x, const Pt& xi)> eval;

    cplx operator()(const Pt& x, const Pt& xi) const { return eval(x, xi); }

    static EuclidSymbol multiplier(int dim, std::function<cplx(const Pt& xi)> m, double order = 0.0);
    static EuclidSymbol general(int dim, std::function<cplx(const Pt& x, const Pt& xi)> a, double order = 0.0);
};

// Uniform grid x_j = x0 + j h on each axis; n^dim samples, row-major in 2-d
// (index i*n + j is the point (x_i, x_j)).
struct GriddedFunction {
    int dim = 1;
    std::size_t n = 0;
    double x0 = 0.0, h = 1.0;
    std::vector<cplx> values;

    double coord(std::size_t j) const { return x0 + h * static_cast<double>(j); }
    static GriddedFunction sample(int dim, std::size_t n, double x0, double h,
                                  const std::function<cplx(const Pt&)>& f);
};

struct PdoOptions {
    // Treat the data as one period of a periodic function (no padding, no
    // boundary check).  Otherwise the grid is zero-padded to twice its size.
    bool periodic = false;
    double alias_tol = 1e-8;  // relative spectral energy allowed in the outer 10% band
    double wrap_tol = 1e-10;  // relative boundary magnitude allowed before padding
    int jobs = 1;
};

// a(x, D) f on the grid of f.  Throws ResolutionError on aliasing or wraparound.
GriddedFunction apply_pdo(const EuclidSymbol& a, const GriddedFunction& f, const PdoOptions& opt = {});
// a(x, D) f at arbitrary points (direct Fourier sum).
std::vector<cplx> apply_pdo_at(const EuclidSymbol& a, const GriddedFunction& f, const std::vector<Pt>& xs,
                               const PdoOptions& opt = {});
// (h^n sum |f|^2)^{1/2}.
double grid_l2_norm(const GriddedFunction& f);

// Sampling plan shared by the certificates.
struct SymbolSampling {
    std::vector<double> xs{-2.0, -0.9, 0.0, 0.7, 1.6, 2.9};  // per-axis x samples
    double xi_min = 1e-4, xi_max = 1e3;
    int xi_count = 36;          // log-spaced magnitudes
    int directions = 5;         // rays in the xi-plane (n = 2); both signs in n = 1
    double hx = 0.05;           // finite-difference step in x
    double hxi_rel = 0.05;      // step in xi, relative to (1 + |xi|)
};

struct SymbolCertificate {
    double order = 0.0;
    int max_alpha = 0, max_beta = 0;
    // Indexed [alpha][beta] by total derivative order.
    std::vector<std::vector<double>> constant;      // sup |d| / (1+|xi|)^{m - alpha}
    std::vector<std::vector<double>> fitted;        // large-|xi| growth exponent of sup_x |d|
    std::vector<std::vector<double>> small_slope;   // exponent of sup_x |d| as |xi| -> 0
    std::vector<std::vector<bool>> entry_pass;
    bool pass = false;
    struct Worst {
        int alpha = 0, beta = 0;
        Pt x{}, xi{};
        double ratio = 0.0;
    } worst;
};

// Finite-difference bounds |d_xi^alpha d_x^beta a| <= C (1+|xi|)^{m-|alpha|},
// alpha <= max_alpha, beta <= max_beta (both <= 4), with exponent slack 0.15
// at large |xi| and no blow-up as xi -> 0.
SymbolCertificate validate_symbol(const EuclidSymbol& a, int max_alpha, int max_beta,
                                  const SymbolSampling& plan = {});

struct MultiplierCertificate {
    int dim = 1;
    std::vector<double> A;            // A_j = sup |xi|^j |d^j m|, j = 0..[n/2]+1
    std::vector<double> large_slope;  // exponent of sup |xi|^j |d^j m| for |xi| >= 10
    std::vector<double> small_slope;  // the same for |xi| <= 0.1
    bool pass = false;
};
// |d^j m(xi)| <= A_j |xi|^{-j}, j <= [n/2]+1, on log-spaced |xi| in [1e-3, 1e3].
MultiplierCertificate hm_multiplier_check(const std::function<cplx(const Pt&)>& m, int dim);

struct FamilyCertificate {
    std::vector<SymbolCertificate> members;
    std::vector<std::vector<double>> max_constant, min_constant;
    double spread = 1.0;   // largest max/min ratio over (alpha, beta)
    int worst_index = -1;  // member attaining the largest constant in the worst entry
    bool pass = false;
};
// Uniformity of the per-member constants: every member passes and the
// constants agree within `max_spread`.
FamilyCertificate family_uniformity(const std::vector<EuclidSymbol>& fam, int max_alpha, int max_beta,
                                    double max_spread = 2.0, const SymbolSampling& plan = {});

}  // namespace symspace
