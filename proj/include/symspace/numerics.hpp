#pragma once
// Shared numerical building blocks: composite Gauss-Legendre grids with
// panel-wise interpolation/differentiation, derivative estimators, smooth
// cutoffs, regression helpers and a small parallel-for.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace symspace {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr cplx kI{0.0, 1.0};

// Composite Gauss-Legendre rule on [b_0, b_P] with `order` nodes per panel.
// Values sampled at the nodes can be integrated, interpolated anywhere in the
// covered interval (barycentric Lagrange per panel) and differentiated.
class PanelGrid {
public:
    PanelGrid() = default;
    PanelGrid(std::vector<double> breaks, int order);

    static PanelGrid uniform(double a, double b, int panels, int order = 16);
    // Panels of width h0 on [a, a+w0], then widths growing geometrically by
    // `ratio` until b is reached.
    static PanelGrid graded(double a, double b, double h0, double w0, double ratio, int order = 16);
    // Concatenation of uniform pieces: breaks at each element of `knots`,
    // with piece i subdivided into widths not exceeding `widths[i]`.
    static PanelGrid piecewise(std::span<const double> knots, std::span<const double> widths,
                               int order = 16);

    std::size_t size() const { return nodes_.size(); }
    int order() const { return order_; }
    std::size_t panels() const { return breaks_.empty() ? 0 : breaks_.size() - 1; }
    double lower() const { return breaks_.front(); }
    double upper() const { return breaks_.back(); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& breaks() const { return breaks_; }

    template <class T>
    T integrate(const std::vector<T>& v) const {
        T s{};
        for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * v[i];
        return s;
    }

    // Index of the panel containing x (clamped to the grid).
    std::size_t panel_of(double x) const;

    double interpolate(std::span<const double> v, double x) const;
    cplx interpolate(std::span<const cplx> v, double x) const;

    // Panel-wise spectral derivative of the interpolant at the nodes.
    std::vector<double> differentiate(std::span<const double> v) const;
    std::vector<cplx> differentiate(std::span<const cplx> v) const;

private:
    template <class T>
    T interp_impl(std::span<const T> v, double x) const;
    template <class T>
    std::vector<T> diff_impl(std::span<const T> v) const;

    int order_ = 0;
    std::vector<double> breaks_;
    std::vector<double> nodes_, weights_;
    std::vector<double> ref_nodes_, bary_;  // reference nodes on [-1,1] and barycentric weights
    std::vector<double> dmat_;              // reference differentiation matrix (row-major)
};

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

// k-th derivative of a holomorphic function via the Cauchy integral on a
// circle of the given radius (trapezoidal rule with `points` nodes).
cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx z, int k, double radius,
                       int points = 64);

// k-th derivative (k <= 4) of a smooth real-variable function by central
// differences with one Richardson step.
cplx fd_derivative(const std::function<cplx(double)>& f, double x, int k, double h);

// C-infinity step: 0 for x <= 0, 1 for x >= 1, strictly increasing between.
double smooth_step(double x);

// Least-squares line y = slope*x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double rms = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);
// Fit log|y| = slope*log x + c, skipping non-positive entries.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);
// Spearman rank correlation (average ranks for ties).
double spearman(std::span<const double> a, std::span<const double> b);
// Upper envelope from the right: env[i] = max_{j >= i} |y[j]|.
std::vector<double> right_envelope(std::span<const double> y);

// Run body(i) for i in [0, n) on up to `jobs` threads (jobs <= 1: serial).
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

// Default degree of parallelism for library-internal sweeps (settable by the CLI).
int default_jobs();
void set_default_jobs(int jobs);

}  // namespace symspace
