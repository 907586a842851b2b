#include "symspace/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include <boost/math/special_functions/legendre.hpp>

#include "symspace/errors.hpp"

namespace symspace {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    if (n < 1) throw DomainError("gauss_legendre: order must be positive");
    const auto zeros = boost::math::legendre_p_zeros<double>(n);  // non-negative zeros, ascending
    x.clear();
    w.clear();
    std::vector<double> full;
    for (double z : zeros) {
        full.push_back(z);
        if (z != 0.0) full.push_back(-z);
    }
    std::sort(full.begin(), full.end());
    for (double z : full) {
        const double dp = boost::math::legendre_p_prime(n, z);
        x.push_back(z);
        w.push_back(2.0 / ((1.0 - z * z) * dp * dp));
    }
}

PanelGrid::PanelGrid(std::vector<double> breaks, int order) : order_(order), breaks_(std::move(breaks)) {
    if (breaks_.size() < 2) throw DomainError("PanelGrid: need at least one panel");
    for (std::size_t i = 1; i < breaks_.size(); ++i)
        if (!(breaks_[i] > breaks_[i - 1])) throw DomainError("PanelGrid: breaks must increase");
    std::vector<double> rw;
    gauss_legendre(order_, ref_nodes_, rw);
    const int n = order_;
    bary_.assign(n, 1.0);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k)
            if (k != j) bary_[j] *= (ref_nodes_[j] - ref_nodes_[k]);
        bary_[j] = 1.0 / bary_[j];
    }
    dmat_.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        double diag = 0.0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = (bary_[j] / bary_[i]) / (ref_nodes_[i] - ref_nodes_[j]);
            dmat_[i * n + j] = v;
            diag -= v;
        }
        dmat_[i * n + i] = diag;
    }
    for (std::size_t p = 0; p + 1 < breaks_.size(); ++p) {
        const double a = breaks_[p], b = breaks_[p + 1];
        const double c = 0.5 * (a + b), h = 0.5 * (b - a);
        for (int j = 0; j < n; ++j) {
            nodes_.push_back(c + h * ref_nodes_[j]);
            weights_.push_back(h * rw[j]);
        }
    }
}

PanelGrid PanelGrid::uniform(double a, double b, int panels, int order) {
    if (panels < 1 || !(b > a)) throw DomainError("PanelGrid::uniform: bad interval");
    std::vector<double> br(panels + 1);
    for (int i = 0; i <= panels; ++i) br[i] = a + (b - a) * i / panels;
    br.back() = b;
    return PanelGrid(std::move(br), order);
}

PanelGrid PanelGrid::graded(double a, double b, double h0, double w0, double ratio, int order) {
    if (!(b > a) || h0 <= 0.0 || ratio < 1.0) throw DomainError("PanelGrid::graded: bad parameters");
    std::vector<double> br{a};
    double x = a, h = h0;
    while (x < a + w0 - 1e-14 && x < b) {
        x = std::min(x + h0, b);
        br.push_back(x);
    }
    while (x < b - 1e-14) {
        h *= ratio;
        x = std::min(x + h, b);
        if (b - x < 0.25 * h) x = b;
        br.push_back(x);
    }
    br.back() = b;
    return PanelGrid(std::move(br), order);
}

PanelGrid PanelGrid::piecewise(std::span<const double> knots, std::span<const double> widths, int order) {
    if (knots.size() < 2 || widths.size() + 1 != knots.size())
        throw DomainError("PanelGrid::piecewise: need one width per piece");
    std::vector<double> br{knots[0]};
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const double len = knots[i + 1] - knots[i];
        if (!(len > 0.0) || widths[i] <= 0.0) throw DomainError("PanelGrid::piecewise: bad piece");
        const int m = std::max(1, static_cast<int>(std::ceil(len / widths[i] - 1e-12)));
        for (int k = 1; k <= m; ++k) br.push_back(knots[i] + len * k / m);
        br.back() = knots[i + 1];
    }
    return PanelGrid(std::move(br), order);
}

std::size_t PanelGrid::panel_of(double x) const {
    if (x <= breaks_.front()) return 0;
    if (x >= breaks_.back()) return breaks_.size() - 2;
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
    return static_cast<std::size_t>(it - breaks_.begin()) - 1;
}

template <class T>
T PanelGrid::interp_impl(std::span<const T> v, double x) const {
    const std::size_t p = panel_of(x);
    const double a = breaks_[p], b = breaks_[p + 1];
    const double u = (2.0 * x - a - b) / (b - a);
    const std::size_t off = p * order_;
    T num{};
    double den = 0.0;
    for (int j = 0; j < order_; ++j) {
        const double diff = u - ref_nodes_[j];
        if (diff == 0.0) return v[off + j];
        const double c = bary_[j] / diff;
        num += c * v[off + j];
        den += c;
    }
    return num / den;
}

double PanelGrid::interpolate(std::span<const double> v, double x) const { return interp_impl<double>(v, x); }
cplx PanelGrid::interpolate(std::span<const cplx> v, double x) const { return interp_impl<cplx>(v, x); }

template <class T>
std::vector<T> PanelGrid::diff_impl(std::span<const T> v) const {
    std::vector<T> out(v.size());
    const int n = order_;
    for (std::size_t p = 0; p + 1 < breaks_.size(); ++p) {
        const double scale = 2.0 / (breaks_[p + 1] - breaks_[p]);
        const std::size_t off = p * n;
        for (int i = 0; i < n; ++i) {
            T s{};
            for (int j = 0; j < n; ++j) s += dmat_[i * n + j] * v[off + j];
            out[off + i] = scale * s;
        }
    }
    return out;
}

std::vector<double> PanelGrid::differentiate(std::span<const double> v) const { return diff_impl<double>(v); }
std::vector<cplx> PanelGrid::differentiate(std::span<const cplx> v) const { return diff_impl<cplx>(v); }

cplx cauchy_derivative(const std::function<cplx(cplx)>& f, cplx z, int k, double radius, int points) {
    cplx s{};
    for (int j = 0; j < points; ++j) {
        const double th = 2.0 * kPi * (j + 0.5) / points;
        const cplx e = std::polar(1.0, th);
        s += f(z + radius * e) * std::pow(e, -k);
    }
    return std::tgamma(k + 1.0) * s / (static_cast<double>(points) * std::pow(radius, k));
}

namespace {
cplx central_diff(const std::function<cplx(double)>& f, double x, int k, double h) {
    switch (k) {
        case 0: return f(x);
        case 1: return (f(x + h) - f(x - h)) / (2.0 * h);
        case 2: return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        case 3: return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) / (2.0 * h * h * h);
        case 4:
            return (f(x + 2 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2 * h)) /
                   (h * h * h * h);
        default: throw DomainError("fd_derivative: order must be <= 4");
    }
}
}  // namespace

cplx fd_derivative(const std::function<cplx(double)>& f, double x, int k, double h) {
    if (k == 0) return f(x);
    const cplx d1 = central_diff(f, x, k, h);
    const cplx d2 = central_diff(f, x, k, 0.5 * h);
    return (4.0 * d2 - d1) / 3.0;  // all stencils above are second-order accurate
}

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x), b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n) throw DomainError("fit_line: need >= 2 matched samples");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double r = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - f.slope * x[i] - f.intercept;
        r += e * e;
    }
    f.rms = std::sqrt(r / n);
    return f;
}

LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0 && std::abs(y[i]) > 0) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(std::abs(y[i])));
        }
    }
    return fit_line(lx, ly);
}

namespace {
std::vector<double> ranks(std::span<const double> a) {
    std::vector<std::size_t> idx(a.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto i, auto j) { return a[i] < a[j]; });
    std::vector<double> r(a.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && a[idx[j + 1]] == a[idx[i]]) ++j;
        const double avg = 0.5 * (i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}
}  // namespace

double spearman(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) throw DomainError("spearman: need matched samples");
    const auto ra = ranks(a), rb = ranks(b);
    const double n = static_cast<double>(a.size());
    const double m = 0.5 * (n + 1.0);
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        sab += (ra[i] - m) * (rb[i] - m);
        saa += (ra[i] - m) * (ra[i] - m);
        sbb += (rb[i] - m) * (rb[i] - m);
    }
    return sab / std::sqrt(saa * sbb);
}

std::vector<double> right_envelope(std::span<const double> y) {
    std::vector<double> e(y.size());
    double m = 0.0;
    for (std::size_t i = y.size(); i-- > 0;) {
        m = std::max(m, std::abs(y[i]));
        e[i] = m;
    }
    return e;
}

namespace {
std::atomic<int> g_jobs{static_cast<int>(std::max(1u, std::thread::hardware_concurrency()))};
}

int default_jobs() { return g_jobs.load(); }
void set_default_jobs(int jobs) { g_jobs.store(std::max(1, jobs)); }

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::atomic<bool> failed{false};
    std::mutex err_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n || failed.load()) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(err_mutex);
                if (!err) err = std::current_exception();
                failed.store(true);
            }
        }
    };
    const int t = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
    std::vector<std::jthread> pool;
    for (int k = 0; k < t; ++k) pool.emplace_back(worker);
    pool.clear();
    if (err) std::rethrow_exception(err);
}

}  // namespace symspace
