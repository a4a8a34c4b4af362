#include "ptspec/oracle.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>

namespace ptspec {

namespace {

const double kPi = std::acos(-1.0);

double fd_potential(const PotentialSpec& spec, bool harmonic, double x)
{
    return harmonic ? x * x : eval_potential(spec, x);
}

// WKB estimate of the k-th eigenvalue (k = 0, 1, ...).
double eigenvalue_estimate(const PotentialSpec& spec, int k, bool harmonic)
{
    if (harmonic)
        return 2.0 * k + 1.0;
    const double m = spec.power();
    const double B = boost::math::beta(1.0 / m, 1.5);
    return std::pow((k + 0.5) * m * kPi / (2.0 * B), 1.0 / (0.5 + 1.0 / m));
}

// Number of eigenvalues below x (Sturm sequence of the LDL^T factorization).
int sturm_count(const std::vector<double>& d, double off2, double x)
{
    int count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        q = (d[i] - x) - (i == 0 ? 0.0 : off2 / q);
        if (q == 0.0)
            q = -1e-300;
        if (q < 0)
            ++count;
    }
    return count;
}

std::vector<double> fd_eigenvalues(const PotentialSpec& spec, bool harmonic, double L, int N, int k_max)
{
    const double h = 2 * L / (N + 1);
    std::vector<double> d(N);
    for (int i = 0; i < N; ++i)
        d[i] = 2.0 / (h * h) + fd_potential(spec, harmonic, -L + (i + 1) * h);
    const double off2 = 1.0 / (h * h * h * h);
    double hi = 1.0;
    while (sturm_count(d, off2, hi) < k_max)
        hi *= 2;
    std::vector<double> out;
    for (int k = 0; k < k_max; ++k) {
        double a = 0.0, b = hi; // potential is nonnegative, so all eigenvalues are positive
        while (b - a > 1e-14 * std::max(1.0, b)) {
            const double mid = 0.5 * (a + b);
            if (sturm_count(d, off2, mid) >= k + 1)
                b = mid;
            else
                a = mid;
        }
        out.push_back(0.5 * (a + b));
    }
    return out;
}

} // namespace

double fd_default_half_width(const PotentialSpec& spec, int k_max, bool harmonic)
{
    const double lam = 1.5 * eigenvalue_estimate(spec, k_max, harmonic);
    const double m = harmonic ? 2.0 : spec.power();
    double x = std::pow(lam, 1.0 / m), acc = 0.0;
    const double h = 1e-3 * std::max(1.0, x);
    while (acc < 20.0 || std::pow(x, m) < 10 * lam) {
        const double a = std::sqrt(std::max(0.0, std::pow(x, m) - lam));
        const double b = std::sqrt(std::max(0.0, std::pow(x + h, m) - lam));
        acc += 0.5 * h * (a + b);
        x += h;
    }
    return x;
}

std::vector<double> fd_spectrum_limit_point(const PotentialSpec& spec, const FDConfig& cfg, int k_max)
{
    if (spec.is_limit_circle() && !cfg.harmonic)
        throw BranchError("finite-difference oracle covers the limit-point branch only");
    if (cfg.N < 3)
        throw Error("FD grid needs at least 3 points");
    if (k_max < 1)
        throw Error("k_max must be at least 1");
    const double L = cfg.L > 0 ? cfg.L : fd_default_half_width(spec, k_max, cfg.harmonic);
    const double need = 10 * eigenvalue_estimate(spec, k_max - 1, cfg.harmonic);
    if (fd_potential(spec, cfg.harmonic, L) < need)
        throw Error("FD half-width L = " + std::to_string(L) + " too small: q(L) must exceed " +
                    std::to_string(need) + "; increase L");
    const std::vector<double> coarse = fd_eigenvalues(spec, cfg.harmonic, L, cfg.N, k_max);
    if (!cfg.extrapolate)
        return coarse;
    const std::vector<double> fine = fd_eigenvalues(spec, cfg.harmonic, L, 2 * cfg.N + 1, k_max);
    std::vector<double> out(k_max);
    for (int k = 0; k < k_max; ++k)
        out[k] = (4 * fine[k] - coarse[k]) / 3;
    return out;
}

// ---- non-closedness --------------------------------------------------------

std::array<double, 6> nonclosed_bridge(int n)
{
    const double m = 4.0 * n + 5.0;
    // c(+-1) = 1, c'(+-1) = -+m, c''(+-1) = m(m+1) for the even continuation of x^{-m}
    Eigen::Matrix<double, 6, 6> A;
    Eigen::Matrix<double, 6, 1> rhs;
    int row = 0;
    for (double s : {1.0, -1.0}) {
        for (int der = 0; der < 3; ++der, ++row) {
            for (int j = 0; j < 6; ++j) {
                double c = 0.0;
                if (j >= der) {
                    c = 1.0;
                    for (int t = 0; t < der; ++t)
                        c *= (j - t);
                    c *= std::pow(s, j - der);
                }
                A(row, j) = c;
            }
        }
        rhs(row - 3) = 1.0;
        rhs(row - 2) = -m * s;
        rhs(row - 1) = m * (m + 1);
    }
    const Eigen::Matrix<double, 6, 1> c = A.fullPivLu().solve(rhs);
    return {c(0), c(1), c(2), c(3), c(4), c(5)};
}

BridgeValue nonclosed_function(int n, int k, double x)
{
    const double m = 4.0 * n + 5.0;
    const double ax = std::abs(x);
    if (ax <= 1.0) {
        const auto c = nonclosed_bridge(n);
        double y = 0.0, d2 = 0.0;
        for (int j = 5; j >= 0; --j)
            y = y * x + c[j];
        for (int j = 5; j >= 2; --j)
            d2 = d2 * x + j * (j - 1) * c[j];
        return {y, d2};
    }
    if (k == 0 || ax < k)
        return {std::pow(ax, -m), m * (m + 1) * std::pow(ax, -m - 2)};
    // (a |x| + b) e^{k - |x|} k^{-m}, matched in value and slope at |x| = k
    const double kk = k;
    const double a = (kk - m) / kk, b = m + 1 - kk;
    const double e = std::exp(kk - ax) * std::pow(kk, -m);
    return {(a * ax + b) * e, (a * ax + b - 2 * a) * e};
}

NonClosednessReport nonclosedness_demo(int n, const std::vector<int>& k_values)
{
    if (n < 1)
        throw Error("n must be >= 1");
    NonClosednessReport rep;
    rep.n = n;
    const double m = 4.0 * n + 5.0;
    const PotentialSpec spec = PotentialSpec::limit_circle(n);
    auto tau = [&](int k, double x) {
        const BridgeValue v = nonclosed_function(n, k, x);
        if (v.y == 0.0)
            return -v.d2y;
        const double t = -v.d2y + eval_potential(spec, x) * v.y;
        // x^{4n+4} overflows before x^{-m} underflows; the limit there is 0
        return std::isfinite(t) ? t : 0.0;
    };
    boost::math::quadrature::exp_sinh<double> tail;
    for (int k : k_values) {
        if (k < 2)
            throw Error("k must be at least 2");
        rep.k_values.push_back(k);
        const double ek = std::exp(double(k));
        rep.alpha.push_back((k - m) * std::pow(double(k), -m - 1) * ek);
        rep.alpha_printed.push_back((m - k) * std::pow(double(k), -m - 1) * ek);
        // the two functions differ only for |x| >= k; both halves contribute equally
        auto dy = [&](double t) {
            const double x = k + t;
            const double d = nonclosed_function(n, k, x).y - nonclosed_function(n, 0, x).y;
            return d * d;
        };
        auto dt = [&](double t) {
            const double x = k + t;
            const double d = tau(k, x) - tau(0, x);
            return d * d;
        };
        rep.dist_y.push_back(std::sqrt(2 * tail.integrate(dy, 1e-12)));
        rep.dist_tau.push_back(std::sqrt(2 * tail.integrate(dt, 1e-12)));
    }
    rep.coefficient_discrepancy = true; // the printed alpha_k has the opposite sign
    auto t2 = [&](double x) {
        const double v = tau(0, x);
        return v * v;
    };
    const double inner = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(t2, -1.0, 1.0, 10, 1e-12);
    const double outer = tail.integrate([&](double t) { return t2(1.0 + t); }, 1e-12);
    rep.tau_y_norm = std::sqrt(inner + 2 * outer);
    return rep;
}

} // namespace ptspec
