#include "doctest.h"

#include "ptspec/oracle.hpp"

#include <cmath>

using namespace ptspec;

namespace {

// composite Simpson on [a, b]
template <class F>
double simpson(F f, double a, double b, int n)
{
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i)
        s += f(a + i * h) * (i % 2 ? 4 : 2);
    return s * h / 3;
}

} // namespace

TEST_CASE("harmonic sanity mode")
{
    FDConfig cfg;
    cfg.harmonic = true;
    const auto ev = fd_spectrum_limit_point(PotentialSpec::limit_point(1), cfg, 5);
    for (int k = 0; k < 5; ++k)
        CHECK(ev[k] == doctest::Approx(2.0 * k + 1).epsilon(1e-8));
}

TEST_CASE("extrapolation improves on the raw grid")
{
    const auto spec = PotentialSpec::limit_point(1);
    FDConfig raw;
    raw.extrapolate = false;
    raw.N = 1000;
    FDConfig fine;
    fine.N = 4000;
    FDConfig rich;
    rich.N = 1000;
    const double best = fd_spectrum_limit_point(spec, fine, 3)[2];
    CHECK(std::abs(fd_spectrum_limit_point(spec, rich, 3)[2] - best) <
          0.01 * std::abs(fd_spectrum_limit_point(spec, raw, 3)[2] - best));
}

TEST_CASE("argument checks")
{
    const auto spec = PotentialSpec::limit_point(1);
    CHECK_THROWS_AS(fd_spectrum_limit_point(PotentialSpec::limit_circle(1), {}, 3), BranchError);
    FDConfig narrow;
    narrow.L = 1.0;
    CHECK_THROWS_AS(fd_spectrum_limit_point(spec, narrow, 6), Error);
    CHECK_THROWS_AS(fd_spectrum_limit_point(spec, {}, 0), Error);
    CHECK(std::pow(fd_default_half_width(spec, 6), 6) > 10 * fd_spectrum_limit_point(spec, {}, 6)[5]);
}

TEST_CASE("bridge joins the power tail to second order")
{
    for (int n : {1, 2}) {
        const double m = 4.0 * n + 5;
        const double h = 1e-4;
        auto y = [&](double x) { return nonclosed_function(n, 0, x).y; };
        for (double s : {1.0, -1.0}) {
            const double x = s * 1.0;
            CHECK(y(x) == doctest::Approx(1.0));
            CHECK((y(x + h) - y(x - h)) / (2 * h) == doctest::Approx(-s * m).epsilon(1e-6));
            CHECK(nonclosed_function(n, 0, x).d2y == doctest::Approx(m * (m + 1)).epsilon(1e-9));
            CHECK(nonclosed_function(n, 0, x + s * 1e-9).d2y == doctest::Approx(m * (m + 1)).epsilon(1e-6));
        }
        // y_k matches y and y' at |x| = k
        for (int k : {10, 20}) {
            auto yk = [&](double x) { return nonclosed_function(n, k, x).y; };
            CHECK(yk(k + 1e-9) == doctest::Approx(y(k - 1e-9)).epsilon(1e-6));
            CHECK((yk(k + 2 * h) - yk(k + h)) / h == doctest::Approx((y(k - h) - y(k - 2 * h)) / h).epsilon(1e-3));
        }
    }
}

TEST_CASE("non-closedness distances against Simpson quadrature")
{
    const int n = 1;
    const NonClosednessReport rep = nonclosedness_demo(n, {10, 20, 30});
    REQUIRE(rep.k_values.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        const int k = rep.k_values[i];
        auto dy = [&](double x) {
            const double d = nonclosed_function(n, k, x).y - nonclosed_function(n, 0, x).y;
            return d * d;
        };
        auto dt = [&](double x) {
            const auto a = nonclosed_function(n, k, x), b = nonclosed_function(n, 0, x);
            const double d = -(a.d2y - b.d2y) - std::pow(x, 8) * (a.y - b.y);
            return d * d;
        };
        const double Y = k + 60.0;
        const double sy = std::sqrt(2 * (simpson(dy, k, Y, 200000) +
                                         simpson([&](double t) { return dy(Y / t) * Y / (t * t); }, 1e-9, 1.0, 2000)));
        const double st = std::sqrt(2 * (simpson(dt, k, Y, 200000) +
                                         simpson([&](double t) { return dt(Y / t) * Y / (t * t); }, 1e-9, 1.0, 2000)));
        CHECK(rep.dist_y[i] == doctest::Approx(sy).epsilon(1e-6));
        CHECK(rep.dist_tau[i] == doctest::Approx(st).epsilon(1e-6));
        CHECK(rep.alpha[i] == doctest::Approx(-rep.alpha_printed[i]));
    }
    CHECK(rep.dist_y[0] > rep.dist_y[1]);
    CHECK(rep.dist_y[1] > rep.dist_y[2]);
    CHECK(rep.dist_y[2] < 1e-3);
    CHECK(rep.dist_tau[0] > rep.dist_tau[1]);
    CHECK(rep.dist_tau[1] > rep.dist_tau[2]);
    CHECK(rep.coefficient_discrepancy);
    CHECK(rep.tau_y_norm > 0);
    CHECK_THROWS_AS(nonclosedness_demo(1, {1}), Error);
}
