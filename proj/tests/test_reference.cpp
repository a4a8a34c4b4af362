#include "doctest.h"

#include "ptspec/reference.hpp"

#include <cmath>
#include <cstdio>

using namespace ptspec;

namespace {

// odd solution of y'' = -x^{4n+4} y with y'(0) = 1
double series_odd(int n, double x)
{
    const int p = 4 * n + 6;
    double term = x, sum = x;
    for (int j = 0; j < 60; ++j) {
        term *= -std::pow(x, p) / ((j * p + p + 1.0) * (j * p + p));
        sum += term;
    }
    return sum;
}

} // namespace

TEST_CASE("extent")
{
    CHECK(reference_extent(1) == doctest::Approx(std::pow(10000.0, 0.2)));
    CHECK(reference_extent(2) < reference_extent(1));
}

TEST_CASE("reference pair near the origin")
{
    const auto ref = cached_reference_pair(PotentialSpec::limit_circle(1), 1e-12);
    CHECK(ref == cached_reference_pair(PotentialSpec::limit_circle(1), 1e-12));
    for (double x : {0.2, 0.8, 1.3}) {
        const auto [a, b] = eval_reference(*ref, x);
        CHECK(a.y.real() == doctest::Approx(series_odd(1, x)).epsilon(1e-10));
        CHECK(std::abs(a.y.imag()) == 0.0);
        const auto [c, d] = eval_reference(*ref, -x);
        CHECK(c.y.real() == doctest::Approx(-a.y.real()));
        CHECK(d.y.real() == doctest::Approx(b.y.real()));
    }
    const auto [w1, w2] = eval_reference(*ref, 0.0);
    CHECK(w1.y.real() == 0.0);
    CHECK(w1.dy.real() == 1.0);
    CHECK(w2.y.real() == -1.0);
    CHECK(w2.dy.real() == 0.0);
}

TEST_CASE("normalization holds across the grid")
{
    for (int n : {1, 2}) {
        const auto ref = cached_reference_pair(PotentialSpec::limit_circle(n), 1e-12);
        const auto& f = ref->w1.samples;
        const auto& g = ref->w2.samples;
        double worst = 0.0;
        for (std::size_t i = 0; i < f.size(); i += 7)
            worst = std::max(worst, std::abs(bracket(SamplePoint{f.values()[i], f.derivatives()[i]},
                                                     SamplePoint{g.values()[i], g.derivatives()[i]}) -
                                             1.0));
        CHECK(worst < 1e-7);
        CHECK(f.back() == doctest::Approx(reference_extent(n)));
    }
}

TEST_CASE("square-integrable tails agree between extents")
{
    const auto spec = PotentialSpec::limit_circle(1);
    const ReferencePair a = build_reference_pair(spec, 1e-12, 5.0);
    const ReferencePair b = build_reference_pair(spec, 1e-12, 7.0);
    for (double from : {2.0, 4.0}) {
        CHECK(l2_norm_tail(a.w1, from) == doctest::Approx(l2_norm_tail(b.w1, from)).epsilon(1e-7));
        CHECK(l2_norm_tail(a.w2, from) == doctest::Approx(l2_norm_tail(b.w2, from)).epsilon(1e-7));
    }
}

TEST_CASE("save and load")
{
    const auto ref = cached_reference_pair(PotentialSpec::limit_circle(1), 1e-12);
    const std::string path = "reference_roundtrip.json";
    save_reference(*ref, path);
    const ReferencePair back = load_reference(path);
    std::remove(path.c_str());
    CHECK(back.spec.n == 1);
    CHECK(back.X_inf == ref->X_inf);
    REQUIRE(back.w1.samples.size() == ref->w1.samples.size());
    for (std::size_t i = 0; i < back.w1.samples.size(); i += 1001) {
        CHECK(back.w1.samples.values()[i] == ref->w1.samples.values()[i]);
        CHECK(back.w2.samples.derivatives()[i] == ref->w2.samples.derivatives()[i]);
    }
    CHECK_THROWS_AS(load_reference("missing-file.json"), Error);
}
