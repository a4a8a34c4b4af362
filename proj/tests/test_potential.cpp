#include "doctest.h"

#include "ptspec/potential.hpp"

#include <cmath>
#include <random>

using namespace ptspec;

namespace {

const double pi = std::acos(-1.0);

// symmetric grid, exact mirror pairs
std::vector<double> sym_grid(double L, int half)
{
    std::vector<double> g;
    for (int i = -half; i <= half; ++i)
        g.push_back(L * i / half);
    return g;
}

SampledFunction sample(const std::vector<double>& g, auto f, auto df, TailModel tail = {})
{
    std::vector<cplx> y, dy;
    for (double x : g) {
        y.push_back(f(x));
        dy.push_back(df(x));
    }
    return SampledFunction(g, y, dy, tail);
}

SampledFunction random_function(std::mt19937_64& rng, const std::vector<double>& g)
{
    std::normal_distribution<double> N;
    const cplx a{N(rng), N(rng)}, b{N(rng), N(rng)}, s{N(rng), 0.3 * N(rng)};
    return sample(
        g, [&](double x) { return (a + b * x + s * x * x) * std::exp(-x * x / 2); },
        [&](double x) { return (b + 2.0 * s * x - x * (a + b * x + s * x * x)) * std::exp(-x * x / 2); },
        {TailKind::Decaying});
}

} // namespace

TEST_CASE("potential values")
{
    CHECK(eval_potential(PotentialSpec::limit_point(1), 2.0) == doctest::Approx(64.0));
    CHECK(eval_potential(PotentialSpec::limit_circle(1), -2.0) == doctest::Approx(-256.0));
    CHECK(eval_potential_derivative(PotentialSpec::limit_circle(1), 1.5) == doctest::Approx(-8 * std::pow(1.5, 7)));
    CHECK(PotentialSpec::limit_point(2).epsilon() == 8);
    CHECK(PotentialSpec::limit_circle(2).power() == 12);
}

TEST_CASE("constructor rejects malformed samples")
{
    CHECK_THROWS_AS(SampledFunction({0.0, 0.0}, {1.0, 1.0}, {0.0, 0.0}), MalformedSample);
    CHECK_THROWS_AS(SampledFunction({0.0, 1.0}, {1.0}, {0.0, 0.0}), MalformedSample);
    CHECK_THROWS_AS(SampledFunction({0.0, 1.0}, {NAN, 1.0}, {0.0, 0.0}), MalformedSample);
}

TEST_CASE("Hermite interpolation reproduces cubics")
{
    const auto g = sym_grid(2.0, 5);
    const auto f = sample(g, [](double x) { return cplx(x * x * x - x, 2 * x); },
                          [](double x) { return cplx(3 * x * x - 1, 2); });
    for (double x : {-1.93, -0.11, 0.37, 1.5}) {
        CHECK(std::abs(f.at(x).y - cplx(x * x * x - x, 2 * x)) < 1e-13);
        CHECK(std::abs(f.at(x).dy - cplx(3 * x * x - 1, 2)) < 1e-12);
    }
    CHECK_THROWS_AS(f.at(2.5), Error);
}

TEST_CASE("parity and time reversal")
{
    std::mt19937_64 rng(7);
    const auto g = sym_grid(9.0, 400);
    for (int i = 0; i < 5; ++i) {
        const auto f = random_function(rng, g);
        const auto pf = apply_parity(f);
        const auto tf = apply_time_reversal(f);
        CHECK(std::abs(pf.at(1.3).y - f.at(-1.3).y) < 1e-14);
        CHECK(std::abs(pf.at(1.3).dy + f.at(-1.3).dy) < 1e-14);
        CHECK(pf.values()[10] == f.values()[pf.size() - 11]);
        CHECK(tf.at(0.7).y == std::conj(f.at(0.7).y));
        const auto a = apply_parity(apply_time_reversal(f));
        const auto b = apply_time_reversal(apply_parity(f));
        for (std::size_t j = 0; j < a.size(); ++j)
            CHECK(a.values()[j] == b.values()[j]);
        const auto pp = apply_parity(pf);
        for (std::size_t j = 0; j < a.size(); ++j)
            CHECK(pp.values()[j] == f.values()[j]);
    }
    const SampledFunction lopsided({-1.0, 0.5, 1.0}, {1.0, 1.0, 1.0}, {0.0, 0.0, 0.0});
    CHECK_FALSE(lopsided.is_symmetric());
    CHECK_THROWS_AS(apply_parity(lopsided), MalformedSample);
}

TEST_CASE("L2 and Krein products against closed forms")
{
    const auto g = sym_grid(10.0, 300);
    const TailModel dec{TailKind::Decaying};
    const auto even = sample(g, [](double x) { return cplx(std::exp(-x * x / 2)); },
                             [](double x) { return cplx(-x * std::exp(-x * x / 2)); }, dec);
    const auto odd = sample(g, [](double x) { return cplx(x * std::exp(-x * x / 2)); },
                            [](double x) { return cplx((1 - x * x) * std::exp(-x * x / 2)); }, dec);
    CHECK(l2_norm(even) * l2_norm(even) == doctest::Approx(std::sqrt(pi)).epsilon(1e-10));
    CHECK(l2_norm(odd) * l2_norm(odd) == doctest::Approx(std::sqrt(pi) / 2).epsilon(1e-10));
    CHECK(krein_inner(even, even).real() == doctest::Approx(std::sqrt(pi)).epsilon(1e-10));
    CHECK(krein_inner(odd, odd).real() == doctest::Approx(-std::sqrt(pi) / 2).epsilon(1e-10));
    CHECK(std::abs(krein_inner(even, odd)) < 1e-12);
    CHECK(std::abs(l2_inner(even, odd)) < 1e-12);
    const auto growing = even.with_tail({TailKind::Growing});
    CHECK_THROWS_AS(l2_norm(growing), Error);
}

TEST_CASE("Krein product is hermitian and indefinite")
{
    std::mt19937_64 rng(11);
    const auto g = sym_grid(9.0, 300);
    for (int i = 0; i < 5; ++i) {
        const auto f = random_function(rng, g), h = random_function(rng, g);
        CHECK(std::abs(krein_inner(f, h) - std::conj(krein_inner(h, f))) < 1e-12);
        CHECK(std::abs(krein_inner(f, h) - l2_inner(f, apply_parity(h))) < 1e-12);
    }
}
