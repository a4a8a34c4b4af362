#include "doctest.h"

#include "ptspec/extensions.hpp"

#include <array>
#include <cmath>
#include <random>

using namespace ptspec;

namespace {

const double pi = std::acos(-1.0);

const ReferencePair& ref1()
{
    static const auto r = cached_reference_pair(PotentialSpec::limit_circle(1), 1e-12);
    return *r;
}

// domain invariance under PT decided from a basis of the functional space
bool invariant_separated(double a, double b)
{
    const BoundaryFunctionals e1{std::sin(a), std::cos(a), 0, 0};
    const BoundaryFunctionals e2{0, 0, std::sin(b), std::cos(b)};
    const SeparatedBC bc{a, b};
    return bc_residual(transform_time_reversal(e1), bc) < 1e-9 &&
           bc_residual(transform_time_reversal(e2), bc) < 1e-9;
}

BoundaryFunctionals conj_of(const BoundaryFunctionals& b)
{
    return {std::conj(b.a1), std::conj(b.a2), std::conj(b.b1), std::conj(b.b2)};
}

// basis of the functional space of dom H_B
std::array<BoundaryFunctionals, 2> mixed_basis(const MixedBC& m)
{
    const cplx ph = std::polar(1.0, m.phi);
    return {BoundaryFunctionals{1, 0, ph * m.a, ph * m.c}, BoundaryFunctionals{0, 1, ph * m.b, ph * m.d}};
}

// domain invariant under P and under T separately
bool invariant_mixed(const MixedBC& m)
{
    bool ok = true;
    for (const auto& e : mixed_basis(m))
        ok = ok && mixed_residual(transform_parity(e), m) < 1e-9 && mixed_residual(conj_of(e), m) < 1e-9;
    return ok;
}

bool pt_invariant_mixed(const MixedBC& m)
{
    bool ok = true;
    for (const auto& e : mixed_basis(m))
        ok = ok && mixed_residual(transform_time_reversal(e), m) < 1e-9;
    return ok;
}

} // namespace

TEST_CASE("validation")
{
    CHECK_NOTHROW(validate(SeparatedBC{0.0, 3.0}));
    CHECK_THROWS_AS(validate(SeparatedBC{pi, 0.0}), Error);
    CHECK_THROWS_AS(validate(SeparatedBC{-0.1, 0.0}), Error);
    CHECK_THROWS_AS(validate(MixedBC{0.0, 1, 1, 1, 1}), Error);
    CHECK_THROWS_AS(validate(MixedBC{2 * pi, 1, 0, 0, 1}), Error);
    CHECK_NOTHROW(validate(MixedBC{0.0, 2, 1, 1, 1}));
}

TEST_CASE("separated verdicts")
{
    CHECK(is_pt_symmetric_separated({0, 0}).symmetric);
    CHECK(is_pt_symmetric_separated({pi / 2, pi / 2}).symmetric);
    CHECK(is_pt_symmetric_separated({pi / 2, pi / 2}).reason == PTReason::AnglesSumZeroOrPi);
    CHECK_FALSE(is_pt_symmetric_separated({pi / 3, pi / 2}).symmetric);
    CHECK(is_pt_symmetric_separated({pi / 3, pi / 2}).reason == PTReason::Violation);
}

TEST_CASE("separated grid agrees with domain invariance")
{
    int count = 0;
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            const double a = i * pi / 12, b = j * pi / 12;
            const bool v = is_pt_symmetric_separated({a, b}).symmetric;
            CHECK(v == invariant_separated(a, b));
            count += v;
        }
    CHECK(count == 12);
}

TEST_CASE("mixed verdicts")
{
    CHECK(is_pt_symmetric_mixed({0, 1, 0, 0, 1}).symmetric);
    CHECK(is_pt_symmetric_mixed({pi, 1, 0, 0, 1}).symmetric);
    CHECK_FALSE(is_pt_symmetric_mixed({pi / 2, 1, 0, 0, 1}).symmetric);
    CHECK_FALSE(is_pt_symmetric_mixed({0, 2, 1, 1, 1}).symmetric);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2, 2);
    const double phis[] = {0, pi / 3, pi, 1.5 * pi};
    for (int i = 0; i < 100; ++i) {
        MixedBC m{phis[i % 4], u(rng), u(rng), 0, 0};
        if (std::abs(m.a) < 0.2)
            m.a = 0.7;
        if (i % 2)
            m.d = m.a, m.c = (m.a * m.a - 1) / m.b;
        else
            m.c = u(rng), m.d = (1 + m.b * m.c) / m.a;
        CHECK(is_pt_symmetric_mixed(m).symmetric == invariant_mixed(m));
    }
}

TEST_CASE("combined PT image alone does not see the phase")
{
    // B J B = J with J = diag(1, -1): the factor e^{i phi} cancels against its conjugate
    CHECK(pt_invariant_mixed({pi / 2, 1, 0, 0, 1}));
    CHECK(pt_invariant_mixed({1.3, 2, 3, 1, 2}));
    CHECK_FALSE(pt_invariant_mixed({1.3, 2, 1, 1, 1}));
    CHECK_FALSE(is_pt_symmetric_mixed({pi / 2, 1, 0, 0, 1}).symmetric);
}

TEST_CASE("residual formulas")
{
    auto [l, r] = separated_residual({1, 0, 1, 0}, {pi / 2, pi / 2});
    CHECK(l < 1e-15);
    CHECK(r < 1e-15);
    std::tie(l, r) = separated_residual({0, 1, 0, 1}, {0, 0});
    CHECK(l == 0.0);
    CHECK(r == 0.0);
    const MixedBC m{0.7, 2, 1, 1, 1};
    const cplx ph = std::polar(1.0, m.phi);
    CHECK(mixed_residual({1, 0, ph * m.a, ph * m.c}, m) < 1e-15);
    CHECK(mixed_residual({0, 1, ph * m.b, ph * m.d}, m) < 1e-15);
    CHECK(mixed_residual({1, 0, 0, 0}, {0, 1, 0, 0, 1}) == doctest::Approx(1.0));
}

TEST_CASE("projected functions lie in the domain")
{
    const auto& ref = ref1();
    std::mt19937_64 rng(9);
    std::normal_distribution<double> N;
    for (const BoundaryCondition& bc :
         {BoundaryCondition{SeparatedBC{0.4, 2.1}}, BoundaryCondition{MixedBC{1.1, 2, 1, 1, 1}}}) {
        const GluedFunction g = project_domain(ref, bc, {cplx(N(rng), N(rng)), cplx(N(rng), N(rng))});
        CHECK(bc_residual(functionals(g.samples, ref), bc) < 1e-7);
    }
}

TEST_CASE("PT domain check")
{
    const auto& ref = ref1();
    for (double a : {0.3, 1.0, 2.5}) {
        const SeparatedBC bc{a, pi - a};
        const GluedFunction g = project_separated(ref, bc, cplx(0.3, 1.0), cplx(-1.2, 0.4));
        CHECK(pt_domain_check(functionals(g.samples, ref), bc) < 1e-6);
    }
    for (auto [a, b] : {std::pair{pi / 3, pi / 2}, {0.2, 0.9}, {2.0, 2.5}}) {
        const SeparatedBC bc{a, b};
        const GluedFunction y = separated_counterexample(ref, bc);
        CHECK(max_abs_diff(functionals(y.samples, ref), {std::sin(a), std::cos(a), std::sin(b), std::cos(b)}) < 1e-7);
        CHECK(pt_domain_check(functionals(y.samples, ref), bc) ==
              doctest::Approx(std::abs(std::sin(a + b))).epsilon(1e-6));
    }
    const MixedBC sym{pi, 2, 3, 1, 2};
    const auto [y, z] = mixed_counterexamples(ref, sym);
    CHECK(pt_domain_check(functionals(y.samples, ref), sym) < 1e-6);
    CHECK(pt_domain_check(functionals(z.samples, ref), sym) < 1e-6);
    const MixedBC off{pi / 2, 1, 0, 0, 1};
    const auto [y2, z2] = mixed_counterexamples(ref, off);
    CHECK(pt_domain_check(functionals(y2.samples, ref), off) > 1e-3);
    // not in the domain at all
    CHECK_THROWS_AS(pt_domain_check({1, 0, 0, 0}, BoundaryCondition{MixedBC{0, 1, 0, 0, 1}}), Error);
}
