// Acceptance run: one line per criterion, nonzero exit if any fails.

#include "ptspec/cli.hpp"
#include "ptspec/oracle.hpp"
#include "ptspec/spectra.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>

using namespace ptspec;

namespace {

const double pi = std::acos(-1.0);

struct Outcome
{
    bool pass;
    std::string detail;
};

std::string g3(double v)
{
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const ReferencePair& ref_n(int n)
{
    static std::map<int, std::shared_ptr<const ReferencePair>> refs;
    auto& r = refs[n];
    if (!r)
        r = cached_reference_pair(PotentialSpec::limit_circle(n), 1e-12);
    return *r;
}

const LimitPointResult& lp_records()
{
    static const LimitPointResult lp = solve_limit_point(PotentialSpec::limit_point(1), 12);
    return lp;
}

const std::vector<EigenRecord>& lc_records()
{
    static const auto recs =
        solve_limit_circle(PotentialSpec::limit_circle(1), ref_n(1), SeparatedBC{pi / 2, pi / 2}, -50, 50);
    return recs;
}

std::vector<MixedBC> mixed_sample()
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-2.0, 2.0), ph(0.0, 2 * pi);
    std::vector<MixedBC> out;
    while (out.size() < 200) {
        MixedBC m;
        const int kind = static_cast<int>(out.size() % 4);
        m.phi = kind == 0 ? 0.0 : kind == 1 ? pi : ph(rng);
        m.a = u(rng);
        m.b = u(rng);
        if (std::abs(m.a) < 0.1 || std::abs(m.b) < 0.1)
            continue;
        if (out.size() % 3 == 0) {
            m.d = m.a;
            m.c = (m.a * m.a - 1) / m.b;
        } else {
            m.c = u(rng);
            m.d = (1 + m.b * m.c) / m.a;
        }
        out.push_back(m);
    }
    return out;
}

Outcome c1()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = PotentialSpec::limit_point(1);
    const LimitPointResult lp = solve_limit_point(spec, 6);
    const auto fd = fd_spectrum_limit_point(spec, {}, 6);
    const double dt = seconds_since(t0);
    double gap = 0;
    for (int i = 0; i < 6; ++i)
        gap = std::max(gap, std::abs(lp.records.at(i).lambda - fd[i]) / fd[i]);
    return {gap < 1e-6 && dt < 30 && !lp.truncated,
            "max relative gap " + g3(gap) + ", shooting + oracle " + g3(dt) + " s"};
}

Outcome c2()
{
    const auto& r = lp_records().records;
    bool ok = r.size() == 12 && !lp_records().truncated;
    for (std::size_t i = 0; i < r.size(); ++i) {
        ok = ok && r[i].lambda >= 0 && r[i].multiplicity == 1 && !r[i].flagged;
        ok = ok && r[i].parity == (i % 2 ? Parity::Odd : Parity::Even);
        if (i > 0)
            ok = ok && r[i].lambda > r[i - 1].lambda;
    }
    return {ok, std::to_string(r.size()) + " eigenvalues, lambda_0 = " + g3(r.at(0).lambda) +
                    ", simple, increasing, parity alternating from even"};
}

Outcome c3()
{
    double smallest = 1e300;
    int count = 0;
    bool ok = true;
    auto check = [&](const EigenRecord& r) {
        if (r.multiplicity != 1)
            return;
        ++count;
        const bool even = r.parity == Parity::Even, odd = r.parity == Parity::Odd;
        ok = ok && (even || odd);
        ok = ok && r.krein_sign == (even ? KreinSign::PositiveType : KreinSign::NegativeType);
        const double k = std::abs(krein_inner(r.eigenfunctions.at(0), r.eigenfunctions.at(0)));
        smallest = std::min(smallest, k);
    };
    for (const auto& r : lp_records().records)
        check(r);
    for (const auto& r : lc_records())
        check(r);
    return {ok && smallest > 0.5, std::to_string(count) + " simple eigenvalues (LP and LC), min |[f,f]| = " + g3(smallest)};
}

Outcome from_suite(const std::string& name)
{
    const auto res = run_verify(1, name);
    return {res.at(0).pass, res.at(0).detail};
}

Outcome c6()
{
    int sep_mismatch = 0, sym = 0;
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            const bool v = is_pt_symmetric_separated({i * pi / 12, j * pi / 12}).symmetric;
            sym += v;
            sep_mismatch += v != (i + j == 0 || i + j == 12);
        }
    int mix_mismatch = 0, mix_sym = 0;
    for (const MixedBC& m : mixed_sample()) {
        const bool v = is_pt_symmetric_mixed(m).symmetric;
        const bool expect = (m.phi == 0.0 || m.phi == pi) && std::abs(m.a - m.d) <= 1e-12;
        mix_sym += v;
        mix_mismatch += v != expect;
    }
    return {sep_mismatch == 0 && sym == 12 && mix_mismatch == 0,
            "separated " + std::to_string(sym) + "/144 symmetric, mixed " + std::to_string(mix_sym) +
                "/200 symmetric, mismatches " + std::to_string(sep_mismatch + mix_mismatch)};
}

Outcome c7()
{
    const auto& ref = ref_n(1);
    double worst = 0;
    int pairs = 0;
    for (int i = 0; i < 12; ++i)
        for (int j = 0; j < 12; ++j) {
            if (i + j == 0 || i + j == 12)
                continue;
            const SeparatedBC bc{i * pi / 12, j * pi / 12};
            const GluedFunction y = separated_counterexample(ref, bc);
            const double res = pt_domain_check(functionals(y.samples, ref), bc);
            worst = std::max(worst, std::abs(res - std::abs(std::sin(bc.alpha + bc.beta))));
            ++pairs;
        }
    double min_mixed = 1e300;
    int mixed = 0;
    for (const MixedBC& m : mixed_sample()) {
        if (is_pt_symmetric_mixed(m).symmetric)
            continue;
        const auto [y, z] = mixed_counterexamples(ref, m);
        min_mixed = std::min(min_mixed, std::max(pt_domain_check(functionals(y.samples, ref), m),
                                                 pt_domain_check(functionals(z.samples, ref), m)));
        ++mixed;
    }
    return {worst < 1e-6 && min_mixed > 1e-6,
            std::to_string(pairs) + " separated pairs, max ||res| - |sin(a+b)|| = " + g3(worst) + "; " +
                std::to_string(mixed) + " non-matching B, min residual " + g3(min_mixed)};
}

Outcome c8()
{
    const auto& recs = lc_records();
    bool ok = !recs.empty();
    double bc = 0, par = 0;
    for (const auto& r : recs) {
        ok = ok && std::isfinite(r.lambda) && !r.flagged;
        bc = std::max(bc, r.bc_residual);
        par = std::max(par, r.parity_residual);
    }
    const auto sums = weyl_partial_sums(recs);
    bool mono = true;
    for (std::size_t i = 5; i + 1 < sums.size(); ++i)
        mono = mono && (sums[i + 1] - sums[i]) <= (sums[i] - sums[i - 1]) * (1 + 1e-12);
    return {ok && bc < 1e-6 && par < 1e-6 && mono,
            std::to_string(recs.size()) + " real eigenvalues in [-50, 50], max bc residual " + g3(bc) +
                ", max parity-image residual " + g3(par) + ", Weyl increments " +
                (mono ? "nonincreasing" : "not monotone")};
}

Outcome c9()
{
    const auto spec = PotentialSpec::limit_circle(1);
    const std::vector<std::pair<MixedBC, std::pair<double, double>>> windows = {
        {MixedBC{0, 1, 0, 0, 1}, {-5, 20}},
        {MixedBC{pi, 1, 0, 0, 1}, {-5, 20}},
        {MixedBC{0, 2, 3, 1, 2}, {-5, 20}}};
    int doubles = 0;
    bool ok = true;
    double worst = 0;
    for (const auto& [bc, w] : windows)
        for (const auto& r : solve_limit_circle(spec, ref_n(1), bc, w.first, w.second)) {
            if (r.multiplicity != 2)
                continue;
            ++doubles;
            ok = ok && r.krein_sign == KreinSign::Indefinite && r.eigenfunctions.size() == 2 &&
                 parity_of(r.eigenfunctions[0]) == Parity::Even && parity_of(r.eigenfunctions[1]) == Parity::Odd;
            worst = std::max(worst, r.bc_residual);
        }
    if (doubles == 0)
        return {true, "not exercised (no double eigenvalue in the scanned windows)"};
    return {ok && worst < 1e-6, std::to_string(doubles) + " double eigenvalue(s), even/odd re-basing, Indefinite, bc residual " + g3(worst)};
}

Outcome c10()
{
    const NonClosednessReport rep = nonclosedness_demo(1, {10, 20, 30});
    const auto& y = rep.dist_y;
    const auto& t = rep.dist_tau;
    const bool ok = y[0] > y[1] && y[1] > y[2] && y[2] < 1e-3 && t[0] > t[1] && t[1] > t[2];
    return {ok, "||y_k - y|| = " + g3(y[0]) + ", " + g3(y[1]) + ", " + g3(y[2]) + "; ||tau y_k - tau y|| = " +
                    g3(t[0]) + ", " + g3(t[1]) + ", " + g3(t[2])};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"limit-point oracle agreement", c1},
        {"limit-point spectral structure", c2},
        {"sign-type exhaustiveness", c3},
        {"reference-pair normalization", [] { return from_suite("wronskian"); }},
        {"P and T transformation laws", [] { return from_suite("transforms"); }},
        {"PT classification truth tables", c6},
        {"only-if counterexamples", c7},
        {"limit-circle spectra sanity", c8},
        {"multiplicity-2 conditional check", c9},
        {"non-closedness demo", c10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("criterion %2zu %s %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
