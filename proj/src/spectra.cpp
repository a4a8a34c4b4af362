#include "ptspec/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <thread>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

namespace ptspec {

std::string to_string(KreinSign s)
{
    switch (s) {
    case KreinSign::PositiveType:
        return "positive";
    case KreinSign::NegativeType:
        return "negative";
    default:
        return "indefinite";
    }
}

std::string to_string(Parity p)
{
    switch (p) {
    case Parity::Even:
        return "even";
    case Parity::Odd:
        return "odd";
    default:
        return "mixed";
    }
}

namespace {

const double kPi = std::acos(-1.0);

// Refine a sign change of F on [a, b].
template <class F>
double refine_root(F&& f, double a, double b, double fa, double fb, double tol)
{
    if (fa == 0.0)
        return a;
    if (fb == 0.0)
        return b;
    std::uintmax_t iters = 200;
    auto stop = [tol](double x, double y) { return std::abs(y - x) <= tol * std::max(1.0, std::abs(x)); };
    const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, stop, iters);
    return 0.5 * (r.first + r.second);
}

int worker_count(int requested)
{
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Evaluate f over items in contiguous chunks on several threads; order is preserved.
template <class T, class F>
auto parallel_map(const std::vector<T>& items, int threads, F&& f)
{
    using R = decltype(f(items.front()));
    std::vector<R> out(items.size());
    const std::size_t nt = std::min<std::size_t>(worker_count(threads), std::max<std::size_t>(1, items.size()));
    std::vector<std::future<void>> jobs;
    for (std::size_t t = 0; t < nt; ++t) {
        jobs.push_back(std::async(std::launch::async, [&, t] {
            for (std::size_t i = t; i < items.size(); i += nt)
                out[i] = f(items[i]);
        }));
    }
    for (auto& j : jobs)
        j.get();
    return out;
}

// Fix the phase so that the first nonzero of (f(0), f'(0)) is positive real, and scale to unit norm.
SampledFunction normalize(const SampledFunction& f, cplx f0, cplx df0)
{
    const double nrm = l2_norm(f);
    if (!(nrm > 0))
        throw Error("eigenfunction has zero norm");
    const cplx lead = std::abs(f0) > 1e-8 * std::abs(df0) ? f0 : df0;
    const cplx phase = std::abs(lead) > 0 ? std::conj(lead) / std::abs(lead) : 1.0;
    return f.scaled(phase / nrm);
}

SampledFunction unscaled(const SolutionTrace& t)
{
    if (t.log_scale.empty())
        return t.samples;
    std::vector<cplx> y(t.samples.values().begin(), t.samples.values().end());
    std::vector<cplx> dy(t.samples.derivatives().begin(), t.samples.derivatives().end());
    const double top = *std::max_element(t.log_scale.begin(), t.log_scale.end());
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double s = std::exp(t.log_scale[i] - top);
        y[i] *= s;
        dy[i] *= s;
    }
    return {{t.samples.grid().begin(), t.samples.grid().end()}, std::move(y), std::move(dy),
            t.samples.tail()};
}

// ---- limit point ---------------------------------------------------------

struct ShootingSetup
{
    double x_match;
    double x_inf;
};

ShootingSetup shooting_setup(const PotentialSpec& spec, double lambda)
{
    const double m = spec.power();
    const double xt = lambda > 0 ? std::pow(lambda, 1.0 / m) : 0.0;
    // extend until the decaying solution has lost exp(-35) relative to the growing one
    const double target = 35.0;
    double x = std::max(xt, 0.0), acc = 0.0;
    const double h = 0.01 * std::max(1.0, xt);
    while (acc < target) {
        const double a = std::sqrt(std::max(0.0, std::pow(x, m) - lambda));
        const double b = std::sqrt(std::max(0.0, std::pow(x + h, m) - lambda));
        acc += 0.5 * h * (a + b);
        x += h;
    }
    return {std::max(xt, 0.5), x};
}

struct ShootingPair
{
    SolutionTrace out; // from 0 to x_match
    SolutionTrace in;  // from x_inf down to x_match
};

ShootingPair shoot(const PotentialSpec& spec, double lambda, bool even, bool dense)
{
    const ShootingSetup s = shooting_setup(spec, lambda);
    IntegrationOptions opts;
    opts.tol = 1e-12;
    opts.renormalize = true;
    if (!dense)
        opts.max_phase_step = 0.0;
    ShootingPair sp;
    sp.out = integrate_ivp(spec, lambda, 0.0, even ? 1.0 : 0.0, even ? 0.0 : 1.0, s.x_match, opts);
    const double X = s.x_inf;
    const double q = eval_potential(spec, X);
    const double p = std::sqrt(q - lambda);
    const double dp = eval_potential_derivative(spec, X) / (2 * p);
    sp.in = integrate_ivp(spec, lambda, X, 1.0, -(p + dp / (2 * p)), s.x_match, opts);
    return sp;
}

double miss_of(const ShootingPair& sp)
{
    const auto& a = sp.out.samples;
    const auto& b = sp.in.samples;
    const double y1 = a.values().back().real(), d1 = a.derivatives().back().real();
    const double y2 = b.values().front().real(), d2 = b.derivatives().front().real();
    return (y1 * d2 - d1 * y2) / (std::hypot(y1, d1) * std::hypot(y2, d2));
}

// WKB eigenvalue counting function N(lambda) for -y'' + x^m y and its derivative.
double wkb_count(double lambda, double m)
{
    if (lambda <= 0)
        return 0.0;
    const double B = boost::math::beta(1.0 / m, 1.5);
    return 2.0 * std::pow(lambda, 0.5 + 1.0 / m) * B / (m * kPi);
}

double wkb_density(double lambda, double m)
{
    const double l = std::max(lambda, 1.0);
    const double B = boost::math::beta(1.0 / m, 1.5);
    return 2.0 * (0.5 + 1.0 / m) * std::pow(l, 1.0 / m - 0.5) * B / (m * kPi);
}

SampledFunction limit_point_eigenfunction(const PotentialSpec& spec, double lambda, bool even)
{
    const ShootingPair sp = shoot(spec, lambda, even, true);
    const SampledFunction out = unscaled(sp.out);
    const SampledFunction in = unscaled(sp.in);
    const cplx y1 = out.values().back(), d1 = out.derivatives().back();
    const cplx y2 = in.values().front(), d2 = in.derivatives().front();
    const cplx s = (y1 * y2 + d1 * d2) / (y2 * y2 + d2 * d2);

    std::vector<double> xs;
    std::vector<cplx> ys, ds;
    for (std::size_t i = 0; i < out.size(); ++i) {
        xs.push_back(out.grid()[i]);
        ys.push_back(out.values()[i]);
        ds.push_back(out.derivatives()[i]);
    }
    for (std::size_t i = 1; i < in.size(); ++i) {
        xs.push_back(in.grid()[i]);
        ys.push_back(s * in.values()[i]);
        ds.push_back(s * in.derivatives()[i]);
    }
    const std::size_t h = xs.size();
    const double sgn = even ? 1.0 : -1.0;
    std::vector<double> grid(2 * h - 1);
    std::vector<cplx> y(2 * h - 1), dy(2 * h - 1);
    for (std::size_t i = 0; i < h; ++i) {
        grid[h - 1 + i] = xs[i];
        grid[h - 1 - i] = -xs[i];
        y[h - 1 + i] = ys[i];
        dy[h - 1 + i] = ds[i];
        y[h - 1 - i] = sgn * ys[i];
        dy[h - 1 - i] = -sgn * ds[i];
    }
    grid[h - 1] = 0.0;
    SampledFunction f(std::move(grid), std::move(y), std::move(dy), {TailKind::Decaying, spec.n, lambda});
    return normalize(f, even ? 1.0 : 0.0, even ? 0.0 : 1.0);
}

} // namespace

double limit_point_miss(const PotentialSpec& spec, double lambda, bool even)
{
    if (spec.is_limit_circle())
        throw BranchError("shooting with decaying data requires the limit-point branch");
    return miss_of(shoot(spec, lambda, even, false));
}

LimitPointResult solve_limit_point(const PotentialSpec& spec, int k_max, double tol)
{
    if (spec.is_limit_circle())
        throw BranchError("limit-point solver called on the limit-circle branch");
    if (k_max < 1)
        throw Error("k_max must be at least 1");
    const double m = spec.power();
    // scan cap where the WKB count exceeds k_max by a safety margin
    double cap = 1.0;
    while (wkb_count(cap, m) < k_max + 4)
        cap *= 1.5;

    std::vector<std::pair<double, bool>> roots; // (lambda, even)
    auto scan = [&](bool even) {
        std::vector<std::pair<double, bool>> found;
        auto F = [&](double l) { return limit_point_miss(spec, l, even); };
        double a = 0.0, fa = F(a);
        while (a < cap) {
            const double b = a + std::max(0.01, 0.2 / wkb_density(a, m));
            const double fb = F(b);
            if (fa == 0.0 || fa * fb < 0)
                found.push_back({refine_root(F, a, b, fa, fb, tol), even});
            a = b;
            fa = fb;
        }
        return found;
    };
    auto fe = std::async(std::launch::async, scan, true);
    auto fo = std::async(std::launch::async, scan, false);
    for (auto& r : fe.get())
        roots.push_back(r);
    for (auto& r : fo.get())
        roots.push_back(r);
    std::sort(roots.begin(), roots.end());

    LimitPointResult res;
    res.truncated = static_cast<int>(roots.size()) < k_max;
    if (!res.truncated)
        roots.resize(k_max);

    res.records = parallel_map(roots, 0, [&](const std::pair<double, bool>& r) {
        EigenRecord rec;
        rec.lambda = r.first;
        rec.det_residual = std::abs(limit_point_miss(spec, r.first, r.second));
        rec.eigenfunctions.push_back(limit_point_eigenfunction(spec, r.first, r.second));
        rec.ode_residual = ode_residual(rec.eigenfunctions[0], spec, r.first);
        rec.parity = parity_of(rec.eigenfunctions[0]);
        return classify_krein(std::move(rec));
    });
    return res;
}

// ---- limit circle ----------------------------------------------------------

CharacteristicMatrix characteristic_matrix(const PotentialSpec& spec, const ReferencePair& ref,
                                           double lambda, double tol)
{
    if (!spec.is_limit_circle())
        throw BranchError("characteristic matrix requires the limit-circle branch");
    IntegrationOptions opts;
    opts.tol = ref.tol;
    opts.max_phase_step = 0.0;
    const FundamentalPair fp = fundamental_pair(spec, lambda, ref.X_inf, opts);
    const BoundaryFunctionals bu = functionals(fp.u.samples, ref, tol);
    const BoundaryFunctionals bv = functionals(fp.v.samples, ref, tol);
    CharacteristicMatrix m;
    m.lambda = lambda;
    m.m_alpha << bu.a1, bv.a1, bu.a2, bv.a2;
    m.m_beta << bu.b1, bv.b1, bu.b2, bv.b2;
    return m;
}

Eigen::Matrix2cd condition_matrix(const CharacteristicMatrix& m, const BoundaryCondition& bc)
{
    Eigen::Matrix2cd c;
    if (const auto* s = std::get_if<SeparatedBC>(&bc)) {
        c.row(0) = std::cos(s->alpha) * m.m_alpha.row(0) - std::sin(s->alpha) * m.m_alpha.row(1);
        c.row(1) = std::cos(s->beta) * m.m_beta.row(0) - std::sin(s->beta) * m.m_beta.row(1);
        return c;
    }
    const MixedBC& x = std::get<MixedBC>(bc);
    Eigen::Matrix2cd B;
    B << x.a, x.b, x.c, x.d;
    return m.m_beta - std::polar(1.0, x.phi) * B * m.m_alpha;
}

double characteristic_determinant(const CharacteristicMatrix& m, const BoundaryCondition& bc)
{
    const cplx det = condition_matrix(m, bc).determinant();
    if (std::holds_alternative<SeparatedBC>(bc))
        return det.real();
    return (std::polar(1.0, -std::get<MixedBC>(bc).phi) * det).real();
}

Parity parity_of(const SampledFunction& f, double tol)
{
    if (!f.is_symmetric())
        return Parity::Mixed;
    const std::size_t n = f.size();
    double top = 0.0, even_dev = 0.0, odd_dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const cplx a = f.values()[i], b = f.values()[n - 1 - i];
        top = std::max(top, std::abs(a));
        even_dev = std::max(even_dev, std::abs(a - b));
        odd_dev = std::max(odd_dev, std::abs(a + b));
    }
    if (even_dev <= tol * top)
        return Parity::Even;
    if (odd_dev <= tol * top)
        return Parity::Odd;
    return Parity::Mixed;
}

EigenRecord classify_krein(EigenRecord record, double tol)
{
    if (record.eigenfunctions.empty())
        throw Error("classification needs eigenfunctions");
    if (record.multiplicity == 1) {
        const SampledFunction& f = record.eigenfunctions[0];
        const double k = krein_inner(f, f).real();
        const double nrm2 = l2_inner(f, f).real();
        if (std::abs(k) < 10 * tol * nrm2)
            throw Error("indefinite inner product too small to classify eigenvalue " +
                        std::to_string(record.lambda));
        record.krein_sign = k > 0 ? KreinSign::PositiveType : KreinSign::NegativeType;
        return record;
    }
    // re-base the eigenspace into parity projections
    SampledFunction best_even, best_odd;
    double ne = -1, no = -1;
    for (const SampledFunction& f : record.eigenfunctions) {
        const SampledFunction pf = apply_parity(f);
        const SampledFunction e = combine(0.5, f, 0.5, pf);
        const SampledFunction o = combine(0.5, f, -0.5, pf);
        const double a = l2_norm(e), b = l2_norm(o);
        if (a > ne) {
            ne = a;
            best_even = e;
        }
        if (b > no) {
            no = b;
            best_odd = o;
        }
    }
    if (!(ne > 0) || !(no > 0))
        throw Error("eigenspace has no even or no odd part");
    const std::size_t z = best_even.size() / 2;
    record.eigenfunctions = {normalize(best_even, best_even.values()[z], best_even.derivatives()[z]),
                             normalize(best_odd, best_odd.values()[z], best_odd.derivatives()[z])};
    record.krein_sign = KreinSign::Indefinite;
    record.parity = Parity::Mixed;
    return record;
}

std::vector<double> weyl_partial_sums(const std::vector<EigenRecord>& records)
{
    std::vector<std::pair<double, int>> v;
    for (const EigenRecord& r : records)
        if (r.lambda != 0.0)
            v.push_back({std::abs(r.lambda), r.multiplicity});
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    double s = 0.0;
    for (const auto& [a, mult] : v) {
        s += mult / (a * a);
        out.push_back(s);
    }
    return out;
}

namespace {

// int_0^inf dx / sqrt(x^{2k} + a): phase advance per unit lambda on both sides.
double lc_density(double lambda, int n)
{
    const double k = 2.0 * n + 2.0;
    const double a = std::abs(lambda) + 1.0;
    return std::pow(a, 1.0 / (2 * k) - 0.5) * boost::math::beta(1.0 / (2 * k), 0.5 - 1.0 / (2 * k)) /
           (2 * k);
}

double block_scale(const CharacteristicMatrix& m, const BoundaryCondition& bc)
{
    double b = 1.0;
    if (const auto* x = std::get_if<MixedBC>(&bc)) {
        Eigen::Matrix2d B;
        B << x->a, x->b, x->c, x->d;
        b = B.norm();
    }
    return m.m_beta.norm() + b * m.m_alpha.norm();
}

struct RootCandidate
{
    double lambda;
    bool tangent; // located as a touching minimum rather than a sign change
};

EigenRecord limit_circle_record(const PotentialSpec& spec, const ReferencePair& ref,
                                const BoundaryCondition& bc, const RootCandidate& root,
                                const LimitCircleOptions& opts)
{
    const double lambda = root.lambda;
    IntegrationOptions io;
    io.tol = ref.tol;
    const FundamentalPair fp = fundamental_pair(spec, lambda, ref.X_inf, io);
    const BoundaryFunctionals bu = functionals(fp.u.samples, ref, opts.functional_tol);
    const BoundaryFunctionals bv = functionals(fp.v.samples, ref, opts.functional_tol);
    CharacteristicMatrix m;
    m.lambda = lambda;
    m.m_alpha << bu.a1, bv.a1, bu.a2, bv.a2;
    m.m_beta << bu.b1, bv.b1, bu.b2, bv.b2;
    const Eigen::Matrix2cd C = condition_matrix(m, bc);
    const double scale = block_scale(m, bc);
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(C, Eigen::ComputeFullV);
    const auto sv = svd.singularValues();

    EigenRecord rec;
    rec.lambda = lambda;
    rec.det_residual = std::abs(characteristic_determinant(m, bc)) / (scale * scale);
    std::vector<std::pair<cplx, cplx>> coeffs;
    if (sv(0) < 1e-8 * scale) {
        rec.multiplicity = 2;
        coeffs = {{1.0, 0.0}, {0.0, 1.0}};
    } else {
        const Eigen::Vector2cd v = svd.matrixV().col(1);
        coeffs = {{v(0), v(1)}};
        rec.flagged = root.tangent;
    }
    double worst_bc = 0.0, worst_par = 0.0, worst_ode = 0.0;
    for (const auto& [s, t] : coeffs) {
        const SampledFunction f = normalize(combine(s, fp.u.samples, t, fp.v.samples), s, t);
        rec.eigenfunctions.push_back(f);
        worst_bc = std::max(worst_bc, bc_residual(functionals(f, ref, opts.functional_tol), bc));
        worst_par = std::max(worst_par, bc_residual(functionals(apply_parity(f), ref, opts.functional_tol), bc));
        worst_ode = std::max(worst_ode, ode_residual(f, spec, lambda));
    }
    rec.bc_residual = worst_bc;
    rec.parity_residual = worst_par;
    rec.ode_residual = worst_ode;
    rec.parity = rec.multiplicity == 1 ? parity_of(rec.eigenfunctions[0]) : Parity::Mixed;
    return classify_krein(std::move(rec));
}

} // namespace

std::vector<EigenRecord> solve_limit_circle(const PotentialSpec& spec, const ReferencePair& ref,
                                            const BoundaryCondition& bc, double lo, double hi,
                                            const LimitCircleOptions& opts)
{
    if (!spec.is_limit_circle())
        throw BranchError("limit-circle solver called on the limit-point branch");
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        throw Error("window must be a finite interval");
    validate(bc);

    std::vector<double> grid{lo};
    while (grid.back() < hi) {
        const double l = grid.back();
        const double step = std::max(opts.min_step, kPi / lc_density(l, spec.n) / 8);
        grid.push_back(std::min(hi, l + step));
    }
    if (grid.size() == 1)
        grid.push_back(hi);

    auto D = [&](double l) {
        return characteristic_determinant(characteristic_matrix(spec, ref, l, opts.functional_tol), bc);
    };
    const std::vector<double> vals = parallel_map(grid, opts.threads, D);

    std::vector<std::array<double, 4>> brackets; // a, b, fa, fb
    std::vector<std::array<double, 3>> dips;     // a, mid, b
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (vals[i] == 0.0 || vals[i] * vals[i + 1] < 0)
            brackets.push_back({grid[i], grid[i + 1], vals[i], vals[i + 1]});
        if (i > 0 && vals[i - 1] * vals[i] > 0 && vals[i] * vals[i + 1] > 0 &&
            std::abs(vals[i]) < std::abs(vals[i - 1]) && std::abs(vals[i]) < std::abs(vals[i + 1]))
            dips.push_back({grid[i - 1], grid[i], grid[i + 1]});
    }
    if (vals.back() == 0.0)
        brackets.push_back({grid.back(), grid.back(), 0.0, 0.0});

    auto refine = [&](const std::array<double, 4>& b) {
        return std::vector<RootCandidate>{{refine_root(D, b[0], b[1], b[2], b[3], opts.tol), false}};
    };
    // a dip either hides two close sign changes or touches zero
    auto examine = [&](const std::array<double, 3>& d) {
        const double s = D(d[1]) > 0 ? 1.0 : -1.0;
        auto g = [&](double l) { return s * D(l); };
        std::uintmax_t iters = 60;
        const auto mn = boost::math::tools::brent_find_minima(g, d[0], d[2], 40, iters);
        std::vector<RootCandidate> out;
        if (mn.second < 0) {
            out.push_back({refine_root(D, d[0], mn.first, D(d[0]), D(mn.first), opts.tol), false});
            out.push_back({refine_root(D, mn.first, d[2], D(mn.first), D(d[2]), opts.tol), false});
        } else {
            const CharacteristicMatrix m = characteristic_matrix(spec, ref, mn.first, opts.functional_tol);
            const double scale = block_scale(m, bc);
            if (mn.second < 1e-6 * scale * scale)
                out.push_back({mn.first, true});
        }
        return out;
    };
    std::vector<RootCandidate> roots;
    for (auto& r : parallel_map(brackets, opts.threads, refine))
        roots.insert(roots.end(), r.begin(), r.end());
    for (auto& r : parallel_map(dips, opts.threads, examine))
        roots.insert(roots.end(), r.begin(), r.end());
    std::sort(roots.begin(), roots.end(),
              [](const RootCandidate& a, const RootCandidate& b) { return a.lambda < b.lambda; });
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](const RootCandidate& a, const RootCandidate& b) {
                                return std::abs(a.lambda - b.lambda) <= 10 * opts.tol * std::max(1.0, std::abs(a.lambda));
                            }),
                roots.end());

    return parallel_map(roots, opts.threads, [&](const RootCandidate& r) {
        return limit_circle_record(spec, ref, bc, r, opts);
    });
}

} // namespace ptspec
