#include "ptspec/ode_engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <boost/numeric/odeint.hpp>

namespace ptspec {

namespace odeint = boost::numeric::odeint;

namespace {

using state_t = std::vector<double>;
using stepper_t = odeint::runge_kutta_dopri5<state_t>;

constexpr double kOverflow = 1e100;
const double kLogOverflow = 100.0 * std::log(10.0);

// Samples of several real solutions sharing one step sequence.
struct ColumnRun
{
    std::vector<double> x;
    std::vector<std::vector<double>> y, dy; // [column][sample]
    std::vector<double> log_scale;
    double x_switch = -1.0;
    std::vector<PhaseState> end_state;
};

ColumnRun integrate_columns(const PotentialSpec& spec, double lambda, double x0, double x_end,
                            const std::vector<std::array<double, 2>>& init,
                            const IntegrationOptions& opts)
{
    if (!(opts.tol > 0))
        throw Error("integration tolerance must be positive");
    if (x_end == x0)
        throw Error("integration interval is empty");

    const std::size_t ncol = init.size();
    const double dir = x_end > x0 ? 1.0 : -1.0;
    const int n = spec.n;
    const bool use_phase = opts.phase_amplitude && spec.is_limit_circle();
    const double xs = spec.is_limit_circle() ? x_switch(spec, lambda) : -1.0;

    ColumnRun run;
    run.y.resize(ncol);
    run.dy.resize(ncol);

    state_t s(2 * ncol);
    for (std::size_t c = 0; c < ncol; ++c) {
        s[2 * c] = init[c][0];
        s[2 * c + 1] = init[c][1];
    }
    double log_scale = 0.0;

    auto record_direct = [&](double x) {
        run.x.push_back(x);
        for (std::size_t c = 0; c < ncol; ++c) {
            run.y[c].push_back(s[2 * c]);
            run.dy[c].push_back(s[2 * c + 1]);
        }
        run.log_scale.push_back(log_scale);
    };

    auto direct = [&](const state_t& st, state_t& ds, double x) {
        const double k = eval_potential(spec, x) - lambda;
        for (std::size_t c = 0; c < ncol; ++c) {
            ds[2 * c] = st[2 * c + 1];
            ds[2 * c + 1] = k * st[2 * c];
        }
    };

    auto cap_for = [&](double x) {
        if (opts.max_phase_step <= 0 || std::abs(x) < opts.dense_from)
            return std::numeric_limits<double>::infinity();
        return opts.max_phase_step / std::sqrt(std::abs(eval_potential(spec, x) - lambda) + 1.0);
    };

    auto ctrl = odeint::make_controlled<stepper_t>(opts.tol, opts.tol);
    double x = x0;
    double dt = dir * std::min(1e-3, std::abs(x_end - x0));
    record_direct(x);

    auto outward = [&](double at) { return dir * at >= 0.0; };
    const double min_step = 1e-14;

    // Direct stepping, possibly up to the switch abscissa.
    while (dir * (x_end - x) > 0) {
        if (use_phase && outward(x) && std::abs(x) >= xs)
            break;
        double h = std::min({std::abs(dt), std::abs(x_end - x), cap_for(x)});
        double target = x_end;
        if (use_phase && outward(x) && std::abs(x) < xs && std::abs(dir * xs - x) <= h) {
            h = std::abs(dir * xs - x);
            target = dir * xs;
        } else if (h == std::abs(x_end - x)) {
            target = x_end;
        } else {
            target = std::numeric_limits<double>::quiet_NaN();
        }
        dt = dir * h;
        const double x_before = x;
        if (ctrl.try_step(direct, s, x, dt) == odeint::fail) {
            if (std::abs(dt) < min_step * (1.0 + std::abs(x)))
                throw ConvergenceError("step size underflow at x = " + std::to_string(x), dt);
            continue;
        }
        if (!std::isnan(target) && std::abs(x - target) <= 4 * std::numeric_limits<double>::epsilon() *
                                                             (1.0 + std::abs(target)))
            x = target;
        (void)x_before;
        double mag = 0.0;
        for (double v : s)
            mag = std::max(mag, std::abs(v));
        if (!std::isfinite(mag) || mag > kOverflow) {
            if (!opts.renormalize || !std::isfinite(mag))
                throw OverflowError("solution overflow at x = " + std::to_string(x), x);
            for (double& v : s)
                v /= kOverflow;
            log_scale += kLogOverflow;
            ctrl.reset();
        }
        record_direct(x);
    }

    if (dir * (x_end - x) <= 0) {
        if (spec.is_limit_circle()) {
            const double p = phase_momentum(n, lambda, x);
            if (std::isfinite(p) && p > 0)
                for (std::size_t c = 0; c < ncol; ++c)
                    run.end_state.push_back(to_phase(s[2 * c], s[2 * c + 1], p));
        }
        return run;
    }

    // Amplitude/phase stepping from the switch abscissa outward.
    run.x_switch = std::abs(x);
    std::vector<std::size_t> active;
    std::vector<PhaseState> ph(ncol);
    {
        const double p = phase_momentum(n, lambda, x);
        for (std::size_t c = 0; c < ncol; ++c) {
            ph[c] = to_phase(s[2 * c], s[2 * c + 1], p);
            if (!ph[c].zero)
                active.push_back(c);
        }
    }
    state_t z(2 * active.size());
    for (std::size_t k = 0; k < active.size(); ++k) {
        z[2 * k] = ph[active[k]].theta;
        z[2 * k + 1] = ph[active[k]].log_rho;
    }
    const double m = 4.0 * n + 4.0;
    auto prufer = [&](const state_t& st, state_t& ds, double xx) {
        const double q = std::pow(xx, 4 * n + 4);
        const double p = std::sqrt(q + lambda);
        const double w = 0.5 * (m * q / xx / (2.0 * p)) / p; // p' / (2p)
        for (std::size_t k = 0; k < active.size(); ++k) {
            const double th2 = 2.0 * st[2 * k];
            ds[2 * k] = p + w * std::sin(th2);
            ds[2 * k + 1] = -w * std::cos(th2);
        }
    };
    auto record_phase = [&](double xx) {
        const double p = phase_momentum(n, lambda, xx);
        const double sp = std::sqrt(p);
        run.x.push_back(xx);
        for (std::size_t c = 0; c < ncol; ++c) {
            run.y[c].push_back(0.0);
            run.dy[c].push_back(0.0);
        }
        for (std::size_t k = 0; k < active.size(); ++k) {
            const double rho = std::exp(z[2 * k + 1]);
            run.y[active[k]].back() = rho / sp * std::sin(z[2 * k]);
            run.dy[active[k]].back() = rho * sp * std::cos(z[2 * k]);
        }
        run.log_scale.push_back(log_scale);
    };

    auto pctrl = odeint::make_controlled<stepper_t>(opts.tol, 0.0);
    while (dir * (x_end - x) > 0) {
        double h = std::min(std::abs(dt), std::abs(x_end - x));
        const bool last = h == std::abs(x_end - x);
        dt = dir * h;
        if (active.empty()) {
            x = last ? x_end : x + dt;
            record_phase(x);
            continue;
        }
        if (pctrl.try_step(prufer, z, x, dt) == odeint::fail) {
            if (std::abs(dt) < min_step * (1.0 + std::abs(x)))
                throw ConvergenceError("step size underflow at x = " + std::to_string(x), dt);
            continue;
        }
        if (last && std::abs(x - x_end) <= 4 * std::numeric_limits<double>::epsilon() *
                                                 (1.0 + std::abs(x_end)))
            x = x_end;
        record_phase(x);
    }
    for (std::size_t k = 0; k < active.size(); ++k)
        ph[active[k]] = {z[2 * k], z[2 * k + 1], false};
    run.end_state = ph;
    return run;
}

TailModel default_tail(const PotentialSpec& spec, double lambda)
{
    if (spec.is_limit_circle())
        return {TailKind::PhaseAmplitude, spec.n, lambda};
    return {TailKind::Growing, spec.n, lambda};
}

TailParams tail_from(const ColumnRun& run, std::size_t re_col, std::size_t im_col, double x)
{
    TailParams t;
    t.x = x;
    if (run.end_state.size() > std::max(re_col, im_col)) {
        t.re = run.end_state[re_col];
        t.im = run.end_state[im_col];
    }
    return t;
}

} // namespace

double phase_momentum(int n, double lambda, double x)
{
    return std::sqrt(std::pow(x, 4 * n + 4) + lambda);
}

double x_switch(const PotentialSpec& spec, double lambda)
{
    if (!spec.is_limit_circle())
        throw BranchError("amplitude/phase switching is defined for the limit-circle branch only");
    return std::pow(100.0 * std::max(1.0, std::abs(lambda)), 1.0 / (4 * spec.n + 4));
}

PhaseState to_phase(double y, double dy, double p)
{
    const double sp = std::sqrt(p);
    const double rho = std::sqrt(p * y * y + dy * dy / p);
    if (rho == 0.0)
        return {};
    return {std::atan2(sp * y, dy / sp), std::log(rho), false};
}

SolutionTrace integrate_ivp(const PotentialSpec& spec, double lambda, double x0, cplx y0, cplx dy0,
                            double x_end, const IntegrationOptions& opts)
{
    const ColumnRun run =
        integrate_columns(spec, lambda, x0, x_end,
                          {{y0.real(), dy0.real()}, {y0.imag(), dy0.imag()}}, opts);
    const std::size_t ns = run.x.size();
    std::vector<double> grid(run.x);
    std::vector<cplx> y(ns), dy(ns);
    for (std::size_t i = 0; i < ns; ++i) {
        y[i] = {run.y[0][i], run.y[1][i]};
        dy[i] = {run.dy[0][i], run.dy[1][i]};
    }
    std::vector<double> scale(run.log_scale);
    if (x_end < x0) {
        std::reverse(grid.begin(), grid.end());
        std::reverse(y.begin(), y.end());
        std::reverse(dy.begin(), dy.end());
        std::reverse(scale.begin(), scale.end());
    }
    SolutionTrace t;
    t.spec = spec;
    t.lambda = lambda;
    t.samples = SampledFunction(std::move(grid), std::move(y), std::move(dy),
                                default_tail(spec, lambda));
    t.x_switch = run.x_switch;
    t.tail_params.push_back(tail_from(run, 0, 1, run.x.back()));
    if (std::any_of(scale.begin(), scale.end(), [](double v) { return v != 0.0; }))
        t.log_scale = std::move(scale);
    return t;
}

SolutionTrace extend_phase_amplitude(const SolutionTrace& trace, double X_inf, double tol)
{
    if (!trace.spec.is_limit_circle())
        throw BranchError("amplitude/phase extension is invalid on the limit-point branch");
    const SampledFunction& f = trace.samples;
    const bool right = std::abs(f.back()) >= std::abs(f.front());
    const double x_start = right ? f.back() : f.front();
    const double x_end = right ? std::abs(X_inf) : -std::abs(X_inf);
    if (std::abs(x_end) <= std::abs(x_start))
        return trace;

    const std::size_t i0 = right ? f.size() - 1 : 0;
    const cplx y0 = f.values()[i0], dy0 = f.derivatives()[i0];
    IntegrationOptions opts;
    opts.tol = tol;
    opts.phase_amplitude = true;
    const ColumnRun run = integrate_columns(trace.spec, trace.lambda, x_start, x_end,
                                            {{y0.real(), dy0.real()}, {y0.imag(), dy0.imag()}},
                                            opts);
    std::vector<double> grid(f.grid().begin(), f.grid().end());
    std::vector<cplx> y(f.values().begin(), f.values().end());
    std::vector<cplx> dy(f.derivatives().begin(), f.derivatives().end());
    std::vector<double> gx;
    std::vector<cplx> gy, gdy;
    for (std::size_t i = 1; i < run.x.size(); ++i) {
        gx.push_back(run.x[i]);
        gy.emplace_back(run.y[0][i], run.y[1][i]);
        gdy.emplace_back(run.dy[0][i], run.dy[1][i]);
    }
    if (right) {
        grid.insert(grid.end(), gx.begin(), gx.end());
        y.insert(y.end(), gy.begin(), gy.end());
        dy.insert(dy.end(), gdy.begin(), gdy.end());
    } else {
        grid.insert(grid.begin(), gx.rbegin(), gx.rend());
        y.insert(y.begin(), gy.rbegin(), gy.rend());
        dy.insert(dy.begin(), gdy.rbegin(), gdy.rend());
    }
    SolutionTrace out(trace);
    out.samples = SampledFunction(std::move(grid), std::move(y), std::move(dy), f.tail());
    out.x_switch = run.x_switch >= 0 ? run.x_switch : trace.x_switch;
    out.tail_params = {tail_from(run, 0, 1, x_end)};
    return out;
}

FundamentalPair fundamental_pair(const PotentialSpec& spec, double lambda, double X,
                                 const IntegrationOptions& opts)
{
    if (!(X > 0))
        throw Error("half-width of the symmetric grid must be positive");
    IntegrationOptions o = opts;
    o.renormalize = false;
    const ColumnRun run = integrate_columns(spec, lambda, 0.0, X, {{1.0, 0.0}, {0.0, 1.0}}, o);
    const std::size_t h = run.x.size(); // includes x = 0
    const std::size_t ns = 2 * h - 1;
    std::vector<double> grid(ns);
    std::vector<cplx> uy(ns), udy(ns), vy(ns), vdy(ns);
    for (std::size_t i = 0; i < h; ++i) {
        const std::size_t r = h - 1 + i, l = h - 1 - i;
        grid[r] = run.x[i];
        grid[l] = -run.x[i];
        uy[r] = run.y[0][i];
        udy[r] = run.dy[0][i];
        vy[r] = run.y[1][i];
        vdy[r] = run.dy[1][i];
        uy[l] = run.y[0][i];
        udy[l] = -run.dy[0][i];
        vy[l] = -run.y[1][i];
        vdy[l] = run.dy[1][i];
    }
    grid[h - 1] = 0.0;
    const TailModel tail = default_tail(spec, lambda);
    FundamentalPair fp;
    fp.u.spec = fp.v.spec = spec;
    fp.u.lambda = fp.v.lambda = lambda;
    fp.u.x_switch = fp.v.x_switch = run.x_switch;
    fp.u.samples = SampledFunction(grid, std::move(uy), std::move(udy), tail);
    fp.v.samples = SampledFunction(std::move(grid), std::move(vy), std::move(vdy), tail);
    if (run.end_state.size() == 2) {
        TailParams tu{X, run.end_state[0], {}}, tv{X, run.end_state[1], {}};
        fp.u.tail_params = {tu};
        fp.v.tail_params = {tv};
    }
    return fp;
}

SolutionTrace combine(const FundamentalPair& fp, cplx y0, cplx dy0)
{
    SolutionTrace t = fp.u;
    t.samples = combine(y0, fp.u.samples, dy0, fp.v.samples);
    t.tail_params.clear();
    return t;
}

SamplePoint SolutionTrace::eval(double x) const
{
    const auto g = samples.grid();
    if (g.empty())
        throw Error("empty trace");
    const std::size_t exact = samples.find(x);
    auto unscale = [&](std::size_t i, SamplePoint p) {
        if (!log_scale.empty()) {
            const double s = std::exp(log_scale[i]);
            p.y *= s;
            p.dy *= s;
        }
        return p;
    };
    if (exact != SampledFunction::npos)
        return unscale(exact, {samples.values()[exact], samples.derivatives()[exact]});

    auto it = std::lower_bound(g.begin(), g.end(), x);
    std::size_t i;
    if (it == g.begin())
        i = 0;
    else if (it == g.end())
        i = g.size() - 1;
    else {
        const std::size_t hi = static_cast<std::size_t>(it - g.begin());
        i = (x - g[hi - 1] <= g[hi] - x) ? hi - 1 : hi;
    }
    const bool beyond = x < g.front() || x > g.back();
    if (beyond && !spec.is_limit_circle() && samples.tail().kind == TailKind::None)
        return {0.0, 0.0};
    IntegrationOptions o;
    o.tol = 1e-13;
    o.max_phase_step = 0.0;
    o.phase_amplitude = beyond && spec.is_limit_circle();
    const cplx y0 = samples.values()[i], dy0 = samples.derivatives()[i];
    const ColumnRun run = integrate_columns(spec, lambda, g[i], x,
                                            {{y0.real(), dy0.real()}, {y0.imag(), dy0.imag()}}, o);
    const std::size_t last = run.x.size() - 1;
    return unscale(i, {cplx(run.y[0][last], run.y[1][last]), cplx(run.dy[0][last], run.dy[1][last])});
}

double ode_residual(const SampledFunction& f, const PotentialSpec& spec, double lambda, int substeps)
{
    const auto g = f.grid();
    const auto y = f.values();
    const auto dy = f.derivatives();
    auto weight = [&](double x) { return std::sqrt(std::abs(eval_potential(spec, x) - lambda) + 1.0); };
    double global = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double a = weight(g[i]);
        global = std::max(global, std::sqrt(a * std::norm(y[i]) + std::norm(dy[i]) / a));
    }
    if (global == 0.0)
        return 0.0;

    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double H = g[i + 1] - g[i];
        const double a = weight(g[i]);
        const int m = std::max(substeps, static_cast<int>(std::ceil(std::abs(H) * a * 40.0)));
        const double h = H / m;
        cplx u = y[i], du = dy[i];
        double x = g[i];
        auto k = [&](double xx) { return eval_potential(spec, xx) - lambda; };
        for (int s = 0; s < m; ++s) {
            const cplx k1y = du, k1d = k(x) * u;
            const cplx k2y = du + 0.5 * h * k1d, k2d = k(x + 0.5 * h) * (u + 0.5 * h * k1y);
            const cplx k3y = du + 0.5 * h * k2d, k3d = k(x + 0.5 * h) * (u + 0.5 * h * k2y);
            const cplx k4y = du + h * k3d, k4d = k(x + h) * (u + h * k3y);
            u += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            du += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
            x = g[i] + (s + 1) * h;
        }
        const double b = weight(g[i + 1]);
        const double defect = std::sqrt(b * std::norm(u - y[i + 1]) + std::norm(du - dy[i + 1]) / b);
        const double local = std::sqrt(a * std::norm(y[i]) + std::norm(dy[i]) / a);
        worst = std::max(worst, defect / std::max(local, 1e-6 * global));
    }
    return worst;
}

} // namespace ptspec
