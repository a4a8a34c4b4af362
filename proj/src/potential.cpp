#include "ptspec/potential.hpp"

#include <algorithm>
#include <cmath>

namespace ptspec {

PotentialSpec PotentialSpec::limit_point(int n)
{
    if (n < 1)
        throw Error("potential index n must be >= 1");
    return {n, Branch::LimitPoint};
}

PotentialSpec PotentialSpec::limit_circle(int n)
{
    if (n < 1)
        throw Error("potential index n must be >= 1");
    return {n, Branch::LimitCircle};
}

std::string to_string(Branch b)
{
    return b == Branch::LimitPoint ? "limit_point" : "limit_circle";
}

double eval_potential(const PotentialSpec& spec, double x)
{
    const double v = std::pow(x, spec.power());
    return spec.branch == Branch::LimitPoint ? v : -v;
}

double eval_potential_derivative(const PotentialSpec& spec, double x)
{
    const int k = spec.power();
    const double v = k * std::pow(x, k - 1);
    return spec.branch == Branch::LimitPoint ? v : -v;
}

SampledFunction::SampledFunction(std::vector<double> grid, std::vector<cplx> y,
                                 std::vector<cplx> dy, TailModel tail)
    : grid_(std::move(grid)), y_(std::move(y)), dy_(std::move(dy)), tail_(tail)
{
    if (grid_.size() != y_.size() || grid_.size() != dy_.size())
        throw MalformedSample("sample arrays differ in length");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (!std::isfinite(grid_[i]) || !std::isfinite(y_[i].real()) ||
            !std::isfinite(y_[i].imag()) || !std::isfinite(dy_[i].real()) ||
            !std::isfinite(dy_[i].imag()))
            throw MalformedSample("non-finite sample at index " + std::to_string(i));
        if (i > 0 && !(grid_[i] > grid_[i - 1]))
            throw MalformedSample("grid not strictly increasing at index " + std::to_string(i));
    }
}

bool SampledFunction::is_symmetric() const
{
    const std::size_t n = grid_.size();
    for (std::size_t i = 0; i < n; ++i)
        if (grid_[i] != -grid_[n - 1 - i])
            return false;
    return true;
}

std::size_t SampledFunction::find(double x) const
{
    auto it = std::lower_bound(grid_.begin(), grid_.end(), x);
    if (it == grid_.end() || *it != x)
        return npos;
    return static_cast<std::size_t>(it - grid_.begin());
}

SamplePoint SampledFunction::at(double x) const
{
    if (grid_.empty() || x < grid_.front() || x > grid_.back())
        throw Error("abscissa " + std::to_string(x) + " outside sampled range");
    auto it = std::lower_bound(grid_.begin(), grid_.end(), x);
    std::size_t i1 = static_cast<std::size_t>(it - grid_.begin());
    if (grid_[i1] == x)
        return {y_[i1], dy_[i1]};
    const std::size_t i0 = i1 - 1;
    const double h = grid_[i1] - grid_[i0];
    const double t = (x - grid_[i0]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    const double d00 = 6 * t2 - 6 * t, d10 = 3 * t2 - 4 * t + 1;
    const double d01 = -6 * t2 + 6 * t, d11 = 3 * t2 - 2 * t;
    SamplePoint p;
    p.y = h00 * y_[i0] + h10 * h * dy_[i0] + h01 * y_[i1] + h11 * h * dy_[i1];
    p.dy = (d00 * y_[i0] + d10 * h * dy_[i0] + d01 * y_[i1] + d11 * h * dy_[i1]) / h;
    return p;
}

SampledFunction SampledFunction::scaled(cplx c) const
{
    std::vector<cplx> y(y_), dy(dy_);
    for (auto& v : y)
        v *= c;
    for (auto& v : dy)
        v *= c;
    return {grid_, std::move(y), std::move(dy), tail_};
}

SampledFunction SampledFunction::with_tail(TailModel tail) const
{
    SampledFunction out(*this);
    out.tail_ = tail;
    return out;
}

SampledFunction combine(cplx a, const SampledFunction& f, cplx b, const SampledFunction& g)
{
    if (!std::equal(f.grid().begin(), f.grid().end(), g.grid().begin(), g.grid().end()))
        throw MalformedSample("combine requires a shared grid");
    std::vector<cplx> y(f.size()), dy(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        y[i] = a * f.values()[i] + b * g.values()[i];
        dy[i] = a * f.derivatives()[i] + b * g.derivatives()[i];
    }
    TailModel tail = f.tail();
    if (tail.kind == TailKind::None || tail.kind == TailKind::Decaying)
        tail = g.tail();
    return {{f.grid().begin(), f.grid().end()}, std::move(y), std::move(dy), tail};
}

SampledFunction resample(const SampledFunction& f, std::span<const double> grid)
{
    std::vector<cplx> y(grid.size()), dy(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const SamplePoint p = f.at(grid[i]);
        y[i] = p.y;
        dy[i] = p.dy;
    }
    return {{grid.begin(), grid.end()}, std::move(y), std::move(dy), f.tail()};
}

SampledFunction apply_parity(const SampledFunction& f)
{
    if (!f.is_symmetric())
        throw MalformedSample("parity requires a grid symmetric about zero");
    const std::size_t n = f.size();
    std::vector<cplx> y(n), dy(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = f.values()[n - 1 - i];
        dy[i] = -f.derivatives()[n - 1 - i];
    }
    return {{f.grid().begin(), f.grid().end()}, std::move(y), std::move(dy), f.tail()};
}

SampledFunction apply_time_reversal(const SampledFunction& f)
{
    const std::size_t n = f.size();
    std::vector<cplx> y(n), dy(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = std::conj(f.values()[i]);
        dy[i] = std::conj(f.derivatives()[i]);
    }
    return {{f.grid().begin(), f.grid().end()}, std::move(y), std::move(dy), f.tail()};
}

cplx lg_tail_product(cplx fa, cplx dfa, cplx fb, cplx dfb, double X, int n, double lambda)
{
    const int m = 2 * n + 1;
    const double q = std::pow(X, 4 * n + 4);
    const double p = std::sqrt(q + lambda);
    const double dp = (2 * n + 2) * q / X / p;
    const double kappa = dp / (4 * p * p);
    const cplx cross = fa * dfb + dfa * fb;
    const cplx mean = p * fa * fb + dfa * dfb / p + 2.0 * kappa * cross;
    // int_X^inf dx / sqrt(x^{4n+4} + lambda), two-term expansion in lambda x^{-(4n+4)}
    const double s = std::pow(X, -m) / m - 0.5 * lambda * std::pow(X, -(3 * m + 2)) / (3 * m + 2) +
                     0.375 * lambda * lambda * std::pow(X, -(5 * m + 4)) / (5 * m + 4);
    return 0.5 * mean * s + cross / (4 * p * p);
}

cplx integrate_product(std::span<const double> grid, std::span<const cplx> f,
                       std::span<const cplx> df, std::span<const cplx> g, std::span<const cplx> dg)
{
    cplx sum = 0;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double h = grid[i + 1] - grid[i];
        const cplx F0 = f[i] * g[i], F1 = f[i + 1] * g[i + 1];
        const cplx D0 = df[i] * g[i] + f[i] * dg[i];
        const cplx D1 = df[i + 1] * g[i + 1] + f[i + 1] * dg[i + 1];
        sum += 0.5 * h * (F0 + F1) + h * h / 12.0 * (D0 - D1);
    }
    return sum;
}

namespace {

bool shares_grid(const SampledFunction& f, const SampledFunction& g)
{
    return std::equal(f.grid().begin(), f.grid().end(), g.grid().begin(), g.grid().end());
}

void require_integrable(const TailModel& t)
{
    if (t.kind == TailKind::Growing)
        throw Error("tail is not square integrable");
}

// Tail contributions of int f h for two functions sampled on the same grid.
cplx tail_pair(const SampledFunction& f, std::span<const cplx> h, std::span<const cplx> dh,
               const TailModel& htail)
{
    require_integrable(f.tail());
    require_integrable(htail);
    if (f.tail().kind != TailKind::PhaseAmplitude || htail.kind != TailKind::PhaseAmplitude)
        return 0.0;
    const std::size_t last = f.size() - 1;
    const int n = f.tail().n;
    const double lambda = f.tail().lambda;
    cplx sum = 0;
    const double xr = f.back();
    if (xr > 0)
        sum += lg_tail_product(f.values()[last], f.derivatives()[last], h[last], dh[last], xr, n,
                               lambda);
    const double xl = f.front();
    if (xl < 0)
        sum += lg_tail_product(f.values()[0], -f.derivatives()[0], h[0], -dh[0], -xl, n, lambda);
    return sum;
}

} // namespace

cplx l2_inner(const SampledFunction& f, const SampledFunction& g)
{
    const SampledFunction gg = shares_grid(f, g) ? g : resample(g, f.grid());
    std::vector<cplx> h(f.size()), dh(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        h[i] = std::conj(gg.values()[i]);
        dh[i] = std::conj(gg.derivatives()[i]);
    }
    return integrate_product(f.grid(), f.values(), f.derivatives(), h, dh) +
           tail_pair(f, h, dh, gg.tail());
}

double l2_norm(const SampledFunction& f)
{
    return std::sqrt(std::max(0.0, l2_inner(f, f).real()));
}

cplx krein_inner(const SampledFunction& f, const SampledFunction& g)
{
    if (!f.is_symmetric())
        throw MalformedSample("indefinite inner product requires a symmetric grid");
    const SampledFunction gg = shares_grid(f, g) ? g : resample(g, f.grid());
    const std::size_t n = f.size();
    std::vector<cplx> h(n), dh(n);
    for (std::size_t i = 0; i < n; ++i) {
        h[i] = std::conj(gg.values()[n - 1 - i]);
        dh[i] = -std::conj(gg.derivatives()[n - 1 - i]);
    }
    return integrate_product(f.grid(), f.values(), f.derivatives(), h, dh) +
           tail_pair(f, h, dh, gg.tail());
}

} // namespace ptspec
