#include "ptspec/functionals.hpp"

#include <algorithm>
#include <cmath>

namespace ptspec {

BoundaryFunctionals operator+(const BoundaryFunctionals& x, const BoundaryFunctionals& y)
{
    return {x.a1 + y.a1, x.a2 + y.a2, x.b1 + y.b1, x.b2 + y.b2};
}

BoundaryFunctionals operator-(const BoundaryFunctionals& x, const BoundaryFunctionals& y)
{
    return {x.a1 - y.a1, x.a2 - y.a2, x.b1 - y.b1, x.b2 - y.b2};
}

BoundaryFunctionals operator*(cplx c, const BoundaryFunctionals& x)
{
    return {c * x.a1, c * x.a2, c * x.b1, c * x.b2};
}

double max_abs_diff(const BoundaryFunctionals& x, const BoundaryFunctionals& y)
{
    const auto u = x.as_array(), v = y.as_array();
    double m = 0.0;
    for (int i = 0; i < 4; ++i)
        m = std::max(m, std::abs(u[i] - v[i]));
    return m;
}

namespace {

using Vec2 = std::array<cplx, 2>;

// exp(mu T) v for T = [[t, b], [c, -t]] (trace free).
Vec2 apply_exp(double mu, double t, double b, double c, const Vec2& v)
{
    const double s2 = mu * mu * (t * t + b * c);
    double c0, c1;
    if (std::abs(s2) < 1e-12) {
        c0 = 1.0 + s2 / 2;
        c1 = 1.0 + s2 / 6;
    } else if (s2 > 0) {
        const double s = std::sqrt(s2);
        c0 = std::cosh(s);
        c1 = std::sinh(s) / s;
    } else {
        const double s = std::sqrt(-s2);
        c0 = std::cos(s);
        c1 = std::sin(s) / s;
    }
    return {c0 * v[0] + c1 * mu * (t * v[0] + b * v[1]),
            c0 * v[1] + c1 * mu * (c * v[0] - t * v[1])};
}

// int_X^inf (sqrt(x^{2k} + lambda) - x^k) dx, k = 2n+2, by the binomial series.
double phase_excess(double X, int n, double lambda)
{
    const int k = 2 * n + 2;
    const double r = lambda / std::pow(X, 2 * k);
    double coef = 0.5; // binom(1/2, j)
    double term_pow = r; // r^j
    double sum = 0.0;
    for (int j = 1; j < 60; ++j) {
        const double e = (2.0 * j - 1.0) * k - 1.0;
        const double t = coef * term_pow * std::pow(X, k + 1.0) / e;
        sum += t;
        if (std::abs(t) < 1e-17 * std::abs(sum))
            break;
        coef *= (0.5 - j) / (j + 1.0);
        term_pow *= r;
    }
    return sum;
}

// c = (c1, c2) with f = c1 w1 + c2 w2 near s (s > 0 measured outward), extrapolated to
// infinity. w and f data are given in the outward coordinate.
Vec2 limit_coefficients(const SamplePoint& w1, const SamplePoint& w2, const SamplePoint& f,
                        double s, int n, double lambda, double sign)
{
    Vec2 c{-bracket(w2, f), bracket(w1, f)};
    if (lambda == 0.0)
        return c;
    // Tail of int w_a w_b: mean part C_ab S / 2 and oscillatory part B_ab.
    const int k = 2 * n + 2;
    const double p = std::pow(s, k);
    const double kappa = k / (4.0 * s * p);
    const double S = std::pow(s, 1.0 - k) / (k - 1.0);
    auto mean = [&](const SamplePoint& a, const SamplePoint& b) {
        return (p * a.y * b.y + a.dy * b.dy / p + 2 * kappa * (a.y * b.dy + a.dy * b.y)).real();
    };
    auto osc = [&](const SamplePoint& a, const SamplePoint& b) {
        return ((a.y * b.dy + a.dy * b.y) / (4 * p * p)).real();
    };
    const double m11 = mean(w1, w1), m12 = mean(w1, w2), m22 = mean(w2, w2);
    const double o11 = osc(w1, w1), o12 = osc(w1, w2), o22 = osc(w2, w2);
    const double mu = sign * lambda;
    // (I + lambda B) first, then the mean rotation through the exact phase excess
    c = {c[0] + mu * (o12 * c[0] + o22 * c[1]), c[1] + mu * (-o11 * c[0] - o12 * c[1])};
    const double angle_scale = 2.0 * phase_excess(s, n, lambda) / (lambda * S);
    return apply_exp(mu * angle_scale * S / 2, m12, m22, -m11, c);
}

SamplePoint flip(SamplePoint p)
{
    p.dy = -p.dy;
    return p;
}

// Limit of (c1, c2) on one side; right = true for +inf.
Vec2 side_limit(const SampledFunction& f, const ReferencePair& ref, bool right, double tol)
{
    const auto g = f.grid();
    const int n = ref.spec.n;
    const TailModel& tail = f.tail();
    if (tail.kind == TailKind::Growing)
        throw Error("function is not in the maximal domain (growing tail)");
    const double lambda = tail.kind == TailKind::PhaseAmplitude ? tail.lambda : 0.0;
    const double X = right ? f.back() : -f.front();
    if (!(X > 0))
        throw Error("function grid must extend to both sides of the origin");
    const double p = std::sqrt(std::pow(X, 4 * n + 4) + std::abs(lambda));
    const double period = std::acos(-1.0) / p;

    Vec2 sum_a{}, sum_b{};
    int na = 0, nb = 0;
    Vec2 last{}, prev{};
    int count = 0;
    const std::size_t N = g.size();
    for (std::size_t k = 0; k < N; ++k) {
        const std::size_t i = right ? N - 1 - k : k;
        const double s = right ? g[i] : -g[i];
        if (s < X - 2 * period && count >= 2)
            break;
        if (s <= 0)
            break;
        const auto [r1, r2] = eval_reference(ref, g[i]);
        SamplePoint fp{f.values()[i], f.derivatives()[i]};
        SamplePoint w1 = r1, w2 = r2;
        if (!right) {
            w1 = flip(w1);
            w2 = flip(w2);
            fp = flip(fp);
        }
        // the mirrored pair has [w1, w2] = -1, which reverses the drift of c
        Vec2 c = limit_coefficients(w1, w2, fp, s, n, lambda, right ? 1.0 : -1.0);
        if (!right) // brackets in the mirrored coordinate change sign
            c = {-c[0], -c[1]};
        if (count == 0)
            last = c;
        else if (count == 1)
            prev = c;
        ++count;
        if (s >= X - period) {
            sum_a[0] += c[0];
            sum_a[1] += c[1];
            ++na;
        } else if (s >= X - 2 * period) {
            sum_b[0] += c[0];
            sum_b[1] += c[1];
            ++nb;
        }
    }
    if (count == 0)
        throw Error("no samples available for the bracket limit");
    Vec2 mean_a = last, mean_b = count > 1 ? prev : last;
    if (na > 0)
        mean_a = {sum_a[0] / double(na), sum_a[1] / double(na)};
    if (nb > 0)
        mean_b = {sum_b[0] / double(nb), sum_b[1] / double(nb)};
    const double scale = std::max(1.0, std::hypot(std::abs(mean_a[0]), std::abs(mean_a[1])));
    const double resid = std::hypot(std::abs(mean_a[0] - mean_b[0]), std::abs(mean_a[1] - mean_b[1]));
    if (resid > tol * scale)
        throw ConvergenceError("bracket limit did not settle at |x| = " + std::to_string(X), resid);
    return mean_a;
}

} // namespace

BoundaryFunctionals functionals(const SampledFunction& f, const ReferencePair& ref, double tol)
{
    if (f.empty())
        throw MalformedSample("empty function");
    const Vec2 cl = side_limit(f, ref, false, tol);
    const Vec2 cr = side_limit(f, ref, true, tol);
    // [w1, f] = c2 and [w2, f] = -c1 since [w1, w2] = 1
    return {cl[1], -cl[0], cr[1], -cr[0]};
}

BoundaryFunctionals transform_parity(const BoundaryFunctionals& bf)
{
    return {bf.b1, -bf.b2, bf.a1, -bf.a2};
}

BoundaryFunctionals transform_time_reversal(const BoundaryFunctionals& bf)
{
    return {std::conj(bf.b1), -std::conj(bf.b2), std::conj(bf.a1), -std::conj(bf.a2)};
}

BoundaryFunctionals GluedFunction::predicted() const
{
    return {left[1], -left[0], right[1], -right[0]};
}

GluedFunction build_glued(const ReferencePair& ref, const CoeffPair& left, const CoeffPair& right)
{
    GluedFunction out;
    out.left = left;
    out.right = right;
    const double half = out.blend_width / 2;

    // reference abscissae plus a fine uniform mesh across the blend
    std::vector<double> pos;
    for (double x : ref.w1.samples.grid())
        if (x > 0)
            pos.push_back(x);
    const int fine = 100;
    for (int k = 1; k <= fine; ++k)
        pos.push_back(half * k / fine);
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());

    const std::size_t h = pos.size();
    std::vector<double> grid(2 * h + 1);
    std::vector<SamplePoint> w1(2 * h + 1), w2(2 * h + 1);
    grid[h] = 0.0;
    w1[h] = {0.0, 1.0};
    w2[h] = {-1.0, 0.0};
    for (std::size_t i = 0; i < h; ++i) {
        const auto [a, b] = eval_reference(ref, pos[i]);
        grid[h + 1 + i] = pos[i];
        grid[h - 1 - i] = -pos[i];
        w1[h + 1 + i] = a;
        w2[h + 1 + i] = b;
        w1[h - 1 - i] = {-a.y, a.dy};
        w2[h - 1 - i] = {b.y, -b.dy};
    }

    std::vector<cplx> y(grid.size()), dy(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        const cplx L = left[0] * w1[i].y + left[1] * w2[i].y;
        const cplx dL = left[0] * w1[i].dy + left[1] * w2[i].dy;
        const cplx R = right[0] * w1[i].y + right[1] * w2[i].y;
        const cplx dR = right[0] * w1[i].dy + right[1] * w2[i].dy;
        double s = 0.0, ds = 0.0;
        if (x >= half) {
            s = 1.0;
        } else if (x > -half) {
            const double t = (x + half) / out.blend_width;
            s = t * t * t * (10 - 15 * t + 6 * t * t);
            ds = 30 * t * t * (1 - t) * (1 - t) / out.blend_width;
        }
        y[i] = L + s * (R - L);
        dy[i] = dL + s * (dR - dL) + ds * (R - L);
    }
    out.samples = SampledFunction(std::move(grid), std::move(y), std::move(dy),
                                  {TailKind::PhaseAmplitude, ref.spec.n, 0.0});
    return out;
}

} // namespace ptspec
