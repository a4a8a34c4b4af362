#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ptspec {

using cplx = std::complex<double>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// A sampled function violates a structural precondition (grid shape, finiteness).
class MalformedSample : public Error
{
public:
    using Error::Error;
};

/// An operation was requested on the wrong potential branch.
class BranchError : public Error
{
public:
    using Error::Error;
};

/// A limit (bracket at infinity, root, quadrature tail) failed to converge.
class ConvergenceError : public Error
{
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what), residual_(residual)
    {
    }
    double residual() const { return residual_; }

private:
    double residual_;
};

enum class Branch { LimitPoint, LimitCircle };

/// Selects one member of the even-epsilon family:
///   LimitPoint:  -y'' + x^{4n+2} y   (epsilon = 4n)
///   LimitCircle: -y'' - x^{4n+4} y   (epsilon = 4n+2)
struct PotentialSpec
{
    int n = 1;
    Branch branch = Branch::LimitPoint;

    static PotentialSpec limit_point(int n);
    static PotentialSpec limit_circle(int n);

    int epsilon() const { return branch == Branch::LimitPoint ? 4 * n : 4 * n + 2; }
    /// Power of |x| appearing in the potential.
    int power() const { return branch == Branch::LimitPoint ? 4 * n + 2 : 4 * n + 4; }
    bool is_limit_circle() const { return branch == Branch::LimitCircle; }
};

std::string to_string(Branch b);

double eval_potential(const PotentialSpec& spec, double x);
double eval_potential_derivative(const PotentialSpec& spec, double x);

/// How a sampled function continues beyond the outermost abscissae.
enum class TailKind {
    None,           // identically zero outside the grid
    Decaying,       // exponentially small, neglected
    PhaseAmplitude, // Liouville-Green oscillation of a limit-circle solution
    Growing         // not square integrable
};

struct TailModel
{
    TailKind kind = TailKind::None;
    int n = 0;          // limit-circle index, PhaseAmplitude only
    double lambda = 0.; // spectral parameter of the tail solution
};

struct SamplePoint
{
    cplx y;
    cplx dy;
};

/// Values and derivatives of a function on a strictly increasing grid.
///
/// Functions living on the whole line use a grid that is symmetric about zero
/// to exact floating-point equality, so that parity is a rearrangement of
/// samples and never an interpolation.
class SampledFunction
{
public:
    SampledFunction() = default;
    SampledFunction(std::vector<double> grid, std::vector<cplx> y, std::vector<cplx> dy,
                    TailModel tail = {});

    std::span<const double> grid() const { return grid_; }
    std::span<const cplx> values() const { return y_; }
    std::span<const cplx> derivatives() const { return dy_; }
    const TailModel& tail() const { return tail_; }
    std::size_t size() const { return grid_.size(); }
    bool empty() const { return grid_.empty(); }

    double front() const { return grid_.front(); }
    double back() const { return grid_.back(); }

    bool is_symmetric() const;

    /// Index of an exact abscissa, or npos.
    std::size_t find(double x) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    /// Exact at abscissae, cubic Hermite in between. Throws outside the grid.
    SamplePoint at(double x) const;

    SampledFunction scaled(cplx c) const;
    SampledFunction with_tail(TailModel tail) const;

private:
    std::vector<double> grid_;
    std::vector<cplx> y_;
    std::vector<cplx> dy_;
    TailModel tail_;
};

/// Pointwise linear combination a*f + b*g on a shared grid.
SampledFunction combine(cplx a, const SampledFunction& f, cplx b, const SampledFunction& g);

/// Resample onto the given grid with cubic Hermite interpolation.
SampledFunction resample(const SampledFunction& f, std::span<const double> grid);

SampledFunction apply_parity(const SampledFunction& f);
SampledFunction apply_time_reversal(const SampledFunction& f);

/// Integral of f(x) g(x) over [X, inf) for two Liouville-Green solutions of
/// y'' + (x^{4n+4} + lambda) y = 0 given their values and derivatives at X > 0.
/// Mean part from the near-identity averaged amplitude invariant plus the
/// leading oscillatory boundary term.
cplx lg_tail_product(cplx fa, cplx dfa, cplx fb, cplx dfb, double X, int n, double lambda);

/// int f(x) g(x) dx over the grid, Hermite-corrected trapezoid.
cplx integrate_product(std::span<const double> grid, std::span<const cplx> f,
                       std::span<const cplx> df, std::span<const cplx> g, std::span<const cplx> dg);

/// Hilbert-space inner product (f, g) = int f conj(g), tails included.
cplx l2_inner(const SampledFunction& f, const SampledFunction& g);
double l2_norm(const SampledFunction& f);

/// Indefinite inner product [f, g] = int f(x) conj(g(-x)) dx, tails included.
cplx krein_inner(const SampledFunction& f, const SampledFunction& g);

} // namespace ptspec
