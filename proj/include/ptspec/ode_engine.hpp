#pragma once

#include "ptspec/potential.hpp"

#include <vector>

namespace ptspec {

/// A growing solution left the representable range.
class OverflowError : public Error
{
public:
    OverflowError(const std::string& what, double abscissa) : Error(what), abscissa_(abscissa) {}
    double abscissa() const { return abscissa_; }

private:
    double abscissa_;
};

struct IntegrationOptions
{
    double tol = 1e-11;
    /// Continue in amplitude/phase variables once |x| passes x_switch (limit circle only).
    bool phase_amplitude = false;
    /// Cap on h * sqrt(|q - lambda| + 1) so that stored samples resolve the oscillation.
    /// Zero disables the cap.
    double max_phase_step = 0.3;
    /// The cap only applies where |x| >= dense_from.
    double dense_from = 0.0;
    /// Rescale by 1e-100 instead of failing when |y| exceeds 1e100.
    bool renormalize = false;
};

/// Modified Pruefer variables of one real solution:
///   y = rho p^{-1/2} sin(theta),  y' = rho p^{1/2} cos(theta),  p = sqrt(x^{4n+4} + lambda).
struct PhaseState
{
    double theta = 0.0;
    double log_rho = 0.0;
    bool zero = true;
};

/// Amplitude/phase state of the real and imaginary parts at an abscissa.
struct TailParams
{
    double x = 0.0;
    PhaseState re;
    PhaseState im;
};

/// A solution of -y'' + q y = lambda y.
struct SolutionTrace
{
    PotentialSpec spec;
    double lambda = 0.0;
    SampledFunction samples;
    /// Abscissa magnitude where amplitude/phase stepping began, negative if never.
    double x_switch = -1.0;
    /// State at the outermost abscissae (one entry per integrated side).
    std::vector<TailParams> tail_params;
    /// Natural-log scale per sample when renormalization was used, else empty.
    std::vector<double> log_scale;

    /// Value and derivative at x, re-integrated from the nearest stored sample.
    SamplePoint eval(double x) const;
};

struct FundamentalPair
{
    SolutionTrace u; // u(0) = 1, u'(0) = 0, even
    SolutionTrace v; // v(0) = 0, v'(0) = 1, odd
};

double phase_momentum(int n, double lambda, double x);

/// Smallest x with x^{4n+4} >= 100 max(1, |lambda|).
double x_switch(const PotentialSpec& spec, double lambda);

PhaseState to_phase(double y, double dy, double p);

SolutionTrace integrate_ivp(const PotentialSpec& spec, double lambda, double x0, cplx y0, cplx dy0,
                            double x_end, const IntegrationOptions& opts = {});

/// Continues a limit-circle trace from its outer end to |x| = X_inf in
/// amplitude/phase variables.
SolutionTrace extend_phase_amplitude(const SolutionTrace& trace, double X_inf, double tol);

/// Fundamental system on [0, X] reflected to a symmetric grid on [-X, X].
FundamentalPair fundamental_pair(const PotentialSpec& spec, double lambda, double X,
                                 const IntegrationOptions& opts);

/// y0 u + dy0 v on the shared symmetric grid.
SolutionTrace combine(const FundamentalPair& fp, cplx y0, cplx dy0);

inline cplx bracket(const SamplePoint& f, const SamplePoint& g)
{
    return std::conj(f.y) * g.dy - std::conj(f.dy) * g.y;
}

inline SamplePoint evaluate(const SampledFunction& f, double x) { return f.at(x); }
inline SamplePoint evaluate(const SolutionTrace& t, double x) { return t.eval(x); }

/// [f, g]_x = conj(f(x)) g'(x) - conj(f'(x)) g(x)
template <class F, class G>
cplx bracket(const F& f, const G& g, double x)
{
    return bracket(evaluate(f, x), evaluate(g, x));
}

/// Largest relative defect between consecutive samples when each sample is
/// propagated to the next with an independent fixed-step RK4.
double ode_residual(const SampledFunction& f, const PotentialSpec& spec, double lambda,
                    int substeps = 32);

} // namespace ptspec
