#pragma once

#include "ptspec/reference.hpp"

#include <array>

namespace ptspec {

/// (alpha1, alpha2, beta1, beta2) = ([w1,f], [w2,f]) at -inf and +inf.
struct BoundaryFunctionals
{
    cplx a1, a2, b1, b2;

    std::array<cplx, 4> as_array() const { return {a1, a2, b1, b2}; }
};

BoundaryFunctionals operator+(const BoundaryFunctionals& x, const BoundaryFunctionals& y);
BoundaryFunctionals operator-(const BoundaryFunctionals& x, const BoundaryFunctionals& y);
BoundaryFunctionals operator*(cplx c, const BoundaryFunctionals& x);
double max_abs_diff(const BoundaryFunctionals& x, const BoundaryFunctionals& y);

/// Limits of the reference brackets of f.
///
/// Brackets are taken at the outermost samples of f, pushed to infinity with the
/// Liouville-Green tail of the reference pair when f solves tau(f) = lambda f
/// there, and averaged over the last two local oscillation periods. The two
/// period means must agree to tol (relative to the size of the result).
BoundaryFunctionals functionals(const SampledFunction& f, const ReferencePair& ref,
                                double tol = 1e-8);

BoundaryFunctionals transform_parity(const BoundaryFunctionals& bf);
BoundaryFunctionals transform_time_reversal(const BoundaryFunctionals& bf);

using CoeffPair = std::array<cplx, 2>;

/// c_l1 w1 + c_l2 w2 for x <= -1, c_r1 w1 + c_r2 w2 for x >= 1, quintic blend between.
struct GluedFunction
{
    CoeffPair left{};
    CoeffPair right{};
    double blend_width = 2.0;
    SampledFunction samples;

    /// (c_l2, -c_l1, c_r2, -c_r1)
    BoundaryFunctionals predicted() const;
};

GluedFunction build_glued(const ReferencePair& ref, const CoeffPair& left, const CoeffPair& right);

} // namespace ptspec
