#pragma once

#include "ptspec/functionals.hpp"

#include <utility>
#include <variant>

namespace ptspec {

/// alpha1 cos(alpha) - alpha2 sin(alpha) = 0,  beta1 cos(beta) - beta2 sin(beta) = 0.
struct SeparatedBC
{
    double alpha = 0.0;
    double beta = 0.0;
};

/// (beta1, beta2) = e^{i phi} [[a, b], [c, d]] (alpha1, alpha2),  ad - bc = 1.
struct MixedBC
{
    double phi = 0.0;
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;
};

using BoundaryCondition = std::variant<SeparatedBC, MixedBC>;

/// Throws Error when an angle is outside its half-open range or ad - bc != 1.
void validate(const SeparatedBC& bc);
void validate(const MixedBC& bc);
void validate(const BoundaryCondition& bc);

enum class PTReason { AnglesSumZeroOrPi, MatrixFormMatched, Violation };

struct PTVerdict
{
    bool symmetric = false;
    PTReason reason = PTReason::Violation;
};

std::string to_string(PTReason r);

inline constexpr double kAngleSlack = 1e-12;

PTVerdict is_pt_symmetric_separated(const SeparatedBC& bc);
PTVerdict is_pt_symmetric_mixed(const MixedBC& bc);
PTVerdict is_pt_symmetric(const BoundaryCondition& bc);

std::pair<double, double> separated_residual(const BoundaryFunctionals& bf, const SeparatedBC& bc);
double mixed_residual(const BoundaryFunctionals& bf, const MixedBC& bc);
/// Largest residual of the boundary condition.
double bc_residual(const BoundaryFunctionals& bf, const BoundaryCondition& bc);

/// Residual of transform_parity(bf) against bc. bf itself must satisfy bc to tol.
double pt_domain_check(const BoundaryFunctionals& bf, const BoundaryCondition& bc,
                       double tol = 1e-6);

/// Glued function in dom H_{alpha,beta}: left t_l (-cos a, sin a), right t_r (-cos b, sin b).
GluedFunction project_separated(const ReferencePair& ref, const SeparatedBC& bc, cplx t_left,
                                cplx t_right);

/// Glued function in dom H_B with (alpha1, alpha2) = v and (beta1, beta2) = B v.
GluedFunction project_mixed(const ReferencePair& ref, const MixedBC& bc, const CoeffPair& v);

GluedFunction project_domain(const ReferencePair& ref, const BoundaryCondition& bc,
                             const CoeffPair& coeffs);

/// y with functionals (sin a, cos a, sin b, cos b). Its parity image leaves the
/// domain by |sin(a + b)|.
GluedFunction separated_counterexample(const ReferencePair& ref, const SeparatedBC& bc);

/// y with (alpha1, alpha2) = (1, 0) and z with (0, 1), both in dom H_B.
std::pair<GluedFunction, GluedFunction> mixed_counterexamples(const ReferencePair& ref,
                                                              const MixedBC& bc);

} // namespace ptspec
