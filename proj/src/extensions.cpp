#include "ptspec/extensions.hpp"

#include <cmath>

namespace ptspec {

namespace {

const double kPi = std::acos(-1.0);

std::array<cplx, 2> apply_b(const MixedBC& bc, cplx x1, cplx x2)
{
    const cplx e = std::polar(1.0, bc.phi);
    return {e * (bc.a * x1 + bc.b * x2), e * (bc.c * x1 + bc.d * x2)};
}

double scale_of(const BoundaryFunctionals& bf)
{
    double m = 1.0;
    for (const cplx& v : bf.as_array())
        m = std::max(m, std::abs(v));
    return m;
}

} // namespace

void validate(const SeparatedBC& bc)
{
    auto ok = [](double a) { return std::isfinite(a) && a >= 0.0 && a < kPi; };
    if (!ok(bc.alpha) || !ok(bc.beta))
        throw Error("separated angles must lie in [0, pi)");
}

void validate(const MixedBC& bc)
{
    if (!std::isfinite(bc.phi) || bc.phi < 0.0 || bc.phi >= 2 * kPi)
        throw Error("phi must lie in [0, 2 pi)");
    if (!std::isfinite(bc.a) || !std::isfinite(bc.b) || !std::isfinite(bc.c) || !std::isfinite(bc.d))
        throw Error("matrix entries must be finite");
    if (std::abs(bc.a * bc.d - bc.b * bc.c - 1.0) > kAngleSlack)
        throw Error("mixed boundary matrix must satisfy ad - bc = 1");
}

void validate(const BoundaryCondition& bc)
{
    std::visit([](const auto& v) { validate(v); }, bc);
}

std::string to_string(PTReason r)
{
    switch (r) {
    case PTReason::AnglesSumZeroOrPi:
        return "angles_sum_zero_or_pi";
    case PTReason::MatrixFormMatched:
        return "matrix_form_matched";
    default:
        return "violation";
    }
}

PTVerdict is_pt_symmetric_separated(const SeparatedBC& bc)
{
    validate(bc);
    const double s = bc.alpha + bc.beta;
    if (std::abs(s) <= kAngleSlack || std::abs(s - kPi) <= kAngleSlack)
        return {true, PTReason::AnglesSumZeroOrPi};
    return {false, PTReason::Violation};
}

PTVerdict is_pt_symmetric_mixed(const MixedBC& bc)
{
    validate(bc);
    const bool real_phase = std::abs(bc.phi) <= kAngleSlack || std::abs(bc.phi - kPi) <= kAngleSlack ||
                            std::abs(bc.phi - 2 * kPi) <= kAngleSlack;
    if (real_phase && std::abs(bc.a - bc.d) <= kAngleSlack)
        return {true, PTReason::MatrixFormMatched};
    return {false, PTReason::Violation};
}

PTVerdict is_pt_symmetric(const BoundaryCondition& bc)
{
    if (const auto* s = std::get_if<SeparatedBC>(&bc))
        return is_pt_symmetric_separated(*s);
    return is_pt_symmetric_mixed(std::get<MixedBC>(bc));
}

std::pair<double, double> separated_residual(const BoundaryFunctionals& bf, const SeparatedBC& bc)
{
    return {std::abs(bf.a1 * std::cos(bc.alpha) - bf.a2 * std::sin(bc.alpha)),
            std::abs(bf.b1 * std::cos(bc.beta) - bf.b2 * std::sin(bc.beta))};
}

double mixed_residual(const BoundaryFunctionals& bf, const MixedBC& bc)
{
    const auto r = apply_b(bc, bf.a1, bf.a2);
    return std::hypot(std::abs(bf.b1 - r[0]), std::abs(bf.b2 - r[1]));
}

double bc_residual(const BoundaryFunctionals& bf, const BoundaryCondition& bc)
{
    if (const auto* s = std::get_if<SeparatedBC>(&bc)) {
        const auto [l, r] = separated_residual(bf, *s);
        return std::max(l, r);
    }
    return mixed_residual(bf, std::get<MixedBC>(bc));
}

double pt_domain_check(const BoundaryFunctionals& bf, const BoundaryCondition& bc, double tol)
{
    validate(bc);
    const double own = bc_residual(bf, bc);
    if (own > tol * scale_of(bf))
        throw Error("function is not in the domain (residual " + std::to_string(own) + ")");
    return bc_residual(transform_parity(bf), bc);
}

GluedFunction project_separated(const ReferencePair& ref, const SeparatedBC& bc, cplx t_left,
                                cplx t_right)
{
    validate(bc);
    return build_glued(ref, {-t_left * std::cos(bc.alpha), t_left * std::sin(bc.alpha)},
                       {-t_right * std::cos(bc.beta), t_right * std::sin(bc.beta)});
}

GluedFunction project_mixed(const ReferencePair& ref, const MixedBC& bc, const CoeffPair& v)
{
    validate(bc);
    const auto w = apply_b(bc, v[0], v[1]);
    return build_glued(ref, {-v[1], v[0]}, {-w[1], w[0]});
}

GluedFunction project_domain(const ReferencePair& ref, const BoundaryCondition& bc,
                             const CoeffPair& coeffs)
{
    if (const auto* s = std::get_if<SeparatedBC>(&bc))
        return project_separated(ref, *s, coeffs[0], coeffs[1]);
    return project_mixed(ref, std::get<MixedBC>(bc), coeffs);
}

GluedFunction separated_counterexample(const ReferencePair& ref, const SeparatedBC& bc)
{
    return project_separated(ref, bc, 1.0, 1.0);
}

std::pair<GluedFunction, GluedFunction> mixed_counterexamples(const ReferencePair& ref,
                                                              const MixedBC& bc)
{
    return {project_mixed(ref, bc, {1.0, 0.0}), project_mixed(ref, bc, {0.0, 1.0})};
}

} // namespace ptspec
