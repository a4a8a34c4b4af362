#pragma once

#include "ptspec/extensions.hpp"

#include <Eigen/Dense>

namespace ptspec {

enum class KreinSign { PositiveType, NegativeType, Indefinite };
enum class Parity { Even, Odd, Mixed };

std::string to_string(KreinSign s);
std::string to_string(Parity p);

struct EigenRecord
{
    double lambda = 0.0;
    int multiplicity = 1;
    KreinSign krein_sign = KreinSign::PositiveType;
    Parity parity = Parity::Mixed;
    double det_residual = 0.0;
    double ode_residual = 0.0;
    double bc_residual = 0.0;
    /// Boundary residual of the parity image (limit circle only).
    double parity_residual = 0.0;
    /// Root could not be separated from a neighbour.
    bool flagged = false;
    std::vector<SampledFunction> eigenfunctions; // L2-normalized
};

struct LimitPointResult
{
    std::vector<EigenRecord> records;
    bool truncated = false;
};

/// The k_max smallest eigenvalues of -y'' + x^{4n+2} y by parity-split shooting.
LimitPointResult solve_limit_point(const PotentialSpec& spec, int k_max, double tol = 1e-10);

/// Normalized Wronskian mismatch at the matching point for one parity.
double limit_point_miss(const PotentialSpec& spec, double lambda, bool even);

struct CharacteristicMatrix
{
    Eigen::Matrix2cd m_alpha; // [[a1(u), a1(v)], [a2(u), a2(v)]]
    Eigen::Matrix2cd m_beta;
    double lambda = 0.0;
};

/// Functionals of the fundamental system u, v at lambda.
CharacteristicMatrix characteristic_matrix(const PotentialSpec& spec, const ReferencePair& ref,
                                           double lambda, double tol = 1e-8);

/// Separated: the real 2x2 determinant of the stacked condition rows.
/// Mixed: Re(e^{-i phi} det(m_beta - e^{i phi} B m_alpha)), real because both
/// characteristic blocks have unit determinant.
double characteristic_determinant(const CharacteristicMatrix& m, const BoundaryCondition& bc);

/// Condition matrix whose null space gives the eigenfunction coefficients in (u, v).
Eigen::Matrix2cd condition_matrix(const CharacteristicMatrix& m, const BoundaryCondition& bc);

struct LimitCircleOptions
{
    double tol = 1e-10;          // root tolerance in lambda
    double functional_tol = 1e-8;
    double min_step = 0.05;
    int threads = 0;             // 0: hardware concurrency
};

std::vector<EigenRecord> solve_limit_circle(const PotentialSpec& spec, const ReferencePair& ref,
                                            const BoundaryCondition& bc, double lo, double hi,
                                            const LimitCircleOptions& opts = {});

/// Sign type from the indefinite inner product; multiplicity 2 is re-based
/// into even and odd eigenfunctions.
EigenRecord classify_krein(EigenRecord record, double tol = 1e-8);

Parity parity_of(const SampledFunction& f, double tol = 1e-6);

/// Partial sums of |lambda|^{-2} over records sorted by |lambda|, zero excluded.
std::vector<double> weyl_partial_sums(const std::vector<EigenRecord>& records);

} // namespace ptspec
