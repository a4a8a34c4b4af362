#pragma once

#include "ptspec/ode_engine.hpp"

#include <memory>
#include <string>

namespace ptspec {

/// Real solutions of tau(y) = 0 on the limit-circle branch with
/// w1 odd, w2 even and [w1, w2] = 1.
struct ReferencePair
{
    SolutionTrace w1; // w1(0) = 0,  w1'(0) = 1
    SolutionTrace w2; // w2(0) = -1, w2'(0) = 0
    PotentialSpec spec;
    double X_inf = 0.0;
    double tol = 0.0;
};

/// Half-width of the stored reference grid for a given n.
double reference_extent(int n);

ReferencePair build_reference_pair(const PotentialSpec& spec, double tol, double X_inf = 0.0);

/// Shared, immutable pair for (n, tol). Built on first use.
std::shared_ptr<const ReferencePair> cached_reference_pair(const PotentialSpec& spec, double tol);
void clear_reference_cache();

/// Both reference solutions at x from a single short re-integration.
std::pair<SamplePoint, SamplePoint> eval_reference(const ReferencePair& ref, double x);

/// int_a^inf |y|^2 dx: quadrature to the end of the grid plus the Liouville-Green tail.
double l2_norm_tail(const SolutionTrace& trace, double a);

void save_reference(const ReferencePair& ref, const std::string& path);
ReferencePair load_reference(const std::string& path);

} // namespace ptspec
