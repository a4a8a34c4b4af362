#pragma once

#include "ptspec/potential.hpp"

#include <array>
#include <vector>

namespace ptspec {

struct FDConfig
{
    double L = 0.0; // half-width; 0 picks one from the requested eigenvalues
    int N = 4000;   // interior grid points
    bool extrapolate = true;
    bool harmonic = false; // replace the potential by x^2 (sanity mode)
};

/// Smallest k_max Dirichlet eigenvalues of the second-order difference operator on [-L, L].
std::vector<double> fd_spectrum_limit_point(const PotentialSpec& spec, const FDConfig& cfg, int k_max);

/// Half-width used when FDConfig::L is zero.
double fd_default_half_width(const PotentialSpec& spec, int k_max, bool harmonic = false);

struct NonClosednessReport
{
    int n = 1;
    std::vector<int> k_values;
    std::vector<double> dist_y;   // ||y_k - y||_2
    std::vector<double> dist_tau; // ||tau(y_k) - tau(y)||_2
    double tau_y_norm = 0.0;      // ||tau(y)||_2
    std::vector<double> alpha;       // C1-matched coefficient actually used
    std::vector<double> alpha_printed; // (4n+5-k) k^{-4n-6} e^k, the opposite sign
    bool coefficient_discrepancy = false;
};

/// C2 bridge on [-1, 1] shared by y_k and y: quintic coefficients c_0..c_5.
std::array<double, 6> nonclosed_bridge(int n);

/// y_k (k > 0) or the limit y (k = 0) with its second derivative.
struct BridgeValue
{
    double y, d2y;
};
BridgeValue nonclosed_function(int n, int k, double x);

NonClosednessReport nonclosedness_demo(int n, const std::vector<int>& k_values);

} // namespace ptspec
