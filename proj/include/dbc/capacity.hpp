#pragma once

#include "dbc/channel.hpp"
#include "dbc/fstar.hpp"
#include "dbc/hull.hpp"

namespace dbc {

struct BoundarySample {
    double lambda = 0;
    Vec q;
    double r1 = 0, r2 = 0;
    TransmissionStrategy strategy;
};

struct RegionBoundary {
    std::vector<BoundarySample> samples; // sorted by lambda
};

struct WeightedRate {
    double r1 = 0, r2 = 0;
    double objective = 0; // R2 + lambda R1 = H(Z) - lambda H(Y|X) - psi
    TransmissionStrategy strategy;
};

// Rates of the envelope witness at (q, lambda):
// R1 = H(Y|U) - H(Y|X), R2 = H(Z) - H(Z|U).
WeightedRate max_weighted_rate(const DbcModel& model, std::span<const double> q,
                               double lambda, const SimplexGrid& grid);

// For each lambda in a uniform [0,1] grid, maximizes
// H(Z) - lambda H(Y|X) - psi(q, lambda) over the q grid (with golden-section
// refinement between neighbouring grid points when k = 2; the objective is
// concave in q) and emits one boundary sample. Parallel over lambda.
RegionBoundary trace_region(const DbcModel& model, int lambda_samples,
                            const SimplexGrid& q_grid, const SimplexGrid& col_grid);
RegionBoundary trace_region_serial(const DbcModel& model, int lambda_samples,
                                   const SimplexGrid& q_grid, const SimplexGrid& col_grid);

// Dominated-point removal: upper concave hull of the (R1, R2) samples.
std::vector<Point2> convexify_boundary(const RegionBoundary& region);

struct SupportCheck {
    double input_residual = 0; // max |sum w_j p_j - q|
    double psi_claim = 0;      // sum w_j phi(p_j, lambda)
    double psi_value = 0;      // LP envelope value
    double gap = 0;            // psi_claim - psi_value
    Vec point_residuals;       // phi(p_j, lambda) - psi per support point
};

// Verifies that a claimed support reproduces the envelope at (q, lambda);
// mismatches are reported, not thrown.
SupportCheck strategy_from_support(const DbcModel& model, std::span<const double> q,
                                   double lambda, const std::vector<Vec>& points,
                                   std::span<const double> weights, const SimplexGrid& grid);

// Single-user mutual information I(X;Y) for a k=2 channel as a function of
// the input law, maximized by golden section; oracle for region endpoints.
double binary_capacity(const StochasticMatrix& T);

} // namespace dbc
