#pragma once

#include "dbc/channel.hpp"
#include "dbc/fstar.hpp"

// Closed-form conditional entropy bounds, tangent-point solvers and rate
// formulas for the Z, BSC, K-user Z and multiplicative families. All scalar
// inversions are bisections on functions that are monotone on the stated
// interval; no general root finder is involved.

namespace dbc {

// Contact point of the tangent through the origin for the Z-channel kernel
// h(b2 p) - lambda h(b1 p): the nonzero root of
//   ln(1 - b2 p) = lambda ln(1 - b1 p)
// on (0, 1]. When the off-origin root does not exist (small lambda; the
// envelope is the chord to p = 1), returns 1. Requires 0 < b2 < b1 < 1 and
// 0 <= lambda < b2/b1; above that the envelope equals phi and there is no
// contact point.
double z_p_lambda(double beta1, double beta2, double lambda);

// F* for the broadcast Z channel with q = Pr(X=0): inverts
// s = q h(b1 p)/p over p in [q, 1] and returns q h(b2 p)/p. Domain of s is
// [q h(b1), h(q b1)].
double z_fstar(double q, double beta1, double beta2, double s);

// Stationary point of phi(p, lambda) = h(a2 + (1-2a2)p) - lambda h(...) on
// (0, 1/2]: the envelope contact point when the interior local minimum
// exists, else the symmetric stationary point 1/2. Requires
// lambda < (1-2a2)^2/(1-2a1)^2; above that psi = phi.
double bsc_p_lambda(double alpha1, double alpha2, double lambda);

// F* for the broadcast BSC, q <= 1/2 taken by symmetry: inverts
// s = h(a1 + (1-2a1)p) over p in [0, q], returns h(a2 + (1-2a2)p).
double bsc_fstar(double q, double alpha1, double alpha2, double s);

struct KUserZParams {
    int K = 0;
    Vec beta; // beta[j-1] = b_j with 0 < b_K <= ... <= b_1 < 1
    Vec t;    // K+1 thresholds, 1 = t_0 >= t_1 >= ... >= t_K = q

    void validate() const; // throws std::domain_error on ordering violations
    double q() const { return t.back(); }
};

// R_j = (q/t_j) h(b_j t_j) - (q/t_{j-1}) h(b_j t_{j-1}).
Vec kuser_z_rates(const KUserZParams& params);

struct MultiPhiDecomposition {
    double lhs = 0, rhs = 0, residual = 0;
};

// Splits phi at p_X = (1-q, q p_sub) into the Z-shell term plus q b2 times
// the subchannel kernel; lhs and rhs agree identically, residual is the
// numerical discrepancy.
MultiPhiDecomposition multi_phi_decomposition(const DbcModel& model, double q,
                                              std::span<const double> p_sub, double lambda);

// Optimal strategy for a multiplicative model at input (1-q, q u): the
// Z-shell mixture between U = 0 and the contact point p_lambda, composed
// with the subchannel envelope witness at uniform input. Returns the
// constant-U strategy when q > p_lambda (psi = phi regime). sub_grid is
// the envelope grid for the nonzero sub-alphabet.
TransmissionStrategy multiplicative_strategy(const DbcModel& model, double q, double lambda,
                                             const SimplexGrid& sub_grid);

// Curve sampled from the family closed form; requires a broadcast Z or BSC
// model. Witness strategies are the two-point supports of the construction.
FStarCurve closed_form_curve(const DbcModel& model, std::span<const double> q, int count);

} // namespace dbc
