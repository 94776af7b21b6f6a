#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "dbc/prob.hpp"

namespace dbc {

// Column access for `minimize c.w  s.t.  A w = b, w >= 0`. The constraint
// matrix is never materialized; columns are produced on demand, which lets
// the envelope LPs run over a simplex grid without storing k x |grid|.
struct ColumnSource {
    size_t count = 0;
    std::function<double(size_t)> cost;
    std::function<void(size_t, double*)> column; // writes nrows entries
    // Optional fast path: rc[j] = cost(j) - y . column(j) for all j.
    std::function<void(const double*, double*)> price_all;
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

struct LpResult {
    LpStatus status = LpStatus::iteration_limit;
    double objective = 0.0;
    std::vector<size_t> support; // column indices with weight > 1e-12
    Vec weights;                 // matching `support`
    Vec dual;                    // row prices y with c_j - y.A_j >= -tol for all j
    double infeasibility = 0.0;  // phase-1 residual, ~0 when feasible
    int iterations = 0;
};

// Revised simplex, explicit basis inverse with periodic refactorization.
// Entering rule: most negative reduced cost with ties to the smallest
// index; after a run of degenerate pivots it switches to Bland's rule
// (smallest eligible index) until progress resumes, which prevents
// cycling. Leaving rule: min-ratio with ties to the smallest basis column
// index. All choices are deterministic.
//
// `basis_hint`, when it names nrows columns whose basic solution is
// feasible, skips phase 1 entirely.
LpResult solve_lp(int nrows, const ColumnSource& cols, std::span<const double> b,
                  std::span<const size_t> basis_hint = {}, int max_iters = 200000);

} // namespace dbc
