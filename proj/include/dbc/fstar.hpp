#pragma once

#include <cstdint>
#include <vector>

#include "dbc/channel.hpp"
#include "dbc/prob.hpp"

namespace dbc {

// phi(p, lambda) = H(T_ZX p) - lambda H(T_YX p).
double phi(const DbcModel& model, std::span<const double> p, double lambda);

struct SRange {
    double lo = 0, hi = 0; // [H(Y|X), H(Y)] for the given q
};
SRange s_range(const DbcModel& model, std::span<const double> q);

struct PsiResult {
    double value = 0;
    TransmissionStrategy witness;
    // Supporting affine minorant: psi(p, lambda) >= dot(dual[0..k-2], p[0..k-2]) + dual[k-1]
    // for every p in the simplex, at the lambda of the call.
    Vec dual;
};

struct FstarResult {
    double value = 0;
    TransmissionStrategy witness;
};

// Shared per-(model, grid) state for the envelope LPs: entropies of every
// grid image under both channels, plus flattened coordinates for fast
// pricing. build() fills the tables with an OpenMP loop when available;
// build_serial() is the reference implementation.
struct EnvelopeLp {
    const DbcModel* model = nullptr;
    const SimplexGrid* grid = nullptr;
    Vec hy, hz;                       // H(T_YX p_g), H(T_ZX p_g)
    Vec coords;                       // (k-1) leading coordinates per point
    std::vector<size_t> vertex_index; // grid index of each e_i

    static EnvelopeLp build(const DbcModel& model, const SimplexGrid& grid);
    static EnvelopeLp build_serial(const DbcModel& model, const SimplexGrid& grid);

    // Lower convex envelope of phi(., lambda) evaluated at q: the LP
    //   min sum_g w_g phi(p_g, lambda)  s.t.  sum_g w_g p_g = q, sum w = 1
    // over grid columns. Basic optima have at most k support points.
    PsiResult psi(std::span<const double> q, double lambda) const;

    // min sum_g w_g H(T_ZX p_g) subject to the input-law constraint and
    // sum_g w_g H(T_YX p_g) >= s. Basic optima have at most k+1 support
    // points. s is clamped into [H(Y|X), H(Y)] within 1e-9 slack; larger
    // violations raise std::domain_error naming the interval.
    FstarResult fstar_primal(std::span<const double> q, double s) const;

    // psi(q, lambda) for each lambda; parallel over the sweep.
    Vec psi_sweep(std::span<const double> q, std::span<const double> lambdas) const;
    Vec psi_sweep_serial(std::span<const double> q, std::span<const double> lambdas) const;
};

// Convenience wrappers that build the shared state on the fly.
PsiResult psi(const DbcModel& model, std::span<const double> q, double lambda,
              const SimplexGrid& grid);
FstarResult fstar_primal(const DbcModel& model, std::span<const double> q, double s,
                         const SimplexGrid& grid);

// max over lambda in a uniform [0,1] grid of psi(q, lambda) + lambda s.
// Weak duality at finite grids: never exceeds the primal value.
double fstar_dual(const DbcModel& model, std::span<const double> q, double s,
                  int lambda_samples, const SimplexGrid& grid);

// Grid-free brute force for k <= 2, 3 only: closed-form two-branch search
// (k = 2) plus multi-start projected local search with k+1 free branches.
// Independent of the LP path; used as a cross-check oracle.
double fstar_oracle(const DbcModel& model, std::span<const double> q, double s,
                    std::uint64_t seed = 20240901);

struct FStarSample {
    double s = 0;
    double value = 0;
    TransmissionStrategy witness; // may be empty for some methods
};

struct FStarCurve {
    Vec q;
    std::vector<FStarSample> samples; // ordered by s
};

enum class FStarMethod { primal, dual, closed, oracle };

// Uniform s-samples over [H(Y|X), H(Y)] inclusive. closed requires a
// broadcast Z or BSC family model. The dual sweep shares one lambda grid
// across all samples.
FStarCurve sample_fstar_curve(const DbcModel& model, std::span<const double> q, int count,
                              const SimplexGrid& grid, FStarMethod method,
                              int lambda_samples = 401, std::uint64_t seed = 20240901);

struct CurveCheck {
    bool nondecreasing = true;
    bool convex = true;
    bool slopes_ok = true;
    bool lower_bound_ok = true;
    bool witness_ok = true;
    double worst_slope_low = 0, worst_slope_high = 1;
    bool ok() const {
        return nondecreasing && convex && slopes_ok && lower_bound_ok && witness_ok;
    }
};

// Shape suite: nondecreasing (1e-9), midpoint convexity (1e-8), slopes in
// [-1e-6, 1+1e-6], value >= s + H(Z) - H(Y) - 1e-9, witnesses reproduce
// their samples within 1e-9.
CurveCheck validate_curve(const DbcModel& model, const FStarCurve& curve);

struct TensorizationReport {
    double s = 0, fstar = 0;
    double product_xi = 0, product_eta = 0; // i.i.d. two-letter strategy
    double xi_error = 0, eta_error = 0;     // |product - 2 * single-letter|
    std::uint64_t trials = 0, feasible = 0;
    double min_eta = 0;  // best H(Z^2|U) among feasible random strategies
    double undercut = 0; // max(0, 2 fstar - min_eta)
};

// Two-letter product-channel check, k = 2 only: the i.i.d. product of the
// primal witness doubles (xi, eta) exactly, and a random search over joint
// strategies on the 4-letter product channel (5 branches, average input
// law pinned to q) never undercuts 2 F*(q, s) meaningfully.
TensorizationReport tensorization_check(const DbcModel& model, std::span<const double> q,
                                        double s, const SimplexGrid& grid,
                                        std::uint64_t trials, std::uint64_t seed);

} // namespace dbc
