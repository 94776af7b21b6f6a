#include "dbc/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dbc {

namespace {

WeightedRate rate_from_psi(const DbcModel& model, std::span<const double> q, double lambda,
                           const PsiResult& pr) {
    WeightedRate wr;
    double xi = conditional_entropy_given_strategy(model.T_YX, pr.witness);
    double eta = conditional_entropy_given_strategy(model.T_ZX, pr.witness);
    wr.r1 = xi - model.hy_given_x(q);
    wr.r2 = model.hz(q) - eta;
    wr.objective = wr.r2 + lambda * wr.r1;
    wr.strategy = pr.witness;
    return wr;
}

double objective_value(const DbcModel& model, const EnvelopeLp& env,
                       std::span<const double> q, double lambda) {
    return model.hz(q) - lambda * model.hy_given_x(q) - env.psi(q, lambda).value;
}

BoundarySample best_sample_at_lambda(const DbcModel& model, const EnvelopeLp& env,
                                     const SimplexGrid& q_grid, double lambda) {
    const double tie_tol = 1e-12;
    double best = -1e300;
    size_t best_idx = 0;
    WeightedRate best_rate;
    bool have = false;
    for (size_t i = 0; i < q_grid.size(); ++i) {
        const Vec& q = q_grid.points[i];
        PsiResult pr = env.psi(q, lambda);
        WeightedRate wr = rate_from_psi(model, q, lambda, pr);
        bool better = wr.objective > best + tie_tol;
        // ties broken toward the smaller R1 witness, then earlier grid point
        bool tie = have && wr.objective > best - tie_tol && wr.r1 < best_rate.r1 - tie_tol;
        if (!have || better || tie) {
            have = true;
            best = std::max(best, wr.objective);
            best_idx = i;
            best_rate = wr;
        }
    }
    Vec q = q_grid.points[best_idx];
    // Golden-section refinement between the neighbouring grid cells; the
    // objective is concave in q, so the 1-D restriction is unimodal.
    if (model.k == 2) {
        double lo = best_idx > 0 ? q_grid.points[best_idx - 1][0] : q[0];
        double hi = best_idx + 1 < q_grid.size() ? q_grid.points[best_idx + 1][0] : q[0];
        if (hi - lo > 1e-12) {
            const double gr = 0.6180339887498949;
            double a = lo, b = hi;
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            Vec qa = {x1, 1 - x1}, qb = {x2, 1 - x2};
            double f1 = objective_value(model, env, qa, lambda);
            double f2 = objective_value(model, env, qb, lambda);
            for (int it = 0; it < 40 && b - a > 1e-10; ++it) {
                if (f1 < f2) {
                    a = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = a + gr * (b - a);
                    qb = {x2, 1 - x2};
                    f2 = objective_value(model, env, qb, lambda);
                } else {
                    b = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = b - gr * (b - a);
                    qa = {x1, 1 - x1};
                    f1 = objective_value(model, env, qa, lambda);
                }
            }
            double xm = 0.5 * (a + b);
            Vec qm = {xm, 1 - xm};
            PsiResult pr = env.psi(qm, lambda);
            WeightedRate wr = rate_from_psi(model, qm, lambda, pr);
            if (wr.objective > best) {
                best = wr.objective;
                q = qm;
                best_rate = wr;
            }
        }
    }
    BoundarySample s;
    s.lambda = lambda;
    s.q = q;
    s.r1 = best_rate.r1;
    s.r2 = best_rate.r2;
    s.strategy = best_rate.strategy;
    return s;
}

} // namespace

WeightedRate max_weighted_rate(const DbcModel& model, std::span<const double> q,
                               double lambda, const SimplexGrid& grid) {
    EnvelopeLp env = EnvelopeLp::build(model, grid);
    return rate_from_psi(model, q, lambda, env.psi(q, lambda));
}

RegionBoundary trace_region_serial(const DbcModel& model, int lambda_samples,
                                   const SimplexGrid& q_grid, const SimplexGrid& col_grid) {
    if (lambda_samples < 2) throw std::invalid_argument("trace_region: need >= 2 samples");
    EnvelopeLp env = EnvelopeLp::build_serial(model, col_grid);
    RegionBoundary region;
    region.samples.resize(lambda_samples);
    for (int i = 0; i < lambda_samples; ++i) {
        double lambda = static_cast<double>(i) / (lambda_samples - 1);
        region.samples[i] = best_sample_at_lambda(model, env, q_grid, lambda);
    }
    return region;
}

RegionBoundary trace_region(const DbcModel& model, int lambda_samples,
                            const SimplexGrid& q_grid, const SimplexGrid& col_grid) {
    if (lambda_samples < 2) throw std::invalid_argument("trace_region: need >= 2 samples");
    EnvelopeLp env = EnvelopeLp::build(model, col_grid);
    RegionBoundary region;
    region.samples.resize(lambda_samples);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < lambda_samples; ++i) {
        double lambda = static_cast<double>(i) / (lambda_samples - 1);
        region.samples[i] = best_sample_at_lambda(model, env, q_grid, lambda);
    }
    return region;
}

std::vector<Point2> convexify_boundary(const RegionBoundary& region) {
    std::vector<Point2> pts;
    pts.reserve(region.samples.size());
    for (const auto& s : region.samples) pts.emplace_back(s.r1, s.r2);
    return upper_hull(std::move(pts));
}

SupportCheck strategy_from_support(const DbcModel& model, std::span<const double> q,
                                   double lambda, const std::vector<Vec>& points,
                                   std::span<const double> weights, const SimplexGrid& grid) {
    if (points.size() != weights.size() || points.empty())
        throw std::invalid_argument("strategy_from_support: point/weight mismatch");
    SupportCheck chk;
    Vec mix(model.k, 0.0);
    for (size_t j = 0; j < points.size(); ++j)
        for (int i = 0; i < model.k; ++i) mix[i] += weights[j] * points[j][i];
    for (int i = 0; i < model.k; ++i)
        chk.input_residual = std::max(chk.input_residual, std::fabs(mix[i] - q[i]));

    for (size_t j = 0; j < points.size(); ++j)
        chk.psi_claim += weights[j] * phi(model, points[j], lambda);
    chk.psi_value = EnvelopeLp::build(model, grid).psi(q, lambda).value;
    chk.gap = chk.psi_claim - chk.psi_value;
    chk.point_residuals.resize(points.size());
    for (size_t j = 0; j < points.size(); ++j)
        chk.point_residuals[j] = phi(model, points[j], lambda) - chk.psi_value;
    return chk;
}

double binary_capacity(const StochasticMatrix& T) {
    if (T.cols != 2) throw std::invalid_argument("binary_capacity: need 2 input symbols");
    auto mi = [&](double p0) {
        Vec q = {p0, 1 - p0};
        double hy = entropy(T.apply(q));
        double hyx = p0 * entropy(T.col(0)) + (1 - p0) * entropy(T.col(1));
        return hy - hyx;
    };
    const double gr = 0.6180339887498949;
    double a = 0.0, b = 1.0;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = mi(x1), f2 = mi(x2);
    for (int it = 0; it < 90; ++it) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = mi(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = mi(x1);
        }
    }
    return mi(0.5 * (a + b));
}

} // namespace dbc
