#include "dbc/fstar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "dbc/lp.hpp"

namespace dbc {

// Defined with the closed-form module.
FStarCurve closed_form_curve(const DbcModel& model, std::span<const double> q, int count);

double phi(const DbcModel& model, std::span<const double> p, double lambda) {
    return entropy(model.T_ZX.apply(p)) - lambda * entropy(model.T_YX.apply(p));
}

SRange s_range(const DbcModel& model, std::span<const double> q) {
    return SRange{model.hy_given_x(q), model.hy(q)};
}

namespace {

double clamp_s(const DbcModel& model, std::span<const double> q, double s) {
    SRange r = s_range(model, q);
    if (s < r.lo - kEntTol || s > r.hi + kEntTol) {
        std::ostringstream os;
        os << "s = " << s << " outside the domain [H(Y|X), H(Y)] = [" << r.lo << ", "
           << r.hi << "]";
        throw std::domain_error(os.str());
    }
    return std::clamp(s, r.lo, r.hi);
}

Vec linspace(double lo, double hi, int count) {
    Vec v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < count; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    return v;
}

TransmissionStrategy strategy_from_support(const SimplexGrid& grid,
                                           const std::vector<size_t>& support,
                                           const Vec& weights) {
    TransmissionStrategy st;
    double total = 0.0;
    for (size_t t = 0; t < support.size(); ++t) {
        if (weights[t] <= 1e-12) continue;
        st.w.push_back(weights[t]);
        st.cols.push_back(grid.points[support[t]]);
        total += weights[t];
    }
    if (st.w.empty() || total <= 0.0)
        throw std::runtime_error("empty LP support");
    for (double& w : st.w) w /= total;
    return st;
}

} // namespace

EnvelopeLp EnvelopeLp::build_serial(const DbcModel& model, const SimplexGrid& grid) {
    if (grid.dim != model.k)
        throw std::invalid_argument("EnvelopeLp: grid dimension != input alphabet");
    EnvelopeLp e;
    e.model = &model;
    e.grid = &grid;
    const size_t g = grid.size();
    const int k = model.k;
    e.hy.resize(g);
    e.hz.resize(g);
    e.coords.resize(g * static_cast<size_t>(std::max(k - 1, 0)));
    for (size_t i = 0; i < g; ++i) {
        const Vec& p = grid.points[i];
        e.hy[i] = entropy(model.T_YX.apply(p));
        e.hz[i] = entropy(model.T_ZX.apply(p));
        for (int c = 0; c < k - 1; ++c) e.coords[i * (k - 1) + c] = p[c];
    }
    e.vertex_index.resize(k);
    for (int i = 0; i < k; ++i) {
        Vec v(k, 0.0);
        v[i] = 1.0;
        e.vertex_index[i] = grid.snap(v);
    }
    return e;
}

EnvelopeLp EnvelopeLp::build(const DbcModel& model, const SimplexGrid& grid) {
    if (grid.dim != model.k)
        throw std::invalid_argument("EnvelopeLp: grid dimension != input alphabet");
    EnvelopeLp e;
    e.model = &model;
    e.grid = &grid;
    const size_t g = grid.size();
    const int k = model.k;
    e.hy.resize(g);
    e.hz.resize(g);
    e.coords.resize(g * static_cast<size_t>(std::max(k - 1, 0)));
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(g); ++i) {
        const Vec& p = grid.points[i];
        e.hy[i] = entropy(model.T_YX.apply(p));
        e.hz[i] = entropy(model.T_ZX.apply(p));
        for (int c = 0; c < k - 1; ++c) e.coords[i * (k - 1) + c] = p[c];
    }
    e.vertex_index.resize(k);
    for (int i = 0; i < k; ++i) {
        Vec v(k, 0.0);
        v[i] = 1.0;
        e.vertex_index[i] = grid.snap(v);
    }
    return e;
}

PsiResult EnvelopeLp::psi(std::span<const double> q, double lambda) const {
    if (lambda < -1e-12 || lambda > 1.0 + 1e-12)
        throw std::domain_error("psi: lambda outside [0,1]");
    lambda = std::clamp(lambda, 0.0, 1.0);
    const int k = model->k;
    if (static_cast<int>(q.size()) != k)
        throw std::invalid_argument("psi: q dimension mismatch");
    const size_t g = grid->size();
    const double* hyp = hy.data();
    const double* hzp = hz.data();
    const double* cp = coords.data();

    ColumnSource src;
    src.count = g;
    src.cost = [=](size_t j) { return hzp[j] - lambda * hyp[j]; };
    src.column = [=](size_t j, double* out) {
        for (int c = 0; c < k - 1; ++c) out[c] = cp[j * (k - 1) + c];
        out[k - 1] = 1.0;
    };
    src.price_all = [=](const double* y, double* rc) {
        for (size_t j = 0; j < g; ++j) {
            double dot = y[k - 1];
            for (int c = 0; c < k - 1; ++c) dot += y[c] * cp[j * (k - 1) + c];
            rc[j] = hzp[j] - lambda * hyp[j] - dot;
        }
    };
    Vec b(k);
    for (int c = 0; c < k - 1; ++c) b[c] = q[c];
    b[k - 1] = 1.0;

    LpResult res = solve_lp(k, src, b, vertex_index);
    if (res.status != LpStatus::optimal)
        throw std::runtime_error("psi: LP failed (q outside grid hull?)");
    PsiResult out;
    out.value = res.objective;
    out.witness = strategy_from_support(*grid, res.support, res.weights);
    out.dual = res.dual;
    return out;
}

FstarResult EnvelopeLp::fstar_primal(std::span<const double> q, double s) const {
    const int k = model->k;
    if (static_cast<int>(q.size()) != k)
        throw std::invalid_argument("fstar_primal: q dimension mismatch");
    s = clamp_s(*model, q, s);
    const size_t g = grid->size();
    const size_t slack = g; // column index of the xi-constraint surplus
    const double* hyp = hy.data();
    const double* hzp = hz.data();
    const double* cp = coords.data();

    ColumnSource src;
    src.count = g + 1;
    src.cost = [=](size_t j) { return j == slack ? 0.0 : hzp[j]; };
    src.column = [=](size_t j, double* out) {
        if (j == slack) {
            std::fill(out, out + k + 1, 0.0);
            out[k] = -1.0;
            return;
        }
        for (int c = 0; c < k - 1; ++c) out[c] = cp[j * (k - 1) + c];
        out[k - 1] = 1.0;
        out[k] = hyp[j];
    };
    src.price_all = [=](const double* y, double* rc) {
        for (size_t j = 0; j < g; ++j) {
            double dot = y[k - 1] + y[k] * hyp[j];
            for (int c = 0; c < k - 1; ++c) dot += y[c] * cp[j * (k - 1) + c];
            rc[j] = hzp[j] - dot;
        }
        rc[slack] = y[k];
    };
    Vec b(k + 1);
    for (int c = 0; c < k - 1; ++c) b[c] = q[c];
    b[k - 1] = 1.0;
    b[k] = s;

    // Feasible starting bases: U = X plus a loose surplus when s is at the
    // bottom of the domain, otherwise U = X blended with the constant-U
    // column when q is itself a grid point.
    std::vector<size_t> hint;
    SRange r = s_range(*model, q);
    if (s <= r.lo + 1e-12) {
        hint = vertex_index;
        hint.push_back(slack);
    } else {
        size_t qi = grid->snap(q);
        const Vec& snapped = grid->points[qi];
        double diff = 0.0;
        for (int c = 0; c < k; ++c) diff = std::max(diff, std::fabs(snapped[c] - q[c]));
        if (diff <= 1e-12 &&
            std::find(vertex_index.begin(), vertex_index.end(), qi) == vertex_index.end()) {
            hint = vertex_index;
            hint.push_back(qi);
        }
    }

    LpResult res = solve_lp(k + 1, src, b, hint);
    if (res.status != LpStatus::optimal)
        throw std::runtime_error("fstar_primal: LP failed (q outside grid hull?)");
    FstarResult out;
    out.value = res.objective;
    // Drop the surplus column from the witness if present.
    std::vector<size_t> support;
    Vec weights;
    for (size_t t = 0; t < res.support.size(); ++t) {
        if (res.support[t] == slack) continue;
        support.push_back(res.support[t]);
        weights.push_back(res.weights[t]);
    }
    out.witness = strategy_from_support(*grid, support, weights);
    return out;
}

Vec EnvelopeLp::psi_sweep_serial(std::span<const double> q,
                                 std::span<const double> lambdas) const {
    Vec out(lambdas.size());
    for (size_t i = 0; i < lambdas.size(); ++i) out[i] = psi(q, lambdas[i]).value;
    return out;
}

Vec EnvelopeLp::psi_sweep(std::span<const double> q, std::span<const double> lambdas) const {
    Vec out(lambdas.size());
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(lambdas.size()); ++i)
        out[i] = psi(q, lambdas[i]).value;
    return out;
}

PsiResult psi(const DbcModel& model, std::span<const double> q, double lambda,
              const SimplexGrid& grid) {
    return EnvelopeLp::build(model, grid).psi(q, lambda);
}

FstarResult fstar_primal(const DbcModel& model, std::span<const double> q, double s,
                         const SimplexGrid& grid) {
    return EnvelopeLp::build(model, grid).fstar_primal(q, s);
}

double fstar_dual(const DbcModel& model, std::span<const double> q, double s,
                  int lambda_samples, const SimplexGrid& grid) {
    if (lambda_samples < 2) throw std::invalid_argument("fstar_dual: need >= 2 samples");
    s = clamp_s(model, q, s);
    EnvelopeLp e = EnvelopeLp::build(model, grid);
    Vec lambdas = linspace(0.0, 1.0, lambda_samples);
    Vec vals = e.psi_sweep(q, lambdas);
    double best = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < vals.size(); ++i)
        best = std::max(best, vals[i] + lambdas[i] * s);
    return best;
}

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

namespace {

double entropy_image(const StochasticMatrix& T, double t) {
    Vec p = {1.0 - t, t};
    return entropy(T.apply(p));
}

// Two-branch search specialized to k = 2. For a fixed outer point b the
// chord value of a concave curve at t is monotone in the inner point a, so
// the binding inner point solves chord_Hy(a, b; t) = s by bisection and the
// objective is the matching Hz chord.
double oracle_dense_k2(const DbcModel& model, std::span<const double> q, double s) {
    const double t = q[1];
    if (t < 1e-12 || t > 1.0 - 1e-12) return std::numeric_limits<double>::infinity();

    auto chord = [&](const StochasticMatrix& T, double a, double b) {
        if (b - a < 1e-15) return entropy_image(T, t);
        double wa = (b - t) / (b - a);
        return wa * entropy_image(T, a) + (1.0 - wa) * entropy_image(T, b);
    };
    auto eta_for_b = [&](double b) {
        double lo = 0.0, hi = t;
        double xi_lo = chord(model.T_YX, lo, b);
        if (xi_lo >= s) return chord(model.T_ZX, lo, b);
        // xi is increasing in a and reaches H(Y) >= s at a = t.
        for (int it = 0; it < 80; ++it) {
            double mid = 0.5 * (lo + hi);
            if (chord(model.T_YX, mid, b) < s)
                lo = mid;
            else
                hi = mid;
        }
        return chord(model.T_ZX, hi, b);
    };

    double best = std::numeric_limits<double>::infinity();
    double best_b = 1.0;
    const int nb = 1200;
    for (int i = 0; i <= nb; ++i) {
        double b = t + (1.0 - t) * static_cast<double>(i) / nb;
        if (b <= t + 1e-14) continue;
        double v = eta_for_b(b);
        if (v < best) {
            best = v;
            best_b = b;
        }
    }
    double half = (1.0 - t) / nb;
    for (int round = 0; round < 5; ++round) {
        double lo = std::max(t + 1e-14, best_b - half);
        double hi = std::min(1.0, best_b + half);
        for (int i = 0; i <= 40; ++i) {
            double b = lo + (hi - lo) * static_cast<double>(i) / 40;
            double v = eta_for_b(b);
            if (v < best) {
                best = v;
                best_b = b;
            }
        }
        half /= 10.0;
    }
    return best;
}

struct WeightLine {
    bool ok = false;
    Vec w0, dir; // feasible segment w0 + tau * dir, tau in [tlo, thi]
    double tlo = 0, thi = 0;
};

// Solves [first k-1 coordinate rows; ones] w = (q_head, 1) for l = k+1
// columns: a particular solution plus the one-dimensional null direction.
WeightLine weight_line(const std::vector<Vec>& cols, std::span<const double> q) {
    const int k = static_cast<int>(q.size());
    const int l = static_cast<int>(cols.size());
    const int rows = k;
    std::vector<double> m(static_cast<size_t>(rows) * (l + 1), 0.0);
    for (int c = 0; c < l; ++c) {
        for (int i = 0; i < k - 1; ++i) m[static_cast<size_t>(i) * (l + 1) + c] = cols[c][i];
        m[static_cast<size_t>(k - 1) * (l + 1) + c] = 1.0;
    }
    for (int i = 0; i < k - 1; ++i) m[static_cast<size_t>(i) * (l + 1) + l] = q[i];
    m[static_cast<size_t>(k - 1) * (l + 1) + l] = 1.0;

    std::vector<int> pivot_col(rows, -1);
    int row = 0;
    for (int c = 0; c < l && row < rows; ++c) {
        int pr = -1;
        double best = 1e-10;
        for (int i = row; i < rows; ++i)
            if (std::fabs(m[static_cast<size_t>(i) * (l + 1) + c]) > best) {
                best = std::fabs(m[static_cast<size_t>(i) * (l + 1) + c]);
                pr = i;
            }
        if (pr < 0) continue;
        for (int t = 0; t <= l; ++t)
            std::swap(m[static_cast<size_t>(pr) * (l + 1) + t],
                      m[static_cast<size_t>(row) * (l + 1) + t]);
        double inv = 1.0 / m[static_cast<size_t>(row) * (l + 1) + c];
        for (int t = 0; t <= l; ++t) m[static_cast<size_t>(row) * (l + 1) + t] *= inv;
        for (int i = 0; i < rows; ++i) {
            if (i == row) continue;
            double f = m[static_cast<size_t>(i) * (l + 1) + c];
            if (f == 0.0) continue;
            for (int t = 0; t <= l; ++t)
                m[static_cast<size_t>(i) * (l + 1) + t] -=
                    f * m[static_cast<size_t>(row) * (l + 1) + t];
        }
        pivot_col[row] = c;
        ++row;
    }
    WeightLine wl;
    if (row < rows) return wl; // rank deficient columns
    int free_col = -1;
    for (int c = 0; c < l; ++c)
        if (std::find(pivot_col.begin(), pivot_col.end(), c) == pivot_col.end()) free_col = c;
    wl.w0.assign(l, 0.0);
    wl.dir.assign(l, 0.0);
    wl.dir[free_col] = 1.0;
    for (int i = 0; i < rows; ++i) {
        wl.w0[pivot_col[i]] = m[static_cast<size_t>(i) * (l + 1) + l];
        wl.dir[pivot_col[i]] = -m[static_cast<size_t>(i) * (l + 1) + free_col];
    }
    wl.tlo = -std::numeric_limits<double>::infinity();
    wl.thi = std::numeric_limits<double>::infinity();
    for (int j = 0; j < l; ++j) {
        if (wl.dir[j] > 1e-14)
            wl.tlo = std::max(wl.tlo, -wl.w0[j] / wl.dir[j]);
        else if (wl.dir[j] < -1e-14)
            wl.thi = std::min(wl.thi, -wl.w0[j] / wl.dir[j]);
        else if (wl.w0[j] < -1e-11)
            return wl; // infeasible regardless of tau
    }
    wl.ok = wl.tlo <= wl.thi + 1e-14;
    return wl;
}

// min over the feasible weight segment of eta subject to xi >= s. Both are
// linear in tau, so the optimum sits at a segment endpoint or at xi = s.
double best_eta_on_line(const WeightLine& wl, const Vec& hys, const Vec& hzs, double s) {
    const int l = static_cast<int>(wl.w0.size());
    double xi0 = 0, xiv = 0, eta0 = 0, etav = 0;
    for (int j = 0; j < l; ++j) {
        xi0 += wl.w0[j] * hys[j];
        xiv += wl.dir[j] * hys[j];
        eta0 += wl.w0[j] * hzs[j];
        etav += wl.dir[j] * hzs[j];
    }
    double lo = wl.tlo, hi = wl.thi;
    // restrict to xi(tau) >= s - 1e-12
    const double need = s - 1e-12;
    if (std::fabs(xiv) < 1e-14) {
        if (xi0 < need) return std::numeric_limits<double>::infinity();
    } else if (xiv > 0) {
        lo = std::max(lo, (need - xi0) / xiv);
    } else {
        hi = std::min(hi, (need - xi0) / xiv);
    }
    if (lo > hi) return std::numeric_limits<double>::infinity();
    return std::min(eta0 + etav * lo, eta0 + etav * hi);
}

double oracle_local_search(const DbcModel& model, std::span<const double> q, double s,
                           std::uint64_t seed) {
    const int k = model.k;
    const int l = k + 1;
    Rng rng(seed);
    auto gauss = [&]() {
        double u1 = std::max(rng.next_double(), 1e-300);
        double u2 = rng.next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    };
    auto random_simplex = [&](int dim) {
        Vec p(dim);
        double sum = 0;
        for (int i = 0; i < dim; ++i) {
            p[i] = -std::log(std::max(rng.next_double(), 1e-300));
            sum += p[i];
        }
        for (double& v : p) v /= sum;
        return p;
    };
    auto evaluate = [&](const std::vector<Vec>& cols) {
        WeightLine wl = weight_line(cols, q);
        if (!wl.ok) return std::numeric_limits<double>::infinity();
        Vec hys(l), hzs(l);
        for (int j = 0; j < l; ++j) {
            hys[j] = entropy(model.T_YX.apply(cols[j]));
            hzs[j] = entropy(model.T_ZX.apply(cols[j]));
        }
        return best_eta_on_line(wl, hys, hzs, s);
    };

    double best = std::numeric_limits<double>::infinity();
    const int starts = 40, iters = 300;
    for (int start = 0; start < starts; ++start) {
        std::vector<Vec> cols(l);
        for (int j = 0; j < l; ++j) cols[j] = random_simplex(k);
        // Mix in the vertices now and then so the U = X corner is reachable.
        if (start % 4 == 0)
            for (int j = 0; j < std::min(l, k); ++j) {
                cols[j].assign(k, 0.0);
                cols[j][j] = 1.0;
            }
        double cur = evaluate(cols);
        double sigma = 0.25;
        for (int it = 0; it < iters; ++it) {
            std::vector<Vec> cand = cols;
            int j = static_cast<int>(rng.next_u64() % l);
            double sum = 0;
            for (int c = 0; c < k; ++c) {
                cand[j][c] = std::max(0.0, cand[j][c] + sigma * gauss());
                sum += cand[j][c];
            }
            if (sum <= 1e-12) continue;
            for (int c = 0; c < k; ++c) cand[j][c] /= sum;
            double v = evaluate(cand);
            if (v < cur) {
                cur = v;
                cols = std::move(cand);
            }
            sigma = std::max(1e-4, sigma * 0.985);
        }
        best = std::min(best, cur);
    }
    return best;
}

} // namespace

double fstar_oracle(const DbcModel& model, std::span<const double> q, double s,
                    std::uint64_t seed) {
    if (model.k > 3)
        throw std::invalid_argument("fstar_oracle: only supported for k <= 3");
    s = clamp_s(model, q, s);
    SRange r = s_range(model, q);
    double best = model.hz(q); // U constant: xi = H(Y) >= s always
    if (r.lo >= s - 1e-12) best = std::min(best, model.hz_given_x(q)); // U = X
    if (model.k == 2) best = std::min(best, oracle_dense_k2(model, q, s));
    best = std::min(best, oracle_local_search(model, q, s, seed));
    return best;
}

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

FStarCurve sample_fstar_curve(const DbcModel& model, std::span<const double> q, int count,
                              const SimplexGrid& grid, FStarMethod method,
                              int lambda_samples, std::uint64_t seed) {
    if (count < 2) throw std::invalid_argument("sample_fstar_curve: need >= 2 samples");
    if (method == FStarMethod::closed) return closed_form_curve(model, q, count);

    FStarCurve curve;
    curve.q.assign(q.begin(), q.end());
    SRange r = s_range(model, q);
    Vec ss = linspace(r.lo, r.hi, count);
    curve.samples.resize(count);

    if (method == FStarMethod::primal) {
        EnvelopeLp e = EnvelopeLp::build(model, grid);
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < count; ++i) {
            FstarResult fr = e.fstar_primal(q, ss[i]);
            curve.samples[i] = FStarSample{ss[i], fr.value, std::move(fr.witness)};
        }
    } else if (method == FStarMethod::dual) {
        EnvelopeLp e = EnvelopeLp::build(model, grid);
        Vec lambdas = linspace(0.0, 1.0, lambda_samples);
        Vec vals = e.psi_sweep(q, lambdas);
        for (int i = 0; i < count; ++i) {
            double best = -std::numeric_limits<double>::infinity();
            for (size_t t = 0; t < vals.size(); ++t)
                best = std::max(best, vals[t] + lambdas[t] * ss[i]);
            curve.samples[i] = FStarSample{ss[i], best, {}};
        }
    } else { // oracle
        for (int i = 0; i < count; ++i)
            curve.samples[i] = FStarSample{ss[i], fstar_oracle(model, q, ss[i], seed), {}};
    }
    return curve;
}

CurveCheck validate_curve(const DbcModel& model, const FStarCurve& curve) {
    CurveCheck c;
    const auto& s = curve.samples;
    double hZ = model.hz(curve.q), hY = model.hy(curve.q);
    c.worst_slope_low = std::numeric_limits<double>::infinity();
    c.worst_slope_high = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i].value < s[i].s + hZ - hY - 1e-9) c.lower_bound_ok = false;
        if (i > 0) {
            if (s[i].value < s[i - 1].value - 1e-9) c.nondecreasing = false;
            double ds = s[i].s - s[i - 1].s;
            if (ds > 1e-15) {
                double slope = (s[i].value - s[i - 1].value) / ds;
                c.worst_slope_low = std::min(c.worst_slope_low, slope);
                c.worst_slope_high = std::max(c.worst_slope_high, slope);
                if (slope < -1e-6 || slope > 1.0 + 1e-6) c.slopes_ok = false;
            }
        }
        if (i > 0 && i + 1 < s.size()) {
            double mid = 0.5 * (s[i - 1].value + s[i + 1].value);
            if (mid < s[i].value - 1e-8) c.convex = false;
        }
        if (!s[i].witness.w.empty()) {
            double xi = conditional_entropy_given_strategy(model.T_YX, s[i].witness);
            double eta = conditional_entropy_given_strategy(model.T_ZX, s[i].witness);
            if (std::fabs(eta - s[i].value) > 1e-9 || std::fabs(xi - s[i].s) > 1e-9)
                c.witness_ok = false;
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Tensorization
// ---------------------------------------------------------------------------

namespace {

StochasticMatrix kron2(const StochasticMatrix& t) {
    StochasticMatrix out(t.rows * t.rows, t.cols * t.cols);
    for (int j1 = 0; j1 < t.rows; ++j1)
        for (int j2 = 0; j2 < t.rows; ++j2)
            for (int i1 = 0; i1 < t.cols; ++i1)
                for (int i2 = 0; i2 < t.cols; ++i2)
                    out.at(j1 * t.rows + j2, i1 * t.cols + i2) = t.at(j1, i1) * t.at(j2, i2);
    return out;
}

} // namespace

TensorizationReport tensorization_check(const DbcModel& model, std::span<const double> q,
                                        double s, const SimplexGrid& grid,
                                        std::uint64_t trials, std::uint64_t seed) {
    if (model.k != 2)
        throw std::invalid_argument("tensorization_check: only k = 2 is supported");
    TensorizationReport rep;
    rep.s = clamp_s(model, q, s);
    EnvelopeLp e = EnvelopeLp::build(model, grid);
    FstarResult base = e.fstar_primal(q, rep.s);
    rep.fstar = base.value;

    StochasticMatrix t4y = kron2(model.T_YX), t4z = kron2(model.T_ZX);

    // (a) i.i.d. product of the single-letter witness.
    const auto& wit = base.witness;
    for (size_t j1 = 0; j1 < wit.w.size(); ++j1)
        for (size_t j2 = 0; j2 < wit.w.size(); ++j2) {
            double w = wit.w[j1] * wit.w[j2];
            if (w <= 0.0) continue;
            Vec col(4);
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) col[a * 2 + b] = wit.cols[j1][a] * wit.cols[j2][b];
            rep.product_xi += w * entropy(t4y.apply(col));
            rep.product_eta += w * entropy(t4z.apply(col));
        }
    rep.xi_error = std::fabs(rep.product_xi - 2.0 * rep.s);
    rep.eta_error = std::fabs(rep.product_eta - 2.0 * rep.fstar);

    // (b) random joint strategies with the average letter law pinned to q.
    Rng rng(seed);
    auto random_simplex = [&](int dim) {
        Vec p(dim);
        double sum = 0;
        for (int i = 0; i < dim; ++i) {
            p[i] = -std::log(std::max(rng.next_double(), 1e-300));
            sum += p[i];
        }
        for (double& v : p) v /= sum;
        return p;
    };
    const int l = 5;
    const double q0 = q[0];
    rep.trials = trials;
    rep.min_eta = std::numeric_limits<double>::infinity();
    for (std::uint64_t t = 0; t < trials; ++t) {
        std::vector<Vec> cols(l);
        Vec a(l);
        for (int j = 0; j < l; ++j) {
            cols[j] = random_simplex(4);
            // average probability that a letter is symbol 0
            a[j] = cols[j][0] + 0.5 * (cols[j][1] + cols[j][2]);
        }
        Vec w = random_simplex(l);
        double abar = 0;
        for (int j = 0; j < l; ++j) abar += w[j] * a[j];
        int jlo = 0, jhi = 0;
        for (int j = 1; j < l; ++j) {
            if (a[j] < a[jlo]) jlo = j;
            if (a[j] > a[jhi]) jhi = j;
        }
        if (std::fabs(a[jhi] - a[jlo]) < 1e-12) {
            if (std::fabs(q0 - abar) > 1e-9) continue;
        } else {
            int up = q0 > abar ? jhi : jlo;
            int dn = q0 > abar ? jlo : jhi;
            double delta = (q0 - abar) / (a[up] - a[dn]);
            if (delta > w[dn]) continue; // not enough mass to shift
            w[up] += delta;
            w[dn] -= delta;
        }
        double xi = 0, eta = 0;
        for (int j = 0; j < l; ++j) {
            if (w[j] <= 0.0) continue;
            xi += w[j] * entropy(t4y.apply(cols[j]));
            eta += w[j] * entropy(t4z.apply(cols[j]));
        }
        if (xi >= 2.0 * rep.s - 1e-12) {
            ++rep.feasible;
            rep.min_eta = std::min(rep.min_eta, eta);
        }
    }
    rep.undercut = std::max(0.0, 2.0 * rep.fstar - rep.min_eta);
    return rep;
}

} // namespace dbc
