#include "dbc/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dbc {

namespace {

constexpr double kRcTol = 1e-10;    // reduced-cost optimality tolerance
constexpr double kPivotTol = 1e-11; // ratio-test pivot tolerance
constexpr double kFeasTol = 1e-9;   // phase-1 acceptance

struct Simplex {
    int r;
    const ColumnSource& src;
    Vec sign;     // row sign flips making b >= 0
    Vec b;        // transformed rhs
    Vec costs;    // cached real-column costs
    size_t ncols; // real columns; artificial j is ncols + i

    std::vector<size_t> basis;
    Vec binv; // r x r row-major
    Vec xb;
    std::vector<char> in_basis; // real columns currently basic

    Vec dense; // cached columns (transformed), r x ncols, optional
    bool have_dense = false;

    Vec col_buf, dir, y, rc;
    int iterations = 0;

    Simplex(int nrows, const ColumnSource& s, std::span<const double> rhs)
        : r(nrows), src(s), sign(nrows, 1.0), b(rhs.begin(), rhs.end()),
          ncols(s.count), in_basis(s.count, 0), col_buf(nrows), dir(nrows),
          y(nrows), rc(s.count) {
        for (int i = 0; i < r; ++i)
            if (b[i] < 0.0) {
                sign[i] = -1.0;
                b[i] = -b[i];
            }
        costs.resize(ncols);
        for (size_t j = 0; j < ncols; ++j) costs[j] = src.cost(j);
        if (!src.price_all && ncols * static_cast<size_t>(r) <= (1u << 22)) {
            dense.resize(ncols * static_cast<size_t>(r));
            for (size_t j = 0; j < ncols; ++j) {
                src.column(j, col_buf.data());
                for (int i = 0; i < r; ++i)
                    dense[j * r + i] = sign[i] * col_buf[i];
            }
            have_dense = true;
        }
    }

    void fetch(size_t j, double* out) {
        if (j >= ncols) {
            std::fill(out, out + r, 0.0);
            out[j - ncols] = 1.0;
            return;
        }
        if (have_dense) {
            std::copy(&dense[j * r], &dense[j * r] + r, out);
            return;
        }
        src.column(j, out);
        for (int i = 0; i < r; ++i) out[i] *= sign[i];
    }

    // Rebuilds binv and xb from the current basis by Gauss-Jordan.
    // Returns false if the basis matrix is singular.
    bool refactorize() {
        Vec m(static_cast<size_t>(r) * 2 * r, 0.0); // [B | I]
        for (int c = 0; c < r; ++c) {
            fetch(basis[c], col_buf.data());
            for (int i = 0; i < r; ++i) m[static_cast<size_t>(i) * 2 * r + c] = col_buf[i];
        }
        for (int i = 0; i < r; ++i) m[static_cast<size_t>(i) * 2 * r + r + i] = 1.0;
        for (int c = 0; c < r; ++c) {
            int piv = c;
            for (int i = c + 1; i < r; ++i)
                if (std::fabs(m[static_cast<size_t>(i) * 2 * r + c]) >
                    std::fabs(m[static_cast<size_t>(piv) * 2 * r + c]))
                    piv = i;
            if (std::fabs(m[static_cast<size_t>(piv) * 2 * r + c]) < 1e-12) return false;
            if (piv != c)
                for (int t = 0; t < 2 * r; ++t)
                    std::swap(m[static_cast<size_t>(piv) * 2 * r + t],
                              m[static_cast<size_t>(c) * 2 * r + t]);
            double inv = 1.0 / m[static_cast<size_t>(c) * 2 * r + c];
            for (int t = 0; t < 2 * r; ++t) m[static_cast<size_t>(c) * 2 * r + t] *= inv;
            for (int i = 0; i < r; ++i) {
                if (i == c) continue;
                double f = m[static_cast<size_t>(i) * 2 * r + c];
                if (f == 0.0) continue;
                for (int t = 0; t < 2 * r; ++t)
                    m[static_cast<size_t>(i) * 2 * r + t] -=
                        f * m[static_cast<size_t>(c) * 2 * r + t];
            }
        }
        binv.assign(static_cast<size_t>(r) * r, 0.0);
        for (int i = 0; i < r; ++i)
            for (int t = 0; t < r; ++t)
                binv[static_cast<size_t>(i) * r + t] = m[static_cast<size_t>(i) * 2 * r + r + t];
        xb.assign(r, 0.0);
        for (int i = 0; i < r; ++i) {
            double s = 0.0;
            for (int t = 0; t < r; ++t) s += binv[static_cast<size_t>(i) * r + t] * b[t];
            xb[i] = s;
        }
        return true;
    }

    double phase_cost(size_t j, bool phase1) const {
        if (phase1) return j >= ncols ? 1.0 : 0.0;
        return j >= ncols ? 0.0 : costs[j];
    }

    void compute_duals(bool phase1) {
        for (int t = 0; t < r; ++t) {
            double s = 0.0;
            for (int i = 0; i < r; ++i)
                s += phase_cost(basis[i], phase1) * binv[static_cast<size_t>(i) * r + t];
            y[t] = s;
        }
    }

    // Entering column, or SIZE_MAX at optimality.
    size_t price(bool phase1, bool bland) {
        size_t best = std::numeric_limits<size_t>::max();
        double best_rc = -kRcTol;
        if (src.price_all) {
            // price_all works in original row signs.
            Vec yt(r);
            for (int i = 0; i < r; ++i) yt[i] = y[i] * sign[i];
            src.price_all(yt.data(), rc.data());
            if (phase1)
                for (size_t j = 0; j < ncols; ++j) rc[j] -= costs[j];
            for (size_t j = 0; j < ncols; ++j) {
                if (in_basis[j]) continue;
                if (rc[j] < best_rc) {
                    best_rc = rc[j];
                    best = j;
                    if (bland) break;
                }
            }
        } else {
            for (size_t j = 0; j < ncols; ++j) {
                if (in_basis[j]) continue;
                double dot = 0.0;
                if (have_dense) {
                    const double* cj = &dense[j * r];
                    for (int i = 0; i < r; ++i) dot += y[i] * cj[i];
                } else {
                    fetch(j, col_buf.data());
                    for (int i = 0; i < r; ++i) dot += y[i] * col_buf[i];
                }
                double v = phase_cost(j, phase1) - dot;
                if (v < best_rc) {
                    best_rc = v;
                    best = j;
                    if (bland) break;
                }
            }
        }
        if (phase1 && !(bland && best != std::numeric_limits<size_t>::max())) {
            // Artificial columns may re-enter during phase 1. Under Bland's
            // rule a real column found above has the smaller index and wins.
            for (size_t ai = 0; ai < static_cast<size_t>(r); ++ai) {
                size_t j = ncols + ai;
                if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
                double v = 1.0 - y[ai];
                if (v < best_rc) {
                    best_rc = v;
                    best = j;
                }
            }
        }
        return best;
    }

    // One pivot; returns false at optimality. Sets *unbounded when no row
    // limits the entering column.
    bool pivot(bool phase1, bool& bland, int& degenerate_run, bool* unbounded) {
        compute_duals(phase1);
        size_t enter = price(phase1, bland);
        if (enter == std::numeric_limits<size_t>::max()) return false;
        fetch(enter, col_buf.data());
        for (int i = 0; i < r; ++i) {
            double s = 0.0;
            for (int t = 0; t < r; ++t) s += binv[static_cast<size_t>(i) * r + t] * col_buf[t];
            dir[i] = s;
        }
        int leave = -1;
        double theta = std::numeric_limits<double>::infinity();
        for (int i = 0; i < r; ++i) {
            if (dir[i] > kPivotTol) {
                double ratio = xb[i] / dir[i];
                if (ratio < theta - 1e-14 ||
                    (ratio < theta + 1e-14 && (leave < 0 || basis[i] < basis[leave]))) {
                    theta = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) {
            *unbounded = true;
            return false;
        }
        if (theta <= 1e-13) {
            if (++degenerate_run > 50) bland = true;
        } else {
            degenerate_run = 0;
            bland = false;
        }
        double piv = dir[leave];
        for (int t = 0; t < r; ++t) binv[static_cast<size_t>(leave) * r + t] /= piv;
        for (int i = 0; i < r; ++i) {
            if (i == leave) continue;
            double f = dir[i];
            if (f == 0.0) continue;
            for (int t = 0; t < r; ++t)
                binv[static_cast<size_t>(i) * r + t] -=
                    f * binv[static_cast<size_t>(leave) * r + t];
        }
        for (int i = 0; i < r; ++i)
            if (i != leave) xb[i] = std::max(0.0, xb[i] - theta * dir[i]);
        xb[leave] = theta;
        if (basis[leave] < ncols) in_basis[basis[leave]] = 0;
        basis[leave] = enter;
        if (enter < ncols) in_basis[enter] = 1;
        ++iterations;
        return true;
    }

    double objective(bool phase1) const {
        double s = 0.0;
        for (int i = 0; i < r; ++i) s += phase_cost(basis[i], phase1) * xb[i];
        return s;
    }
};

} // namespace

LpResult solve_lp(int nrows, const ColumnSource& cols, std::span<const double> b,
                  std::span<const size_t> basis_hint, int max_iters) {
    if (nrows <= 0 || static_cast<int>(b.size()) != nrows)
        throw std::invalid_argument("solve_lp: bad row count");
    Simplex s(nrows, cols, b);
    LpResult res;

    bool need_phase1 = true;
    if (static_cast<int>(basis_hint.size()) == nrows) {
        s.basis.assign(basis_hint.begin(), basis_hint.end());
        std::fill(s.in_basis.begin(), s.in_basis.end(), 0);
        for (size_t j : s.basis)
            if (j < s.ncols) s.in_basis[j] = 1;
        if (s.refactorize()) {
            double worst = 0.0;
            for (double v : s.xb) worst = std::min(worst, v);
            if (worst >= -kFeasTol) {
                for (double& v : s.xb) v = std::max(v, 0.0);
                need_phase1 = false;
            }
        }
    }

    if (need_phase1) {
        s.basis.resize(nrows);
        std::fill(s.in_basis.begin(), s.in_basis.end(), 0);
        for (int i = 0; i < nrows; ++i) s.basis[i] = s.ncols + i;
        s.binv.assign(static_cast<size_t>(nrows) * nrows, 0.0);
        for (int i = 0; i < nrows; ++i) s.binv[static_cast<size_t>(i) * nrows + i] = 1.0;
        s.xb = s.b;
        bool bland = false, unbounded = false;
        int degen = 0;
        while (s.iterations < max_iters) {
            if (s.iterations % 100 == 99 && !s.refactorize())
                throw std::runtime_error("solve_lp: singular basis during phase 1");
            if (!s.pivot(true, bland, degen, &unbounded)) break;
        }
        res.infeasibility = s.objective(true);
        if (res.infeasibility > kFeasTol) {
            res.status = LpStatus::infeasible;
            res.iterations = s.iterations;
            return res;
        }
    }

    bool bland = false, unbounded = false;
    int degen = 0;
    while (s.iterations < max_iters) {
        if (s.iterations % 100 == 99 && !s.refactorize())
            throw std::runtime_error("solve_lp: singular basis during phase 2");
        if (!s.pivot(false, bland, degen, &unbounded)) break;
    }
    if (unbounded) {
        res.status = LpStatus::unbounded;
        res.iterations = s.iterations;
        return res;
    }
    res.status = s.iterations >= max_iters ? LpStatus::iteration_limit : LpStatus::optimal;
    res.objective = s.objective(false);
    s.compute_duals(false);
    res.dual.resize(nrows);
    for (int i = 0; i < nrows; ++i) res.dual[i] = s.y[i] * s.sign[i];
    for (int i = 0; i < nrows; ++i) {
        if (s.basis[i] < s.ncols && s.xb[i] > 1e-12) {
            res.support.push_back(s.basis[i]);
            res.weights.push_back(s.xb[i]);
        }
    }
    res.iterations = s.iterations;
    return res;
}

} // namespace dbc
