#include "dbc/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "dbc/lp.hpp"

namespace dbc {

void GroupTable::validate() const {
    if (order < 1 || static_cast<int>(table.size()) != order * order)
        throw std::invalid_argument("group table: bad size");
    for (int v : table)
        if (v < 0 || v >= order) throw std::invalid_argument("group table: entry out of range");
    // Latin square
    for (int i = 0; i < order; ++i) {
        std::vector<char> row(order, 0), col(order, 0);
        for (int j = 0; j < order; ++j) {
            if (row[apply(i, j)]++) throw std::invalid_argument("group table: repeated row entry");
            if (col[apply(j, i)]++) throw std::invalid_argument("group table: repeated column entry");
        }
    }
    int id = -1;
    for (int e = 0; e < order; ++e) {
        bool ok = true;
        for (int i = 0; i < order; ++i)
            if (apply(e, i) != i || apply(i, e) != i) {
                ok = false;
                break;
            }
        if (ok) {
            id = e;
            break;
        }
    }
    if (id < 0) throw std::invalid_argument("group table: no identity element");
    for (int i = 0; i < order; ++i) {
        bool inv = false;
        for (int j = 0; j < order; ++j)
            if (apply(i, j) == id && apply(j, i) == id) inv = true;
        if (!inv) throw std::invalid_argument("group table: missing inverse");
    }
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j)
            for (int t = 0; t < order; ++t)
                if (apply(apply(i, j), t) != apply(i, apply(j, t)))
                    throw std::invalid_argument("group table: not associative");
}

GroupTable GroupTable::cyclic(int n) {
    GroupTable g;
    g.order = n;
    g.table.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.table[static_cast<size_t>(i) * n + j] = (i + j) % n;
    return g;
}

void MultTable::validate() const {
    if (n < 1 || static_cast<int>(table.size()) != (n + 1) * (n + 1))
        throw std::invalid_argument("mult table: bad size");
    for (int i = 0; i <= n; ++i)
        if (apply(0, i) != 0 || apply(i, 0) != 0)
            throw std::invalid_argument("mult table: zero row/column must be zero");
    nonzero_group().validate();
}

GroupTable MultTable::nonzero_group() const {
    GroupTable g;
    g.order = n;
    g.table.resize(static_cast<size_t>(n) * n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            int v = apply(i, j);
            if (v < 1) throw std::invalid_argument("mult table: nonzero product is zero");
            g.table[static_cast<size_t>(i - 1) * n + (j - 1)] = v - 1;
        }
    return g;
}

MultTable MultTable::from_group(const GroupTable& g) {
    MultTable mt;
    mt.n = g.order;
    mt.table.assign(static_cast<size_t>(mt.n + 1) * (mt.n + 1), 0);
    for (int i = 1; i <= mt.n; ++i)
        for (int j = 1; j <= mt.n; ++j)
            mt.table[static_cast<size_t>(i) * (mt.n + 1) + j] = g.apply(i - 1, j - 1) + 1;
    return mt;
}

MultTable MultTable::gf_prime(int p) {
    if (p < 2) throw std::invalid_argument("gf_prime: p must be at least 2");
    MultTable mt;
    mt.n = p - 1;
    mt.table.resize(static_cast<size_t>(p) * p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) mt.table[static_cast<size_t>(i) * p + j] = (i * j) % p;
    mt.validate();
    return mt;
}

double DbcModel::hy_given_x(std::span<const double> q) const {
    double h = 0.0;
    for (int i = 0; i < k; ++i)
        if (q[i] > 0.0) h += q[i] * entropy(T_YX.col(i));
    return h;
}

double DbcModel::hz_given_x(std::span<const double> q) const {
    double h = 0.0;
    for (int i = 0; i < k; ++i)
        if (q[i] > 0.0) h += q[i] * entropy(T_ZX.col(i));
    return h;
}

std::string ValidationReport::summary() const {
    std::ostringstream os;
    os << (ok() ? "valid degraded pair" : "INVALID");
    os << "; factor residual " << factor_residual;
    if (factor_searched) os << " (factor recovered by search)";
    for (const auto& p : problems) os << "\n  - " << p;
    return os.str();
}

ValidationReport validate_dbc(const DbcModel& model) {
    ValidationReport rep;
    rep.dims_ok = model.k > 0 && model.n > 0 && model.m > 0 &&
                  model.T_YX.rows == model.n && model.T_YX.cols == model.k &&
                  model.T_ZX.rows == model.m && model.T_ZX.cols == model.k;
    if (!rep.dims_ok) rep.problems.push_back("matrix dimensions inconsistent with k, n, m");
    if (model.T_ZY &&
        (model.T_ZY->rows != model.m || model.T_ZY->cols != model.n)) {
        rep.dims_ok = false;
        rep.problems.push_back("T_ZY dimensions inconsistent");
    }
    if (!rep.dims_ok) return rep;

    rep.stochastic_ok = true;
    if (int c = model.T_YX.bad_column(); c >= 0) {
        rep.stochastic_ok = false;
        rep.problems.push_back("T_YX column " + std::to_string(c) + " is not stochastic");
    }
    if (int c = model.T_ZX.bad_column(); c >= 0) {
        rep.stochastic_ok = false;
        rep.problems.push_back("T_ZX column " + std::to_string(c) + " is not stochastic");
    }
    if (model.T_ZY) {
        if (int c = model.T_ZY->bad_column(); c >= 0) {
            rep.stochastic_ok = false;
            rep.problems.push_back("T_ZY column " + std::to_string(c) + " is not stochastic");
        }
    }
    if (!rep.stochastic_ok) return rep;

    if (model.T_ZY) {
        rep.factor_residual = max_abs_diff(model.T_ZY->times(model.T_YX), model.T_ZX);
        rep.degraded_ok = rep.factor_residual <= 1e-9;
        if (!rep.degraded_ok)
            rep.problems.push_back("attached T_ZY does not factor T_ZX (residual " +
                                   std::to_string(rep.factor_residual) + ")");
    } else {
        rep.factor_searched = true;
        auto w = find_degrading_channel(model.T_YX, model.T_ZX);
        if (w) {
            rep.factor_residual = max_abs_diff(w->times(model.T_YX), model.T_ZX);
            rep.degraded_ok = true;
        } else {
            rep.degraded_ok = false;
            rep.problems.push_back("no degrading channel found: pair is not "
                                   "stochastically degraded at tolerance 1e-7");
        }
    }
    return rep;
}

std::optional<StochasticMatrix> find_degrading_channel(const StochasticMatrix& T_YX,
                                                       const StochasticMatrix& T_ZX) {
    if (T_YX.cols != T_ZX.cols)
        throw std::invalid_argument("find_degrading_channel: input alphabets differ");
    const int n = T_YX.rows, m = T_ZX.rows, k = T_YX.cols;
    // Variables W(i,y), i < m, y < n, flattened i*n + y.
    // Rows: W T_YX = T_ZX entrywise (m*k), then column sums of W (n).
    const int nrows = m * k + n;
    const size_t nvars = static_cast<size_t>(m) * n;
    ColumnSource src;
    src.count = nvars;
    src.cost = [](size_t) { return 0.0; };
    src.column = [&](size_t v, double* out) {
        std::fill(out, out + nrows, 0.0);
        int i = static_cast<int>(v) / n, y = static_cast<int>(v) % n;
        for (int j = 0; j < k; ++j) out[i * k + j] = T_YX.at(y, j);
        out[m * k + y] = 1.0;
    };
    Vec b(nrows);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < k; ++j) b[i * k + j] = T_ZX.at(i, j);
    for (int y = 0; y < n; ++y) b[m * k + y] = 1.0;

    LpResult res = solve_lp(nrows, src, b);
    if (res.status != LpStatus::optimal) return std::nullopt;

    StochasticMatrix w(m, n);
    for (size_t t = 0; t < res.support.size(); ++t) {
        size_t v = res.support[t];
        w.a[v] = res.weights[t];
    }
    if (max_abs_diff(w.times(T_YX), T_ZX) > 1e-7) return std::nullopt;
    return w;
}

DbcModel make_broadcast_bsc(double a1, double a2) {
    if (!(0.0 < a1 && a1 <= a2 && a2 < 0.5))
        throw std::domain_error("make_broadcast_bsc: need 0 < a1 <= a2 < 1/2");
    DbcModel md;
    md.k = md.n = md.m = 2;
    md.T_YX = StochasticMatrix(2, 2);
    md.T_YX.a = {1 - a1, a1, a1, 1 - a1};
    md.T_ZX = StochasticMatrix(2, 2);
    md.T_ZX.a = {1 - a2, a2, a2, 1 - a2};
    double ad = (a2 - a1) / (1 - 2 * a1);
    StochasticMatrix zy(2, 2);
    zy.a = {1 - ad, ad, ad, 1 - ad};
    md.T_ZY = zy;
    md.family = "broadcast_bsc";
    md.bsc = DbcModel::BscInfo{a1, a2};
    return md;
}

DbcModel make_broadcast_z(double a1, double a2) {
    if (!(0.0 < a1 && a1 <= a2 && a2 < 1.0))
        throw std::domain_error("make_broadcast_z: need 0 < a1 <= a2 < 1");
    DbcModel md;
    md.k = md.n = md.m = 2;
    md.T_YX = StochasticMatrix(2, 2);
    md.T_YX.a = {1, a1, 0, 1 - a1};
    md.T_ZX = StochasticMatrix(2, 2);
    md.T_ZX.a = {1, a2, 0, 1 - a2};
    double ad = (a2 - a1) / (1 - a1);
    StochasticMatrix zy(2, 2);
    zy.a = {1, ad, 0, 1 - ad};
    md.T_ZY = zy;
    md.family = "broadcast_z";
    md.z = DbcModel::ZInfo{a1, a2};
    return md;
}

DbcModel make_broadcast_bec(double a1, double a2) {
    if (!(0.0 <= a1 && a1 <= a2 && a2 <= 1.0))
        throw std::domain_error("make_broadcast_bec: need 0 <= a1 <= a2 <= 1");
    DbcModel md;
    md.k = 2;
    md.n = md.m = 3;
    md.T_YX = StochasticMatrix(3, 2);
    md.T_YX.a = {1 - a1, 0, a1, a1, 0, 1 - a1};
    md.T_ZX = StochasticMatrix(3, 2);
    md.T_ZX.a = {1 - a2, 0, a2, a2, 0, 1 - a2};
    double ad = a1 < 1.0 ? (a2 - a1) / (1 - a1) : 0.0;
    StochasticMatrix zy(3, 3);
    zy.a = {1 - ad, 0, 0, ad, 1, ad, 0, 0, 1 - ad};
    md.T_ZY = zy;
    md.family = "broadcast_bec";
    md.bec = DbcModel::BecInfo{a1, a2};
    return md;
}

namespace {

// T = sum_x noise[x] G_x with G_x(i,j) = 1 iff j (+) x = i.
StochasticMatrix group_noise_matrix(const GroupTable& g, const Vec& noise) {
    const int n = g.order;
    StochasticMatrix t(n, n);
    for (int x = 0; x < n; ++x)
        for (int j = 0; j < n; ++j) t.at(g.apply(j, x), j) += noise[x];
    return t;
}

} // namespace

DbcModel make_group_additive(const GroupTable& g, const Vec& noise1, const Vec& noise2) {
    g.validate();
    if (static_cast<int>(noise1.size()) != g.order ||
        static_cast<int>(noise2.size()) != g.order)
        throw std::invalid_argument("make_group_additive: noise dimension != group order");
    check_prob_vector(noise1, "noise1");
    check_prob_vector(noise2, "noise2");
    DbcModel md;
    md.k = md.n = md.m = g.order;
    md.T_YX = group_noise_matrix(g, noise1);
    md.T_ZY = group_noise_matrix(g, noise2);
    md.T_ZX = md.T_ZY->times(md.T_YX);
    md.family = "group_additive";
    md.group = DbcModel::GroupInfo{g, noise1, noise2};
    return md;
}

DbcModel make_multiplicative(const MultTable& mt, double alpha1, double alpha_delta,
                             const Vec& sub_noise1, const Vec& sub_noise2) {
    mt.validate();
    const int n = mt.n;
    if (static_cast<int>(sub_noise1.size()) != n || static_cast<int>(sub_noise2.size()) != n)
        throw std::invalid_argument("make_multiplicative: sub-noise dimension != nonzero alphabet");
    if (!(alpha1 >= 0.0 && alpha1 < 1.0 && alpha_delta >= 0.0 && alpha_delta < 1.0))
        throw std::domain_error("make_multiplicative: alphas must lie in [0,1)");
    check_prob_vector(sub_noise1, "sub_noise1");
    check_prob_vector(sub_noise2, "sub_noise2");
    GroupTable g = mt.nonzero_group();
    StochasticMatrix sub_yx = group_noise_matrix(g, sub_noise1);
    StochasticMatrix sub_zy = group_noise_matrix(g, sub_noise2);

    auto shell = [&](double alpha, const StochasticMatrix& inner) {
        StochasticMatrix t(n + 1, n + 1);
        t.at(0, 0) = 1.0;
        for (int j = 1; j <= n; ++j) t.at(0, j) = alpha;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) t.at(i, j) = (1.0 - alpha) * inner.at(i - 1, j - 1);
        return t;
    };

    DbcModel md;
    md.k = md.n = md.m = n + 1;
    md.T_YX = shell(alpha1, sub_yx);
    md.T_ZY = shell(alpha_delta, sub_zy);
    md.T_ZX = md.T_ZY->times(md.T_YX);
    md.family = "multiplicative";
    DbcModel::MultInfo info;
    info.table = mt;
    info.alpha1 = alpha1;
    info.alpha_delta = alpha_delta;
    info.alpha2 = alpha1 + (1.0 - alpha1) * alpha_delta;
    info.sub_noise1 = sub_noise1;
    info.sub_noise2 = sub_noise2;
    info.sub_TYX = sub_yx;
    info.sub_TZY = sub_zy;
    info.sub_TZX = sub_zy.times(sub_yx);
    md.mult = std::move(info);
    return md;
}

DbcModel make_example_is_dbc() {
    // k = 2 inputs, 4-ary Y, binary Z. Columns of T_YX are reversals of
    // each other, so the pair symmetry contains the input swap; the four
    // columns of T_ZY pair up only under (13)(24), which fixes no
    // transitive action on the Y alphabet.
    DbcModel md;
    md.k = 2;
    md.n = 4;
    md.m = 2;
    md.T_YX = StochasticMatrix(4, 2);
    md.T_YX.a = {0.4, 0.2, 0.3, 0.1, 0.2, 0.4, 0.1, 0.3};
    StochasticMatrix zy(2, 4);
    zy.a = {0.7, 0.6, 0.3, 0.4, 0.3, 0.4, 0.7, 0.6};
    md.T_ZX = zy.times(md.T_YX);
    md.T_ZY = zy;
    md.family = "is_example";
    return md;
}

} // namespace dbc
