#include "dbc/prob.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dbc {

bool is_prob_vector(std::span<const double> p, double tol) {
    if (p.empty()) return false;
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= -tol) || !(v <= 1.0 + tol)) return false;
        sum += v;
    }
    return std::fabs(sum - 1.0) <= tol;
}

void check_prob_vector(std::span<const double> p, const std::string& what) {
    if (!is_prob_vector(p))
        throw std::invalid_argument(what + " is not a probability vector");
}

double entropy(std::span<const double> p) {
    if (p.empty()) throw std::invalid_argument("entropy: empty distribution");
    double h = 0.0;
    for (double v : p) {
        if (v > kProbFloor) h -= v * std::log(v);
    }
    return h < 0.0 ? 0.0 : h;
}

double binary_entropy(double x) {
    if (x < -1e-12 || x > 1.0 + 1e-12)
        throw std::domain_error("binary_entropy: argument outside [0,1]");
    x = std::clamp(x, 0.0, 1.0);
    double h = 0.0;
    if (x > kProbFloor) h -= x * std::log(x);
    if (1.0 - x > kProbFloor) h -= (1.0 - x) * std::log(1.0 - x);
    return h < 0.0 ? 0.0 : h;
}

Vec StochasticMatrix::col(int i) const {
    Vec c(rows);
    for (int j = 0; j < rows; ++j) c[j] = at(j, i);
    return c;
}

Vec StochasticMatrix::apply(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != cols)
        throw std::invalid_argument("StochasticMatrix::apply: dimension mismatch");
    Vec out(rows, 0.0);
    for (int j = 0; j < rows; ++j) {
        double s = 0.0;
        const double* row = &a[static_cast<size_t>(j) * cols];
        for (int i = 0; i < cols; ++i) s += row[i] * p[i];
        out[j] = s;
    }
    return out;
}

StochasticMatrix StochasticMatrix::times(const StochasticMatrix& rhs) const {
    if (cols != rhs.rows)
        throw std::invalid_argument("StochasticMatrix::times: dimension mismatch");
    StochasticMatrix out(rows, rhs.cols);
    for (int j = 0; j < rows; ++j)
        for (int i = 0; i < rhs.cols; ++i) {
            double s = 0.0;
            for (int t = 0; t < cols; ++t) s += at(j, t) * rhs.at(t, i);
            out.at(j, i) = s;
        }
    return out;
}

StochasticMatrix StochasticMatrix::identity(int n) {
    StochasticMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

int StochasticMatrix::bad_column(double tol) const {
    for (int i = 0; i < cols; ++i) {
        double sum = 0.0;
        bool neg = false;
        for (int j = 0; j < rows; ++j) {
            double v = at(j, i);
            if (v < -tol) neg = true;
            sum += v;
        }
        if (neg || std::fabs(sum - 1.0) > tol) return i;
    }
    return -1;
}

double max_abs_diff(const StochasticMatrix& a, const StochasticMatrix& b) {
    if (a.rows != b.rows || a.cols != b.cols)
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double m = 0.0;
    for (size_t i = 0; i < a.a.size(); ++i) m = std::max(m, std::fabs(a.a[i] - b.a[i]));
    return m;
}

Vec TransmissionStrategy::induced_input() const {
    if (cols.empty()) throw std::invalid_argument("strategy has no branches");
    Vec p(cols[0].size(), 0.0);
    for (size_t j = 0; j < w.size(); ++j)
        for (size_t i = 0; i < p.size(); ++i) p[i] += w[j] * cols[j][i];
    return p;
}

double conditional_entropy_given_strategy(const StochasticMatrix& T,
                                          const TransmissionStrategy& s) {
    if (s.w.size() != s.cols.size() || s.w.empty())
        throw std::invalid_argument("strategy: weight/column count mismatch");
    double h = 0.0;
    for (size_t j = 0; j < s.w.size(); ++j) {
        if (static_cast<int>(s.cols[j].size()) != T.cols)
            throw std::invalid_argument("strategy: column dimension mismatch");
        if (s.w[j] > 0.0) h += s.w[j] * entropy(T.apply(s.cols[j]));
    }
    return h;
}

namespace {

void enumerate_compositions(int dim, int left, int m, Vec& scratch,
                            std::vector<Vec>& out) {
    if (dim == 1) {
        scratch.push_back(static_cast<double>(left) / m);
        out.push_back(scratch);
        scratch.pop_back();
        return;
    }
    for (int i = 0; i <= left; ++i) {
        scratch.push_back(static_cast<double>(i) / m);
        enumerate_compositions(dim - 1, left - i, m, scratch, out);
        scratch.pop_back();
    }
}

std::uint64_t binom(std::uint64_t n, std::uint64_t r) {
    if (r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t v = 1;
    for (std::uint64_t i = 1; i <= r; ++i) v = v * (n - r + i) / i;
    return v;
}

} // namespace

std::uint64_t simplex_grid_size(int dim, int resolution) {
    return binom(static_cast<std::uint64_t>(resolution) + dim - 1, dim - 1);
}

SimplexGrid SimplexGrid::make(int dim, int resolution) {
    if (dim < 1 || resolution < 1)
        throw std::invalid_argument("SimplexGrid: dim and resolution must be positive");
    SimplexGrid g;
    g.dim = dim;
    g.resolution = resolution;
    g.points.reserve(simplex_grid_size(dim, resolution));
    Vec scratch;
    scratch.reserve(dim);
    enumerate_compositions(dim, resolution, resolution, scratch, g.points);
    return g;
}

size_t SimplexGrid::snap(std::span<const double> q) const {
    if (static_cast<int>(q.size()) != dim)
        throw std::invalid_argument("SimplexGrid::snap: dimension mismatch");
    const int m = resolution;
    std::vector<int> ints(dim);
    std::vector<std::pair<double, int>> frac(dim);
    int total = 0;
    for (int i = 0; i < dim; ++i) {
        double scaled = q[i] * m;
        ints[i] = static_cast<int>(std::floor(scaled));
        ints[i] = std::clamp(ints[i], 0, m);
        frac[i] = {scaled - ints[i], i};
        total += ints[i];
    }
    // Largest remainders get the leftover units; ties resolved by index.
    std::stable_sort(frac.begin(), frac.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (int t = 0; total < m && t < dim; ++t) {
        ints[frac[t].second] += 1;
        ++total;
    }
    for (int t = dim - 1; total > m && t >= 0; --t) {
        if (ints[frac[t].second] > 0) {
            ints[frac[t].second] -= 1;
            --total;
        }
    }
    // Lexicographic rank of the composition.
    size_t rank = 0;
    int left = m;
    for (int i = 0; i < dim - 1; ++i) {
        for (int v = 0; v < ints[i]; ++v)
            rank += binom(static_cast<std::uint64_t>(left - v) + dim - i - 2, dim - i - 2);
        left -= ints[i];
    }
    return rank;
}

std::uint64_t Rng::next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double Rng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

int Rng::next_index(std::span<const double> cdf) {
    double u = next_double();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) return static_cast<int>(cdf.size()) - 1;
    return static_cast<int>(it - cdf.begin());
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0xA0761D6478BD642FULL * (stream + 1)));
    return r.next_u64();
}

Vec cumulative(std::span<const double> p) {
    Vec c(p.size());
    double s = 0.0;
    for (size_t i = 0; i < p.size(); ++i) {
        s += p[i];
        c[i] = s;
    }
    if (!c.empty()) c.back() = 1.0;
    return c;
}

} // namespace dbc
