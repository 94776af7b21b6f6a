#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Core probability types and entropy kernels. Everything works in nats
// (natural logarithm); CLI-level bit conversion is display-only.
//
// Convention used throughout: transition matrices are COLUMN-stochastic,
// T(j,i) = Pr(out = j | in = i). Many texts use the row-stochastic
// transpose; all matrices in this project are column-stochastic.

namespace dbc {

using Vec = std::vector<double>;

inline constexpr double kSumTol = 1e-12;    // |sum(p) - 1| tolerance
inline constexpr double kEntTol = 1e-9;     // entropy identity tolerance
inline constexpr double kProbFloor = 1e-15; // entries below this are treated as 0 in logs

bool is_prob_vector(std::span<const double> p, double tol = kSumTol);

// Throws std::invalid_argument naming `what` if p is not a probability vector.
void check_prob_vector(std::span<const double> p, const std::string& what);

// -sum p_i ln p_i with 0 ln 0 = 0. Throws on dimension 0.
double entropy(std::span<const double> p);

// h(x) = -x ln x - (1-x) ln(1-x); domain [0,1] with 1e-12 slack.
double binary_entropy(double x);

struct StochasticMatrix {
    int rows = 0;
    int cols = 0;
    Vec a; // row-major, rows*cols entries

    StochasticMatrix() = default;
    StochasticMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int j, int i) { return a[static_cast<size_t>(j) * cols + i]; }
    double at(int j, int i) const { return a[static_cast<size_t>(j) * cols + i]; }

    Vec col(int i) const;
    Vec apply(std::span<const double> p) const; // T p
    StochasticMatrix times(const StochasticMatrix& rhs) const;
    static StochasticMatrix identity(int n);

    // Index of the first column whose entries are not a probability vector
    // at the given tolerance, or -1 if all columns pass.
    int bad_column(double tol = 1e-9) const;
};

// Entrywise max |A - B|; matrices must have equal dims.
double max_abs_diff(const StochasticMatrix& a, const StochasticMatrix& b);

// Auxiliary-variable strategy: U takes l values, Pr(U=j) = w[j], and
// column cols[j] is the conditional input law p_{X|U=j}.
struct TransmissionStrategy {
    Vec w;
    std::vector<Vec> cols;

    int branches() const { return static_cast<int>(w.size()); }
    Vec induced_input() const; // sum_j w_j p_j
};

// sum_j w_j H(T p_j); H(Y|U) when T = T_YX, H(Z|U) when T = T_ZX.
double conditional_entropy_given_strategy(const StochasticMatrix& T,
                                          const TransmissionStrategy& s);

// All points i/m with i a composition of m into `dim` nonnegative parts,
// enumerated in lexicographic order. Contains every vertex e_i, and the
// uniform vector whenever dim divides m.
struct SimplexGrid {
    int dim = 0;
    int resolution = 0;
    std::vector<Vec> points;

    static SimplexGrid make(int dim, int resolution);
    size_t size() const { return points.size(); }

    // Index of the grid point obtained by largest-remainder rounding of q.
    size_t snap(std::span<const double> q) const;
};

std::uint64_t simplex_grid_size(int dim, int resolution);

// SplitMix64 (Steele, Lea, Flood 2014; public domain). Chosen because the
// stream is fully specified by the seed and identical on every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double next_double(); // uniform [0,1)

    // Inverse-CDF draw from a cumulative column (nondecreasing, last = 1).
    int next_index(std::span<const double> cdf);

    // Seed for sub-stream `stream` of a master seed; used for per-chunk
    // deterministic parallel sampling.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

  private:
    std::uint64_t state_;
};

Vec cumulative(std::span<const double> p);

} // namespace dbc
