#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dbc/prob.hpp"

namespace dbc {

// Finite group given by its operation table, 0-based: op(i,j) = i (+) j.
struct GroupTable {
    int order = 0;
    std::vector<int> table; // row-major, order*order

    int apply(int i, int j) const { return table[static_cast<size_t>(i) * order + j]; }

    // Exhaustive check: Latin square, associativity, identity, inverses.
    // Throws std::invalid_argument naming the first failure.
    void validate() const;

    static GroupTable cyclic(int n);
};

// Multiplication on {0,..,n}: 0 is absorbing and {1,..,n} forms a group.
struct MultTable {
    int n = 0;              // nonzero alphabet size; symbols 0..n
    std::vector<int> table; // (n+1)^2

    int apply(int i, int j) const { return table[static_cast<size_t>(i) * (n + 1) + j]; }
    void validate() const;
    GroupTable nonzero_group() const;

    static MultTable from_group(const GroupTable& g);
    static MultTable gf_prime(int p); // multiplication mod a prime p; n = p-1
};

// Degraded broadcast channel X -> Y -> Z. T_YX is n x k, T_ZX is m x k,
// both column-stochastic. T_ZY, when present, is an m x n factor with
// T_ZX = T_ZY T_YX.
struct DbcModel {
    int k = 0, n = 0, m = 0;
    StochasticMatrix T_YX, T_ZX;
    std::optional<StochasticMatrix> T_ZY;
    std::string family; // constructor tag, empty for generic channels

    // Extra structure recorded by the family constructors.
    struct ZInfo {
        double alpha1 = 0, alpha2 = 0;
    };
    struct BscInfo {
        double alpha1 = 0, alpha2 = 0;
    };
    struct BecInfo {
        double a1 = 0, a2 = 0;
    };
    struct GroupInfo {
        GroupTable group;
        Vec noise1, noise2;
    };
    struct MultInfo {
        MultTable table;
        double alpha1 = 0, alpha_delta = 0, alpha2 = 0;
        Vec sub_noise1, sub_noise2;
        StochasticMatrix sub_TYX, sub_TZY, sub_TZX; // inner group-additive channel
    };
    std::optional<ZInfo> z;
    std::optional<BscInfo> bsc;
    std::optional<BecInfo> bec;
    std::optional<GroupInfo> group;
    std::optional<MultInfo> mult;

    double hy(std::span<const double> q) const { return entropy(T_YX.apply(q)); }
    double hz(std::span<const double> q) const { return entropy(T_ZX.apply(q)); }
    double hy_given_x(std::span<const double> q) const; // sum_i q_i H(T_YX e_i)
    double hz_given_x(std::span<const double> q) const;
};

struct ValidationReport {
    bool dims_ok = false;
    bool stochastic_ok = false;
    bool degraded_ok = false;            // a factor is attached or was found
    double factor_residual = 0.0;        // max |T_ZY T_YX - T_ZX|
    bool factor_searched = false;        // true when no T_ZY was attached
    std::vector<std::string> problems;

    bool ok() const { return dims_ok && stochastic_ok && degraded_ok; }
    std::string summary() const;
};

// Checks dimensions, column stochasticity (naming the offending column)
// and the factorization residual. When the model carries no T_ZY, a
// degrading channel is searched for and its residual reported.
ValidationReport validate_dbc(const DbcModel& model);

// Solves the linear feasibility problem for a column-stochastic W with
// W T_YX = T_ZX. Returns the factor when the residual is at most 1e-7
// entrywise, otherwise nullopt.
std::optional<StochasticMatrix> find_degrading_channel(const StochasticMatrix& T_YX,
                                                       const StochasticMatrix& T_ZX);

// Binary symmetric pair, 0 < a1 <= a2 < 1/2.
DbcModel make_broadcast_bsc(double alpha1, double alpha2);

// Z-channel pair, 0 < a1 <= a2 < 1. Index 0 is the noiseless input symbol
// "1"; index 1 is the noisy symbol "0", so q = Pr(X=0) is the second
// entry of the input law.
DbcModel make_broadcast_z(double alpha1, double alpha2);

// Binary erasure pair, 0 <= a1 <= a2 <= 1; outputs are (sym1, erasure, sym2).
DbcModel make_broadcast_bec(double a1, double a2);

// Y = X (+) N1, Z = Y (+) N2 over the given group.
DbcModel make_group_additive(const GroupTable& g, const Vec& noise1, const Vec& noise2);

// Y = X (x) N1, Z = Y (x) N2 on {0..n}: erasure-to-zero shell with
// probability alpha1 (resp. alpha_delta for the second stage) around a
// group-additive subchannel on the nonzero symbols.
DbcModel make_multiplicative(const MultTable& mt, double alpha1, double alpha_delta,
                             const Vec& sub_noise1, const Vec& sub_noise2);

// Two-input channel with 4-ary intermediate output whose (T_YX, T_ZX)
// symmetry set is transitive while the symmetry set of the degrading
// factor T_ZY alone is not.
DbcModel make_example_is_dbc();

} // namespace dbc
