#include "dbc/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dbc {

namespace {

void check_domain(double s, double lo, double hi, const char* what) {
    if (s < lo - kEntTol || s > hi + kEntTol) {
        std::ostringstream os;
        os << what << ": s = " << s << " outside [" << lo << ", " << hi << "]";
        throw std::domain_error(os.str());
    }
}

} // namespace

double z_p_lambda(double beta1, double beta2, double lambda) {
    if (!(0.0 < beta2 && beta2 < beta1 && beta1 < 1.0))
        throw std::domain_error("z_p_lambda: need 0 < beta2 < beta1 < 1");
    if (!(lambda >= 0.0 && lambda < beta2 / beta1))
        throw std::domain_error("z_p_lambda: lambda outside [0, beta2/beta1); "
                                "the envelope equals phi there");
    auto g = [&](double p) {
        return std::log1p(-beta2 * p) - lambda * std::log1p(-beta1 * p);
    };
    // g(0) = 0 with g'(0) = lambda*b1 - b2 < 0; an interior root exists iff
    // g(1) > 0, otherwise the chord runs to the endpoint p = 1.
    if (g(1.0) <= 0.0) return 1.0;
    double lo = 1e-9, hi = 1.0;
    if (g(lo) >= 0.0) lo = 1e-14;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double z_fstar(double q, double beta1, double beta2, double s) {
    if (!(0.0 < beta2 && beta2 <= beta1 && beta1 < 1.0))
        throw std::domain_error("z_fstar: need 0 < beta2 <= beta1 < 1");
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("z_fstar: q outside [0,1]");
    if (q < 1e-15) {
        check_domain(s, 0.0, 0.0, "z_fstar");
        return 0.0;
    }
    double lo = q * binary_entropy(beta1), hi = binary_entropy(q * beta1);
    check_domain(s, lo, hi, "z_fstar");
    s = std::clamp(s, lo, hi);
    // q h(b1 p)/p is strictly decreasing in p on [q, 1].
    double plo = q, phi_ = 1.0;
    for (int it = 0; it < 200 && phi_ - plo > 1e-15; ++it) {
        double mid = 0.5 * (plo + phi_);
        double val = q * binary_entropy(beta1 * mid) / mid;
        (val > s ? plo : phi_) = mid;
    }
    double p = 0.5 * (plo + phi_);
    return q * binary_entropy(beta2 * p) / p;
}

double bsc_p_lambda(double alpha1, double alpha2, double lambda) {
    if (!(0.0 < alpha1 && alpha1 < alpha2 && alpha2 < 0.5))
        throw std::domain_error("bsc_p_lambda: need 0 < alpha1 < alpha2 < 1/2");
    double thr = (1 - 2 * alpha2) * (1 - 2 * alpha2) / ((1 - 2 * alpha1) * (1 - 2 * alpha1));
    if (!(lambda >= 0.0 && lambda < thr))
        throw std::domain_error("bsc_p_lambda: lambda at or above the convexity "
                                "threshold; psi = phi there");
    auto hp = [](double x) { return std::log((1.0 - x) / x); };
    auto dphi = [&](double p) {
        return (1 - 2 * alpha2) * hp(alpha2 + (1 - 2 * alpha2) * p) -
               lambda * (1 - 2 * alpha1) * hp(alpha1 + (1 - 2 * alpha1) * p);
    };
    // phi is symmetric about 1/2, so p = 1/2 is always stationary. An
    // interior local minimum exists exactly when phi decreases at 0.
    if (dphi(1e-13) >= 0.0) return 0.5;
    // phi'' has the sign of rho0 + (lambda-1) p (1-p); the inflection point
    // bounds the minimum from above and phi' is positive there.
    double c1 = alpha1 * (1 - alpha1) / ((1 - 2 * alpha1) * (1 - 2 * alpha1));
    double c2 = alpha2 * (1 - alpha2) / ((1 - 2 * alpha2) * (1 - 2 * alpha2));
    double rho0 = lambda * c2 - c1;
    double hi = 0.5;
    if (rho0 > 0.0) {
        double tau = std::min(rho0 / (1.0 - lambda), 0.25);
        hi = 0.5 * (1.0 - std::sqrt(std::max(0.0, 1.0 - 4.0 * tau)));
    }
    if (dphi(hi) <= 0.0) {
        // numerical fallback: walk toward 1/2 until the sign flips
        double step = (0.5 - hi) / 64.0;
        while (hi < 0.5 && dphi(hi) <= 0.0) hi += std::max(step, 1e-6);
        if (hi >= 0.5) return 0.5;
    }
    double lo = 1e-13;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        double mid = 0.5 * (lo + hi);
        (dphi(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double bsc_fstar(double q, double alpha1, double alpha2, double s) {
    if (!(0.0 < alpha1 && alpha1 <= alpha2 && alpha2 < 0.5))
        throw std::domain_error("bsc_fstar: need 0 < alpha1 <= alpha2 < 1/2");
    if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("bsc_fstar: q outside [0,1]");
    if (q > 0.5) q = 1.0 - q; // h(a + (1-2a)q) is symmetric in q about 1/2
    double lo = binary_entropy(alpha1);
    double hi = binary_entropy(alpha1 + (1 - 2 * alpha1) * q);
    check_domain(s, lo, hi, "bsc_fstar");
    s = std::clamp(s, lo, hi);
    double plo = 0.0, phi_ = q;
    for (int it = 0; it < 200 && phi_ - plo > 1e-15; ++it) {
        double mid = 0.5 * (plo + phi_);
        double val = binary_entropy(alpha1 + (1 - 2 * alpha1) * mid);
        (val < s ? plo : phi_) = mid;
    }
    double p = 0.5 * (plo + phi_);
    return binary_entropy(alpha2 + (1 - 2 * alpha2) * p);
}

void KUserZParams::validate() const {
    if (K < 1) throw std::domain_error("KUserZParams: K must be positive");
    if (static_cast<int>(beta.size()) != K || static_cast<int>(t.size()) != K + 1)
        throw std::domain_error("KUserZParams: beta needs K entries, t needs K+1");
    for (int j = 0; j < K; ++j) {
        if (!(beta[j] > 0.0 && beta[j] < 1.0))
            throw std::domain_error("KUserZParams: beta outside (0,1)");
        if (j > 0 && beta[j] > beta[j - 1] + 1e-12)
            throw std::domain_error("KUserZParams: beta must be nonincreasing");
    }
    if (std::fabs(t[0] - 1.0) > 1e-12)
        throw std::domain_error("KUserZParams: t_0 must be 1");
    for (int j = 0; j <= K; ++j) {
        if (t[j] < -1e-12 || t[j] > 1.0 + 1e-12)
            throw std::domain_error("KUserZParams: thresholds outside [0,1]");
        if (j > 0 && t[j] > t[j - 1] + 1e-12)
            throw std::domain_error("KUserZParams: thresholds must be nonincreasing");
    }
}

Vec kuser_z_rates(const KUserZParams& params) {
    params.validate();
    const double q = params.q();
    auto term = [&](double beta, double tj) {
        if (tj <= 1e-300) return 0.0; // only reachable when q = 0
        return q / tj * binary_entropy(beta * tj);
    };
    Vec r(params.K);
    for (int j = 1; j <= params.K; ++j)
        r[j - 1] = term(params.beta[j - 1], params.t[j]) - term(params.beta[j - 1], params.t[j - 1]);
    return r;
}

MultiPhiDecomposition multi_phi_decomposition(const DbcModel& model, double q,
                                              std::span<const double> p_sub, double lambda) {
    if (!model.mult)
        throw std::invalid_argument("multi_phi_decomposition: model is not multiplicative");
    const auto& mi = *model.mult;
    const int n = mi.table.n;
    if (static_cast<int>(p_sub.size()) != n)
        throw std::invalid_argument("multi_phi_decomposition: p_sub dimension mismatch");
    check_prob_vector(p_sub, "p_sub");

    Vec px(n + 1);
    px[0] = 1.0 - q;
    for (int i = 0; i < n; ++i) px[i + 1] = q * p_sub[i];

    MultiPhiDecomposition out;
    out.lhs = phi(model, px, lambda);
    double b1 = 1.0 - mi.alpha1, b2 = 1.0 - mi.alpha2;
    double sub = entropy(mi.sub_TZX.apply(p_sub)) -
                 lambda / (1.0 - mi.alpha_delta) * entropy(mi.sub_TYX.apply(p_sub));
    out.rhs = binary_entropy(q * b2) - lambda * binary_entropy(q * b1) + q * b2 * sub;
    out.residual = std::fabs(out.lhs - out.rhs);
    return out;
}

TransmissionStrategy multiplicative_strategy(const DbcModel& model, double q, double lambda,
                                             const SimplexGrid& sub_grid) {
    if (!model.mult)
        throw std::invalid_argument("multiplicative_strategy: model is not multiplicative");
    const auto& mi = *model.mult;
    const int n = mi.table.n;
    const int k = n + 1;
    if (sub_grid.dim != n)
        throw std::invalid_argument("multiplicative_strategy: sub_grid dimension != n");
    double b1 = 1.0 - mi.alpha1, b2 = 1.0 - mi.alpha2;
    if (!(b2 < b1))
        throw std::domain_error("multiplicative_strategy: alpha_delta = 0 leaves no "
                                "Z-shell tangent");
    if (!(lambda >= 0.0 && lambda < b2 / b1))
        throw std::domain_error("multiplicative_strategy: lambda outside [0, beta2/beta1)");

    Vec uniform_sub(n, 1.0 / n);
    double p_lambda = z_p_lambda(b1, b2, lambda);
    TransmissionStrategy st;
    if (q > p_lambda) {
        // psi = phi at this input; U is a constant.
        Vec px(k);
        px[0] = 1.0 - q;
        for (int i = 0; i < n; ++i) px[i + 1] = q / n;
        st.w = {1.0};
        st.cols = {px};
        return st;
    }

    // Envelope witness of the group-additive subchannel at uniform input.
    // lambda / (1 - alpha_delta) < 1 on the admissible lambda range.
    DbcModel inner;
    inner.k = inner.n = inner.m = n;
    inner.T_YX = mi.sub_TYX;
    inner.T_ZX = mi.sub_TZX;
    inner.T_ZY = mi.sub_TZY;
    PsiResult sub = EnvelopeLp::build(inner, sub_grid).psi(uniform_sub, lambda / (1.0 - mi.alpha_delta));

    double w0 = (p_lambda - q) / p_lambda;
    if (w0 > 1e-15) {
        Vec e0(k, 0.0);
        e0[0] = 1.0;
        st.w.push_back(w0);
        st.cols.push_back(e0);
    }
    for (size_t j = 0; j < sub.witness.w.size(); ++j) {
        double w = (q / p_lambda) * sub.witness.w[j];
        if (w <= 1e-15) continue;
        Vec col(k);
        col[0] = 1.0 - p_lambda;
        for (int i = 0; i < n; ++i) col[i + 1] = p_lambda * sub.witness.cols[j][i];
        st.w.push_back(w);
        st.cols.push_back(col);
    }
    double total = 0;
    for (double w : st.w) total += w;
    for (double& w : st.w) w /= total;
    return st;
}

FStarCurve closed_form_curve(const DbcModel& model, std::span<const double> q, int count) {
    FStarCurve curve;
    curve.q.assign(q.begin(), q.end());
    curve.samples.resize(count);
    if (model.z) {
        double b1 = 1.0 - model.z->alpha1, b2 = 1.0 - model.z->alpha2;
        double qz = q[1]; // Pr(X = 0), the noisy symbol
        double lo = qz * binary_entropy(b1), hi = binary_entropy(qz * b1);
        for (int i = 0; i < count; ++i) {
            double s = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
            // recover the contact parameter p for the witness
            double plo = qz, phi_ = 1.0;
            for (int it = 0; it < 200 && phi_ - plo > 1e-15; ++it) {
                double mid = 0.5 * (plo + phi_);
                (qz * binary_entropy(b1 * mid) / mid > s ? plo : phi_) = mid;
            }
            double p = std::max(0.5 * (plo + phi_), 1e-15);
            TransmissionStrategy st;
            double w2 = qz / p;
            if (1.0 - w2 > 1e-12) {
                st.w.push_back(1.0 - w2);
                st.cols.push_back({1.0, 0.0});
            }
            st.w.push_back(std::min(w2, 1.0));
            st.cols.push_back({1.0 - p, p});
            curve.samples[i] =
                FStarSample{qz * binary_entropy(b1 * p) / p, qz * binary_entropy(b2 * p) / p,
                            std::move(st)};
        }
        return curve;
    }
    if (model.bsc) {
        double a1 = model.bsc->alpha1, a2 = model.bsc->alpha2;
        double q0 = q[0];
        double qq = std::min(q0, 1.0 - q0);
        double lo = binary_entropy(a1), hi = binary_entropy(a1 + (1 - 2 * a1) * qq);
        for (int i = 0; i < count; ++i) {
            double s = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
            double plo = 0.0, phi_ = qq;
            for (int it = 0; it < 200 && phi_ - plo > 1e-15; ++it) {
                double mid = 0.5 * (plo + phi_);
                (binary_entropy(a1 + (1 - 2 * a1) * mid) < s ? plo : phi_) = mid;
            }
            double p = 0.5 * (plo + phi_);
            TransmissionStrategy st;
            if (1.0 - 2.0 * p > 1e-12) {
                double w1 = (1.0 - p - q0) / (1.0 - 2.0 * p);
                w1 = std::clamp(w1, 0.0, 1.0);
                if (w1 > 1e-12) {
                    st.w.push_back(w1);
                    st.cols.push_back({p, 1.0 - p});
                }
                if (1.0 - w1 > 1e-12) {
                    st.w.push_back(1.0 - w1);
                    st.cols.push_back({1.0 - p, p});
                }
            } else {
                st.w.push_back(1.0);
                st.cols.push_back({0.5, 0.5});
            }
            curve.samples[i] = FStarSample{binary_entropy(a1 + (1 - 2 * a1) * p),
                                           binary_entropy(a2 + (1 - 2 * a2) * p), std::move(st)};
        }
        return curve;
    }
    throw std::invalid_argument("closed_form_curve: model has no Z or BSC closed form");
}

} // namespace dbc
