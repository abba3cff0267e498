/**
 * @file splitting.hpp
 * @brief Constructive splitting M x N = A u B with certified mixed-norm bounds.
 *
 * Iterative form of the row-by-row induction. At every stage, with active
 * rows R and active columns C:
 *
 *   1. sigma_j = sum_{i in R} |a(i,j)| mu_i, columns of C sorted descending
 *      (ties by ascending index);
 *   2. k = largest prefix length with nu(first k columns) <= mu(R) t^{p*}
 *      (k = 0 allowed);
 *   3. tau_i = sum_{j <= k} |a(i,j)| nu_j over the prefix, i* = argmin tau
 *      (ties by largest index);
 *   4. {i*} x prefix goes to A, {i*} x (rest of C) goes to B;
 *      R loses i*, C shrinks to the prefix.
 *
 * The decisions depend only on ratios of entries, masses and t, so the
 * partition is invariant under positive rescaling of a. With
 * s = |||a|||_{p,1,t} the result satisfies
 *   ||1_A . a||_{l^{p,inf}(l^1)} <= s   and   ||1_B . a||^T <= s / t.
 * For q > 1 the same procedure runs on |a|^q with (p/q, 1, t^q).
 *
 * Every result is re-measured and a CertificationError is thrown if either
 * bound fails.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ktfunc/errors.hpp"
#include "ktfunc/measure.hpp"
#include "ktfunc/norms.hpp"
#include "ktfunc/rectnorm.hpp"

namespace ktfunc {

struct SplitStage {
    std::vector<std::size_t> active_rows;
    std::vector<std::size_t> column_order;  ///< active columns, descending sigma
    std::vector<double> sigma;              ///< aligned with column_order
    std::size_t k = 0;
    std::vector<double> row_sums;  ///< tau, aligned with active_rows
    std::size_t chosen_row = 0;
};

struct SplitTrace {
    std::vector<SplitStage> stages;
};

struct SplitResult {
    std::vector<bool> a_mask;  ///< row-major; true = cell in A, false = cell in B
    double scale = 0.0;        ///< s = triple norm of the input
    double bound_a = 0.0;      ///< ||1_A . a||
    double bound_b = 0.0;      ///< ||1_B . a||^T
    double t = 1.0;
    SplitTrace trace;

    /// bound_a + t bound_b, an upper bound for K_t.
    double upper() const { return bound_a + t * bound_b; }

    std::vector<bool> b_mask() const {
        std::vector<bool> b(a_mask.size());
        for (std::size_t k = 0; k < b.size(); ++k) b[k] = !a_mask[k];
        return b;
    }
};

/// Relative slack for the certified inequalities.
inline constexpr double kCertifyTolerance = 1e-9;

inline bool within_bound(double value, double bound) {
    return value <= bound * (1.0 + kCertifyTolerance) + 1e-300;
}

namespace detail {

/// The partition alone; p_star is the conjugate exponent of the outer weak norm.
inline std::vector<bool> split_partition(const WeightedMatrix& a, double p_star, double t,
                                         SplitTrace* trace) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const MeasureSpace& mu = a.row_space();
    const MeasureSpace& nu = a.col_space();
    const double tp = std::pow(t, p_star);

    std::vector<bool> in_a(m * n, false);
    std::vector<std::size_t> rows(m);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::vector<std::size_t> cols(n);
    std::iota(cols.begin(), cols.end(), std::size_t{0});

    while (!rows.empty()) {
        SplitStage stage;
        stage.active_rows = rows;

        std::vector<double> sigma(n, 0.0);
        double mu_r = 0.0;
        for (auto i : rows) {
            mu_r += mu.mass(i);
            for (auto j : cols) sigma[j] += std::abs(a(i, j)) * mu.mass(i);
        }
        std::stable_sort(cols.begin(), cols.end(),
                         [&](std::size_t x, std::size_t y) {
                             if (sigma[x] != sigma[y]) return sigma[x] > sigma[y];
                             return x < y;
                         });

        const double threshold = mu_r * tp;
        std::size_t k = 0;
        double nu_prefix = 0.0;
        while (k < cols.size() && nu_prefix + nu.mass(cols[k]) <= threshold) {
            nu_prefix += nu.mass(cols[k]);
            ++k;
        }

        std::vector<double> tau(rows.size(), 0.0);
        std::size_t pick = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t c = 0; c < k; ++c) {
                tau[r] += std::abs(a(rows[r], cols[c])) * nu.mass(cols[c]);
            }
            if (tau[r] < tau[pick] || (tau[r] == tau[pick] && rows[r] > rows[pick])) pick = r;
        }
        const std::size_t chosen = rows[pick];
        for (std::size_t c = 0; c < k; ++c) in_a[chosen * n + cols[c]] = true;

        if (trace) {
            stage.column_order = cols;
            for (auto j : cols) stage.sigma.push_back(sigma[j]);
            stage.k = k;
            stage.row_sums = tau;
            stage.chosen_row = chosen;
            trace->stages.push_back(std::move(stage));
        }

        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(pick));
        cols.resize(k);
    }
    return in_a;
}

inline void certify(const SplitResult& r, const char* what) {
    if (!within_bound(r.bound_a, r.scale) || !within_bound(r.bound_b, r.scale / r.t)) {
        throw CertificationError(std::string(what) + ": certified bound failed (bound_a=" +
                                 std::to_string(r.bound_a) + ", bound_b=" +
                                 std::to_string(r.bound_b) + ", scale=" +
                                 std::to_string(r.scale) + ", t=" + std::to_string(r.t) + ")");
    }
}

}  // namespace detail

/// Splitting for the (p, 1) couple, p in (1, inf].
inline SplitResult split_p_one(const WeightedMatrix& a, double t, double p,
                               const EnumerationLimits& limits = {}) {
    const CoupleSpec spec(p, 1.0, t);
    SplitResult r;
    r.t = t;
    r.scale = triple_norm(a, spec, limits).value;
    if (r.scale == 0.0) {
        r.a_mask.assign(a.rows() * a.cols(), true);
        return r;
    }
    r.a_mask = detail::split_partition(a, spec.p_star(), t, &r.trace);
    r.bound_a = mixed_weak_norm(a.masked(r.a_mask), spec);
    r.bound_b = mixed_weak_norm_T(a.masked(r.b_mask()), spec);
    detail::certify(r, "split_p_one");
    return r;
}

/// Splitting for the (inf, 1) couple.
inline SplitResult split_infty_one(const WeightedMatrix& a, double t,
                                   const EnumerationLimits& limits = {}) {
    if (!(t > 0.0)) throw SpecError("t must be > 0");
    return split_p_one(a, t, kInf, limits);
}

/// Splitting for the (p, q) couple via the q-convexification |a|^q.
inline SplitResult split_p_q(const WeightedMatrix& a, const CoupleSpec& spec,
                             const EnumerationLimits& limits = {}) {
    if (spec.q() == 1.0) return split_p_one(a, spec.t(), spec.p(), limits);

    const CoupleSpec convex = spec.convexified();
    const SplitResult inner = split_p_one(a.abs_pow(spec.q()), convex.t(), convex.p(), limits);

    SplitResult r;
    r.t = spec.t();
    r.a_mask = inner.a_mask;
    r.trace = inner.trace;
    r.scale = triple_norm(a, spec, limits).value;
    if (r.scale == 0.0) return r;
    r.bound_a = mixed_weak_norm(a.masked(r.a_mask), spec);
    r.bound_b = mixed_weak_norm_T(a.masked(r.b_mask()), spec);
    detail::certify(r, "split_p_q");
    return r;
}

}  // namespace ktfunc
