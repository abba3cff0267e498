/**
 * @file kt.hpp
 * @brief Certified brackets and exact oracles for the K_t-functional of
 *        (l^{p,inf}_M(l^q_N), l^{p,inf}_N(l^q_M)).
 *
 *   K_t(a) = inf { ||b|| + t ||c||^T : a = b + c }
 *
 * kt_bracket   C(p,q) |||a||| <= K_t <= ||1_A a|| + t ||1_B a||^T (splitting)
 * kt_exact_lp  exact value for (inf, 1) by linear programming over masks x in [0,1]
 * kt_mask_bruteforce  min over the 2^{mn} binary masks (an upper bound on K_t)
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ktfunc/errors.hpp"
#include "ktfunc/measure.hpp"
#include "ktfunc/norms.hpp"
#include "ktfunc/rectnorm.hpp"
#include "ktfunc/simplex.hpp"
#include "ktfunc/splitting.hpp"

namespace ktfunc {

enum class LowerSource { RectNorm };
enum class UpperSource { Split, MaskEnum, LpExact };

inline const char* to_string(LowerSource) { return "rect-norm x C(p,q)"; }

inline const char* to_string(UpperSource s) {
    switch (s) {
        case UpperSource::Split: return "split";
        case UpperSource::MaskEnum: return "mask-enum";
        case UpperSource::LpExact: return "lp-exact";
    }
    return "split";
}

/// A decomposition a = b + c.
struct Decomposition {
    WeightedMatrix b;
    WeightedMatrix c;
};

/// ||b|| + t ||c||^T for the couple of `spec`.
inline double decomposition_cost(const Decomposition& d, const CoupleSpec& spec) {
    return mixed_weak_norm(d.b, spec) + spec.t() * mixed_weak_norm_T(d.c, spec);
}

struct KtBracket {
    double lower = 0.0;
    double upper = 0.0;
    LowerSource lower_source = LowerSource::RectNorm;
    UpperSource upper_source = UpperSource::Split;
    double triple = 0.0;  ///< |||a|||_{p,q,t}
    std::optional<Decomposition> decomposition;
};

inline Decomposition mask_decomposition(const WeightedMatrix& a, const std::vector<bool>& a_mask) {
    std::vector<bool> b_mask(a_mask.size());
    for (std::size_t k = 0; k < a_mask.size(); ++k) b_mask[k] = !a_mask[k];
    return {a.masked(a_mask), a.masked(b_mask)};
}

inline KtBracket kt_bracket(const WeightedMatrix& a, const CoupleSpec& spec,
                            const EnumerationLimits& limits = {}) {
    const SplitResult split = split_p_q(a, spec, limits);
    KtBracket br;
    br.triple = split.scale;
    br.lower = spec.c_pq() * split.scale;
    br.upper = split.upper();
    br.upper_source = UpperSource::Split;
    br.decomposition = mask_decomposition(a, split.a_mask);
    return br;
}

struct KtExact {
    double value = 0.0;
    Decomposition decomposition;
    std::size_t pivots = 0;
};

/// Size guard for the LP oracle.
struct LpLimits {
    std::size_t max_rows = 32;
    std::size_t max_cols = 32;
    bool override_guard = false;
};

/// Exact K_t for the (inf, 1) couple.
///
/// Variables x_ij in [0,1] for the nonzero cells, u, w >= 0:
///   min u + t (V - w)
///   sum_j x_ij |a_ij| nu_j <= u                       (every row i)
///   sum_i (1 - x_ij) |a_ij| mu_i <= V - w             (every column j)
/// with V = max column mass, so the origin is feasible and w <= V is implied.
/// The optimum gives b = x . a, c = (1 - x) . a.
inline KtExact kt_exact_lp(const WeightedMatrix& a, double t, const LpLimits& limits = {}) {
    if (!(t > 0.0)) throw SpecError("t must be > 0");
    if (!limits.override_guard && (a.rows() > limits.max_rows || a.cols() > limits.max_cols)) {
        throw CapacityError("LP oracle limited to " + std::to_string(limits.max_rows) + "x" +
                            std::to_string(limits.max_cols) + " instances");
    }
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const auto& mu = a.row_space();
    const auto& nu = a.col_space();

    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (a(i, j) != 0.0) cells.emplace_back(i, j);

    KtExact out;
    std::vector<double> x(cells.size(), 0.0);
    if (!cells.empty()) {
        std::vector<double> colsum(n, 0.0);
        for (auto [i, j] : cells) colsum[j] += std::abs(a(i, j)) * mu.mass(i);
        const double big_v = *std::max_element(colsum.begin(), colsum.end());

        const std::size_t nv = cells.size() + 2;
        const std::size_t u_idx = cells.size();
        const std::size_t w_idx = cells.size() + 1;
        std::vector<std::vector<double>> rows;
        std::vector<double> rhs;
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> r(nv, 0.0);
            for (std::size_t c = 0; c < cells.size(); ++c)
                if (cells[c].first == i) r[c] = std::abs(a(i, cells[c].second)) * nu.mass(cells[c].second);
            r[u_idx] = -1.0;
            rows.push_back(std::move(r));
            rhs.push_back(0.0);
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> r(nv, 0.0);
            for (std::size_t c = 0; c < cells.size(); ++c)
                if (cells[c].second == j) r[c] = -std::abs(a(cells[c].first, j)) * mu.mass(cells[c].first);
            r[w_idx] = 1.0;
            rows.push_back(std::move(r));
            rhs.push_back(big_v - colsum[j]);
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            std::vector<double> r(nv, 0.0);
            r[c] = 1.0;
            rows.push_back(std::move(r));
            rhs.push_back(1.0);
        }
        std::vector<double> cost(nv, 0.0);
        cost[u_idx] = 1.0;
        cost[w_idx] = -t;

        auto sol = DenseSimplex(std::move(rows), std::move(rhs), std::move(cost)).solve();
        for (std::size_t c = 0; c < cells.size(); ++c) x[c] = std::clamp(sol.x[c], 0.0, 1.0);
        out.pivots = sol.pivots;
    }

    std::vector<double> b(m * n, 0.0), c(m * n, 0.0);
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const auto [i, j] = cells[k];
        b[i * n + j] = x[k] * a(i, j);
        c[i * n + j] = a(i, j) - b[i * n + j];
    }
    out.decomposition = {WeightedMatrix(mu, nu, std::move(b)), WeightedMatrix(mu, nu, std::move(c))};
    out.value = mixed_inf_one(out.decomposition.b) + t * mixed_inf_one_T(out.decomposition.c);
    return out;
}

struct KtMask {
    double value = 0.0;
    std::vector<bool> a_mask;
};

/// min over binary masks A of ||1_A a|| + t ||1_{A^c} a||^T; guard m*n <= 20.
inline KtMask kt_mask_bruteforce(const WeightedMatrix& a, const CoupleSpec& spec,
                                 std::size_t max_cells = 20, bool override_guard = false) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    const std::size_t cells = m * n;
    if (!override_guard && cells > max_cells) {
        throw CapacityError("mask enumeration limited to " + std::to_string(max_cells) +
                            " cells, instance has " + std::to_string(cells));
    }
    if (cells >= 63) throw CapacityError("mask enumeration needs fewer than 63 cells");

    const double q = spec.q();
    const double p = spec.p();
    const double t = spec.t();
    const auto& mu = a.row_space();
    const auto& nu = a.col_space();
    // |a|^q nu_j for row norms, |a|^q mu_i for column norms
    std::vector<double> wr(cells), wc(cells);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double v = std::pow(std::abs(a(i, j)), q);
            wr[i * n + j] = v * nu.mass(j);
            wc[i * n + j] = v * mu.mass(i);
        }

    auto root = [q](double s) { return q == 1.0 ? s : std::pow(s, 1.0 / q); };
    std::vector<double> rs(m), cs(n);
    KtMask best;
    bool have = false;
    std::uint64_t best_mask = 0;
    const std::uint64_t total = std::uint64_t{1} << cells;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        std::fill(rs.begin(), rs.end(), 0.0);
        std::fill(cs.begin(), cs.end(), 0.0);
        for (std::size_t k = 0; k < cells; ++k) {
            if (mask >> k & 1U) rs[k / n] += wr[k];
            else cs[k % n] += wc[k];
        }
        for (auto& v : rs) v = root(v);
        for (auto& v : cs) v = root(v);
        const double cost = weak_lp_norm(rs, mu, p) + t * weak_lp_norm(cs, nu, p);
        if (!have || cost < best.value) {
            best.value = cost;
            best_mask = mask;
            have = true;
        }
    }
    best.a_mask.resize(cells);
    for (std::size_t k = 0; k < cells; ++k) best.a_mask[k] = (best_mask >> k & 1U) != 0;
    return best;
}

/// kt_bracket with the upper end tightened by the exact LP ((inf,1) only) or the
/// mask enumeration, whichever applies within its guard.
inline KtBracket kt_bracket_refined(const WeightedMatrix& a, const CoupleSpec& spec,
                                    const EnumerationLimits& limits = {}) {
    KtBracket br = kt_bracket(a, spec, limits);
    if (std::isinf(spec.p()) && spec.q() == 1.0 && a.rows() <= 32 && a.cols() <= 32) {
        KtExact ex = kt_exact_lp(a, spec.t());
        if (ex.value < br.upper) {
            br.upper = ex.value;
            br.upper_source = UpperSource::LpExact;
            br.decomposition = std::move(ex.decomposition);
        }
    } else if (a.rows() * a.cols() <= 20) {
        KtMask mk = kt_mask_bruteforce(a, spec);
        if (mk.value < br.upper) {
            br.upper = mk.value;
            br.upper_source = UpperSource::MaskEnum;
            br.decomposition = mask_decomposition(a, mk.a_mask);
        }
    }
    return br;
}

}  // namespace ktfunc
