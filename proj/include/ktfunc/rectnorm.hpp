/**
 * @file rectnorm.hpp
 * @brief Rectangle-supremum norms and their argmax certificates.
 *
 *   triple_norm: sup_{E,F} (mu(E)^a v t^{-1} nu(F)^a)^{-1} ||1_{ExF} . a||_{l^q},  a = 1/q - 1/p
 *   quad_norm:   sup mu(E)^{-a} ||1_{ExF} . a||_{l^q} over t^{-1} nu(F)^a <= mu(E)^a,
 *                0 when nothing is feasible.
 *
 * For (p, q) = (inf, 1) the first is the plain (mu(E) v t^{-1} nu(F))^{-1} sum_{ExF} |a|.
 */
#pragma once

#include <algorithm>
#include <cmath>

#include "ktfunc/measure.hpp"
#include "ktfunc/norms.hpp"
#include "ktfunc/rect_search.hpp"

namespace ktfunc {

/// Which side of the denominator max is active at the witness.
enum class Regime { RowMass, ColumnMass, None };

inline const char* to_string(Regime r) {
    switch (r) {
        case Regime::RowMass: return "row-mass";
        case Regime::ColumnMass: return "column-mass";
        case Regime::None: return "none";
    }
    return "none";
}

struct RectNormResult {
    double value = 0.0;
    Rectangle witness;
    Regime regime = Regime::None;
};

/// Objective of triple_norm at one rectangle.
inline double rect_objective(const WeightedMatrix& a, const Rectangle& r, double q, double alpha,
                             double t) {
    if (r.empty()) return 0.0;
    const double mu = a.row_space().measure_of(r.rows);
    const double nu = a.col_space().measure_of(r.cols);
    const double den = std::max(std::pow(mu, alpha), std::pow(nu, alpha) / t);
    return rect_mass_sum(a, r, q) / den;
}

/// Generic rectangle norm with arbitrary alpha >= 0 (alpha = 0 is the p = 1 degeneration).
inline RectNormResult rect_norm(const WeightedMatrix& a, double q, double alpha, double t,
                                const EnumerationLimits& limits = {}) {
    const WeightedMatrix w = a.abs_pow(q);
    auto objective = [&](double s, double mu, double nu) {
        const double den = std::max(std::pow(mu, alpha), std::pow(nu, alpha) / t);
        return (q == 1.0 ? s : std::pow(s, 1.0 / q)) / den;
    };
    auto any = [](double, double) { return true; };
    auto best = detail::rect_search(w, objective, any, limits, "rectangle norm");
    RectNormResult out;
    out.value = best->value;
    out.witness = std::move(best->witness);
    out.regime = std::pow(best->mu, alpha) >= std::pow(best->nu, alpha) / t ? Regime::RowMass
                                                                           : Regime::ColumnMass;
    return out;
}

inline RectNormResult triple_norm(const WeightedMatrix& a, const CoupleSpec& spec,
                                  const EnumerationLimits& limits = {}) {
    return rect_norm(a, spec.q(), spec.alpha(), spec.t(), limits);
}

/// |||a|||_{1,t} = (1 ^ t) ||a||_{l^1(M x N)}; the alpha = 0 case has a closed form.
inline double triple_norm_p1_degenerate(const WeightedMatrix& a, double t) {
    if (!(t > 0.0)) throw SpecError("t must be > 0");
    return std::min(1.0, t) * product_lq_norm(a, 1.0);
}

inline RectNormResult quad_norm(const WeightedMatrix& a, const CoupleSpec& spec,
                                const EnumerationLimits& limits = {}) {
    const double q = spec.q();
    const double alpha = spec.alpha();
    const double t = spec.t();
    const WeightedMatrix w = a.abs_pow(q);
    auto objective = [&](double s, double mu, double) {
        return (q == 1.0 ? s : std::pow(s, 1.0 / q)) / std::pow(mu, alpha);
    };
    auto feasible = [&](double mu, double nu) {
        return std::pow(nu, alpha) / t <= std::pow(mu, alpha);
    };
    auto best = detail::rect_search(w, objective, feasible, limits, "constrained rectangle norm");
    RectNormResult out;
    if (best) {
        out.value = best->value;
        out.witness = std::move(best->witness);
        out.regime = Regime::RowMass;
    }
    return out;
}

}  // namespace ktfunc
