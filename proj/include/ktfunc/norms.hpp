/**
 * @file norms.hpp
 * @brief Weighted lq, weak-lp, Lorentz and mixed norms on finite spaces.
 *
 * Exponents are plain doubles; infinity is std::numeric_limits<double>::infinity().
 * Weak-lp and Lorentz values are the rearrangement quasi-norms themselves;
 * no equivalent renorming is applied.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "ktfunc/errors.hpp"
#include "ktfunc/measure.hpp"

namespace ktfunc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Exponent pair (p, q) of the couple l^{p,inf}(l^q), l^{p,inf}(l^q)^T plus the K_t parameter.
class CoupleSpec {
public:
    CoupleSpec(double p, double q, double t) : p_(p), q_(q), t_(t) {
        if (!(q >= 1.0) || !std::isfinite(q)) {
            throw SpecError("q must be finite and >= 1");
        }
        if (!(p > q) || !(p > 1.0)) {
            throw SpecError("need 1 <= q < p <= inf");
        }
        if (!(t > 0.0) || !std::isfinite(t)) {
            throw SpecError("t must be finite and > 0");
        }
    }

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    double t() const noexcept { return t_; }

    /// 1/p with 1/inf = 0.
    double inv_p() const noexcept { return std::isinf(p_) ? 0.0 : 1.0 / p_; }
    /// Conjugate exponent; p* = 1 at p = inf.
    double p_star() const noexcept { return std::isinf(p_) ? 1.0 : p_ / (p_ - 1.0); }
    double alpha() const noexcept { return 1.0 / q_ - inv_p(); }
    /// (1 - q/p)^{1/q}; equals 1 at p = inf.
    double c_pq() const noexcept { return std::pow(1.0 - q_ * inv_p(), 1.0 / q_); }

    CoupleSpec with_t(double t) const { return CoupleSpec(p_, q_, t); }

    /// (p/q, 1, t^q): the couple that |a|^q sees.
    CoupleSpec convexified() const {
        return CoupleSpec(std::isinf(p_) ? kInf : p_ / q_, 1.0, std::pow(t_, q_));
    }

    friend bool operator==(const CoupleSpec&, const CoupleSpec&) = default;

private:
    double p_;
    double q_;
    double t_;
};

inline void check_length(std::span<const double> f, const MeasureSpace& space) {
    if (f.size() != space.size()) {
        throw InstanceError("vector has " + std::to_string(f.size()) + " entries, space has " +
                            std::to_string(space.size()) + " atoms");
    }
}

/// (sum |f_i|^q mass_i)^{1/q}; max |f_i| for q = inf.
inline double lq_norm(std::span<const double> f, const MeasureSpace& space, double q) {
    check_length(f, space);
    if (!(q >= 1.0)) throw SpecError("lq_norm needs q >= 1");
    if (std::isinf(q)) {
        double m = 0.0;
        for (double v : f) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double v = std::abs(f[i]);
        s += (q == 1.0 ? v : std::pow(v, q)) * space.mass(i);
    }
    return q == 1.0 ? s : std::pow(s, 1.0 / q);
}

/// sup_t t^{1/p} f*(t). The sup over each step is approached at its right endpoint.
inline double weak_lp_norm(std::span<const double> f, const MeasureSpace& space, double p) {
    check_length(f, space);
    if (!(p > 0.0)) throw SpecError("weak_lp_norm needs p > 0");
    if (std::isinf(p)) return lq_norm(f, space, kInf);
    double best = 0.0;
    for (const auto& st : rearrange(f, space).steps) {
        best = std::max(best, st.value * std::pow(st.right_endpoint, 1.0 / p));
    }
    return best;
}

/// (int_0^inf (t^{1/p} f*(t))^q dt/t)^{1/q}, integrated exactly over the steps of f*.
inline double lorentz_pq_norm(std::span<const double> f, const MeasureSpace& space, double p,
                              double q) {
    check_length(f, space);
    if (!(p > 0.0) || std::isinf(p)) throw SpecError("lorentz_pq_norm needs 0 < p < inf");
    if (!(q >= 1.0) || std::isinf(q)) throw SpecError("lorentz_pq_norm needs 1 <= q < inf");
    const double e = q / p;
    double s = 0.0;
    double prev = 0.0;
    for (const auto& st : rearrange(f, space).steps) {
        const double here = std::pow(st.right_endpoint, e);
        s += std::pow(st.value, q) * (p / q) * (here - prev);
        prev = here;
    }
    return std::pow(s, 1.0 / q);
}

/// nu-weighted l^q norm of every row.
inline std::vector<double> row_lq_norms(const WeightedMatrix& a, double q) {
    std::vector<double> out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        out[i] = lq_norm(a.row(i), a.col_space(), q);
    }
    return out;
}

/// ||a|| = max_i sum_j |a(i,j)| nu_j
inline double mixed_inf_one(const WeightedMatrix& a) {
    const auto r = row_lq_norms(a, 1.0);
    return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

/// ||a||^T = max_j sum_i |a(i,j)| mu_i
inline double mixed_inf_one_T(const WeightedMatrix& a) { return mixed_inf_one(a.transpose()); }

/// ||a||_{l^{p,inf}_M(l^q_N)}: weak-l^p over (M, mu) of the row l^q norms.
inline double mixed_weak_norm(const WeightedMatrix& a, double p, double q) {
    if (!(q >= 1.0) || std::isinf(q)) throw SpecError("mixed_weak_norm needs 1 <= q < inf");
    if (!(p > q)) throw SpecError("mixed_weak_norm needs p > q");
    const auto r = row_lq_norms(a, q);
    return weak_lp_norm(r, a.row_space(), p);
}

inline double mixed_weak_norm_T(const WeightedMatrix& a, double p, double q) {
    return mixed_weak_norm(a.transpose(), p, q);
}

inline double mixed_weak_norm(const WeightedMatrix& a, const CoupleSpec& s) {
    return mixed_weak_norm(a, s.p(), s.q());
}

inline double mixed_weak_norm_T(const WeightedMatrix& a, const CoupleSpec& s) {
    return mixed_weak_norm_T(a, s.p(), s.q());
}

/// Weighted l^q norm on the product space M x N.
inline double product_lq_norm(const WeightedMatrix& a, double q) {
    return rect_mass_sum(a, full_rectangle(a), q);
}

}  // namespace ktfunc
