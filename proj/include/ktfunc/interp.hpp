/**
 * @file interp.hpp
 * @brief Kernel operators between weighted discrete spaces and the real
 *        interpolation norms of (B0, B1) = (B(L^inf, L^inf), B(L^1, L^1)).
 *
 * On finite atomic spaces every operator is a kernel:
 *   (u f)(i) = sum_j k(i,j) f(j) nu_j,   <g, h> = sum_i g(i) h(i) mu_i,
 * and the modulus |u| is the kernel |k|. Hence <|u| 1_F, 1_E> is the
 * rectangle mass of k and the operator rectangle norm is the (inf, 1)
 * triple norm of the kernel.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ktfunc/errors.hpp"
#include "ktfunc/kt.hpp"
#include "ktfunc/measure.hpp"
#include "ktfunc/norms.hpp"
#include "ktfunc/rectnorm.hpp"

namespace ktfunc {

class OperatorKernel {
public:
    explicit OperatorKernel(WeightedMatrix kernel) : kernel_(std::move(kernel)) {}

    const WeightedMatrix& kernel() const noexcept { return kernel_; }
    const MeasureSpace& target() const noexcept { return kernel_.row_space(); }
    const MeasureSpace& source() const noexcept { return kernel_.col_space(); }

    /// (u f)(i) = sum_j k(i,j) f(j) nu_j
    std::vector<double> apply(std::span<const double> f) const {
        check_length(f, source());
        std::vector<double> out(kernel_.rows(), 0.0);
        for (std::size_t i = 0; i < kernel_.rows(); ++i)
            for (std::size_t j = 0; j < kernel_.cols(); ++j)
                out[i] += kernel_(i, j) * f[j] * source().mass(j);
        return out;
    }

    /// <g, h> over the target space.
    double pairing(std::span<const double> g, std::span<const double> h) const {
        check_length(g, target());
        check_length(h, target());
        double s = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) s += g[i] * h[i] * target().mass(i);
        return s;
    }

    OperatorKernel modulus() const { return OperatorKernel(kernel_.abs()); }
    OperatorKernel transpose() const { return OperatorKernel(kernel_.transpose()); }

private:
    WeightedMatrix kernel_;
};

/// (theta, q) of the real method; p = 1/theta.
class InterpSpec {
public:
    InterpSpec(double theta, double q) : theta_(theta), q_(q) {
        if (!(theta > 0.0 && theta < 1.0)) throw SpecError("theta must lie in (0,1)");
        if (!(q >= 1.0)) throw SpecError("interpolation exponent q must be >= 1");
    }
    double theta() const noexcept { return theta_; }
    double q() const noexcept { return q_; }
    double p() const noexcept { return 1.0 / theta_; }

private:
    double theta_;
    double q_;
};

/// sup (mu(E) v t^{-1} nu(F))^{-1} <|u| 1_F, 1_E>
inline RectNormResult op_triple_norm(const OperatorKernel& u, double t,
                                     const EnumerationLimits& limits = {}) {
    return triple_norm(u.kernel(), CoupleSpec(kInf, 1.0, t), limits);
}

/// [|u|]_p = sup nu(F)^{-theta} mu(E)^{theta-1} <|u| 1_F, 1_E>
inline RectNormResult bracket_u_p(const OperatorKernel& u, double theta,
                                  const EnumerationLimits& limits = {}) {
    if (!(theta > 0.0 && theta < 1.0)) throw SpecError("theta must lie in (0,1)");
    auto objective = [theta](double s, double mu, double nu) {
        return s * std::pow(nu, -theta) * std::pow(mu, theta - 1.0);
    };
    auto any = [](double, double) { return true; };
    auto best = detail::rect_search(u.kernel().abs(), objective, any, limits, "[u]_p bracket");
    RectNormResult out;
    out.value = best->value;
    out.witness = std::move(best->witness);
    return out;
}

struct ThetaSup {
    double value = 0.0;
    double t_star = 1.0;
    std::size_t candidates = 0;
};

/// sup over t of t^{-theta} |||u|||_t, scanning t in {nu(F)/mu(E)}.
/// The sup over all t > 0 is attained on that set, so this equals bracket_u_p.
inline ThetaSup theta_inf_norm(const OperatorKernel& u, double theta,
                               const EnumerationLimits& limits = {}) {
    if (!(theta > 0.0 && theta < 1.0)) throw SpecError("theta must lie in (0,1)");
    const auto mus = detail::subset_masses(u.target(), limits);
    const auto nus = detail::subset_masses(u.source(), limits);
    std::vector<double> ts;
    ts.reserve(mus.size() * nus.size());
    for (double nf : nus)
        for (double me : mus) ts.push_back(nf / me);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    ThetaSup out;
    out.candidates = ts.size();
    bool have = false;
    for (double t : ts) {
        const double v = std::pow(t, -theta) * op_triple_norm(u, t, limits).value;
        if (!have || v > out.value) {
            out.value = v;
            out.t_star = t;
            have = true;
        }
    }
    return out;
}

struct WeakTypeResult {
    double value = 0.0;
    std::vector<std::size_t> witness;  ///< the set F
};

/// sup over nonempty F of nu(F)^{-1/p} ||(|u| 1_F)||_{l^{p,inf}(mu)}.
inline WeakTypeResult weak_type_check(const OperatorKernel& u, double p,
                                      const EnumerationLimits& limits = {}) {
    if (!(p > 1.0)) throw SpecError("weak_type_check needs p > 1");
    const std::size_t n = u.source().size();
    if (n >= 63) throw CapacityError("weak type check needs fewer than 63 source atoms");
    detail::check_budget(std::ldexp(1.0, static_cast<int>(n)) - 1.0, limits, "weak type check");
    const OperatorKernel mod = u.modulus();
    WeakTypeResult best;
    std::vector<double> ind(n);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        double nu_f = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            ind[j] = (mask >> j & 1U) ? 1.0 : 0.0;
            if (ind[j] != 0.0) nu_f += u.source().mass(j);
        }
        const auto g = mod.apply(ind);
        const double v = std::pow(nu_f, -1.0 / p) * weak_lp_norm(g, u.target(), p);
        if (mask == 1 || v > best.value) {
            best.value = v;
            best.witness.clear();
            for (std::size_t j = 0; j < n; ++j)
                if (mask >> j & 1U) best.witness.push_back(j);
        }
    }
    return best;
}

enum class KtSource { Bracket, ExactLp };

struct ThetaQOptions {
    double ratio = 1.1;     ///< geometric grid ratio
    double decades = 4.0;   ///< grid spans t0 * 10^{-decades} .. t0 * 10^{decades}
    KtSource source = KtSource::Bracket;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    bool contains(double x, double rel = 0.0) const {
        const double slack = rel * std::max(std::abs(lo), std::abs(hi));
        return x >= lo - slack && x <= hi + slack;
    }
};

namespace detail {

// int_lo^hi (t^{-theta} c)^q dt/t
inline double integral_const(double c, double theta, double q, double lo, double hi) {
    if (!(hi > lo) || c == 0.0) return 0.0;
    const double e = theta * q;
    const double hi_term = std::isinf(hi) ? 0.0 : std::pow(hi, -e);
    return std::pow(c, q) * (std::pow(lo, -e) - hi_term) / e;
}

// int_lo^hi (t^{-theta} s t)^q dt/t
inline double integral_linear(double s, double theta, double q, double lo, double hi) {
    if (!(hi > lo) || s == 0.0) return 0.0;
    const double e = (1.0 - theta) * q;
    return std::pow(s, q) * (std::pow(hi, e) - std::pow(lo, e)) / e;
}

}  // namespace detail

/// Enclosure of ||a||_{theta,q} = (int_0^inf (t^{-theta} K_t(a))^q dt/t)^{1/q}.
///
/// K_t is evaluated (bracketed) on a geometric grid. Between grid points the
/// true K_t is nondecreasing with K_t/t nonincreasing, so on [t_k, t_{k+1}]
///   max(L_k, L_{k+1} t/t_{k+1}) <= K_t <= min(U_{k+1}, U_k t/t_k),
/// and the tails use K_t <= min(||a||, t ||a||^T). Each piece is integrated
/// in closed form.
inline Interval theta_q_norm(const WeightedMatrix& a, const InterpSpec& spec, double p,
                             double q, const ThetaQOptions& opt = {},
                             const EnumerationLimits& limits = {}) {
    if (!(opt.ratio > 1.0) || !(opt.decades > 0.0)) {
        throw SpecError("theta_q_norm grid needs ratio > 1 and a positive range");
    }
    const CoupleSpec base(p, q, 1.0);
    if (opt.source == KtSource::ExactLp && !(std::isinf(p) && q == 1.0)) {
        throw SpecError("exact LP K_t is available only for the (inf, 1) couple");
    }
    const double norm0 = mixed_weak_norm(a, base);    // K_t <= ||a||
    const double norm1 = mixed_weak_norm_T(a, base);  // K_t <= t ||a||^T
    if (norm0 == 0.0 || norm1 == 0.0) return {0.0, 0.0};

    const double t0 = norm0 / norm1;
    const int half = static_cast<int>(std::ceil(opt.decades * std::log(10.0) / std::log(opt.ratio)));
    std::vector<double> ts, lo, hi;
    for (int k = -half; k <= half; ++k) {
        const double t = t0 * std::pow(opt.ratio, k);
        ts.push_back(t);
        if (opt.source == KtSource::ExactLp) {
            const double v = kt_exact_lp(a, t).value;
            lo.push_back(v);
            hi.push_back(v);
        } else {
            const KtBracket br = kt_bracket(a, base.with_t(t), limits);
            lo.push_back(br.lower);
            hi.push_back(std::min({br.upper, norm0, t * norm1}));
        }
    }
    const std::size_t n = ts.size();
    // propagate monotonicity of K_t and K_t / t through the grid values
    for (std::size_t k = 1; k < n; ++k) {
        lo[k] = std::max(lo[k], lo[k - 1]);
        hi[k] = std::min(hi[k], hi[k - 1] * ts[k] / ts[k - 1]);
    }
    for (std::size_t k = n - 1; k-- > 0;) {
        lo[k] = std::max(lo[k], lo[k + 1] * ts[k] / ts[k + 1]);
        hi[k] = std::min(hi[k], hi[k + 1]);
    }

    const double theta = spec.theta();
    const double qi = spec.q();
    const double tfirst = ts.front();
    const double tlast = ts.back();

    if (std::isinf(qi)) {
        Interval out;
        for (std::size_t k = 0; k < n; ++k) out.lo = std::max(out.lo, std::pow(ts[k], -theta) * lo[k]);
        auto upper_at = [&](double t, double cap_const, double slope) {
            return std::pow(t, -theta) * std::min(cap_const, slope * t);
        };
        for (std::size_t k = 0; k + 1 < n; ++k) {
            const double slope = hi[k] / ts[k];
            const double tc = std::clamp(hi[k + 1] / slope, ts[k], ts[k + 1]);
            out.hi = std::max(out.hi, upper_at(tc, hi[k + 1], slope));
        }
        const double tl = std::clamp(hi.front() / norm1, tfirst * 1e-300, tfirst);
        out.hi = std::max(out.hi, upper_at(tl, hi.front(), norm1));
        const double slope_r = hi.back() / tlast;
        const double tr = std::max(tlast, norm0 / slope_r);
        out.hi = std::max(out.hi, upper_at(tr, norm0, slope_r));
        return out;
    }

    double sum_lo = 0.0;
    double sum_hi = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double a0 = ts[k];
        const double a1 = ts[k + 1];
        // lower envelope: constant lo[k], then the ray through lo[k+1]
        const double s_lo = lo[k + 1] / a1;
        const double c_lo = s_lo > 0.0 ? std::clamp(lo[k] / s_lo, a0, a1) : a1;
        sum_lo += detail::integral_const(lo[k], theta, qi, a0, c_lo) +
                  detail::integral_linear(s_lo, theta, qi, c_lo, a1);
        // upper envelope: the ray through hi[k], then constant hi[k+1]
        const double s_hi = hi[k] / a0;
        const double c_hi = std::clamp(hi[k + 1] / s_hi, a0, a1);
        sum_hi += detail::integral_linear(s_hi, theta, qi, a0, c_hi) +
                  detail::integral_const(hi[k + 1], theta, qi, c_hi, a1);
    }
    // left tail (0, t_first]
    sum_lo += detail::integral_linear(lo.front() / tfirst, theta, qi, 0.0, tfirst);
    {
        const double c = std::clamp(hi.front() / norm1, 0.0, tfirst);
        sum_hi += detail::integral_linear(norm1, theta, qi, 0.0, c) +
                  detail::integral_const(hi.front(), theta, qi, c, tfirst);
    }
    // right tail [t_last, inf)
    sum_lo += detail::integral_const(lo.back(), theta, qi, tlast, kInf);
    {
        const double s = hi.back() / tlast;
        const double c = std::max(tlast, norm0 / s);
        sum_hi += detail::integral_linear(s, theta, qi, tlast, c) +
                  detail::integral_const(norm0, theta, qi, c, kInf);
    }
    return {std::pow(sum_lo, 1.0 / qi), std::pow(sum_hi, 1.0 / qi)};
}

}  // namespace ktfunc
