/**
 * @file verify.hpp
 * @brief Randomised property harness over seeded instances.
 *
 * Each property is tallied separately; the run passes iff no property failed.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "ktfunc/interp.hpp"
#include "ktfunc/kt.hpp"
#include "ktfunc/norms.hpp"
#include "ktfunc/random.hpp"
#include "ktfunc/rectnorm.hpp"
#include "ktfunc/splitting.hpp"

namespace ktfunc {

struct VerifyOptions {
    std::size_t trials = 200;
    std::size_t max_size = 5;
    std::uint64_t seed = 0;
    std::vector<std::pair<double, double>> couples{{2, 1}, {3, 1}, {4, 2}, {kInf, 2}};
    std::vector<double> ts{0.1, 1.0, 7.0};
    std::size_t mask_cells = 12;  ///< brute-force masks only up to this many cells
    bool corrupt_split_bound = false;  ///< test hook: inflate bound_a before checking
};

struct PropertyTally {
    std::string name;
    std::size_t passed = 0;
    std::size_t failed = 0;
};

struct VerifySummary {
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::vector<PropertyTally> properties;
    std::vector<std::string> failures;  ///< first few failure descriptions

    bool all_passed() const {
        return std::all_of(properties.begin(), properties.end(),
                           [](const PropertyTally& p) { return p.failed == 0; });
    }
};

namespace detail {

inline bool le_rel(double x, double y, double tol = 1e-9) {
    return x <= y + tol * std::max({std::abs(x), std::abs(y), 1e-300});
}

inline bool eq_rel(double x, double y, double tol) {
    return std::abs(x - y) <= tol * std::max({std::abs(x), std::abs(y), 1e-300});
}

class Tally {
public:
    void record(const std::string& name, bool ok, const std::string& detail = {}) {
        auto it = index_.find(name);
        if (it == index_.end()) {
            it = index_.emplace(name, summary_.properties.size()).first;
            summary_.properties.push_back({name, 0, 0});
        }
        auto& p = summary_.properties[it->second];
        if (ok) {
            ++p.passed;
        } else {
            ++p.failed;
            if (summary_.failures.size() < 20) summary_.failures.push_back(name + ": " + detail);
        }
    }
    VerifySummary take() && { return std::move(summary_); }
    VerifySummary& summary() { return summary_; }

private:
    VerifySummary summary_;
    std::map<std::string, std::size_t> index_;
};

}  // namespace detail

inline VerifySummary run_verify(const VerifyOptions& opt) {
    detail::Tally tally;
    tally.summary().seed = opt.seed;
    tally.summary().trials = opt.trials;
    std::mt19937_64 rng(opt.seed);

    for (std::size_t trial = 0; trial < opt.trials; ++trial) {
        RandomInstanceOptions ro;
        ro.masses = trial % 2 == 0 ? MassMode::Uniform : MassMode::Random;
        const WeightedMatrix a = random_instance(rng, opt.max_size, opt.max_size, ro);
        const std::string id = "trial " + std::to_string(trial);
        const bool small = a.rows() * a.cols() <= opt.mask_cells;

        for (double t : opt.ts) {
            const CoupleSpec inf1(kInf, 1.0, t);
            const double s = triple_norm(a, inf1).value;
            const double lp = kt_exact_lp(a, t).value;
            SplitResult sp = split_infty_one(a, t);
            if (opt.corrupt_split_bound) sp.bound_a *= 3.0;
            const double up = sp.bound_a + t * sp.bound_b;
            tally.record("sandwich (inf,1)",
                         detail::le_rel(s, lp) && detail::le_rel(lp, up) && detail::le_rel(up, 2.0 * s),
                         id);
            if (small) {
                const double mk = kt_mask_bruteforce(a, inf1).value;
                tally.record("lp <= mask (inf,1)", mk - lp >= -1e-9, id);
            }
            tally.record("degenerate p=1 identity",
                         detail::eq_rel(triple_norm_p1_degenerate(a, t), rect_norm(a, 1.0, 0.0, t).value,
                                        1e-12),
                         id);

            for (auto [p, q] : opt.couples) {
                const CoupleSpec spec(p, q, t);
                SplitResult g = split_p_q(a, spec);
                if (opt.corrupt_split_bound) g.bound_a *= 3.0;
                const double sg = g.scale;
                tally.record("split certificate",
                             detail::le_rel(g.bound_a, sg) && detail::le_rel(g.bound_b, sg / t), id);
                if (small) {
                    const double mk = kt_mask_bruteforce(a, spec).value;
                    tally.record("C(p,q) |||a||| <= mask <= split",
                                 detail::le_rel(spec.c_pq() * sg, mk) &&
                                     detail::le_rel(mk, g.bound_a + t * g.bound_b),
                                 id);
                }
                const CoupleSpec cv = spec.convexified();
                const WeightedMatrix aq = a.abs_pow(q);
                tally.record("q-convexification (rect norm)",
                             detail::eq_rel(std::pow(sg, q), triple_norm(aq, cv).value, 1e-9), id);
                tally.record("q-convexification (mixed norm)",
                             detail::eq_rel(std::pow(mixed_weak_norm(a, spec), q),
                                            mixed_weak_norm(aq, cv), 1e-9) &&
                                 detail::eq_rel(std::pow(mixed_weak_norm_T(a, spec), q),
                                                mixed_weak_norm_T(aq, cv), 1e-9),
                             id);
            }
        }

        if (a.rows() <= 4 && a.cols() <= 4) {
            const OperatorKernel u(a);
            for (double theta : {0.25, 0.5, 0.75}) {
                tally.record("theta-sup identity",
                             detail::eq_rel(theta_inf_norm(u, theta).value,
                                            bracket_u_p(u, theta).value, 1e-9),
                             id);
            }
        }
    }
    return std::move(tally).take();
}

}  // namespace ktfunc
