/**
 * @file rect_search.hpp
 * @brief Exact maximisation of rectangle objectives over nonempty E x F.
 *
 * The objective sees a rectangle only through
 *   S    = sum_{E x F} w(i,j) mu_i nu_j     (w >= 0, usually |a|^q)
 *   mu   = mu(E)
 *   nu   = nu(F)
 * and must be nondecreasing in S for fixed (mu, nu).
 *
 * Two exact reductions keep the enumeration small:
 *  - atoms with the same mass and the same weight profile are interchangeable,
 *    so subsets are enumerated as per-class counts (taking the lowest indices
 *    of each class, which is also the lexicographically smallest choice);
 *  - when nu is uniform, nu(F) depends only on |F|, so for fixed E and |F| the
 *    best F is a prefix of the columns sorted by their E-restricted weight.
 *
 * Ties (equal values after rounding to 12 significant digits) resolve to the
 * lexicographically smallest (rows, cols) among evaluated candidates.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ktfunc/errors.hpp"
#include "ktfunc/measure.hpp"

namespace ktfunc {

/// Budget for exhaustive searches; 2^24 rectangle evaluations by default.
struct EnumerationLimits {
    std::uint64_t max_evaluations = std::uint64_t{1} << 24;
    bool override_guard = false;
};

namespace detail {

inline double round_sig12(double v) {
    if (v == 0.0 || !std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    return std::strtod(buf, nullptr);
}

struct AtomClass {
    double mass;
    std::vector<std::size_t> members;
};

/// Groups atoms with identical mass and identical profile; classes ordered by first member.
template <class Profile>
std::vector<AtomClass> group_atoms(const MeasureSpace& space, Profile&& profile) {
    std::vector<AtomClass> classes;
    std::vector<std::vector<double>> reps;
    for (std::size_t i = 0; i < space.size(); ++i) {
        std::vector<double> pr = profile(i);
        bool placed = false;
        for (std::size_t c = 0; c < classes.size(); ++c) {
            if (classes[c].mass == space.mass(i) && reps[c] == pr) {
                classes[c].members.push_back(i);
                placed = true;
                break;
            }
        }
        if (!placed) {
            classes.push_back({space.mass(i), {i}});
            reps.push_back(std::move(pr));
        }
    }
    return classes;
}

/// Number of nonempty count vectors, saturated to a double.
inline double subset_count(const std::vector<AtomClass>& classes) {
    double c = 1.0;
    for (const auto& cl : classes) c *= static_cast<double>(cl.members.size() + 1);
    return c - 1.0;
}

/// Mixed-radix counter over per-class counts; skips the all-zero vector.
class CountVector {
public:
    explicit CountVector(const std::vector<AtomClass>& classes) : classes_(&classes) {
        counts_.assign(classes.size(), 0);
    }

    bool next() {
        for (std::size_t c = 0; c < counts_.size(); ++c) {
            if (counts_[c] < (*classes_)[c].members.size()) {
                ++counts_[c];
                return true;
            }
            counts_[c] = 0;
        }
        return false;
    }

    const std::vector<std::size_t>& counts() const { return counts_; }

    std::vector<std::size_t> indices() const {
        std::vector<std::size_t> out;
        for (std::size_t c = 0; c < counts_.size(); ++c) {
            const auto& m = (*classes_)[c].members;
            out.insert(out.end(), m.begin(), m.begin() + static_cast<std::ptrdiff_t>(counts_[c]));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    const std::vector<AtomClass>* classes_;
    std::vector<std::size_t> counts_;
};

struct RectBest {
    double value = 0.0;
    Rectangle witness;
    double mu = 0.0;
    double nu = 0.0;
};

class BestTracker {
public:
    bool might_improve(double v) const {
        return !best_ || v >= best_->value - 1e-10 * std::abs(best_->value);
    }

    template <class MakeRect>
    void offer(double v, double mu, double nu, MakeRect&& make) {
        const double key = round_sig12(v);
        if (!best_ || key > key_) {
            best_ = RectBest{v, make(), mu, nu};
            key_ = key;
        } else if (key == key_) {
            Rectangle r = make();
            if (lex_less(r, best_->witness)) {
                best_ = RectBest{v, std::move(r), mu, nu};
            }
        }
    }

    std::optional<RectBest> result() && { return std::move(best_); }

private:
    std::optional<RectBest> best_;
    double key_ = 0.0;
};

inline void check_budget(double evaluations, const EnumerationLimits& limits, const char* what) {
    if (!limits.override_guard && evaluations > static_cast<double>(limits.max_evaluations)) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "%s needs %.3g rectangle evaluations, above the guard of %llu "
                      "(use the guard override to force)",
                      what, evaluations, static_cast<unsigned long long>(limits.max_evaluations));
        throw CapacityError(buf);
    }
}

/// Maximises objective(S, mu(E), nu(F)) over nonempty rectangles with feasible(mu, nu).
/// `w` holds nonnegative weights. Returns nullopt when no rectangle is feasible.
template <class Objective, class Feasible>
std::optional<RectBest> rect_search(const WeightedMatrix& w, Objective&& objective,
                                    Feasible&& feasible, const EnumerationLimits& limits,
                                    const char* what = "rectangle supremum") {
    const MeasureSpace& mu = w.row_space();
    const MeasureSpace& nu = w.col_space();
    const std::size_t n = w.cols();

    const auto row_classes =
        group_atoms(mu, [&](std::size_t i) { return std::vector<double>(w.row(i).begin(), w.row(i).end()); });
    const bool uniform_cols = nu.is_uniform();
    std::vector<AtomClass> col_classes;
    if (!uniform_cols) {
        col_classes = group_atoms(nu, [&](std::size_t j) { return w.column(j); });
    }
    const double col_evals = uniform_cols ? static_cast<double>(n) : subset_count(col_classes);
    check_budget(subset_count(row_classes) * col_evals, limits, what);

    BestTracker best;
    std::vector<double> colw(n);
    std::vector<std::size_t> order(n);

    CountVector rows(row_classes);
    while (rows.next()) {
        const auto& counts = rows.counts();
        double mu_e = 0.0;
        std::fill(colw.begin(), colw.end(), 0.0);
        for (std::size_t c = 0; c < row_classes.size(); ++c) {
            for (std::size_t r = 0; r < counts[c]; ++r) {
                const std::size_t i = row_classes[c].members[r];
                mu_e += mu.mass(i);
                for (std::size_t j = 0; j < n; ++j) {
                    colw[j] += w(i, j) * mu.mass(i) * nu.mass(j);
                }
            }
        }
        std::optional<std::vector<std::size_t>> row_idx;
        auto rows_of = [&]() -> const std::vector<std::size_t>& {
            if (!row_idx) row_idx = rows.indices();
            return *row_idx;
        };

        if (uniform_cols) {
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t x, std::size_t y) { return colw[x] > colw[y]; });
            double s = 0.0;
            double nu_f = 0.0;
            for (std::size_t k = 1; k <= n; ++k) {
                s += colw[order[k - 1]];
                nu_f += nu.mass(order[k - 1]);
                if (!feasible(mu_e, nu_f)) continue;
                const double v = objective(s, mu_e, nu_f);
                if (!best.might_improve(v)) continue;
                best.offer(v, mu_e, nu_f, [&] {
                    return Rectangle(rows_of(),
                                     std::vector<std::size_t>(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k)));
                });
            }
        } else {
            CountVector cols(col_classes);
            while (cols.next()) {
                const auto& cc = cols.counts();
                double s = 0.0;
                double nu_f = 0.0;
                for (std::size_t c = 0; c < col_classes.size(); ++c) {
                    for (std::size_t r = 0; r < cc[c]; ++r) {
                        const std::size_t j = col_classes[c].members[r];
                        s += colw[j];
                        nu_f += nu.mass(j);
                    }
                }
                if (!feasible(mu_e, nu_f)) continue;
                const double v = objective(s, mu_e, nu_f);
                if (!best.might_improve(v)) continue;
                best.offer(v, mu_e, nu_f, [&] { return Rectangle(rows_of(), cols.indices()); });
            }
        }
    }
    return std::move(best).result();
}

/// Distinct subset masses {mu(E) : E nonempty}, ascending.
inline std::vector<double> subset_masses(const MeasureSpace& space, const EnumerationLimits& limits) {
    const auto classes = group_atoms(space, [](std::size_t) { return std::vector<double>{}; });
    check_budget(subset_count(classes), limits, "subset mass enumeration");
    std::vector<double> out;
    CountVector cv(classes);
    while (cv.next()) {
        double m = 0.0;
        for (auto i : cv.indices()) m += space.mass(i);
        out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail
}  // namespace ktfunc
