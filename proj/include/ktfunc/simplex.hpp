#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace ktfunc {

/// Dense tableau simplex for   min c.x  s.t.  A x <= b,  x >= 0,  with b >= 0.
///
/// The origin is the starting vertex (slack basis), so no phase 1 is needed.
/// Bland's rule on both the entering and leaving choice: terminates on
/// degenerate problems and is fully deterministic.
class DenseSimplex {
public:
    struct Solution {
        double objective = 0.0;
        std::vector<double> x;
        std::size_t pivots = 0;
    };

    DenseSimplex(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double> c)
        : m_(b.size()), n_(c.size()) {
        if (a.size() != m_) throw std::invalid_argument("simplex: row count mismatch");
        width_ = n_ + m_ + 1;
        tab_.assign((m_ + 1) * width_, 0.0);
        basis_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            if (a[i].size() != n_) throw std::invalid_argument("simplex: column count mismatch");
            if (b[i] < 0.0) throw std::invalid_argument("simplex: needs b >= 0");
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = a[i][j];
            at(i, n_ + i) = 1.0;
            at(i, width_ - 1) = b[i];
            basis_[i] = n_ + i;
        }
        for (std::size_t j = 0; j < n_; ++j) at(m_, j) = c[j];
    }

    Solution solve(double eps = 1e-12) {
        Solution sol;
        for (;;) {
            std::size_t enter = width_;
            for (std::size_t j = 0; j + 1 < width_; ++j) {
                if (at(m_, j) < -eps) {
                    enter = j;
                    break;
                }
            }
            if (enter == width_) break;

            std::size_t leave = m_;
            double best_ratio = 0.0;
            for (std::size_t i = 0; i < m_; ++i) {
                const double piv = at(i, enter);
                if (piv <= eps) continue;
                const double ratio = at(i, width_ - 1) / piv;
                if (leave == m_ || ratio < best_ratio - eps ||
                    (ratio <= best_ratio + eps && basis_[i] < basis_[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
            if (leave == m_) throw std::runtime_error("simplex: unbounded");
            pivot(leave, enter);
            ++sol.pivots;
        }
        sol.objective = -at(m_, width_ - 1);
        sol.x.assign(n_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] < n_) sol.x[basis_[i]] = at(i, width_ - 1);
        }
        return sol;
    }

private:
    double& at(std::size_t i, std::size_t j) { return tab_[i * width_ + j]; }

    void pivot(std::size_t row, std::size_t col) {
        const double piv = at(row, col);
        for (std::size_t j = 0; j < width_; ++j) at(row, j) /= piv;
        at(row, col) = 1.0;
        for (std::size_t i = 0; i <= m_; ++i) {
            if (i == row) continue;
            const double f = at(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < width_; ++j) at(i, j) -= f * at(row, j);
            at(i, col) = 0.0;
        }
        basis_[row] = col;
    }

    std::size_t m_;
    std::size_t n_;
    std::size_t width_ = 0;
    std::vector<double> tab_;
    std::vector<std::size_t> basis_;
};

}  // namespace ktfunc
