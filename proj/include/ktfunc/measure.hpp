/**
 * @file measure.hpp
 * @brief Finite weighted measure spaces and matrices over their products.
 *
 * Everything downstream works on purely atomic spaces with finitely many
 * atoms of strictly positive mass. A WeightedMatrix is a function on M x N
 * together with both measures; all norm computations only look at |a(i,j)|.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ktfunc/errors.hpp"

namespace ktfunc {

/// Purely atomic measure space with finitely many atoms of positive mass.
class MeasureSpace {
public:
    MeasureSpace() = default;

    explicit MeasureSpace(std::vector<double> masses) : masses_(std::move(masses)) {
        if (masses_.empty()) {
            throw InstanceError("measure space needs at least one atom");
        }
        for (std::size_t i = 0; i < masses_.size(); ++i) {
            if (!(masses_[i] > 0.0) || !std::isfinite(masses_[i])) {
                throw InstanceError("mass of atom " + std::to_string(i) +
                                    " must be finite and strictly positive");
            }
        }
        total_ = std::accumulate(masses_.begin(), masses_.end(), 0.0);
    }

    /// n atoms of equal mass.
    static MeasureSpace uniform(std::size_t n, double mass = 1.0) {
        return MeasureSpace(std::vector<double>(n, mass));
    }

    std::size_t size() const noexcept { return masses_.size(); }
    double mass(std::size_t i) const { return masses_.at(i); }
    double total() const noexcept { return total_; }
    std::span<const double> masses() const noexcept { return masses_; }

    bool is_uniform() const noexcept {
        return std::all_of(masses_.begin(), masses_.end(),
                           [&](double m) { return m == masses_.front(); });
    }

    /// Mass of a subset given by atom indices.
    double measure_of(std::span<const std::size_t> atoms) const {
        double s = 0.0;
        for (auto i : atoms) {
            s += masses_.at(i);
        }
        return s;
    }

    friend bool operator==(const MeasureSpace&, const MeasureSpace&) = default;

private:
    std::vector<double> masses_;
    double total_ = 0.0;
};

/// Product set E x F, stored as sorted index lists.
struct Rectangle {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;

    Rectangle() = default;
    Rectangle(std::vector<std::size_t> r, std::vector<std::size_t> c)
        : rows(std::move(r)), cols(std::move(c)) {
        canonicalize();
    }

    bool empty() const noexcept { return rows.empty() || cols.empty(); }

    void canonicalize() {
        std::sort(rows.begin(), rows.end());
        rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    }

    friend bool operator==(const Rectangle&, const Rectangle&) = default;
};

/// Lexicographic order on (rows, cols); used for deterministic tie-breaking.
inline bool lex_less(const Rectangle& a, const Rectangle& b) {
    if (a.rows != b.rows) {
        return std::lexicographical_compare(a.rows.begin(), a.rows.end(), b.rows.begin(),
                                            b.rows.end());
    }
    return std::lexicographical_compare(a.cols.begin(), a.cols.end(), b.cols.begin(),
                                        b.cols.end());
}

/// Real function on M x N, row-major, together with both measures.
class WeightedMatrix {
public:
    WeightedMatrix() = default;

    WeightedMatrix(MeasureSpace row_space, MeasureSpace col_space, std::vector<double> entries)
        : rows_(std::move(row_space)), cols_(std::move(col_space)), entries_(std::move(entries)) {
        if (entries_.size() != rows_.size() * cols_.size()) {
            throw InstanceError("matrix has " + std::to_string(entries_.size()) +
                                " entries, expected " + std::to_string(rows_.size()) + "x" +
                                std::to_string(cols_.size()));
        }
        for (double v : entries_) {
            if (!std::isfinite(v)) {
                throw InstanceError("matrix entries must be finite");
            }
        }
    }

    /// Build from nested rows; all rows must have the column space's length.
    static WeightedMatrix from_rows(MeasureSpace row_space, MeasureSpace col_space,
                                    const std::vector<std::vector<double>>& rows) {
        if (rows.size() != row_space.size()) {
            throw InstanceError("matrix has " + std::to_string(rows.size()) +
                                " rows, expected " + std::to_string(row_space.size()));
        }
        std::vector<double> flat;
        flat.reserve(row_space.size() * col_space.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != col_space.size()) {
                throw InstanceError("row " + std::to_string(i) + " has " +
                                    std::to_string(rows[i].size()) + " entries, expected " +
                                    std::to_string(col_space.size()));
            }
            flat.insert(flat.end(), rows[i].begin(), rows[i].end());
        }
        return WeightedMatrix(std::move(row_space), std::move(col_space), std::move(flat));
    }

    /// Constant matrix.
    static WeightedMatrix filled(MeasureSpace row_space, MeasureSpace col_space, double value) {
        const std::size_t count = row_space.size() * col_space.size();
        return WeightedMatrix(std::move(row_space), std::move(col_space),
                              std::vector<double>(count, value));
    }

    std::size_t rows() const noexcept { return rows_.size(); }
    std::size_t cols() const noexcept { return cols_.size(); }
    const MeasureSpace& row_space() const noexcept { return rows_; }
    const MeasureSpace& col_space() const noexcept { return cols_; }
    std::span<const double> entries() const noexcept { return entries_; }

    double operator()(std::size_t i, std::size_t j) const { return entries_[i * cols() + j]; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(entries_).subspan(i * cols(), cols());
    }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> c(rows());
        for (std::size_t i = 0; i < rows(); ++i) {
            c[i] = (*this)(i, j);
        }
        return c;
    }

    /// a^T: entries transposed, row and column spaces swapped.
    WeightedMatrix transpose() const {
        std::vector<double> t(entries_.size());
        for (std::size_t i = 0; i < rows(); ++i) {
            for (std::size_t j = 0; j < cols(); ++j) {
                t[j * rows() + i] = (*this)(i, j);
            }
        }
        return WeightedMatrix(cols_, rows_, std::move(t));
    }

    template <class F>
    WeightedMatrix map(F&& f) const {
        std::vector<double> out(entries_.size());
        std::transform(entries_.begin(), entries_.end(), out.begin(), f);
        return WeightedMatrix(rows_, cols_, std::move(out));
    }

    WeightedMatrix abs() const {
        return map([](double v) { return std::abs(v); });
    }

    /// |a|^q entrywise (the q-convexification of a).
    WeightedMatrix abs_pow(double q) const {
        if (q == 1.0) {
            return abs();
        }
        return map([q](double v) { return std::pow(std::abs(v), q); });
    }

    WeightedMatrix scaled(double lambda) const {
        return map([lambda](double v) { return lambda * v; });
    }

    /// Pointwise product 1_mask . a, mask in row-major order.
    WeightedMatrix masked(const std::vector<bool>& mask) const {
        if (mask.size() != entries_.size()) {
            throw InstanceError("mask size does not match matrix");
        }
        std::vector<double> out(entries_.size());
        for (std::size_t k = 0; k < out.size(); ++k) {
            out[k] = mask[k] ? entries_[k] : 0.0;
        }
        return WeightedMatrix(rows_, cols_, std::move(out));
    }

    /// Restriction to a sub-grid, keeping the masses of the kept atoms.
    WeightedMatrix submatrix(std::span<const std::size_t> keep_rows,
                             std::span<const std::size_t> keep_cols) const {
        std::vector<double> mu, nu, out;
        for (auto i : keep_rows) mu.push_back(rows_.mass(i));
        for (auto j : keep_cols) nu.push_back(cols_.mass(j));
        for (auto i : keep_rows) {
            for (auto j : keep_cols) {
                out.push_back((*this)(i, j));
            }
        }
        return WeightedMatrix(MeasureSpace(std::move(mu)), MeasureSpace(std::move(nu)),
                              std::move(out));
    }

    bool is_zero() const noexcept {
        return std::all_of(entries_.begin(), entries_.end(), [](double v) { return v == 0.0; });
    }

    friend bool operator==(const WeightedMatrix&, const WeightedMatrix&) = default;

private:
    MeasureSpace rows_;
    MeasureSpace cols_;
    std::vector<double> entries_;
};

/// One step of a decreasing rearrangement: f* = value on [previous endpoint, right_endpoint).
struct RearrangementStep {
    double value;
    double right_endpoint;

    friend bool operator==(const RearrangementStep&, const RearrangementStep&) = default;
};

/// Nonincreasing equimeasurable rearrangement f* of |f| as a step function.
struct Rearrangement {
    std::vector<RearrangementStep> steps;

    /// measure{t : f*(t) > s}
    double distribution(double s) const {
        double m = 0.0;
        for (const auto& st : steps) {
            if (st.value > s) m = st.right_endpoint;
        }
        return m;
    }

    /// f*(t), right-continuous; zero beyond the last endpoint.
    double operator()(double t) const {
        for (const auto& st : steps) {
            if (t < st.right_endpoint) return st.value;
        }
        return 0.0;
    }
};

inline Rearrangement rearrange(std::span<const double> f, const MeasureSpace& space) {
    if (f.size() != space.size()) {
        throw InstanceError("vector has " + std::to_string(f.size()) + " entries, space has " +
                            std::to_string(space.size()) + " atoms");
    }
    std::vector<std::pair<double, double>> vm(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        vm[i] = {std::abs(f[i]), space.mass(i)};
    }
    std::sort(vm.begin(), vm.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    Rearrangement r;
    double cumulative = 0.0;
    for (const auto& [value, mass] : vm) {
        cumulative += mass;
        if (!r.steps.empty() && r.steps.back().value == value) {
            r.steps.back().right_endpoint = cumulative;
        } else {
            r.steps.push_back({value, cumulative});
        }
    }
    return r;
}

/// (sum over E x F of |a|^q mu_i nu_j)^(1/q)
inline double rect_mass_sum(const WeightedMatrix& a, const Rectangle& r, double q = 1.0) {
    if (!(q >= 1.0) || !std::isfinite(q)) {
        throw SpecError("rect_mass_sum needs a finite exponent q >= 1");
    }
    double s = 0.0;
    for (auto i : r.rows) {
        if (i >= a.rows()) throw InstanceError("row index out of range");
        double row = 0.0;
        for (auto j : r.cols) {
            if (j >= a.cols()) throw InstanceError("column index out of range");
            const double v = std::abs(a(i, j));
            row += (q == 1.0 ? v : std::pow(v, q)) * a.col_space().mass(j);
        }
        s += row * a.row_space().mass(i);
    }
    return q == 1.0 ? s : std::pow(s, 1.0 / q);
}

inline Rectangle full_rectangle(const WeightedMatrix& a) {
    Rectangle r;
    r.rows.resize(a.rows());
    r.cols.resize(a.cols());
    std::iota(r.rows.begin(), r.rows.end(), std::size_t{0});
    std::iota(r.cols.begin(), r.cols.end(), std::size_t{0});
    return r;
}

}  // namespace ktfunc
