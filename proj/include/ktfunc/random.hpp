#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "ktfunc/measure.hpp"

namespace ktfunc {

enum class MassMode {
    Unit,     ///< every atom has mass 1
    Uniform,  ///< one common mass drawn from [lo, hi]
    Random,   ///< independent masses drawn from [lo, hi]
};

struct RandomInstanceOptions {
    MassMode masses = MassMode::Random;
    double mass_lo = 0.1;
    double mass_hi = 10.0;
    double entry_lo = -1.0;
    double entry_hi = 1.0;
};

inline MeasureSpace random_space(std::mt19937_64& rng, std::size_t n,
                                 const RandomInstanceOptions& opt) {
    std::uniform_real_distribution<double> mass(opt.mass_lo, opt.mass_hi);
    switch (opt.masses) {
        case MassMode::Unit: return MeasureSpace::uniform(n, 1.0);
        case MassMode::Uniform: return MeasureSpace::uniform(n, mass(rng));
        case MassMode::Random: break;
    }
    std::vector<double> m(n);
    for (auto& x : m) x = mass(rng);
    return MeasureSpace(std::move(m));
}

inline WeightedMatrix random_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n,
                                    const RandomInstanceOptions& opt = {}) {
    MeasureSpace mu = random_space(rng, m, opt);
    MeasureSpace nu = random_space(rng, n, opt);
    std::uniform_real_distribution<double> entry(opt.entry_lo, opt.entry_hi);
    std::vector<double> e(m * n);
    for (auto& x : e) x = entry(rng);
    return WeightedMatrix(std::move(mu), std::move(nu), std::move(e));
}

/// Random matrix with a random shape in [1, max_rows] x [1, max_cols].
inline WeightedMatrix random_instance(std::mt19937_64& rng, std::size_t max_rows,
                                      std::size_t max_cols, const RandomInstanceOptions& opt = {}) {
    std::uniform_int_distribution<std::size_t> rows(1, max_rows);
    std::uniform_int_distribution<std::size_t> cols(1, max_cols);
    const std::size_t m = rows(rng);
    const std::size_t n = cols(rng);
    return random_matrix(rng, m, n, opt);
}

}  // namespace ktfunc
