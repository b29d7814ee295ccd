/*
   Copyright 2026 The emergent authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

// Hand-rolled generators for the property tests. Every generator takes an
// explicit engine so failures replay from the printed case seed.

#ifndef EMERGENT_TESTS_GENERATORS_HPP
#define EMERGENT_TESTS_GENERATORS_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "emergent/emergence.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline int integer(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline double real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline emergent::Complex complex_normal(Rng& rng) {
    std::normal_distribution<double> n;
    const double re = n(rng);
    return {re, n(rng)};
}

/// One- or two-dimensional periodic grid with at most `max_points` points.
inline emergent::Grid grid(Rng& rng, int max_points = 64) {
    if (max_points >= 16 && integer(rng, 0, 1)) {
        const int a = integer(rng, 2, 6);
        const int b = integer(rng, 2, std::max(2, max_points / a));
        return emergent::make_grid(2, {a, b}, {real(rng, 0.05, 1.0), real(rng, 0.05, 1.0)});
    }
    return emergent::make_grid(1, {integer(rng, 2, max_points)}, {real(rng, 0.05, 1.0)});
}

inline emergent::Operator symbol_operator(Rng& rng, const emergent::Grid& g) {
    return emergent::random_symbol_operator(g, rng);
}

inline emergent::Operator dense_operator(Rng& rng, const emergent::Grid& g) {
    const auto n = g.point_count();
    emergent::CMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = complex_normal(rng);
    return emergent::Operator::from_matrix(g, m);
}

/// Symbol or dense backend with equal probability.
inline emergent::Operator any_operator(Rng& rng, const emergent::Grid& g) {
    return integer(rng, 0, 1) ? symbol_operator(rng, g) : dense_operator(rng, g);
}

inline emergent::Operator self_adjoint_dense(Rng& rng, const emergent::Grid& g) {
    const emergent::CMatrix m = dense_operator(rng, g).matrix();
    return emergent::Operator::from_matrix(g, (m + m.adjoint()) / 2.0);
}

inline emergent::ParamKind kind(Rng& rng) {
    constexpr emergent::ParamKind kinds[] = {emergent::ParamKind::nonzero_complex, emergent::ParamKind::positive_real,
                                             emergent::ParamKind::nonzero_real};
    return kinds[integer(rng, 0, 2)];
}

inline emergent::Param param(Rng& rng, const emergent::ParamSpace& space) { return emergent::sample_param(space, rng); }

inline emergent::Field field(Rng& rng, const emergent::Grid& g) { return emergent::sample_field(g, rng()); }

/// Relative Frobenius distance computed from dense matrices, independent of op_distance.
inline double matrix_distance(const emergent::Operator& a, const emergent::Operator& b) {
    const emergent::CMatrix ma = a.matrix(), mb = b.matrix();
    return (ma - mb).norm() / std::max({ma.norm(), mb.norm(), 1e-300});
}

}  // namespace gen

#endif  // EMERGENT_TESTS_GENERATORS_HPP
