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

#include "emergent/background.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace emergent {

Grid::Grid(std::vector<int> sizes, std::vector<double> spacing)
    : sizes_(std::move(sizes)), spacing_(std::move(spacing)) {
    if (sizes_.empty()) throw std::invalid_argument("grid needs at least one axis");
    if (sizes_.size() != spacing_.size()) throw std::invalid_argument("grid sizes and spacing differ in length");
    for (std::size_t j = 0; j < sizes_.size(); ++j) {
        if (sizes_[j] < 2) throw std::invalid_argument("grid axis " + std::to_string(j) + " needs at least 2 points");
        if (!(spacing_[j] > 0.0) || !std::isfinite(spacing_[j]))
            throw std::invalid_argument("grid spacing on axis " + std::to_string(j) + " must be positive");
        count_ *= sizes_[j];
        volume_ *= spacing_[j];
    }
}

std::vector<int> Grid::unflatten(Eigen::Index flat) const {
    std::vector<int> idx(sizes_.size());
    for (std::size_t j = sizes_.size(); j-- > 0;) {
        idx[j] = static_cast<int>(flat % sizes_[j]);
        flat /= sizes_[j];
    }
    return idx;
}

Grid make_grid(int dim, const std::vector<int>& sizes, const std::vector<double>& spacing) {
    if (dim < 1) throw std::invalid_argument("grid dimension must be positive");
    if (static_cast<int>(sizes.size()) != dim || static_cast<int>(spacing.size()) != dim)
        throw std::invalid_argument("grid dimension does not match sizes/spacing");
    return Grid(sizes, spacing);
}

Field::Field(Grid grid, CVector values, ScalarKind kind)
    : grid_(std::move(grid)), values_(std::move(values)), kind_(kind) {
    if (values_.size() != grid_.point_count()) throw GridMismatch("field length does not match grid point count");
    if (kind_ == ScalarKind::real) {
        for (Eigen::Index i = 0; i < values_.size(); ++i)
            if (values_[i].imag() != 0.0) throw std::invalid_argument("real field with nonzero imaginary part");
    }
}

Field Field::zero(const Grid& grid, ScalarKind kind) {
    return Field(grid, CVector::Zero(grid.point_count()), kind);
}

Field Field::fourier_mode(const Grid& grid, int k) {
    if (grid.dim() != 1) throw std::invalid_argument("fourier_mode is defined for one-dimensional grids");
    const int n = grid.sizes()[0];
    CVector v(n);
    for (int x = 0; x < n; ++x) v[x] = std::polar(1.0, 2.0 * std::numbers::pi * k * x / n);
    return Field(grid, std::move(v));
}

Complex inner_product(const Field& phi, const Field& psi) {
    if (!(phi.grid() == psi.grid())) throw GridMismatch();
    if (phi.kind() != psi.kind()) throw std::invalid_argument("pairing of real and complex fields");
    return phi.grid().cell_volume() * phi.values().dot(psi.values());
}

double norm(const Field& phi) {
    return std::sqrt(phi.grid().cell_volume()) * phi.values().norm();
}

Field sample_field(const Grid& grid, std::uint64_t seed, ScalarKind kind) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector v(grid.point_count());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double re = normal(rng);
        const double im = kind == ScalarKind::complex ? normal(rng) : 0.0;
        v[i] = Complex(re, im);
    }
    return Field(grid, std::move(v), kind);
}

}  // namespace emergent
