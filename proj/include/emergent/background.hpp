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

/**
 * @file background.hpp
 * @brief Periodic lattice, grid functions and the discrete L2 pairing.
 *
 * Points are stored in row-major order: the last axis varies fastest. The
 * same flattening indexes the discrete frequencies of symbol operators.
 */

#ifndef EMERGENT_BACKGROUND_HPP
#define EMERGENT_BACKGROUND_HPP

#include <cstdint>
#include <vector>

#include "types.hpp"

namespace emergent {

enum class ScalarKind { real, complex };

class Grid {
   public:
    Grid(std::vector<int> sizes, std::vector<double> spacing);

    int dim() const noexcept { return static_cast<int>(sizes_.size()); }
    const std::vector<int>& sizes() const noexcept { return sizes_; }
    const std::vector<double>& spacing() const noexcept { return spacing_; }
    Eigen::Index point_count() const noexcept { return count_; }
    /// Product of the spacings: the quadrature weight of one lattice cell.
    double cell_volume() const noexcept { return volume_; }

    /// Per-axis indices of the flat index `flat`.
    std::vector<int> unflatten(Eigen::Index flat) const;

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.sizes_ == b.sizes_ && a.spacing_ == b.spacing_;
    }

   private:
    std::vector<int> sizes_;
    std::vector<double> spacing_;
    Eigen::Index count_ = 1;
    double volume_ = 1.0;
};

/// Throws std::invalid_argument on dimension mismatch, empty axes or nonpositive spacing.
Grid make_grid(int dim, const std::vector<int>& sizes, const std::vector<double>& spacing);

class Field {
   public:
    Field(Grid grid, CVector values, ScalarKind kind = ScalarKind::complex);

    const Grid& grid() const noexcept { return grid_; }
    const CVector& values() const noexcept { return values_; }
    ScalarKind kind() const noexcept { return kind_; }

    static Field zero(const Grid& grid, ScalarKind kind = ScalarKind::complex);
    /// The discrete Fourier mode exp(2 pi i k.x / N) on a one-dimensional grid.
    static Field fourier_mode(const Grid& grid, int k);

   private:
    Grid grid_;
    CVector values_;
    ScalarKind kind_;
};

/// cell_volume * sum_x conj(phi(x)) psi(x)
Complex inner_product(const Field& phi, const Field& psi);

double norm(const Field& phi);

/// i.i.d. standard normal components (real and imaginary parts for complex kind).
Field sample_field(const Grid& grid, std::uint64_t seed, ScalarKind kind = ScalarKind::complex);

}  // namespace emergent

#endif  // EMERGENT_BACKGROUND_HPP
