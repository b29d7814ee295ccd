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
 * @file operators.hpp
 * @brief Bounded operators on grid functions: Fourier multipliers and dense matrices.
 *
 * A Symbol operator acts as inverse-DFT(symbol * DFT(phi)); the symbol is
 * indexed by the same row-major flattening as the grid. Because the unitary
 * DFT preserves Frobenius norms, every norm below is computed directly on
 * the symbol when both operands are Symbol backed. Mixed expressions promote
 * to Dense by conjugating the multiplier with the DFT.
 */

#ifndef EMERGENT_OPERATORS_HPP
#define EMERGENT_OPERATORS_HPP

#include <variant>
#include <vector>

#include "background.hpp"

namespace emergent {

/// Largest grid for which a dense matrix may be materialized.
inline constexpr Eigen::Index max_dense_points = 4096;

class Operator {
   public:
    struct Symbol {
        CVector values;
    };
    struct Dense {
        CMatrix matrix;
    };

    Operator(Grid grid, Symbol s);
    Operator(Grid grid, Dense d);

    static Operator identity(const Grid& grid);
    static Operator zero(const Grid& grid);
    static Operator scalar(const Grid& grid, Complex c);
    static Operator from_symbol(const Grid& grid, CVector symbol) { return Operator(grid, Symbol{std::move(symbol)}); }
    static Operator from_matrix(const Grid& grid, CMatrix m) { return Operator(grid, Dense{std::move(m)}); }

    const Grid& grid() const noexcept { return grid_; }
    bool is_symbol() const noexcept { return std::holds_alternative<Symbol>(backend_); }
    bool is_dense() const noexcept { return std::holds_alternative<Dense>(backend_); }
    /// Precondition: is_symbol().
    const CVector& symbol() const { return std::get<Symbol>(backend_).values; }
    /// Dense matrix of the operator; materialized for Symbol backends.
    CMatrix matrix() const;
    double frobenius_norm() const;

   private:
    Grid grid_;
    std::variant<Symbol, Dense> backend_;
};

/* differential operators with constant coefficients */

enum class DerivativeScheme {
    central_difference,  ///< i sin(2 pi k/N)/h for odd orders, exact second difference for even orders
    spectral             ///< i 2 pi k/L with wraparound frequencies
};

struct StencilTerm {
    std::vector<int> alpha;
    Complex coefficient;
};

/// D = sum_alpha a_alpha d^alpha
struct StencilSpec {
    std::vector<StencilTerm> terms;

    static StencilSpec identity(int dim);
    static StencilSpec laplacian(int dim);
    /// I - Laplacian
    static StencilSpec shifted_laplacian(int dim);
    static StencilSpec derivative(int dim, int axis);
};

Operator diff_operator(const Grid& grid, const StencilSpec& spec,
                       DerivativeScheme scheme = DerivativeScheme::central_difference);

/* algebra */

Operator combine(Complex a, const Operator& psi, Complex b, const Operator& phi);
Operator compose(const Operator& psi, const Operator& phi);
Operator scale(Complex c, const Operator& psi);
Operator adjoint(const Operator& psi);
/// psi^k, psi^0 = I
Operator power(const Operator& psi, int k);

inline Operator operator+(const Operator& a, const Operator& b) { return combine(1.0, a, 1.0, b); }
inline Operator operator-(const Operator& a, const Operator& b) { return combine(1.0, a, -1.0, b); }
inline Operator operator*(const Operator& a, const Operator& b) { return compose(a, b); }
inline Operator operator*(Complex c, const Operator& a) { return scale(c, a); }

Field apply(const Operator& psi, const Field& phi);

/// <<phi, psi phi>>
Complex action_value(const Field& phi, const Operator& psi);

/* right inverses */

struct RightInverse {
    Operator of;
    Operator inverse;
};

/// Throws NotRightInvertible when the smallest symbol modulus (or singular value) is at most
/// tau_inv, or when the computed inverse misses the identity by more than tau_inv.
RightInverse right_inverse(const Operator& psi, double tau_inv = default_tolerances.inverse);

/* scalar identity membership and distances */

struct ScalarIdentityFit {
    Complex lambda;
    double residual;
};

/// lambda = trace/n, residual = ||X - lambda I||_F / max(||X||_F, floor)
ScalarIdentityFit scalar_identity_extract(const Operator& x, double floor = default_tolerances.norm_floor);

/// ||psi - psi*||_F / max(||psi||_F, floor)
double self_adjointness_defect(const Operator& psi, double floor = default_tolerances.norm_floor);

/// ||psi - phi||_F / max(||psi||_F, ||phi||_F, floor)
double op_distance(const Operator& psi, const Operator& phi, double floor = default_tolerances.norm_floor);

/// Flattened coordinates used for spans: the symbol for Symbol backends, column-major entries otherwise.
CVector vectorize(const Operator& psi, bool as_dense);

namespace dft {

/// Unnormalized multidimensional DFT along every grid axis (sign -1); inverse applies 1/n.
CVector forward(const Grid& grid, const CVector& values);
CVector inverse(const Grid& grid, const CVector& values);

}  // namespace dft

}  // namespace emergent

#endif  // EMERGENT_OPERATORS_HPP
