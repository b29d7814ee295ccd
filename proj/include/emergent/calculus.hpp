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
 * @file calculus.hpp
 * @brief Parameter actions on operators and the functional calculus built on them.
 *
 * The action of a degree-l tuple is multiplication by the product of its
 * components. Since (2,3) and (3,2) act identically, parameters recovered
 * from operators are always returned in the factored form (lambda, 1, ..., 1).
 */

#ifndef EMERGENT_CALCULUS_HPP
#define EMERGENT_CALCULUS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "operators.hpp"
#include "parameters.hpp"

namespace emergent {

/// Scalar coefficient function of a parameter tuple.
class CoeffFn {
   public:
    using Eval = std::function<Complex(const Param&)>;
    /// Returns a preimage of a value, or nullopt when none lies in the space.
    using Inverse = std::function<std::optional<Param>(Complex, const ParamSpace&)>;

    /// f(d) = c * prod(d)
    static CoeffFn linear(Complex c);
    /// f(d) = c * prod(d)^k
    static CoeffFn power(Complex c, int k);
    /// f(d) = c for every d
    static CoeffFn constant(Complex c);
    static CoeffFn callable(std::string tag, Eval f, Inverse inverse = {});

    /// Throws VanishingCoefficient where f vanishes.
    Complex operator()(const Param& d) const;

    const std::string& tag() const noexcept { return tag_; }
    bool is_linear() const noexcept { return exponent_ == 1; }
    /// k when f = c * prod(d)^k (constant functions have k = 0); nullopt for callables.
    std::optional<int> exponent() const noexcept { return exponent_; }
    /// c of a power-type function. Precondition: exponent() has a value.
    Complex coefficient() const noexcept { return c_; }
    bool invertible() const noexcept { return static_cast<bool>(inverse_); }
    /// Preimage in factored form; throws ConstraintViolation when there is none.
    Param invert(Complex value, const ParamSpace& space) const;

   private:
    CoeffFn(std::string tag, Eval f, Inverse inv, std::optional<int> exponent, Complex c)
        : tag_(std::move(tag)), f_(std::move(f)), inverse_(std::move(inv)), exponent_(exponent), c_(c) {}

    std::string tag_;
    Eval f_;
    Inverse inverse_;
    std::optional<int> exponent_;
    Complex c_ = 0.0;
};

/// (eps) . psi = prod(eps) psi
Operator act(const Param& eps, const Operator& psi);

/// op_distance((eps.psi) o phi, eps.(psi o phi))
double check_action_compatibility(const Param& eps, const Operator& psi, const Operator& phi);

/// Recovers eps with eps . I = x. Throws NotInImage when x is not lambda I, ConstraintViolation
/// when lambda is not admitted by the space.
Param invert_r_identity(const Operator& x, const ParamSpace& space, const Tolerances& tol = default_tolerances);

struct CalculusEntry {
    CoeffFn f;
    ParamSpace space;
    Operator psi_f;
    bool certified = false;
    /// Parameters at which psi_f o (f(eps) psi) = eps . psi failed; the reference point comes first.
    std::vector<Param> witnesses;
    double max_residual = 0.0;
};

inline constexpr double functional_calculus_tolerance = 1e-10;

/// Candidate psi_f = (prod(eps0)/f(eps0)) I at the unit tuple eps0, certified on `samples`
/// random (eps, psi) pairs drawn on `grid`.
CalculusEntry calculus_operator(const CoeffFn& f, const ParamSpace& space, const Grid& grid, int samples = 64,
                                std::uint64_t seed = 0, double tau = functional_calculus_tolerance);

/// Re-checks a certified entry on fresh samples; true when it still holds everywhere.
bool revalidate(const CalculusEntry& entry, int samples, std::uint64_t seed, double tau = functional_calculus_tolerance);

/// Symbol operator with i.i.d. complex normal multiplier values.
Operator random_symbol_operator(const Grid& grid, std::mt19937_64& rng);

}  // namespace emergent

#endif  // EMERGENT_CALCULUS_HPP
