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
 * @file theories.hpp
 * @brief Parameterized theories eps -> Psi_eps and their constructors.
 *
 * A Theory carries its operator map together with a description of how it
 * was built. Constructors record homomorphy claims; combinators that consume
 * a claim re-check it with homomorphy_check() before relying on it.
 */

#ifndef EMERGENT_THEORIES_HPP
#define EMERGENT_THEORIES_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "calculus.hpp"

namespace emergent {

class Theory;
using TheoryRef = std::shared_ptr<const Theory>;

struct PolyTerm {
    std::vector<int> alpha;  ///< exponent of each variable
    CoeffFn f;
    int slot = 0;  ///< which parameter block feeds f
};

/// sum_terms f(delta_slot) Psi_1^a1 o ... o Psi_r^ar
struct Poly {
    std::vector<Operator> variables;
    std::vector<PolyTerm> terms;
    int slot_degree = 1;
    ParamKind kind = ParamKind::nonzero_real;

    int slot_count() const;
    int total_degree() const;
    ParamSpace slot_space() const { return {kind, slot_degree}; }
    ParamSpace space() const { return {kind, slot_count() * slot_degree}; }
};

/// op(delta) = offset + sum_i delta_i M_i over all parameter components.
struct AffineForm {
    Operator offset;
    std::vector<Operator> coefficients;
};

struct HomomorphyClaims {
    bool additive = false;
    bool multiplicative = false;
};

struct ScalingRep {
    Operator psi0;
};
struct MonomialRep {
    CoeffFn g;
    Operator psi;
    int power;
};
struct PolynomialRep {
    Poly poly;
};
struct SumRep {
    TheoryRef a, b;
};
struct CompositionRep {
    TheoryRef a, b;
};
struct ConstantRep {
    Operator psi;
};
struct ScaledRep {
    Complex c;
    TheoryRef inner;
};

using Structure = std::variant<ScalingRep, MonomialRep, PolynomialRep, SumRep, CompositionRep, ConstantRep, ScaledRep>;

class Theory {
   public:
    using OpMap = std::function<Operator(const Param&)>;

    Theory(std::string id, ParamSpace space, Grid grid, OpMap op_map, Structure structure, HomomorphyClaims claims,
           std::optional<AffineForm> affine = std::nullopt);

    const std::string& id() const noexcept { return id_; }
    const ParamSpace& space() const noexcept { return space_; }
    int degree() const noexcept { return space_.degree; }
    const Grid& grid() const noexcept { return grid_; }
    const Structure& structure() const noexcept { return structure_; }
    const HomomorphyClaims& claims() const noexcept { return claims_; }
    const std::optional<AffineForm>& affine() const noexcept { return affine_; }

    /// Throws SpaceMismatch when `p` does not belong to the theory's space.
    Operator operator()(const Param& p) const;
    /// S[phi; p] = <<phi, Psi_p phi>>
    Complex action(const Field& phi, const Param& p) const { return action_value(phi, (*this)(p)); }

    Theory renamed(std::string id) const;

   private:
    std::string id_;
    ParamSpace space_;
    Grid grid_;
    OpMap op_map_;
    Structure structure_;
    HomomorphyClaims claims_;
    std::optional<AffineForm> affine_;
};

/// eps . psi0. Multiplicativity is claimed only when psi0 is idempotent.
Theory scaling_theory(const ParamSpace& space, const Operator& psi0, std::string id = "scaling");

/// g(delta) Psi^power
Theory monomial_theory(const CoeffFn& g, const Operator& psi, int power, const ParamSpace& space,
                       std::string id = "monomial");

Theory polynomial_theory(const Poly& poly, std::string id = "poly");

/// Degree-0 theory with the fixed operator psi.
Theory constant_theory(ParamKind kind, const Operator& psi, std::string id = "const");

/// (delta, kappa) -> a(delta) + b(kappa)
Theory sum_theories(const Theory& a, const Theory& b);
/// (delta, kappa) -> a(delta) o b(kappa)
Theory compose_theories(const Theory& a, const Theory& b);
/// t^k = t o ... o t with k independent parameter blocks.
Theory theory_power(const Theory& t, int k);
/// delta -> c t(delta)
Theory scale_theory(Complex c, const Theory& t);

struct IndependenceReport {
    int monomials = 0;
    int rank = 0;
    bool independent() const noexcept { return rank == monomials; }
};

/// Rank of the distinct monomial operators Psi^alpha of a polynomial.
IndependenceReport monomial_independence(const Poly& poly, double rel_tol = 1e-10);

struct HomomorphyReport {
    bool additive = true;
    double additive_residual = 0.0;
    std::optional<std::pair<Param, Param>> additive_witness;
    bool multiplicative = true;
    double multiplicative_residual = 0.0;
    std::optional<std::pair<Param, Param>> multiplicative_witness;
};

inline constexpr double homomorphy_tolerance = 1e-10;

/// Samples parameter pairs and tests op(e + e') = op(e) + op(e'), op(c e) = c op(e) and
/// op(e * e') = op(e) o op(e'). Requires degree >= 1.
HomomorphyReport homomorphy_check(const Theory& t, int samples = 32, std::uint64_t seed = 0,
                                  double tol = homomorphy_tolerance);

}  // namespace emergent

#endif  // EMERGENT_THEORIES_HPP
