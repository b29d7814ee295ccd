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
 * @file parameters.hpp
 * @brief Tuples of constant scalar parameters forming a nowhere-vanishing algebra.
 *
 * A ParamSpace of degree l holds l-tuples whose components are never zero.
 * Sums and scalar actions are defined only when every component of the
 * result stays in the space; leaving it raises VanishingResult.
 */

#ifndef EMERGENT_PARAMETERS_HPP
#define EMERGENT_PARAMETERS_HPP

#include <random>
#include <string>
#include <vector>

#include "types.hpp"

namespace emergent {

enum class ParamKind { nonzero_complex, positive_real, nonzero_real };

std::string to_string(ParamKind kind);
ParamKind param_kind_from_string(const std::string& s);

struct ParamSpace {
    ParamKind kind = ParamKind::nonzero_real;
    int degree = 1;

    bool admits(Complex c) const noexcept;
    /// Every element has a square root inside the space.
    bool has_square_roots() const noexcept { return kind != ParamKind::nonzero_real; }

    friend bool operator==(const ParamSpace&, const ParamSpace&) = default;
};

class Param {
   public:
    /// Throws ConstraintViolation if a component is not admitted by the space.
    Param(ParamSpace space, std::vector<Complex> components);

    static Param unit(const ParamSpace& space);
    static Param scalar(ParamKind kind, Complex value) { return Param({kind, 1}, {value}); }

    const ParamSpace& space() const noexcept { return space_; }
    int degree() const noexcept { return space_.degree; }
    const std::vector<Complex>& components() const noexcept { return components_; }
    Complex operator[](std::size_t i) const { return components_.at(i); }
    /// Product of the components; 1 for the degree-0 singleton.
    Complex reduce() const;

    friend bool operator==(const Param&, const Param&) = default;

   private:
    ParamSpace space_;
    std::vector<Complex> components_;
};

Param nv_mul(const Param& a, const Param& b);
Param nv_combine(Complex a, const Param& x, Complex b, const Param& y);
Param nv_sqrt(const Param& x);
/// Prepends multiplicative units up to `target_degree`.
Param embed_params(const Param& x, int target_degree);

inline Param nv_add(const Param& x, const Param& y) { return nv_combine(1.0, x, 1.0, y); }
inline Param nv_scale(Complex c, const Param& x) { return nv_combine(c, x, 0.0, x); }

/// Tuple (a, b) in the space of degree deg(a) + deg(b).
Param concat(const Param& a, const Param& b);
/// Components [offset, offset + degree) as an element of the same kind.
Param slice(const Param& x, int offset, int degree);

/// Magnitudes log-uniform in [1e-2, 1e2]; uniform phase for complex kinds, random sign for nonzero-real.
Param sample_param(const ParamSpace& space, std::mt19937_64& rng);

/// Largest componentwise relative difference.
double param_distance(const Param& a, const Param& b);

std::string describe(const Param& p);

}  // namespace emergent

#endif  // EMERGENT_PARAMETERS_HPP
