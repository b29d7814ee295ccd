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
 * @file oracle.hpp
 * @brief Least-squares ground truth for ambients that are affine in their parameters.
 *
 * For each eps the oracle solves min_delta ||target(eps) - ambient(delta)||_F
 * over the span of the ambient's slot operators, taking the minimum-norm
 * solution when the span is rank deficient. It never looks at combinator
 * output, so agreement between the two is meaningful.
 */

#ifndef EMERGENT_ORACLE_HPP
#define EMERGENT_ORACLE_HPP

#include <vector>

#include "emergence.hpp"

namespace emergent {

enum class OracleVerdict {
    emergent,              ///< exact solution inside the parameter space
    closure_only,          ///< exact solution needs a vanishing component
    constraint_violation,  ///< exact solution has a component the space does not admit
    non_emergent           ///< no exact solution: residual above tolerance
};

std::string to_string(OracleVerdict v);

struct OracleSample {
    Param eps;
    CVector delta;
    double residual = 0.0;
    std::vector<int> flagged;  ///< components with |delta_i| <= tau_zero * max_j |delta_j|
    OracleVerdict verdict = OracleVerdict::non_emergent;
};

struct OracleReport {
    int unknowns = 0;
    int rank = 0;
    double tolerance = 0.0;
    double max_residual = 0.0;
    double min_residual = 0.0;
    std::vector<OracleSample> samples;
    OracleVerdict verdict = OracleVerdict::non_emergent;

    bool full_rank() const noexcept { return rank == unknowns; }
};

inline constexpr double oracle_residual_tolerance = 1e-9;

/// Throws HypothesisError when the ambient has no affine form.
OracleReport oracle_solve(const Theory& target, const Theory& ambient, const std::vector<Param>& eps,
                          double residual_tol = oracle_residual_tolerance, const Tolerances& tol = default_tolerances);

/// The oracle as a parameter map; evaluation raises InfeasibleStep outside the emergent case.
ParamMap oracle_map(const Theory& target, const Theory& ambient, double residual_tol = oracle_residual_tolerance,
                    const Tolerances& tol = default_tolerances);

}  // namespace emergent

#endif  // EMERGENT_ORACLE_HPP
