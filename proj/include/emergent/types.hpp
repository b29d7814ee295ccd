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

#ifndef EMERGENT_TYPES_HPP
#define EMERGENT_TYPES_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace emergent {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// Numerical thresholds shared by the operator algebra and the emergence engine.
struct Tolerances {
    double inverse = 1e-10;     ///< absolute bound on min |symbol| / min singular value
    double identity = 1e-8;     ///< relative residual accepted as "X = lambda I"
    double norm_floor = 1e-300; ///< denominator floor for relative quantities
    double zero = 1e-10;        ///< parameter components at or below this are treated as vanishing
};

inline const Tolerances default_tolerances{};

/* error hierarchy */

class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

class GridMismatch : public Error {
   public:
    GridMismatch() : Error("operands live on different grids") {}
    explicit GridMismatch(const std::string& what) : Error(what) {}
};

class NotRightInvertible : public Error {
   public:
    explicit NotRightInvertible(double bound)
        : Error("operator is not right-invertible: smallest modulus/singular value " + std::to_string(bound)),
          smallest(bound) {}
    double smallest;
};

class SpaceMismatch : public Error {
   public:
    SpaceMismatch() : Error("parameters belong to different spaces") {}
};

class ConstraintViolation : public Error {
   public:
    explicit ConstraintViolation(const std::string& what) : Error(what) {}
};

class VanishingResult : public Error {
   public:
    explicit VanishingResult(std::size_t component)
        : Error("result leaves the nowhere-vanishing set at component " + std::to_string(component)),
          index(component) {}
    std::size_t index;
};

class NoSquareRoot : public Error {
   public:
    explicit NoSquareRoot(std::size_t component)
        : Error("no square root in this space for component " + std::to_string(component)), index(component) {}
    std::size_t index;
};

class NotInImage : public Error {
   public:
    explicit NotInImage(double r)
        : Error("operator is not a scalar multiple of the identity (residual " + std::to_string(r) + ")"),
          residual(r) {}
    double residual;
};

class VanishingCoefficient : public Error {
   public:
    explicit VanishingCoefficient(const std::string& where)
        : Error("coefficient function vanishes at " + where) {}
};

/// A named hypothesis of a combinator is missing or failed its check.
class HypothesisError : public Error {
   public:
    explicit HypothesisError(const std::string& what) : Error(what) {}
};

/// A combinator step whose implicit assumption does not hold for the concrete operators.
class InfeasibleStep : public Error {
   public:
    InfeasibleStep(std::string step_name, const std::string& detail, double r)
        : Error(step_name + ": " + detail), step(std::move(step_name)), residual(r) {}
    std::string step;
    double residual;
};

}  // namespace emergent

#endif  // EMERGENT_TYPES_HPP
