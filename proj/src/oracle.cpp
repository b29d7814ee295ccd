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

#include "emergent/oracle.hpp"

#include <algorithm>
#include <limits>
#include <memory>

namespace emergent {

std::string to_string(OracleVerdict v) {
    switch (v) {
        case OracleVerdict::emergent: return "emergent";
        case OracleVerdict::closure_only: return "closure-only";
        case OracleVerdict::constraint_violation: return "constraint-violation";
        case OracleVerdict::non_emergent: return "non-emergent";
    }
    return "?";
}

namespace {

int severity(OracleVerdict v) {
    switch (v) {
        case OracleVerdict::emergent: return 0;
        case OracleVerdict::closure_only: return 1;
        case OracleVerdict::constraint_violation: return 2;
        case OracleVerdict::non_emergent: return 3;
    }
    return 3;
}

class Solver {
   public:
    Solver(const Theory& target, const Theory& ambient, double residual_tol, const Tolerances& tol)
        : target_(target), ambient_(ambient), residual_tol_(residual_tol), tol_(tol) {
        if (!ambient.affine()) throw HypothesisError("oracle: ambient " + ambient.id() + " is not affine in its parameters");
        if (!(target.grid() == ambient.grid())) throw GridMismatch();
        const AffineForm& a = *ambient.affine();
        dense_ = a.offset.is_dense();
        for (const auto& m : a.coefficients) dense_ = dense_ || m.is_dense();
        offset_ = vectorize(a.offset, dense_);
        cols_ = CMatrix(offset_.size(), static_cast<Eigen::Index>(a.coefficients.size()));
        for (std::size_t i = 0; i < a.coefficients.size(); ++i)
            cols_.col(static_cast<Eigen::Index>(i)) = vectorize(a.coefficients[i], dense_);
        cod_ = std::make_unique<Eigen::CompleteOrthogonalDecomposition<CMatrix>>(cols_.rows(), cols_.cols());
        cod_->setThreshold(1e-10);
        cod_->compute(cols_);
    }

    int unknowns() const { return static_cast<int>(cols_.cols()); }
    int rank() const { return cols_.cols() ? static_cast<int>(cod_->rank()) : 0; }

    OracleSample solve(const Param& eps) const {
        const Operator t = target_(eps);
        const bool dense = dense_ || t.is_dense();
        const CVector rhs = vectorize(t, dense) - (dense && !dense_ ? vectorize(ambient_.affine()->offset, true) : offset_);
        OracleSample s{eps, CVector(), 0.0, {}, OracleVerdict::emergent};
        if (dense && !dense_) {
            // target forced the dense coordinates; rebuild the column space there
            CMatrix cols(rhs.size(), cols_.cols());
            for (Eigen::Index i = 0; i < cols.cols(); ++i)
                cols.col(i) = vectorize(ambient_.affine()->coefficients[static_cast<std::size_t>(i)], true);
            Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(cols.rows(), cols.cols());
            cod.setThreshold(1e-10);
            cod.compute(cols);
            s.delta = cols.cols() ? CVector(cod.solve(rhs)) : CVector();
            s.residual = (rhs - cols * s.delta).norm();
        } else {
            s.delta = cols_.cols() ? CVector(cod_->solve(rhs)) : CVector();
            s.residual = (rhs - cols_ * s.delta).norm();
        }
        s.residual /= std::max(vectorize(t, dense).norm(), tol_.norm_floor);
        classify(s);
        return s;
    }

   private:
    void classify(OracleSample& s) const {
        const ParamKind kind = ambient_.space().kind;
        double top = 0.0;
        for (Eigen::Index i = 0; i < s.delta.size(); ++i) {
            Complex& d = s.delta[i];
            if (kind != ParamKind::nonzero_complex && std::abs(d.imag()) <= tol_.identity * std::abs(d)) d = d.real();
            top = std::max(top, std::abs(d));
        }
        bool admitted = true;
        for (Eigen::Index i = 0; i < s.delta.size(); ++i) {
            if (std::abs(s.delta[i]) <= tol_.zero * top || top == 0.0)
                s.flagged.push_back(static_cast<int>(i));
            else if (!ambient_.space().admits(s.delta[i]))
                admitted = false;
        }
        if (s.residual > residual_tol_)
            s.verdict = OracleVerdict::non_emergent;
        else if (!admitted)
            s.verdict = OracleVerdict::constraint_violation;
        else if (!s.flagged.empty())
            s.verdict = OracleVerdict::closure_only;
        else
            s.verdict = OracleVerdict::emergent;
    }

    Theory target_;
    Theory ambient_;
    double residual_tol_;
    Tolerances tol_;
    bool dense_ = false;
    CVector offset_;
    CMatrix cols_;
    std::unique_ptr<Eigen::CompleteOrthogonalDecomposition<CMatrix>> cod_;
};

}  // namespace

OracleReport oracle_solve(const Theory& target, const Theory& ambient, const std::vector<Param>& eps,
                          double residual_tol, const Tolerances& tol) {
    const Solver solver(target, ambient, residual_tol, tol);
    OracleReport rep;
    rep.unknowns = solver.unknowns();
    rep.rank = solver.rank();
    rep.tolerance = residual_tol;
    rep.verdict = OracleVerdict::emergent;
    rep.min_residual = eps.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    for (const auto& e : eps) {
        OracleSample s = solver.solve(e);
        rep.max_residual = std::max(rep.max_residual, s.residual);
        rep.min_residual = std::min(rep.min_residual, s.residual);
        if (severity(s.verdict) > severity(rep.verdict)) rep.verdict = s.verdict;
        rep.samples.push_back(std::move(s));
    }
    return rep;
}

ParamMap oracle_map(const Theory& target, const Theory& ambient, double residual_tol, const Tolerances& tol) {
    auto solver = std::make_shared<const Solver>(target, ambient, residual_tol, tol);
    const ParamSpace space = ambient.space();
    auto eval = [solver, space](const Param& e) {
        const OracleSample s = solver->solve(e);
        if (s.verdict != OracleVerdict::emergent)
            throw InfeasibleStep("oracle least squares", to_string(s.verdict) + " at " + describe(e), s.residual);
        return Param(space, std::vector<Complex>(s.delta.data(), s.delta.data() + s.delta.size()));
    };
    return ParamMap(target.space(), space, eval,
                    {"oracle", "min-norm least squares over the ambient's affine span", {}});
}

}  // namespace emergent
