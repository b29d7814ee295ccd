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

#include "emergent/theories.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace emergent {

int Poly::slot_count() const {
    int n = 0;
    for (const auto& t : terms) n = std::max(n, t.slot + 1);
    return n;
}

int Poly::total_degree() const {
    int d = 0;
    for (const auto& t : terms) d = std::max(d, std::accumulate(t.alpha.begin(), t.alpha.end(), 0));
    return d;
}

Theory::Theory(std::string id, ParamSpace space, Grid grid, OpMap op_map, Structure structure, HomomorphyClaims claims,
               std::optional<AffineForm> affine)
    : id_(std::move(id)),
      space_(space),
      grid_(std::move(grid)),
      op_map_(std::move(op_map)),
      structure_(std::move(structure)),
      claims_(claims),
      affine_(std::move(affine)) {
    if (affine_ && static_cast<int>(affine_->coefficients.size()) != space_.degree)
        throw std::invalid_argument("affine form does not match the parameter degree");
}

Operator Theory::operator()(const Param& p) const {
    if (!(p.space() == space_)) throw SpaceMismatch();
    return op_map_(p);
}

Theory Theory::renamed(std::string id) const {
    Theory t = *this;
    t.id_ = std::move(id);
    return t;
}

namespace {

bool idempotent(const Operator& p) { return op_distance(compose(p, p), p) <= default_tolerances.identity; }

Operator monomial_operator(const std::vector<Operator>& vars, const std::vector<int>& alpha) {
    Operator m = Operator::identity(vars.front().grid());
    for (std::size_t j = 0; j < vars.size(); ++j)
        if (alpha[j] > 0) m = compose(m, power(vars[j], alpha[j]));
    return m;
}

}  // namespace

Theory scaling_theory(const ParamSpace& space, const Operator& psi0, std::string id) {
    if (space.degree < 1) throw std::invalid_argument("scaling theory needs degree >= 1");
    HomomorphyClaims claims{space.degree == 1, idempotent(psi0)};
    std::optional<AffineForm> affine;
    if (space.degree == 1) affine = AffineForm{Operator::zero(psi0.grid()), {psi0}};
    return Theory(std::move(id), space, psi0.grid(), [psi0](const Param& e) { return act(e, psi0); },
                  ScalingRep{psi0}, claims, std::move(affine));
}

Theory monomial_theory(const CoeffFn& g, const Operator& psi, int power_l, const ParamSpace& space, std::string id) {
    if (power_l < 0) throw std::invalid_argument("monomial power must be >= 0");
    const Operator p = power(psi, power_l);
    const auto k = g.exponent();
    HomomorphyClaims claims;
    claims.additive = g.is_linear() && space.degree == 1;
    claims.multiplicative = k.has_value() && g.coefficient() == Complex(1.0) && idempotent(p);
    std::optional<AffineForm> affine;
    if (g.is_linear() && space.degree == 1)
        affine = AffineForm{Operator::zero(psi.grid()), {scale(g.coefficient(), p)}};
    else if (k == 0)
        affine = AffineForm{scale(g.coefficient(), p),
                            std::vector<Operator>(static_cast<std::size_t>(space.degree), Operator::zero(psi.grid()))};
    return Theory(std::move(id), space, psi.grid(), [g, p](const Param& d) { return scale(g(d), p); },
                  MonomialRep{g, psi, power_l}, claims, std::move(affine));
}

Theory polynomial_theory(const Poly& poly, std::string id) {
    if (poly.variables.empty()) throw std::invalid_argument("polynomial needs at least one variable");
    if (poly.terms.empty()) throw std::invalid_argument("polynomial needs at least one term");
    if (poly.slot_degree < 1) throw std::invalid_argument("polynomial slot degree must be >= 1");
    const Grid& grid = poly.variables.front().grid();
    for (const auto& v : poly.variables)
        if (!(v.grid() == grid)) throw GridMismatch("polynomial variables live on different grids");
    std::vector<Operator> monomials;
    for (const auto& t : poly.terms) {
        if (t.alpha.size() != poly.variables.size())
            throw std::invalid_argument("term exponent length does not match the variable count");
        if (std::any_of(t.alpha.begin(), t.alpha.end(), [](int a) { return a < 0; }))
            throw std::invalid_argument("negative exponent in polynomial term");
        if (t.slot < 0) throw std::invalid_argument("negative parameter slot");
        monomials.push_back(monomial_operator(poly.variables, t.alpha));
    }
    const ParamSpace space = poly.space();
    const int sd = poly.slot_degree;

    HomomorphyClaims claims;
    claims.additive =
        sd == 1 && std::all_of(poly.terms.begin(), poly.terms.end(), [](const PolyTerm& t) { return t.f.is_linear(); });

    std::optional<AffineForm> affine;
    const bool affine_terms = std::all_of(poly.terms.begin(), poly.terms.end(), [](const PolyTerm& t) {
        return t.f.exponent() == 1 || t.f.exponent() == 0;
    });
    if (sd == 1 && affine_terms) {
        AffineForm a{Operator::zero(grid),
                     std::vector<Operator>(static_cast<std::size_t>(space.degree), Operator::zero(grid))};
        for (std::size_t i = 0; i < poly.terms.size(); ++i) {
            const auto& t = poly.terms[i];
            const Operator m = scale(t.f.coefficient(), monomials[i]);
            if (t.f.exponent() == 0)
                a.offset = a.offset + m;
            else
                a.coefficients[static_cast<std::size_t>(t.slot)] = a.coefficients[static_cast<std::size_t>(t.slot)] + m;
        }
        affine = std::move(a);
    }

    auto op_map = [terms = poly.terms, monomials, sd, grid](const Param& d) {
        Operator out = Operator::zero(grid);
        for (std::size_t i = 0; i < terms.size(); ++i)
            out = combine(1.0, out, terms[i].f(slice(d, terms[i].slot * sd, sd)), monomials[i]);
        return out;
    };
    return Theory(std::move(id), space, grid, std::move(op_map), PolynomialRep{poly}, claims, std::move(affine));
}

Theory constant_theory(ParamKind kind, const Operator& psi, std::string id) {
    return Theory(std::move(id), {kind, 0}, psi.grid(), [psi](const Param&) { return psi; }, ConstantRep{psi}, {},
                  AffineForm{psi, {}});
}

namespace {

ParamSpace joined_space(const Theory& a, const Theory& b) {
    if (a.space().kind != b.space().kind) throw SpaceMismatch();
    return {a.space().kind, a.degree() + b.degree()};
}

}  // namespace

Theory sum_theories(const Theory& a, const Theory& b) {
    if (!(a.grid() == b.grid())) throw GridMismatch();
    const ParamSpace space = joined_space(a, b);
    auto pa = std::make_shared<const Theory>(a);
    auto pb = std::make_shared<const Theory>(b);
    const int da = a.degree(), db = b.degree();
    auto op_map = [pa, pb, da, db](const Param& e) { return (*pa)(slice(e, 0, da)) + (*pb)(slice(e, da, db)); };
    std::optional<AffineForm> affine;
    if (a.affine() && b.affine()) {
        AffineForm f{a.affine()->offset + b.affine()->offset, a.affine()->coefficients};
        f.coefficients.insert(f.coefficients.end(), b.affine()->coefficients.begin(), b.affine()->coefficients.end());
        affine = std::move(f);
    }
    HomomorphyClaims claims{a.claims().additive && b.claims().additive, false};
    return Theory("(" + a.id() + "+" + b.id() + ")", space, a.grid(), std::move(op_map), SumRep{pa, pb}, claims,
                  std::move(affine));
}

Theory compose_theories(const Theory& a, const Theory& b) {
    if (!(a.grid() == b.grid())) throw GridMismatch();
    const ParamSpace space = joined_space(a, b);
    auto pa = std::make_shared<const Theory>(a);
    auto pb = std::make_shared<const Theory>(b);
    const int da = a.degree(), db = b.degree();
    auto op_map = [pa, pb, da, db](const Param& e) {
        return compose((*pa)(slice(e, 0, da)), (*pb)(slice(e, da, db)));
    };
    HomomorphyClaims claims{false, a.claims().multiplicative && b.claims().multiplicative};
    return Theory("(" + a.id() + "∘" + b.id() + ")", space, a.grid(), std::move(op_map), CompositionRep{pa, pb},
                  claims);
}

Theory theory_power(const Theory& t, int k) {
    if (k < 1) throw std::invalid_argument("theory power must be >= 1");
    if (k == 1) return t;
    return compose_theories(theory_power(t, k - 1), t).renamed(t.id() + "^" + std::to_string(k));
}

Theory scale_theory(Complex c, const Theory& t) {
    if (c == Complex(0.0)) throw std::invalid_argument("cannot scale a theory by 0");
    auto inner = std::make_shared<const Theory>(t);
    std::optional<AffineForm> affine;
    if (t.affine()) {
        AffineForm f{scale(c, t.affine()->offset), {}};
        for (const auto& m : t.affine()->coefficients) f.coefficients.push_back(scale(c, m));
        affine = std::move(f);
    }
    HomomorphyClaims claims{t.claims().additive, t.claims().multiplicative && c == Complex(1.0)};
    std::ostringstream tag;
    tag << c.real();
    if (c.imag() != 0.0) tag << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
    return Theory(tag.str() + "*" + t.id(), t.space(), t.grid(), [inner, c](const Param& d) { return scale(c, (*inner)(d)); },
                  ScaledRep{c, inner}, claims, std::move(affine));
}

IndependenceReport monomial_independence(const Poly& poly, double rel_tol) {
    std::map<std::vector<int>, Operator> distinct;
    for (const auto& t : poly.terms) distinct.emplace(t.alpha, monomial_operator(poly.variables, t.alpha));
    bool dense = false;
    for (const auto& [alpha, m] : distinct) dense = dense || m.is_dense();
    IndependenceReport r;
    r.monomials = static_cast<int>(distinct.size());
    if (distinct.empty()) return r;
    CMatrix cols(vectorize(distinct.begin()->second, dense).size(), r.monomials);
    int c = 0;
    for (const auto& [alpha, m] : distinct) cols.col(c++) = vectorize(m, dense);
    Eigen::JacobiSVD<CMatrix> svd(cols);
    const auto& sv = svd.singularValues();
    const double top = sv.size() ? sv.maxCoeff() : 0.0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > rel_tol * top) ++r.rank;
    return r;
}

HomomorphyReport homomorphy_check(const Theory& t, int samples, std::uint64_t seed, double tol) {
    if (t.degree() < 1) throw std::invalid_argument("homomorphy check needs parameter degree >= 1");
    std::mt19937_64 rng(seed);
    const double floor = default_tolerances.norm_floor;
    const ParamSpace scalars{t.space().kind, 1};
    HomomorphyReport rep;
    for (int s = 0; s < samples; ++s) {
        const Param e = sample_param(t.space(), rng);
        const Param f = sample_param(t.space(), rng);
        const Complex c = sample_param(scalars, rng)[0];
        const Operator oe = t(e), of = t(f);

        double add = 0.0;
        try {
            const Operator lhs = t(nv_add(e, f));
            add = (lhs - (oe + of)).frobenius_norm() / std::max(oe.frobenius_norm() + of.frobenius_norm(), floor);
        } catch (const VanishingResult&) {
            // e + f left the space; only the scalar law is testable for this pair
        }
        const Operator oc = t(nv_scale(c, e));
        add = std::max(add, op_distance(oc, scale(c, oe), floor));
        if (add > rep.additive_residual) rep.additive_residual = add;
        if (add > tol && !rep.additive_witness) rep.additive_witness.emplace(e, f);

        const double mul = op_distance(t(nv_mul(e, f)), compose(oe, of), floor);
        if (mul > rep.multiplicative_residual) rep.multiplicative_residual = mul;
        if (mul > tol && !rep.multiplicative_witness) rep.multiplicative_witness.emplace(e, f);
    }
    rep.additive = rep.additive_residual <= tol;
    rep.multiplicative = rep.multiplicative_residual <= tol;
    return rep;
}

}  // namespace emergent
