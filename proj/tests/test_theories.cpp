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

#include <doctest.h>

#include "generators.hpp"

using namespace emergent;

namespace {

const Grid g64 = make_grid(1, {64}, {0.1});
const Operator A = diff_operator(g64, StencilSpec::shifted_laplacian(1));
const Operator I = Operator::identity(g64);
const ParamSpace R1{ParamKind::nonzero_real, 1};

// Orthogonal projector onto the low half of the spectrum, as a symbol.
Operator low_pass(const Grid& g) {
    CVector s = CVector::Zero(g.point_count());
    for (Eigen::Index k = 0; k < s.size() / 2; ++k) s[k] = 1.0;
    return Operator::from_symbol(g, s);
}

}  // namespace

TEST_CASE("scaling theory evaluates eps . psi0 and checks its space") {
    const Theory t = scaling_theory(R1, A);
    CHECK(gen::matrix_distance(t(Param::scalar(ParamKind::nonzero_real, 3.0)), scale(3.0, A)) <= 1e-15);
    CHECK_THROWS_AS(t(Param::scalar(ParamKind::positive_real, 3.0)), SpaceMismatch);
    CHECK(t.claims().additive);
    CHECK_FALSE(t.claims().multiplicative);
    CHECK(t.affine().has_value());
    const Theory deg2 = scaling_theory({ParamKind::nonzero_real, 2}, A);
    CHECK_FALSE(deg2.claims().additive);
    CHECK_FALSE(deg2.affine().has_value());
}

TEST_CASE("non-idempotent scaling theory fails multiplicativity with a witness") {
    const Theory t = scaling_theory(R1, A);
    const HomomorphyReport rep = homomorphy_check(t, 16, 3);
    CHECK(rep.additive);
    CHECK_FALSE(rep.multiplicative);
    REQUIRE(rep.multiplicative_witness.has_value());
    const auto& [e, f] = *rep.multiplicative_witness;
    // the witness reproduces: (e f) A differs from (e A)(f A) = e f A^2
    CHECK(op_distance(t(nv_mul(e, f)), compose(t(e), t(f))) > 1e-3);
}

TEST_CASE("idempotent scaling theory is multiplicative") {
    const Theory id = scaling_theory(R1, I);
    CHECK(id.claims().multiplicative);
    CHECK(homomorphy_check(id).multiplicative);
    const Theory p = scaling_theory(R1, low_pass(g64));
    CHECK(p.claims().multiplicative);
    const HomomorphyReport rep = homomorphy_check(p);
    CHECK(rep.multiplicative);
    CHECK(rep.additive);
}

TEST_CASE("monomial theory") {
    const Theory m = monomial_theory(CoeffFn::linear(2.0), A, 2, R1);
    CHECK(gen::matrix_distance(m(Param::scalar(ParamKind::nonzero_real, 3.0)), scale(6.0, compose(A, A))) <= 1e-14);
    CHECK(m.claims().additive);
    const Theory lin = monomial_theory(CoeffFn::linear(2.0), A, 1, R1);
    CHECK(lin.claims().additive);
    CHECK(homomorphy_check(lin).additive);
    const Theory sq = monomial_theory(CoeffFn::power(1.0, 2), I, 1, {ParamKind::positive_real, 1});
    CHECK(sq.claims().multiplicative);
    CHECK(homomorphy_check(sq).multiplicative);
    CHECK_FALSE(homomorphy_check(sq).additive);
}

TEST_CASE("polynomial theory matches a hand-built sum (property)") {
    gen::Rng rng(41);
    for (int c = 0; c < 30; ++c) {
        CAPTURE(c);
        const Grid g = gen::grid(rng, 16);
        Poly p;
        p.kind = ParamKind::nonzero_complex;
        const int r = gen::integer(rng, 1, 3);
        for (int v = 0; v < r; ++v) p.variables.push_back(gen::any_operator(rng, g));
        const int terms = gen::integer(rng, 1, 4);
        for (int t = 0; t < terms; ++t) {
            std::vector<int> alpha;
            for (int v = 0; v < r; ++v) alpha.push_back(gen::integer(rng, 0, 2));
            p.terms.push_back({alpha, CoeffFn::linear(gen::complex_normal(rng)), t});
        }
        const Theory th = polynomial_theory(p);
        CHECK(th.degree() == terms);
        const Param d = gen::param(rng, th.space());
        CMatrix expect = CMatrix::Zero(g.point_count(), g.point_count());
        for (const auto& t : p.terms) {
            CMatrix mono = CMatrix::Identity(g.point_count(), g.point_count());
            for (int v = 0; v < r; ++v)
                for (int k = 0; k < t.alpha[static_cast<std::size_t>(v)]; ++k) mono = mono * p.variables[static_cast<std::size_t>(v)].matrix();
            expect += t.f(slice(d, t.slot, 1)) * mono;
        }
        CHECK(gen::matrix_distance(th(d), Operator::from_matrix(g, expect)) <= 1e-11);
        REQUIRE(th.affine().has_value());
        Operator aff = th.affine()->offset;
        for (int i = 0; i < th.degree(); ++i) aff = aff + scale(d[static_cast<std::size_t>(i)], th.affine()->coefficients[static_cast<std::size_t>(i)]);
        CHECK(gen::matrix_distance(aff, th(d)) <= 1e-11);
    }
}

TEST_CASE("polynomial validation") {
    Poly p;
    CHECK_THROWS_AS(polynomial_theory(p), std::invalid_argument);
    p.variables = {A};
    CHECK_THROWS_AS(polynomial_theory(p), std::invalid_argument);
    p.terms = {{{1, 1}, CoeffFn::linear(1.0), 0}};
    CHECK_THROWS_AS(polynomial_theory(p), std::invalid_argument);
    p.terms = {{{-1}, CoeffFn::linear(1.0), 0}};
    CHECK_THROWS_AS(polynomial_theory(p), std::invalid_argument);
    p.variables = {A, Operator::identity(make_grid(1, {64}, {0.2}))};
    p.terms = {{{1, 0}, CoeffFn::linear(1.0), 0}};
    CHECK_THROWS_AS(polynomial_theory(p), GridMismatch);
}

TEST_CASE("monomial independence counts distinct monomial operators") {
    Poly p;
    p.variables = {A};
    p.terms = {{{0}, CoeffFn::linear(1.0), 0}, {{1}, CoeffFn::linear(1.0), 1}, {{2}, CoeffFn::linear(1.0), 2}};
    CHECK(monomial_independence(p).independent());
    CHECK(monomial_independence(p).rank == 3);
    Poly q;
    q.variables = {I};
    q.terms = {{{1}, CoeffFn::linear(1.0), 0}, {{2}, CoeffFn::linear(1.0), 1}};
    CHECK_FALSE(monomial_independence(q).independent());
    CHECK(monomial_independence(q).rank == 1);
}

TEST_CASE("sums, compositions, powers and scalings of theories") {
    const Theory a = scaling_theory(R1, A, "a");
    const Theory b = monomial_theory(CoeffFn::linear(3.0), A, 2, R1, "b");
    const Param d({ParamKind::nonzero_real, 2}, {2.0, -1.0});
    const Theory s = sum_theories(a, b);
    CHECK(s.id() == "(a+b)");
    CHECK(gen::matrix_distance(s(d), scale(2.0, A) + scale(-3.0, compose(A, A))) <= 1e-14);
    const Theory c = compose_theories(a, b);
    CHECK(c.id() == "(a∘b)");
    CHECK(gen::matrix_distance(c(d), scale(-6.0, compose(A, compose(A, A)))) <= 1e-14);
    const Theory p3 = theory_power(a, 3);
    CHECK(p3.degree() == 3);
    CHECK(p3.id() == "a^3");
    CHECK(gen::matrix_distance(p3(Param({ParamKind::nonzero_real, 3}, {1.0, 2.0, 3.0})), scale(6.0, power(A, 3))) <= 1e-14);
    const Theory sc = scale_theory(0.5, a);
    CHECK(gen::matrix_distance(sc(Param::scalar(ParamKind::nonzero_real, 4.0)), scale(2.0, A)) <= 1e-15);
    CHECK_THROWS_AS(sum_theories(a, scaling_theory({ParamKind::positive_real, 1}, A)), SpaceMismatch);
    const Theory k = constant_theory(ParamKind::nonzero_real, A);
    CHECK(k.degree() == 0);
    CHECK_THROWS_AS(homomorphy_check(k), std::invalid_argument);
}
