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

#include <cmath>

#include "generators.hpp"

using namespace emergent;

namespace {

const Grid g64 = make_grid(1, {64}, {0.1});
const Operator A = diff_operator(g64, StencilSpec::shifted_laplacian(1));
const Grid g16 = make_grid(1, {16}, {0.1});
const Operator I16 = Operator::identity(g16);
const ParamSpace R1{ParamKind::nonzero_real, 1};
const ParamSpace P1{ParamKind::positive_real, 1};

// Checks F against a closed form on fresh parameters.
template <typename Expected>
double map_error(const ParamMap& f, Expected expected, std::uint64_t seed, int n = 50) {
    gen::Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const Param e = gen::param(rng, f.source());
        worst = std::max(worst, param_distance(f(e), expected(e)));
    }
    return worst;
}

}  // namespace

TEST_CASE("monomial combinator recovers F = eps / 2") {
    const Theory target = scaling_theory(R1, A);
    const Theory ambient = monomial_theory(CoeffFn::linear(2.0), A, 1, R1);
    const EmergenceWitness w = emerge_monomial(target, ambient);
    CHECK(w.verified());
    CHECK(w.report.samples == 100);
    CHECK(w.report.max_action_residual <= 1e-9);
    CHECK(w.report.levels_equivalent);
    CHECK(map_error(w.map, [](const Param& e) { return nv_scale(0.5, e); }, 1) <= 1e-12);
}

TEST_CASE("monomial combinator with a power coefficient and complex parameters") {
    const ParamSpace C1{ParamKind::nonzero_complex, 1};
    const Theory target = scaling_theory(C1, compose(A, A));
    const EmergenceWitness w = emerge_monomial(target, CoeffFn::linear(Complex(1.0, 2.0)), A, 2, C1);
    CHECK(w.verified());
    CHECK(map_error(w.map, [](const Param& e) { return nv_scale(1.0 / Complex(1.0, 2.0), e); }, 2) <= 1e-12);
    // f(d) = d^3 against eps: F(eps) is the real cube root
    const Theory lin = scaling_theory(R1, A);
    const EmergenceWitness cube = emerge_monomial(lin, CoeffFn::power(1.0, 3), A, 1, R1);
    CHECK(cube.verified());
    CHECK(map_error(cube.map, [](const Param& e) { return Param::scalar(ParamKind::nonzero_real, std::cbrt(e[0].real())); }, 3) <= 1e-12);
}

TEST_CASE("monomial combinator reports the infeasible step by name") {
    const Theory target = scaling_theory(R1, A);
    const EmergenceWitness w = emerge_monomial(target, CoeffFn::linear(1.0), A, 2, R1);
    CHECK(w.report.verdict == Verdict::infeasible);
    CHECK(w.report.failed_step == "f·I step for x^2");
    CHECK(w.report.infeasible_residual > 1e-3);
}

TEST_CASE("verifier refutes a wrong map and accepts the right one") {
    const Theory target = scaling_theory(R1, A);
    const Theory ambient = monomial_theory(CoeffFn::linear(2.0), A, 1, R1);
    const ParamMap off(R1, R1, [](const Param& e) { return nv_scale(0.505, e); }, {"hand", "", {}});
    const VerificationReport r = verify_map(target, ambient, off);
    CHECK(r.verdict == Verdict::refuted);
    CHECK(r.max_action_residual == doctest::Approx(0.01 / 1.01).epsilon(1e-6));
    REQUIRE(r.worst_eps.has_value());
    const ParamMap right(R1, R1, [](const Param& e) { return nv_scale(0.5, e); }, {"hand", "", {}});
    CHECK(verify_map(target, ambient, right).verdict == Verdict::verified);
    // same seed, same report
    const VerificationReport a = verify_map(target, ambient, off, {50, 9, {}});
    const VerificationReport b = verify_map(target, ambient, off, {50, 9, {}});
    CHECK(a.max_action_residual == b.max_action_residual);
    CHECK(*a.worst_eps == *b.worst_eps);
}

TEST_CASE("parameter maps enforce their declared spaces") {
    const ParamMap bad(R1, R1, [](const Param& e) { return Param::scalar(ParamKind::positive_real, std::abs(e[0])); },
                       {"bad", "", {}});
    CHECK_THROWS_AS(bad(Param::scalar(ParamKind::nonzero_real, 2.0)), SpaceMismatch);
    CHECK_THROWS_AS(bad(Param::scalar(ParamKind::positive_real, 2.0)), SpaceMismatch);
}

TEST_CASE("identity, transitivity and scaling") {
    const Theory s1 = scaling_theory(R1, A, "s1");
    const Theory s2 = monomial_theory(CoeffFn::linear(2.0), A, 1, R1, "s2");
    const Theory s3 = monomial_theory(CoeffFn::linear(-4.0), A, 1, R1, "s3");
    const EmergenceWitness id = emerge_identity(s1, s1);
    CHECK(id.verified());
    CHECK_THROWS_AS(emerge_identity(s1, scaling_theory(P1, A)), SpaceMismatch);

    const EmergenceWitness f = emerge_monomial(s1, s2);
    const EmergenceWitness g = emerge_monomial(s2, s3);
    const EmergenceWitness fg = emerge_transitive(f, g);
    CHECK(fg.verified());
    CHECK(map_error(fg.map, [](const Param& e) { return nv_scale(-0.25, e); }, 4) <= 1e-12);
    CHECK_THROWS_AS(emerge_transitive(g, f), HypothesisError);

    const EmergenceWitness scaled = emerge_scaled(f, Complex(3.0));
    CHECK(scaled.verified());
    CHECK(map_error(scaled.map, [](const Param& e) { return nv_scale(1.0 / 6.0, e); }, 5) <= 1e-12);
    CHECK_THROWS_AS(emerge_scaled(f, 0.0), std::invalid_argument);
    // A^2 with a squared coefficient is not additive, so F / c has no justification
    const Theory sq = monomial_theory(CoeffFn::power(1.0, 2), A, 1, P1, "sq");
    const EmergenceWitness wsq = emerge_monomial(scaling_theory(P1, A, "t"), sq);
    REQUIRE(wsq.verified());
    CHECK_THROWS_AS(emerge_scaled(wsq, 2.0), HypothesisError);
}

TEST_CASE("sum lemma with and without the collapsed map") {
    const Theory s = scaling_theory(R1, A, "s");
    const EmergenceWitness id = emerge_identity(s, s);
    const LemmaWitness lw = emerge_sum(id, id, id, {100, 3, 1e-10});
    CHECK(lw.witness.verified());
    CHECK(lw.witness.ambient.degree() == 2);
    CHECK(map_error(lw.witness.map, [](const Param& e) { return concat(nv_scale(0.5, e), nv_scale(0.5, e)); }, 6) <= 1e-15);
    REQUIRE(lw.collapsed.has_value());
    CHECK(lw.collapsed->verified());
    CHECK(lw.collapsed->report.max_action_residual <= 1e-10);
    CHECK(map_error(lw.collapsed->map, [](const Param& e) { return e; }, 7) <= 1e-15);

    // a target that is not additive cannot be split at eps/2
    const Theory nonadd = monomial_theory(CoeffFn::power(1.0, 2), A, 1, P1, "n");
    const EmergenceWitness nid = emerge_identity(nonadd, nonadd);
    CHECK_THROWS_AS(emerge_sum(nid, nid), HypothesisError);
}

TEST_CASE("sum lemma with a rescaled second theory") {
    const Theory s1 = scaling_theory(R1, A, "s1");
    const Theory s2 = scaling_theory(R1, scale(2.0, A), "s2");
    const Theory s3 = scaling_theory(R1, A, "s3");
    const EmergenceWitness f = emerge_monomial(s1, monomial_theory(CoeffFn::linear(2.0), A, 1, R1, "s2"));
    const EmergenceWitness f2{s1, s2, f.map, f.report};
    const EmergenceWitness g = emerge_identity(s1, s3);
    const ParamMap twice(R1, R1, [](const Param& e) { return nv_scale(2.0, e); }, {"H", "", {}});
    const EmergenceWitness h = make_witness(s2, s3, twice);
    REQUIRE(h.verified());
    const LemmaWitness lw = emerge_sum(f2, g, h, {100, 3, 1e-12});
    CHECK(lw.witness.verified());
    // K(eps) = (F(eps/2), G(eps/2)) with F(x) = x/2
    CHECK(map_error(lw.witness.map, [](const Param& e) { return concat(nv_scale(0.25, e), nv_scale(0.5, e)); }, 11) <= 1e-15);
    REQUIRE(lw.collapsed.has_value());
    CHECK(lw.collapsed->verified());
    CHECK(map_error(lw.collapsed->map, [](const Param& e) { return e; }, 12) <= 1e-15);
}

TEST_CASE("scaling the ambient by -1 on positive reals is infeasible") {
    const Theory t = scaling_theory(P1, A, "t");
    const EmergenceWitness w = emerge_identity(t, t);
    const EmergenceWitness same = emerge_scaled(w, 1.0);
    CHECK(same.verified());
    CHECK(map_error(same.map, [](const Param& e) { return e; }, 13) == 0.0);
    const EmergenceWitness neg = emerge_scaled(w, -1.0);
    CHECK(neg.report.verdict == Verdict::infeasible);
}

TEST_CASE("composition lemma uses square roots") {
    const Theory s = scaling_theory(P1, I16, "s");
    const EmergenceWitness id = emerge_identity(s, s);
    const LemmaWitness lw = emerge_composition(id, id, id, {100, 4, 1e-10});
    CHECK(lw.witness.verified());
    CHECK(map_error(lw.witness.map,
                    [](const Param& e) {
                        const Param r = Param::scalar(ParamKind::positive_real, std::sqrt(e[0].real()));
                        return concat(r, r);
                    },
                    8) <= 1e-15);
    REQUIRE(lw.collapsed.has_value());
    CHECK(lw.collapsed->verified());

    const Theory r = scaling_theory(R1, Operator::identity(g16), "r");
    const EmergenceWitness rid = emerge_identity(r, r);
    CHECK_THROWS_WITH_AS(emerge_composition(rid, rid), doctest::Contains("square roots"), HypothesisError);
    const Theory a = scaling_theory(P1, diff_operator(g16, StencilSpec::shifted_laplacian(1)), "a");
    const EmergenceWitness aid = emerge_identity(a, a);
    CHECK_THROWS_AS(emerge_composition(aid, aid), HypothesisError);
}

TEST_CASE("powers of a multiplicative theory") {
    const Theory s = scaling_theory(P1, I16, "s");
    for (int l = 1; l <= 3; ++l)
        for (int m = 1; m <= 3; ++m) {
            CAPTURE(l);
            CAPTURE(m);
            const EmergenceWitness w = emerge_powers(s, l, m, {100, 5, 1e-12});
            CHECK(w.verified());
            CHECK(w.target.degree() == m);
            CHECK(w.ambient.degree() == l);
        }
}

TEST_CASE("univariate recursion: verified and infeasible cases") {
    const Theory target = scaling_theory(R1, A, "t");
    Poly ok;
    ok.variables = {A};
    ok.terms = {{{1}, CoeffFn::linear(1.0), 0}, {{1}, CoeffFn::linear(2.0), 1}};
    // two terms with the same monomial are rejected before anything is built
    CHECK_THROWS_AS(emerge_univariate(target, ok), HypothesisError);

    Poly gap;
    gap.variables = {A};
    gap.terms = {{{1}, CoeffFn::linear(1.0), 0}, {{2}, CoeffFn::linear(1.0), 1}};
    const EmergenceWitness w = emerge_univariate(target, gap);
    CHECK(w.report.verdict == Verdict::infeasible);
    CHECK(w.report.failed_step == "f·I step for x1^2");

    Poly single;
    single.variables = {A};
    single.terms = {{{1}, CoeffFn::linear(4.0), 0}};
    const EmergenceWitness sw = emerge_univariate(target, single);
    CHECK(sw.verified());
    CHECK(map_error(sw.map, [](const Param& e) { return nv_scale(0.25, e); }, 9) <= 1e-12);

    Poly constant;
    constant.variables = {A};
    constant.terms = {{{1}, CoeffFn::constant(1.0), 0}};
    CHECK_THROWS_AS(emerge_univariate(target, constant), HypothesisError);
}

TEST_CASE("univariate recursion on a rank-deficient span matches the oracle") {
    const Operator I = Operator::identity(g64);
    const Theory target = scaling_theory(R1, I, "t");
    Poly p;
    p.variables = {I};
    p.terms = {{{1}, CoeffFn::linear(1.0), 0}, {{2}, CoeffFn::linear(1.0), 1}};
    const EmergenceWitness w = emerge_univariate(target, p);
    CHECK(w.verified());
    CHECK(map_error(w.map, [](const Param& e) { return concat(nv_scale(0.5, e), nv_scale(0.5, e)); }, 14) <= 1e-12);
}

TEST_CASE("multivariate recursion with two identity variables") {
    const Operator I = Operator::identity(g64);
    const Theory target = scaling_theory(R1, I, "t");
    Poly p;
    p.variables = {I, I};
    p.terms = {{{1, 0}, CoeffFn::linear(1.0), 0}, {{0, 1}, CoeffFn::linear(1.0), 1}};
    const EmergenceWitness w = emerge_multivariate(target, p);
    CHECK(w.verified());
    CHECK(map_error(w.map, [](const Param& e) { return concat(nv_scale(0.5, e), nv_scale(0.5, e)); }, 15) <= 1e-12);
}

TEST_CASE("multivariate recursion over commuting symbol variables") {
    const Operator I = Operator::identity(g64);
    const Theory target = scaling_theory(R1, A, "t");
    Poly p;
    p.variables = {A, I};
    p.terms = {{{1, 0}, CoeffFn::linear(1.0), 0}, {{1, 1}, CoeffFn::linear(3.0), 1}};
    const EmergenceWitness w = emerge_multivariate(target, p);
    CHECK(w.verified());
    CHECK(map_error(w.map, [](const Param& e) { return concat(nv_scale(0.5, e), nv_scale(1.0 / 6.0, e)); }, 10) <= 1e-12);
    const EmergenceWitness a = emerge_auto(target, polynomial_theory(p));
    CHECK(a.verified());
}

TEST_CASE("emerge_auto dispatches on structure") {
    const Theory s = scaling_theory(R1, A, "s");
    CHECK(emerge_auto(s, monomial_theory(CoeffFn::linear(2.0), A, 1, R1)).verified());
    CHECK(emerge_auto(s, s).verified());
    CHECK(emerge_auto(s, sum_theories(s, s)).verified());
    CHECK(emerge_auto(s, scale_theory(-2.0, s)).verified());
    const Theory p = scaling_theory(P1, I16, "p");
    CHECK(emerge_auto(p, compose_theories(p, compose_theories(p, p))).verified());
    CHECK_THROWS_AS(emerge_auto(s, scaling_theory({ParamKind::nonzero_real, 2}, A)), HypothesisError);
    const EmergenceWitness bad = emerge_auto(s, monomial_theory(CoeffFn::linear(1.0), A, 2, R1));
    CHECK(bad.report.verdict == Verdict::infeasible);
    const EmergenceWitness k = emerge_auto(s, constant_theory(ParamKind::nonzero_real, A));
    CHECK(k.report.verdict == Verdict::refuted);
}

TEST_CASE("recurrence validates every hypothesis by name") {
    const Theory s = scaling_theory(P1, I16, "s");
    const EmergenceWitness id = emerge_identity(s, s);
    RecurrenceHypotheses h;
    CHECK_THROWS_WITH_AS(emerge_recurrence(s, h), doctest::Contains("hypothesis 1"), HypothesisError);
    h.pairs.push_back({id, id, std::nullopt});
    CHECK_THROWS_WITH_AS(emerge_recurrence(s, h), doctest::Contains("hypothesis 2"), HypothesisError);
    h.pairs.back().s2_from_s3 = id;
    const EmergenceWitness one = emerge_recurrence(s, h);
    CHECK(one.verified());
    CHECK(one.map.provenance().step == "recurrence");

    h.pairs.push_back({id, id, id});
    CHECK_THROWS_WITH_AS(emerge_recurrence(s, h), doctest::Contains("hypothesis 3"), HypothesisError);
    h.divisibility.push_back(id);
    CHECK_THROWS_WITH_AS(emerge_recurrence(s, h), doctest::Contains("hypothesis 4"), HypothesisError);
    h.accumulated_from_quotient.push_back(id);
    h.s2_from_quotient.push_back(id);
    CHECK_THROWS_WITH_AS(emerge_recurrence(s, h), doctest::Contains("hypothesis 5"), HypothesisError);
    h.accumulated_from_s2.push_back(id);
    // the divisibility certificate must have a composition-with-monomial ambient
    CHECK_THROWS_WITH_AS(emerge_recurrence(s, h), doctest::Contains("Q_k"), HypothesisError);
}

TEST_CASE("recurrence with two summands") {
    const Theory s = scaling_theory(P1, I16, "s");
    const EmergenceWitness id = emerge_identity(s, s);
    const Theory mono = monomial_theory(CoeffFn::linear(1.0), I16, 1, P1, "m");
    const Theory q = compose_theories(s, mono);  // s from s o m, Q_2 = s
    const EmergenceWitness div = emerge_auto(s, q);
    REQUIRE(div.verified());
    const EmergenceWitness ss = emerge_composition(id, id).witness;  // S^1 = s o s
    const EmergenceWitness acc_from_q = emerge_auto(ss.ambient, s);
    RecurrenceHypotheses h;
    h.pairs = {{id, id, id}, {id, id, id}};
    h.divisibility = {div};
    h.s2_from_quotient = {id};
    h.accumulated_from_quotient = {acc_from_q};
    h.accumulated_from_s2 = {acc_from_q};
    REQUIRE(acc_from_q.verified());
    const EmergenceWitness w = emerge_recurrence(s, h, {100, 0, 1e-12});
    CHECK(w.verified());
    CHECK(w.ambient.degree() == 4);
}

TEST_CASE("quadratic-form zero test (property)") {
    gen::Rng rng(61);
    for (int c = 0; c < 30; ++c) {
        CAPTURE(c);
        const Operator t = gen::self_adjoint_dense(rng, g16);
        const QFormReport rep = qform_zero_test(t, 1e-10);
        CHECK_FALSE(rep.pass);
        CHECK(rep.reconstruction_error <= 1e-10);
        CHECK(rep.reconstructed_norm == doctest::Approx(t.frobenius_norm()).epsilon(1e-10));
        const Operator tiny = scale(1e-12 / t.frobenius_norm(), t);
        CHECK(qform_zero_test(tiny, 1e-10).pass);
    }
    CHECK(qform_zero_test(Operator::zero(g16), 1e-10).pass);
    // skew operators are neither self-adjoint nor declared coercive
    const Operator d = diff_operator(g16, StencilSpec::derivative(1, 0));
    CHECK_THROWS_AS(qform_zero_test(d, 1e-10), HypothesisError);
    CHECK_THROWS_AS(qform_zero_test(Operator::identity(make_grid(1, {300}, {0.1})), 1e-10), std::invalid_argument);
}
