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

#include "emergent/emergence.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace emergent {

ParamMap::ParamMap(ParamSpace source, ParamSpace target, Eval eval, ProvenanceNode provenance)
    : source_(source), target_(target), eval_(std::move(eval)), provenance_(std::move(provenance)) {}

Param ParamMap::operator()(const Param& eps) const {
    if (!(eps.space() == source_)) throw SpaceMismatch();
    Param out = eval_(eps);
    if (!(out.space() == target_)) throw SpaceMismatch();
    return out;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::verified: return "verified";
        case Verdict::refuted: return "refuted";
        case Verdict::infeasible: return "infeasible";
    }
    return "?";
}

namespace {

constexpr std::uint64_t homomorphy_seed = 0x5eed5eedULL;
constexpr int homomorphy_samples = 16;

std::uint64_t mix(std::uint64_t seed, std::uint64_t i) {
    // splitmix64 finalizer over (seed, i)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void mark_infeasible(VerificationReport& rep, const Param& eps, const std::string& reason) {
    rep.verdict = Verdict::infeasible;
    rep.worst_eps = eps;
    rep.reason = reason;
}

}  // namespace

VerificationReport verify_at(const Theory& target, const Theory& ambient, const ParamMap& map,
                             const std::vector<Param>& eps, std::uint64_t field_seed, int samples,
                             std::optional<double> tol) {
    if (eps.empty()) throw std::invalid_argument("verification needs at least one parameter");
    if (!(target.grid() == ambient.grid())) throw GridMismatch("target and ambient live on different grids");
    const double floor = default_tolerances.norm_floor;
    VerificationReport rep;
    rep.samples = std::max(samples, min_verify_fields);
    rep.seed = field_seed;
    bool dense = false;
    bool self_adjoint = true;
    double worst = -1.0;
    for (int i = 0; i < rep.samples; ++i) {
        const Param& e = eps[static_cast<std::size_t>(i) % eps.size()];
        std::optional<Operator> a, b;
        try {
            const Param d = map(e);
            a = target(e);
            b = ambient(d);
        } catch (const InfeasibleStep& ex) {
            mark_infeasible(rep, e, ex.what());
            rep.failed_step = ex.step;
            rep.infeasible_residual = ex.residual;
        } catch (const NotInImage& ex) {
            mark_infeasible(rep, e, ex.what());
            rep.infeasible_residual = ex.residual;
        } catch (const Error& ex) {
            mark_infeasible(rep, e, ex.what());
        } catch (const std::invalid_argument& ex) {
            mark_infeasible(rep, e, ex.what());
        }
        if (!a) {
            rep.tolerance = tol.value_or(dense ? dense_verify_tolerance : symbol_verify_tolerance);
            return rep;
        }
        dense = dense || a->is_dense() || b->is_dense();
        const Field phi = sample_field(target.grid(), mix(field_seed, static_cast<std::uint64_t>(i)));
        const Complex s1 = action_value(phi, *a);
        const Complex s2 = action_value(phi, *b);
        const double ar = std::abs(s1 - s2) / std::max({std::abs(s1), std::abs(s2), floor});
        const double orr = op_distance(*a, *b, floor);
        rep.max_action_residual = std::max(rep.max_action_residual, ar);
        rep.max_operator_residual = std::max(rep.max_operator_residual, orr);
        if (std::max(ar, orr) > worst) {
            worst = std::max(ar, orr);
            rep.worst_eps = e;
        }
        self_adjoint = self_adjoint && self_adjointness_defect(*a) <= default_tolerances.identity &&
                       self_adjointness_defect(*b) <= default_tolerances.identity;
    }
    rep.tolerance = tol.value_or(dense ? dense_verify_tolerance : symbol_verify_tolerance);
    rep.levels_equivalent = self_adjoint;
    const bool pass = rep.max_action_residual <= rep.tolerance && rep.max_operator_residual <= rep.tolerance;
    rep.verdict = pass ? Verdict::verified : Verdict::refuted;
    if (pass) {
        rep.worst_eps.reset();
    } else {
        std::ostringstream os;
        os.precision(3);
        os << "residual " << std::max(rep.max_action_residual, rep.max_operator_residual) << " exceeds tolerance "
           << rep.tolerance;
        if (rep.max_action_residual <= rep.tolerance) os << " (operator level only)";
        rep.reason = os.str();
    }
    return rep;
}

VerificationReport verify_map(const Theory& target, const Theory& ambient, const ParamMap& map,
                              const VerifyOptions& opts) {
    const int n = std::max(opts.samples, min_verify_fields);
    std::mt19937_64 rng(opts.seed);
    std::vector<Param> eps;
    eps.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) eps.push_back(sample_param(target.space(), rng));
    VerificationReport rep = verify_at(target, ambient, map, eps, mix(opts.seed, 0xf1e1d), n, opts.tol);
    rep.seed = opts.seed;
    return rep;
}

VerificationReport verify_witness(const EmergenceWitness& w, const VerifyOptions& opts) {
    return verify_map(w.target, w.ambient, w.map, opts);
}

EmergenceWitness make_witness(const Theory& target, const Theory& ambient, ParamMap map, const VerifyOptions& opts) {
    if (!(map.source() == target.space()) || !(map.target() == ambient.space())) throw SpaceMismatch();
    VerificationReport rep = verify_map(target, ambient, map, opts);
    return EmergenceWitness{target, ambient, std::move(map), std::move(rep)};
}

namespace {

void require_verified(const EmergenceWitness& w, const std::string& label) {
    if (!w.verified())
        throw HypothesisError(label + " (" + w.target.id() + " from " + w.ambient.id() + ") is not verified: " +
                              w.report.reason);
}

void require_additive(const Theory& t, const std::string& who) {
    if (!t.claims().additive) throw HypothesisError(who + ": theory " + t.id() + " is not additive");
    const auto rep = homomorphy_check(t, homomorphy_samples, homomorphy_seed);
    if (!rep.additive)
        throw HypothesisError(who + ": additivity of " + t.id() + " refuted at " + describe(rep.additive_witness->first) +
                              ", " + describe(rep.additive_witness->second));
}

void require_multiplicative(const Theory& t, const std::string& who) {
    if (!t.claims().multiplicative) throw HypothesisError(who + ": theory " + t.id() + " is not multiplicative");
    const auto rep = homomorphy_check(t, homomorphy_samples, homomorphy_seed);
    if (!rep.multiplicative)
        throw HypothesisError(who + ": multiplicativity of " + t.id() + " refuted at " +
                              describe(rep.multiplicative_witness->first) + ", " +
                              describe(rep.multiplicative_witness->second));
}

bool passes_additive(const Theory& t) {
    return t.degree() >= 1 && t.claims().additive &&
           homomorphy_check(t, homomorphy_samples, homomorphy_seed).additive;
}

bool passes_multiplicative(const Theory& t) {
    return t.degree() >= 1 && t.claims().multiplicative &&
           homomorphy_check(t, homomorphy_samples, homomorphy_seed).multiplicative;
}

/// lambda with x = lambda I, or InfeasibleStep naming `step`.
Complex recover_scalar(const Operator& x, ParamKind kind, const std::string& step) {
    const auto fit = scalar_identity_extract(x);
    if (fit.residual > default_tolerances.identity)
        throw InfeasibleStep(step, "operator is not a scalar multiple of the identity", fit.residual);
    Complex lambda = fit.lambda;
    if (kind != ParamKind::nonzero_complex && std::abs(lambda.imag()) <= default_tolerances.identity * std::abs(lambda))
        lambda = lambda.real();
    return lambda;
}

std::string monomial_name(const std::vector<int>& alpha) {
    std::ostringstream os;
    bool any = false;
    for (std::size_t j = 0; j < alpha.size(); ++j) {
        if (alpha[j] == 0) continue;
        if (any) os << '*';
        os << 'x' << (j + 1);
        if (alpha[j] > 1) os << '^' << alpha[j];
        any = true;
    }
    if (!any) os << '1';
    return os.str();
}

EmergenceWitness monomial_impl(const Theory& target, const Theory& ambient, const CoeffFn& g, const Operator& psi,
                               int power_l, const VerifyOptions& opts) {
    if (!g.invertible()) throw HypothesisError("monomial: coefficient " + g.tag() + " has no declared inverse");
    if (!(target.grid() == psi.grid())) throw GridMismatch();
    const Operator r = right_inverse(power(psi, power_l)).inverse;
    const ParamSpace space = ambient.space();
    const std::string step = "f·I step for x^" + std::to_string(power_l);
    auto eval = [target, r, g, space, step](const Param& e) {
        const Complex lambda = recover_scalar(compose(target(e), r), space.kind, step);
        return g.invert(lambda, space);
    };
    ProvenanceNode node{"monomial", "coefficient " + g.tag() + ", power " + std::to_string(power_l), {}};
    return make_witness(target, ambient, ParamMap(target.space(), space, eval, std::move(node)), opts);
}

/// Witness whose map always fails, carrying the verdict of a failed sub-step.
EmergenceWitness failed_witness(const Theory& target, const Theory& ambient, const EmergenceWitness& sub,
                                const std::string& label) {
    const std::string reason = label + ": " + sub.report.reason;
    ProvenanceNode node{label, "sub-step not verified", {sub.map.provenance()}};
    ParamMap map(target.space(), ambient.space(),
                 [reason](const Param&) -> Param { throw HypothesisError(reason); }, std::move(node));
    VerificationReport rep = sub.report;
    rep.reason = reason;
    if (rep.verdict == Verdict::verified) rep.verdict = Verdict::infeasible;
    return EmergenceWitness{target, ambient, std::move(map), std::move(rep)};
}

}  // namespace

EmergenceWitness emerge_identity(const Theory& target, const Theory& ambient, const VerifyOptions& opts) {
    if (!(target.space() == ambient.space())) throw SpaceMismatch();
    ParamMap map(target.space(), ambient.space(), [](const Param& e) { return e; },
                 {"identity", target.id() + " as " + ambient.id(), {}});
    return make_witness(target, ambient, std::move(map), opts);
}

EmergenceWitness emerge_transitive(const EmergenceWitness& first, const EmergenceWitness& second,
                                   const VerifyOptions& opts) {
    if (first.ambient.id() != second.target.id() || !(first.map.target() == second.map.source()))
        throw HypothesisError("transitivity: " + first.ambient.id() + " and " + second.target.id() + " do not match");
    ParamMap map(first.map.source(), second.map.target(),
                 [f = first.map, g = second.map](const Param& e) { return g(f(e)); },
                 {"transitivity", "", {first.map.provenance(), second.map.provenance()}});
    return make_witness(first.target, second.ambient, std::move(map), opts);
}

EmergenceWitness emerge_monomial(const Theory& target, const CoeffFn& g, const Operator& psi, int power_l,
                                 const ParamSpace& ambient_space, const VerifyOptions& opts) {
    const Theory ambient = monomial_theory(g, psi, power_l, ambient_space);
    return monomial_impl(target, ambient, g, psi, power_l, opts);
}

EmergenceWitness emerge_monomial(const Theory& target, const Theory& ambient, const VerifyOptions& opts) {
    if (const auto* m = std::get_if<MonomialRep>(&ambient.structure()))
        return monomial_impl(target, ambient, m->g, m->psi, m->power, opts);
    if (const auto* s = std::get_if<ScalingRep>(&ambient.structure()); s && ambient.degree() == 1)
        return monomial_impl(target, ambient, CoeffFn::linear(1.0), s->psi0, 1, opts);
    throw std::invalid_argument("monomial: ambient " + ambient.id() + " is not a monomial theory");
}

EmergenceWitness emerge_scaled(const EmergenceWitness& w, Complex c, const VerifyOptions& opts) {
    if (c == Complex(0.0)) throw std::invalid_argument("scaled: c must be nonzero");
    require_verified(w, "scaled: input witness");
    require_additive(w.ambient, "scaled");
    const Theory ambient = scale_theory(c, w.ambient);
    const Complex inv = 1.0 / c;
    ParamMap map(w.map.source(), ambient.space(), [f = w.map, inv](const Param& e) { return nv_scale(inv, f(e)); },
                 {"scaled", "ambient multiplied by c", {w.map.provenance()}});
    return make_witness(w.target, ambient, std::move(map), opts);
}

namespace {

void check_triple(const EmergenceWitness& f, const EmergenceWitness& g, const std::optional<EmergenceWitness>& h,
                  const std::string& who) {
    require_verified(f, who + ": S1 from S2");
    require_verified(g, who + ": S1 from S3");
    if (f.target.id() != g.target.id())
        throw HypothesisError(who + ": witnesses have different targets " + f.target.id() + " and " + g.target.id());
    if (h) {
        require_verified(*h, who + ": S2 from S3");
        if (h->target.id() != f.ambient.id() || h->ambient.id() != g.ambient.id())
            throw HypothesisError(who + ": S2-from-S3 witness relates " + h->target.id() + " and " + h->ambient.id());
    }
}

}  // namespace

LemmaWitness emerge_sum(const EmergenceWitness& from_s2, const EmergenceWitness& from_s3,
                        const std::optional<EmergenceWitness>& s2_from_s3, const VerifyOptions& opts) {
    check_triple(from_s2, from_s3, s2_from_s3, "sum");
    const Theory& s1 = from_s2.target;
    require_additive(s1, "sum");
    const Theory ambient = sum_theories(from_s2.ambient, from_s3.ambient);
    const ParamMap f = from_s2.map, g = from_s3.map;
    ParamMap k(s1.space(), ambient.space(),
               [f, g](const Param& e) {
                   const Param half = nv_scale(0.5, e);
                   return concat(f(half), g(half));
               },
               {"sum", "K(eps) = (F(eps/2), G(eps/2))", {f.provenance(), g.provenance()}});
    LemmaWitness out{make_witness(s1, ambient, std::move(k), opts), std::nullopt};
    if (s2_from_s3 && passes_additive(from_s3.ambient)) {
        const ParamMap h = s2_from_s3->map;
        ParamMap l(s1.space(), from_s3.ambient.space(),
                   [f, g, h](const Param& e) {
                       const Param half = nv_scale(0.5, e);
                       return nv_add(h(f(half)), g(half));
                   },
                   {"sum-collapsed", "L(eps) = H(F(eps/2)) + G(eps/2)",
                    {f.provenance(), g.provenance(), h.provenance()}});
        out.collapsed = make_witness(s1, from_s3.ambient, std::move(l), opts);
    }
    return out;
}

LemmaWitness emerge_composition(const EmergenceWitness& from_s2, const EmergenceWitness& from_s3,
                                const std::optional<EmergenceWitness>& s2_from_s3, const VerifyOptions& opts) {
    check_triple(from_s2, from_s3, s2_from_s3, "composition");
    const Theory& s1 = from_s2.target;
    if (!s1.space().has_square_roots())
        throw HypothesisError("composition: " + to_string(s1.space().kind) + " parameters have no square roots");
    require_multiplicative(s1, "composition");
    const Theory ambient = compose_theories(from_s2.ambient, from_s3.ambient);
    const ParamMap f = from_s2.map, g = from_s3.map;
    ParamMap k(s1.space(), ambient.space(),
               [f, g](const Param& e) {
                   const Param root = nv_sqrt(e);
                   return concat(f(root), g(root));
               },
               {"composition", "K(eps) = (F(sqrt eps), G(sqrt eps))", {f.provenance(), g.provenance()}});
    LemmaWitness out{make_witness(s1, ambient, std::move(k), opts), std::nullopt};
    if (s2_from_s3 && passes_multiplicative(from_s3.ambient)) {
        const ParamMap h = s2_from_s3->map;
        ParamMap l(s1.space(), from_s3.ambient.space(),
                   [f, g, h](const Param& e) {
                       const Param root = nv_sqrt(e);
                       return nv_mul(h(f(root)), g(root));
                   },
                   {"composition-collapsed", "L(eps) = H(F(sqrt eps)) * G(sqrt eps)",
                    {f.provenance(), g.provenance(), h.provenance()}});
        out.collapsed = make_witness(s1, from_s3.ambient, std::move(l), opts);
    }
    return out;
}

EmergenceWitness emerge_powers(const Theory& t, int l, int m, const VerifyOptions& opts) {
    if (l < 1 || m < 1) throw std::invalid_argument("powers: l and m must be >= 1");
    require_multiplicative(t, "powers");
    if (l >= 2 && !t.space().has_square_roots())
        throw HypothesisError("powers: " + to_string(t.space().kind) + " parameters have no square roots");

    const EmergenceWitness self = emerge_identity(t, t, opts);
    EmergenceWitness from_l = self;
    for (int k = 2; k <= l; ++k) {
        LemmaWitness step = emerge_composition(from_l, self, std::nullopt, opts);
        require_verified(step.witness, "powers: composition step " + std::to_string(k));
        from_l = EmergenceWitness{t, theory_power(t, k), step.witness.map, step.witness.report};
    }

    const Theory pm = theory_power(t, m);
    const int d = t.degree();
    ParamMap collapse(pm.space(), t.space(),
                      [d, m](const Param& e) {
                          Param acc = slice(e, 0, d);
                          for (int i = 1; i < m; ++i) acc = nv_mul(acc, slice(e, i * d, d));
                          return acc;
                      },
                      {"powers-collapse", "eps(m) -> eps_1 * ... * eps_m", {}});
    const EmergenceWitness down = make_witness(pm, t, std::move(collapse), opts);
    require_verified(down, "powers: collapse of " + pm.id());

    EmergenceWitness w = emerge_transitive(down, from_l, opts);
    ProvenanceNode node{"powers", "l = " + std::to_string(l) + ", m = " + std::to_string(m),
                        {w.map.provenance()}};
    w.map = ParamMap(w.map.source(), w.map.target(), [inner = w.map](const Param& e) { return inner(e); },
                     std::move(node));
    return w;
}

namespace {

using OpFn = std::function<Operator(const Param&)>;
using Assign = std::function<void(const Param&, std::vector<std::optional<Param>>&)>;

struct Built {
    Assign assign;
    ProvenanceNode node;
};

struct PolyContext {
    const Theory& target;
    const Poly& poly;
    std::vector<std::optional<Operator>> inverses;
    bool additivity_checked = false;

    const Operator& inverse(int var) {
        auto& slot = inverses[static_cast<std::size_t>(var)];
        if (!slot) slot = right_inverse(poly.variables[static_cast<std::size_t>(var)]).inverse;
        return *slot;
    }

    void require_split() {
        if (additivity_checked) return;
        require_additive(target, "polynomial recursion (additive split at eps/2)");
        additivity_checked = true;
    }
};

// Terms indexed by `idx` are a polynomial in the first r variables whose value must equal V.
Built build_levels(PolyContext& ctx, const OpFn& v, const std::vector<int>& idx, int r) {
    if (r == 0) {
        if (idx.size() != 1)
            throw HypothesisError("polynomial repeats the monomial " +
                                  monomial_name(ctx.poly.terms[static_cast<std::size_t>(idx.front())].alpha));
        const PolyTerm& t = ctx.poly.terms[static_cast<std::size_t>(idx.front())];
        const std::string step = "f·I step for " + monomial_name(t.alpha);
        const ParamSpace space = ctx.poly.slot_space();
        Assign assign = [v, f = t.f, slot = t.slot, space, step](const Param& e, std::vector<std::optional<Param>>& out) {
            out[static_cast<std::size_t>(slot)] = f.invert(recover_scalar(v(e), space.kind, step), space);
        };
        return {assign, {"monomial", step + ", coefficient " + t.f.tag() + ", slot " + std::to_string(t.slot), {}}};
    }

    std::map<int, std::vector<int>> groups;
    for (int i : idx) groups[ctx.poly.terms[static_cast<std::size_t>(i)].alpha[static_cast<std::size_t>(r - 1)]].push_back(i);
    if (groups.size() > 1) ctx.require_split();

    std::vector<Assign> parts;
    std::vector<bool> splits;
    ProvenanceNode node{"levels", "grouped by powers of x" + std::to_string(r), {}};
    std::size_t g = 0;
    for (const auto& [j, members] : groups) {
        const bool split = ++g < groups.size();
        OpFn w = v;
        std::string detail = "level " + std::to_string(j);
        if (j > 0) {
            const Operator lift = power(ctx.inverse(r - 1), j);
            w = [v, lift](const Param& e) { return compose(v(e), lift); };
            detail += ", right-inverse lift by R_" + std::to_string(r) + "^" + std::to_string(j);
        }
        if (split) detail += ", additive split at eps/2";
        Built sub = build_levels(ctx, w, members, r - 1);
        node.children.push_back({"level", detail, {std::move(sub.node)}});
        parts.push_back(std::move(sub.assign));
        splits.push_back(split);
    }
    if (groups.size() == 1) {
        ProvenanceNode only = std::move(node.children.front());
        node = std::move(only);
    }
    Assign assign = [parts, splits](const Param& e, std::vector<std::optional<Param>>& out) {
        Param cur = e;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (splits[i]) cur = nv_scale(0.5, cur);
            parts[i](cur, out);
        }
    };
    return {assign, std::move(node)};
}

void check_poly_hypotheses(const Theory& target, const Poly& poly) {
    const int slots = poly.slot_count();
    std::vector<int> uses(static_cast<std::size_t>(slots), 0);
    for (const auto& t : poly.terms) ++uses[static_cast<std::size_t>(t.slot)];
    for (int s = 0; s < slots; ++s)
        if (uses[static_cast<std::size_t>(s)] != 1)
            throw HypothesisError("polynomial recursion needs exactly one monomial per parameter slot (slot " +
                                  std::to_string(s) + " has " + std::to_string(uses[static_cast<std::size_t>(s)]) + ")");
    for (const auto& t : poly.terms) {
        if (!t.f.invertible()) throw HypothesisError("coefficient " + t.f.tag() + " has no declared inverse");
        const CalculusEntry entry = calculus_operator(t.f, poly.slot_space(), target.grid());
        if (!entry.certified)
            throw HypothesisError("coefficient " + t.f.tag() + " has no certified functional calculus (residual " +
                                  std::to_string(entry.max_residual) + ")");
    }
}

EmergenceWitness poly_impl(const Theory& target, const Poly& poly, const std::string& label,
                           const VerifyOptions& opts) {
    const Theory ambient = polynomial_theory(poly);
    if (!(target.grid() == ambient.grid())) throw GridMismatch();
    check_poly_hypotheses(target, poly);
    PolyContext ctx{target, poly, std::vector<std::optional<Operator>>(poly.variables.size()), false};
    std::vector<int> all(poly.terms.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    OpFn v = [target](const Param& e) { return target(e); };
    Built built = build_levels(ctx, v, all, static_cast<int>(poly.variables.size()));

    const ParamSpace space = ambient.space();
    const int slots = poly.slot_count();
    auto eval = [assign = built.assign, space, slots](const Param& e) {
        std::vector<std::optional<Param>> out(static_cast<std::size_t>(slots));
        assign(e, out);
        std::vector<Complex> comps;
        for (const auto& p : out) comps.insert(comps.end(), p->components().begin(), p->components().end());
        return Param(space, std::move(comps));
    };
    ProvenanceNode node{label, std::to_string(poly.terms.size()) + " terms in " +
                                   std::to_string(poly.variables.size()) + " variable(s)",
                        {std::move(built.node)}};
    return make_witness(target, ambient, ParamMap(target.space(), space, eval, std::move(node)), opts);
}

}  // namespace

EmergenceWitness emerge_univariate(const Theory& target, const Poly& poly, const VerifyOptions& opts) {
    if (poly.variables.size() != 1) throw std::invalid_argument("univariate: polynomial must have one variable");
    if (poly.terms.size() == 1) {
        const PolyTerm& t = poly.terms.front();
        check_poly_hypotheses(target, poly);
        EmergenceWitness w = emerge_monomial(target, t.f, poly.variables.front(), t.alpha.front(), poly.slot_space(), opts);
        ProvenanceNode node{"univariate", "single monomial", {w.map.provenance()}};
        ParamMap map(w.map.source(), w.map.target(), [inner = w.map](const Param& e) { return inner(e); },
                     std::move(node));
        return EmergenceWitness{target, polynomial_theory(poly), std::move(map), w.report};
    }
    return poly_impl(target, poly, "univariate", opts);
}

EmergenceWitness emerge_multivariate(const Theory& target, const Poly& poly, const VerifyOptions& opts) {
    if (poly.variables.size() == 1) return emerge_univariate(target, poly, opts);
    return poly_impl(target, poly, "multivariate", opts);
}

namespace {

std::string hyp(int n, const std::string& text) { return "hypothesis " + std::to_string(n) + " (" + text + ")"; }

void require_relates(const EmergenceWitness& w, const std::string& target_id, const std::string& ambient_id,
                     const std::string& label) {
    require_verified(w, label);
    if (w.target.id() != target_id || w.ambient.id() != ambient_id)
        throw HypothesisError(label + ": expected " + target_id + " from " + ambient_id + ", got " + w.target.id() +
                              " from " + w.ambient.id());
}

}  // namespace

EmergenceWitness emerge_recurrence(const Theory& target, const RecurrenceHypotheses& h, const VerifyOptions& opts) {
    const int l = static_cast<int>(h.pairs.size());
    if (l < 1) throw HypothesisError(hyp(1, "S1 emerges from S2_j and S3_j") + " missing: no pairs given");

    std::vector<std::string> s2(static_cast<std::size_t>(l)), s3(static_cast<std::size_t>(l));
    for (int j = 0; j < l; ++j) {
        const auto& p = h.pairs[static_cast<std::size_t>(j)];
        const std::string tag = " for j = " + std::to_string(j + 1);
        require_verified(p.from_s2, hyp(1, "S1 emerges from S2_j") + tag);
        require_verified(p.from_s3, hyp(1, "S1 emerges from S3_j") + tag);
        if (p.from_s2.target.id() != target.id() || p.from_s3.target.id() != target.id())
            throw HypothesisError(hyp(1, "S1 emerges from S2_j and S3_j") + tag + ": target is not " + target.id());
        s2[static_cast<std::size_t>(j)] = p.from_s2.ambient.id();
        s3[static_cast<std::size_t>(j)] = p.from_s3.ambient.id();
        if (!p.s2_from_s3) throw HypothesisError(hyp(2, "S2_j emerges from S3_j") + " missing" + tag);
        require_relates(*p.s2_from_s3, s2[static_cast<std::size_t>(j)], s3[static_cast<std::size_t>(j)],
                        hyp(2, "S2_j emerges from S3_j") + tag);
    }

    const auto need = static_cast<std::size_t>(l - 1);
    if (h.divisibility.size() != need)
        throw HypothesisError(hyp(3, "S3_k divisible from the right by a monomial") + " missing: need " +
                              std::to_string(need) + " certificates");
    if (h.accumulated_from_quotient.size() != need || h.s2_from_quotient.size() != need)
        throw HypothesisError(hyp(4, "S^m and S2_{m+1} emerge from Q_{m+1}") + " missing: need " +
                              std::to_string(need) + " of each");
    if (h.accumulated_from_s2.size() != need)
        throw HypothesisError(hyp(5, "S^m_{δJ,κJ} emerges from S₂,m+1") + " missing: need " + std::to_string(need) +
                              " witnesses");

    std::vector<std::string> quotient(static_cast<std::size_t>(l));
    for (int k = 2; k <= l; ++k) {
        const auto& cert = h.divisibility[static_cast<std::size_t>(k - 2)];
        const std::string label = hyp(3, "S3_k divisible from the right by a monomial") + " for k = " + std::to_string(k);
        require_verified(cert, label);
        const auto* comp = std::get_if<CompositionRep>(&cert.ambient.structure());
        if (cert.target.id() != s3[static_cast<std::size_t>(k - 1)] || !comp ||
            !std::holds_alternative<MonomialRep>(comp->b->structure()))
            throw HypothesisError(label + ": expected " + s3[static_cast<std::size_t>(k - 1)] +
                                  " from Q_k ∘ monomial, got " + cert.target.id() + " from " + cert.ambient.id());
        quotient[static_cast<std::size_t>(k - 1)] = comp->a->id();
    }

    std::vector<EmergenceWitness> products;
    for (int j = 0; j < l; ++j) {
        const auto& p = h.pairs[static_cast<std::size_t>(j)];
        LemmaWitness c = emerge_composition(p.from_s2, p.from_s3, p.s2_from_s3, opts);
        require_verified(c.witness, "recurrence: composition step j = " + std::to_string(j + 1));
        products.push_back(std::move(c.witness));
    }

    EmergenceWitness acc = products.front();
    for (int m = 1; m < l; ++m) {
        const std::string sm = acc.ambient.id();
        const auto mi = static_cast<std::size_t>(m - 1);
        const std::string tag = " for m = " + std::to_string(m);
        require_relates(h.accumulated_from_quotient[mi], sm, quotient[static_cast<std::size_t>(m)],
                        hyp(4, "S^m emerges from Q_{m+1}") + tag);
        require_relates(h.s2_from_quotient[mi], s2[static_cast<std::size_t>(m)], quotient[static_cast<std::size_t>(m)],
                        hyp(4, "S2_{m+1} emerges from Q_{m+1}") + tag);
        require_relates(h.accumulated_from_s2[mi], sm, s2[static_cast<std::size_t>(m)],
                        hyp(5, "S^m_{δJ,κJ} emerges from S₂,m+1") + tag);
        LemmaWitness s = emerge_sum(acc, products[static_cast<std::size_t>(m)], std::nullopt, opts);
        require_verified(s.witness, "recurrence: sum step m = " + std::to_string(m));
        acc = std::move(s.witness);
    }
    ProvenanceNode node{"recurrence", "l = " + std::to_string(l), {acc.map.provenance()}};
    acc.map = ParamMap(acc.map.source(), acc.map.target(), [inner = acc.map](const Param& e) { return inner(e); },
                       std::move(node));
    return acc;
}

EmergenceWitness emerge_auto(const Theory& target, const Theory& ambient, const VerifyOptions& opts) {
    const auto& s = ambient.structure();
    if (std::holds_alternative<MonomialRep>(s)) return emerge_monomial(target, ambient, opts);
    if (std::holds_alternative<ScalingRep>(s)) {
        if (ambient.degree() != 1)
            throw HypothesisError("no combinator for a degree-" + std::to_string(ambient.degree()) + " scaling ambient");
        return emerge_monomial(target, ambient, opts);
    }
    if (const auto* p = std::get_if<PolynomialRep>(&s)) {
        EmergenceWitness w = emerge_multivariate(target, p->poly, opts);
        return EmergenceWitness{target, ambient, std::move(w.map), std::move(w.report)};
    }
    if (const auto* sum = std::get_if<SumRep>(&s)) {
        EmergenceWitness a = emerge_auto(target, *sum->a, opts);
        if (!a.verified()) return failed_witness(target, ambient, a, "sum (first summand)");
        EmergenceWitness b = emerge_auto(target, *sum->b, opts);
        if (!b.verified()) return failed_witness(target, ambient, b, "sum (second summand)");
        EmergenceWitness w = emerge_sum(a, b, std::nullopt, opts).witness;
        return EmergenceWitness{target, ambient, std::move(w.map), std::move(w.report)};
    }
    if (const auto* comp = std::get_if<CompositionRep>(&s)) {
        EmergenceWitness a = emerge_auto(target, *comp->a, opts);
        if (!a.verified()) return failed_witness(target, ambient, a, "composition (left factor)");
        EmergenceWitness b = emerge_auto(target, *comp->b, opts);
        if (!b.verified()) return failed_witness(target, ambient, b, "composition (right factor)");
        EmergenceWitness w = emerge_composition(a, b, std::nullopt, opts).witness;
        return EmergenceWitness{target, ambient, std::move(w.map), std::move(w.report)};
    }
    if (const auto* sc = std::get_if<ScaledRep>(&s)) {
        EmergenceWitness inner = emerge_auto(target, *sc->inner, opts);
        if (!inner.verified()) return failed_witness(target, ambient, inner, "scaled");
        EmergenceWitness w = emerge_scaled(inner, sc->c, opts);
        return EmergenceWitness{target, ambient, std::move(w.map), std::move(w.report)};
    }
    const ParamSpace space = ambient.space();
    ParamMap map(target.space(), space, [space](const Param&) { return Param::unit(space); },
                 {"constant", "degree-0 ambient", {}});
    return make_witness(target, ambient, std::move(map), opts);
}

namespace {

// h * sum_{a,b} conj(x_a) M_ab x_b for a field supported on `support`.
Complex sparse_qform(const CMatrix& m, double h, const std::vector<std::pair<Eigen::Index, Complex>>& support) {
    Complex q = 0.0;
    for (const auto& [a, xa] : support)
        for (const auto& [b, xb] : support) q += std::conj(xa) * m(a, b) * xb;
    return h * q;
}

}  // namespace

QFormReport qform_zero_test(const Operator& t, double tol, double scale_, bool declared_coercive) {
    const Grid& grid = t.grid();
    const Eigen::Index n = grid.point_count();
    if (n > max_qform_points)
        throw std::invalid_argument("quadratic-form test is limited to " + std::to_string(max_qform_points) + " points");
    if (!declared_coercive && self_adjointness_defect(t) > default_tolerances.identity)
        throw HypothesisError("quadratic-form test needs a self-adjoint or declared coercive operator");
    const CMatrix m = t.matrix();
    const double h = grid.cell_volume();
    const Complex unit_i(0.0, 1.0);
    QFormReport rep;
    CMatrix rec(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const Complex qa = sparse_qform(m, h, {{a, 1.0}});
        rep.max_abs_q = std::max(rep.max_abs_q, std::abs(qa));
        for (Eigen::Index b = 0; b < n; ++b) {
            if (a == b) {
                rec(a, a) = qa / h;
                continue;
            }
            // B(e_a, e_b) = 1/4 sum_k i^-k q(e_a + i^k e_b)
            Complex phase = 1.0;
            Complex bab = 0.0;
            for (int k = 0; k < 4; ++k) {
                const Complex q = sparse_qform(m, h, {{a, 1.0}, {b, phase}});
                rep.max_abs_q = std::max(rep.max_abs_q, std::abs(q));
                bab += std::conj(phase) * q;
                phase *= unit_i;
            }
            rec(a, b) = 0.25 * bab / h;
        }
    }
    rep.reconstructed_norm = rec.norm();
    rep.reconstruction_error = (rec - m).norm() / std::max(m.norm(), default_tolerances.norm_floor);
    rep.pass = rep.reconstructed_norm <= tol * scale_;
    return rep;
}

}  // namespace emergent
