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

#include "emergent/calculus.hpp"

#include <cmath>
#include <sstream>

namespace emergent {

namespace {

std::string number(Complex c) {
    std::ostringstream os;
    os.precision(6);
    if (c.imag() == 0.0)
        os << c.real();
    else
        os << '(' << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i)";
    return os.str();
}

// Factored preimage (x, 1, ..., 1); nullopt when x is not admitted.
std::optional<Param> factored(Complex x, const ParamSpace& space) {
    if (space.degree == 0) {
        if (x == Complex(1.0)) return Param::unit(space);
        return std::nullopt;
    }
    if (!space.admits(x)) return std::nullopt;
    std::vector<Complex> comps(static_cast<std::size_t>(space.degree), 1.0);
    comps[0] = x;
    return Param(space, std::move(comps));
}

// k-th root of `w` inside the space kind, if any.
std::optional<Complex> root_in(Complex w, int k, ParamKind kind) {
    if (kind == ParamKind::nonzero_complex) return std::pow(w, 1.0 / k);
    if (w.imag() != 0.0) return std::nullopt;
    const double r = w.real();
    if (r > 0.0) return std::pow(r, 1.0 / k);
    if (r < 0.0 && k % 2 == 1 && kind == ParamKind::nonzero_real) return -std::pow(-r, 1.0 / k);
    return std::nullopt;
}

}  // namespace

CoeffFn CoeffFn::linear(Complex c) {
    if (c == Complex(0.0)) throw std::invalid_argument("linear coefficient function needs c != 0");
    auto eval = [c](const Param& d) { return c * d.reduce(); };
    auto inv = [c](Complex v, const ParamSpace& s) { return factored(v / c, s); };
    return CoeffFn("linear(" + number(c) + ")", eval, inv, 1, c);
}

CoeffFn CoeffFn::power(Complex c, int k) {
    if (c == Complex(0.0)) throw std::invalid_argument("power coefficient function needs c != 0");
    if (k < 1) throw std::invalid_argument("power coefficient function needs k >= 1");
    if (k == 1) return linear(c);
    auto eval = [c, k](const Param& d) { return c * std::pow(d.reduce(), k); };
    auto inv = [c, k](Complex v, const ParamSpace& s) -> std::optional<Param> {
        const auto r = root_in(v / c, k, s.kind);
        if (!r) return std::nullopt;
        return factored(*r, s);
    };
    return CoeffFn(number(c) + "*d^" + std::to_string(k), eval, inv, k, c);
}

CoeffFn CoeffFn::constant(Complex c) {
    if (c == Complex(0.0)) throw std::invalid_argument("constant coefficient function needs c != 0");
    return CoeffFn("const(" + number(c) + ")", [c](const Param&) { return c; }, {}, 0, c);
}

CoeffFn CoeffFn::callable(std::string tag, Eval f, Inverse inverse) {
    return CoeffFn(std::move(tag), std::move(f), std::move(inverse), std::nullopt, 0.0);
}

Complex CoeffFn::operator()(const Param& d) const {
    const Complex v = f_(d);
    if (v == Complex(0.0) || !std::isfinite(std::abs(v))) throw VanishingCoefficient(tag_ + " at " + describe(d));
    return v;
}

Param CoeffFn::invert(Complex value, const ParamSpace& space) const {
    if (!inverse_) throw HypothesisError("coefficient function " + tag_ + " has no declared inverse");
    auto p = inverse_(value, space);
    if (!p) throw ConstraintViolation("value " + number(value) + " has no preimage under " + tag_ + " in a " +
                                      to_string(space.kind) + " space");
    return *p;
}

Operator act(const Param& eps, const Operator& psi) { return scale(eps.reduce(), psi); }

double check_action_compatibility(const Param& eps, const Operator& psi, const Operator& phi) {
    return op_distance(compose(act(eps, psi), phi), act(eps, compose(psi, phi)));
}

Param invert_r_identity(const Operator& x, const ParamSpace& space, const Tolerances& tol) {
    const auto fit = scalar_identity_extract(x, tol.norm_floor);
    if (fit.residual > tol.identity) throw NotInImage(fit.residual);
    Complex lambda = fit.lambda;
    if (space.kind != ParamKind::nonzero_complex && std::abs(lambda.imag()) <= tol.identity * std::abs(lambda))
        lambda = lambda.real();
    if (space.degree == 0) {
        if (std::abs(lambda - 1.0) > tol.identity) throw NotInImage(std::abs(lambda - 1.0));
        return Param::unit(space);
    }
    if (lambda == Complex(0.0)) throw ConstraintViolation("scalar multiple is zero, which no parameter represents");
    auto p = factored(lambda, space);
    if (!p) throw ConstraintViolation("scalar multiple " + number(lambda) + " is not admitted by a " +
                                      to_string(space.kind) + " space");
    return *p;
}

Operator random_symbol_operator(const Grid& grid, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CVector s(grid.point_count());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double re = normal(rng);
        s[i] = Complex(re, normal(rng));
    }
    return Operator::from_symbol(grid, std::move(s));
}

namespace {

// Worst residual of psi_f o (f(eps) psi) = eps . psi over the samples; collects failing eps.
double certify(const CalculusEntry& e, const Grid& grid, int samples, std::uint64_t seed, double tau,
               std::vector<Param>& failures) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const Param eps = sample_param(e.space, rng);
        const Operator psi = random_symbol_operator(grid, rng);
        const Operator lhs = compose(e.psi_f, scale(e.f(eps), psi));
        const double r = op_distance(lhs, act(eps, psi));
        worst = std::max(worst, r);
        if (r > tau) failures.push_back(eps);
    }
    return worst;
}

}  // namespace

CalculusEntry calculus_operator(const CoeffFn& f, const ParamSpace& space, const Grid& grid, int samples,
                                std::uint64_t seed, double tau) {
    const Param ref = Param::unit(space);
    const Complex ratio = ref.reduce() / f(ref);
    CalculusEntry e{f, space, Operator::scalar(grid, ratio), false, {}, 0.0};
    std::vector<Param> failures;
    e.max_residual = certify(e, grid, samples, seed, tau, failures);
    e.certified = failures.empty();
    if (!e.certified) {
        e.witnesses.push_back(ref);
        e.witnesses.insert(e.witnesses.end(), failures.begin(), failures.end());
    }
    return e;
}

bool revalidate(const CalculusEntry& entry, int samples, std::uint64_t seed, double tau) {
    std::vector<Param> failures;
    certify(entry, entry.psi_f.grid(), samples, seed, tau, failures);
    return failures.empty();
}

}  // namespace emergent
