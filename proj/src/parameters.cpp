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

#include "emergent/parameters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace emergent {

std::string to_string(ParamKind kind) {
    switch (kind) {
        case ParamKind::nonzero_complex: return "nonzero-complex";
        case ParamKind::positive_real: return "positive-real";
        case ParamKind::nonzero_real: return "nonzero-real";
    }
    return "?";
}

ParamKind param_kind_from_string(const std::string& s) {
    if (s == "nonzero-complex") return ParamKind::nonzero_complex;
    if (s == "positive-real") return ParamKind::positive_real;
    if (s == "nonzero-real") return ParamKind::nonzero_real;
    throw std::invalid_argument("unknown parameter kind '" + s + "'");
}

bool ParamSpace::admits(Complex c) const noexcept {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    switch (kind) {
        case ParamKind::nonzero_complex: return c != Complex(0.0);
        case ParamKind::positive_real: return c.imag() == 0.0 && c.real() > 0.0;
        case ParamKind::nonzero_real: return c.imag() == 0.0 && c.real() != 0.0;
    }
    return false;
}

Param::Param(ParamSpace space, std::vector<Complex> components) : space_(space), components_(std::move(components)) {
    if (space_.degree < 0) throw std::invalid_argument("negative parameter degree");
    if (static_cast<int>(components_.size()) != space_.degree)
        throw ConstraintViolation("parameter has " + std::to_string(components_.size()) + " components, space degree is " +
                                  std::to_string(space_.degree));
    for (std::size_t i = 0; i < components_.size(); ++i)
        if (!space_.admits(components_[i]))
            throw ConstraintViolation("component " + std::to_string(i) + " is not admitted by a " +
                                      to_string(space_.kind) + " space");
}

Param Param::unit(const ParamSpace& space) {
    return Param(space, std::vector<Complex>(static_cast<std::size_t>(space.degree), 1.0));
}

Complex Param::reduce() const {
    Complex r = 1.0;
    for (const auto& c : components_) r *= c;
    return r;
}

Param nv_mul(const Param& a, const Param& b) {
    if (!(a.space() == b.space())) throw SpaceMismatch();
    std::vector<Complex> out(a.components().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
    return Param(a.space(), std::move(out));
}

Param nv_combine(Complex a, const Param& x, Complex b, const Param& y) {
    if (!(x.space() == y.space())) throw SpaceMismatch();
    if (a == Complex(0.0) && b == Complex(0.0)) throw std::invalid_argument("nv_combine with both scalars zero");
    std::vector<Complex> out(x.components().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        // skip the zero-weighted operand so 0 * y never perturbs the result
        Complex v = 0.0;
        if (a != Complex(0.0)) v += a * x[i];
        if (b != Complex(0.0)) v += b * y[i];
        if (!x.space().admits(v)) throw VanishingResult(i);
        out[i] = v;
    }
    return Param(x.space(), std::move(out));
}

Param nv_sqrt(const Param& x) {
    std::vector<Complex> out(x.components().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const Complex c = x[i];
        if (x.space().kind == ParamKind::nonzero_complex) {
            out[i] = std::sqrt(c);
        } else {
            if (c.real() < 0.0) throw NoSquareRoot(i);
            out[i] = std::sqrt(c.real());
        }
    }
    return Param(x.space(), std::move(out));
}

Param embed_params(const Param& x, int target_degree) {
    if (target_degree < x.degree())
        throw std::invalid_argument("cannot embed degree " + std::to_string(x.degree()) + " into degree " +
                                    std::to_string(target_degree));
    std::vector<Complex> out(static_cast<std::size_t>(target_degree - x.degree()), 1.0);
    out.insert(out.end(), x.components().begin(), x.components().end());
    return Param({x.space().kind, target_degree}, std::move(out));
}

Param concat(const Param& a, const Param& b) {
    if (a.space().kind != b.space().kind) throw SpaceMismatch();
    std::vector<Complex> out = a.components();
    out.insert(out.end(), b.components().begin(), b.components().end());
    return Param({a.space().kind, a.degree() + b.degree()}, std::move(out));
}

Param slice(const Param& x, int offset, int degree) {
    if (offset < 0 || degree < 0 || offset + degree > x.degree()) throw std::out_of_range("parameter slice out of range");
    std::vector<Complex> out(x.components().begin() + offset, x.components().begin() + offset + degree);
    return Param({x.space().kind, degree}, std::move(out));
}

Param sample_param(const ParamSpace& space, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> log_mag(-2.0, 2.0);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);
    std::bernoulli_distribution sign(0.5);
    std::vector<Complex> out(static_cast<std::size_t>(space.degree));
    for (auto& c : out) {
        const double mag = std::pow(10.0, log_mag(rng));
        switch (space.kind) {
            case ParamKind::nonzero_complex: c = std::polar(mag, phase(rng)); break;
            case ParamKind::positive_real: c = mag; break;
            case ParamKind::nonzero_real: c = sign(rng) ? mag : -mag; break;
        }
    }
    return Param(space, std::move(out));
}

double param_distance(const Param& a, const Param& b) {
    if (a.components().size() != b.components().size()) return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < a.components().size(); ++i) {
        const double scale = std::max({std::abs(a[i]), std::abs(b[i]), 1e-300});
        worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
    }
    return worst;
}

std::string describe(const Param& p) {
    std::ostringstream os;
    os.precision(6);
    os << '(';
    for (std::size_t i = 0; i < p.components().size(); ++i) {
        if (i) os << ", ";
        const Complex c = p[i];
        if (c.imag() == 0.0)
            os << c.real();
        else
            os << c.real() << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << 'i';
    }
    os << ')';
    return os.str();
}

}  // namespace emergent
