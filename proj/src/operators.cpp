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

#include "emergent/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <unsupported/Eigen/FFT>

namespace emergent {

namespace {

void require_same_grid(const Operator& a, const Operator& b) {
    if (!(a.grid() == b.grid())) throw GridMismatch();
}

void require_dense_size(const Grid& grid) {
    if (grid.point_count() > max_dense_points)
        throw std::invalid_argument("dense backend is limited to " + std::to_string(max_dense_points) +
                                    " grid points");
}

// Transform along one axis of a row-major array, in place.
void transform_axis(const Grid& grid, int axis, std::vector<Complex>& data, bool inverse) {
    const auto& sizes = grid.sizes();
    const int n = sizes[axis];
    Eigen::Index stride = 1;
    for (int j = grid.dim() - 1; j > axis; --j) stride *= sizes[j];
    const Eigen::Index block = stride * n;
    const Eigen::Index total = grid.point_count();

    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<Complex> line(n), out(n);
    for (Eigen::Index outer = 0; outer < total; outer += block) {
        for (Eigen::Index inner = 0; inner < stride; ++inner) {
            const Eigen::Index base = outer + inner;
            for (int k = 0; k < n; ++k) line[k] = data[base + k * stride];
            if (inverse)
                fft.inv(out, line);
            else
                fft.fwd(out, line);
            for (int k = 0; k < n; ++k) data[base + k * stride] = out[k];
        }
    }
}

CVector transform(const Grid& grid, const CVector& values, bool inverse) {
    if (values.size() != grid.point_count()) throw GridMismatch("vector length does not match grid");
    std::vector<Complex> data(values.data(), values.data() + values.size());
    for (int axis = 0; axis < grid.dim(); ++axis) transform_axis(grid, axis, data, inverse);
    CVector out = Eigen::Map<CVector>(data.data(), static_cast<Eigen::Index>(data.size()));
    if (inverse) out /= static_cast<double>(grid.point_count());
    return out;
}

// Circulant materialization: M(x, y) = c(x - y mod N) with c the inverse DFT of the symbol.
CMatrix symbol_to_matrix(const Grid& grid, const CVector& symbol) {
    require_dense_size(grid);
    const CVector kernel = transform(grid, symbol, true);
    const Eigen::Index n = grid.point_count();
    const auto& sizes = grid.sizes();
    std::vector<std::vector<int>> coords(n);
    for (Eigen::Index i = 0; i < n; ++i) coords[i] = grid.unflatten(i);
    CMatrix m(n, n);
    for (Eigen::Index x = 0; x < n; ++x) {
        for (Eigen::Index y = 0; y < n; ++y) {
            Eigen::Index flat = 0;
            for (int j = 0; j < grid.dim(); ++j) {
                const int d = ((coords[x][j] - coords[y][j]) % sizes[j] + sizes[j]) % sizes[j];
                flat = flat * sizes[j] + d;
            }
            m(x, y) = kernel[flat];
        }
    }
    return m;
}

Complex int_power(Complex base, int k) {
    Complex r = 1.0;
    for (int i = 0; i < k; ++i) r *= base;
    return r;
}

}  // namespace

namespace dft {

CVector forward(const Grid& grid, const CVector& values) { return transform(grid, values, false); }
CVector inverse(const Grid& grid, const CVector& values) { return transform(grid, values, true); }

}  // namespace dft

Operator::Operator(Grid grid, Symbol s) : grid_(std::move(grid)), backend_(std::move(s)) {
    if (std::get<Symbol>(backend_).values.size() != grid_.point_count())
        throw GridMismatch("symbol length does not match grid point count");
}

Operator::Operator(Grid grid, Dense d) : grid_(std::move(grid)), backend_(std::move(d)) {
    require_dense_size(grid_);
    const auto& m = std::get<Dense>(backend_).matrix;
    if (m.rows() != grid_.point_count() || m.cols() != grid_.point_count())
        throw GridMismatch("dense matrix is not n x n for the grid");
}

Operator Operator::identity(const Grid& grid) { return scalar(grid, 1.0); }

Operator Operator::zero(const Grid& grid) { return scalar(grid, 0.0); }

Operator Operator::scalar(const Grid& grid, Complex c) {
    return Operator(grid, Symbol{CVector::Constant(grid.point_count(), c)});
}

CMatrix Operator::matrix() const {
    if (is_dense()) return std::get<Dense>(backend_).matrix;
    return symbol_to_matrix(grid_, symbol());
}

double Operator::frobenius_norm() const {
    if (is_symbol()) return symbol().norm();
    return std::get<Dense>(backend_).matrix.norm();
}

StencilSpec StencilSpec::identity(int dim) { return StencilSpec{{StencilTerm{std::vector<int>(dim, 0), 1.0}}}; }

StencilSpec StencilSpec::laplacian(int dim) {
    StencilSpec s;
    for (int j = 0; j < dim; ++j) {
        std::vector<int> alpha(dim, 0);
        alpha[j] = 2;
        s.terms.push_back({alpha, 1.0});
    }
    return s;
}

StencilSpec StencilSpec::shifted_laplacian(int dim) {
    StencilSpec s = identity(dim);
    for (auto t : laplacian(dim).terms) {
        t.coefficient = -t.coefficient;
        s.terms.push_back(t);
    }
    return s;
}

StencilSpec StencilSpec::derivative(int dim, int axis) {
    if (axis < 0 || axis >= dim) throw std::invalid_argument("derivative axis out of range");
    std::vector<int> alpha(dim, 0);
    alpha[axis] = 1;
    return StencilSpec{{StencilTerm{alpha, 1.0}}};
}

Operator diff_operator(const Grid& grid, const StencilSpec& spec, DerivativeScheme scheme) {
    for (const auto& t : spec.terms) {
        if (static_cast<int>(t.alpha.size()) != grid.dim())
            throw std::invalid_argument("multi-index length does not match grid dimension");
        for (int a : t.alpha)
            if (a < 0) throw std::invalid_argument("negative multi-index entry");
    }
    const Eigen::Index n = grid.point_count();
    const auto& sizes = grid.sizes();
    const auto& h = grid.spacing();
    constexpr double pi = std::numbers::pi;
    CVector sym = CVector::Zero(n);
    for (Eigen::Index flat = 0; flat < n; ++flat) {
        const auto k = grid.unflatten(flat);
        Complex value = 0.0;
        for (const auto& t : spec.terms) {
            Complex term = t.coefficient;
            for (int j = 0; j < grid.dim(); ++j) {
                const int a = t.alpha[j];
                if (a == 0) continue;
                if (scheme == DerivativeScheme::central_difference) {
                    const double s = std::sin(pi * k[j] / sizes[j]);
                    const Complex second = -4.0 * s * s / (h[j] * h[j]);
                    const Complex first = Complex(0.0, std::sin(2.0 * pi * k[j] / sizes[j]) / h[j]);
                    term *= int_power(second, a / 2);
                    if (a % 2 == 1) term *= first;
                } else {
                    const int wrapped = 2 * k[j] < sizes[j] ? k[j] : k[j] - sizes[j];
                    const Complex mu(0.0, 2.0 * pi * wrapped / (sizes[j] * h[j]));
                    term *= int_power(mu, a);
                }
            }
            value += term;
        }
        sym[flat] = value;
    }
    return Operator::from_symbol(grid, std::move(sym));
}

Operator combine(Complex a, const Operator& psi, Complex b, const Operator& phi) {
    require_same_grid(psi, phi);
    if (psi.is_symbol() && phi.is_symbol()) return Operator::from_symbol(psi.grid(), a * psi.symbol() + b * phi.symbol());
    return Operator::from_matrix(psi.grid(), a * psi.matrix() + b * phi.matrix());
}

Operator compose(const Operator& psi, const Operator& phi) {
    require_same_grid(psi, phi);
    if (psi.is_symbol() && phi.is_symbol())
        return Operator::from_symbol(psi.grid(), psi.symbol().cwiseProduct(phi.symbol()));
    return Operator::from_matrix(psi.grid(), psi.matrix() * phi.matrix());
}

Operator scale(Complex c, const Operator& psi) {
    if (psi.is_symbol()) return Operator::from_symbol(psi.grid(), c * psi.symbol());
    return Operator::from_matrix(psi.grid(), c * psi.matrix());
}

Operator adjoint(const Operator& psi) {
    if (psi.is_symbol()) return Operator::from_symbol(psi.grid(), psi.symbol().conjugate());
    return Operator::from_matrix(psi.grid(), psi.matrix().adjoint());
}

Operator power(const Operator& psi, int k) {
    if (k < 0) throw std::invalid_argument("negative operator power");
    Operator r = Operator::identity(psi.grid());
    for (int i = 0; i < k; ++i) r = compose(r, psi);
    return r;
}

Field apply(const Operator& psi, const Field& phi) {
    if (!(psi.grid() == phi.grid())) throw GridMismatch();
    CVector out;
    if (psi.is_symbol())
        out = dft::inverse(phi.grid(), psi.symbol().cwiseProduct(dft::forward(phi.grid(), phi.values())));
    else
        out = psi.matrix() * phi.values();
    return Field(phi.grid(), std::move(out));
}

Complex action_value(const Field& phi, const Operator& psi) {
    const Field image = apply(psi, phi);
    return phi.grid().cell_volume() * phi.values().dot(image.values());
}

RightInverse right_inverse(const Operator& psi, double tau_inv) {
    if (psi.is_symbol()) {
        const double smallest = psi.symbol().cwiseAbs().minCoeff();
        if (!(smallest > tau_inv)) throw NotRightInvertible(smallest);
        Operator inv = Operator::from_symbol(psi.grid(), psi.symbol().cwiseInverse());
        return {psi, std::move(inv)};
    }
    const CMatrix m = psi.matrix();
    Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smallest = sv.size() ? sv.minCoeff() : 0.0;
    if (!(smallest > tau_inv)) throw NotRightInvertible(smallest);
    const CMatrix pinv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();
    Operator inv = Operator::from_matrix(psi.grid(), pinv);
    if (op_distance(compose(psi, inv), Operator::identity(psi.grid())) > tau_inv) throw NotRightInvertible(smallest);
    return {psi, std::move(inv)};
}

ScalarIdentityFit scalar_identity_extract(const Operator& x, double floor) {
    if (x.is_symbol()) {
        const CVector& s = x.symbol();
        const Complex lambda = s.mean();
        const double r = (s.array() - lambda).matrix().norm() / std::max(s.norm(), floor);
        return {lambda, r};
    }
    const CMatrix m = x.matrix();
    const Complex lambda = m.trace() / static_cast<double>(m.rows());
    CMatrix d = m;
    d.diagonal().array() -= lambda;
    return {lambda, d.norm() / std::max(m.norm(), floor)};
}

double self_adjointness_defect(const Operator& psi, double floor) {
    if (psi.is_symbol()) {
        const CVector& s = psi.symbol();
        return (s - s.conjugate()).norm() / std::max(s.norm(), floor);
    }
    const CMatrix m = psi.matrix();
    return (m - m.adjoint()).norm() / std::max(m.norm(), floor);
}

double op_distance(const Operator& psi, const Operator& phi, double floor) {
    require_same_grid(psi, phi);
    if (psi.is_symbol() && phi.is_symbol()) {
        const double scale = std::max({psi.symbol().norm(), phi.symbol().norm(), floor});
        return (psi.symbol() - phi.symbol()).norm() / scale;
    }
    const CMatrix a = psi.matrix(), b = phi.matrix();
    return (a - b).norm() / std::max({a.norm(), b.norm(), floor});
}

CVector vectorize(const Operator& psi, bool as_dense) {
    if (psi.is_symbol() && !as_dense) return psi.symbol();
    const CMatrix m = psi.matrix();
    return Eigen::Map<const CVector>(m.data(), m.size());
}

}  // namespace emergent
