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

TEST_CASE("grid construction rejects malformed shapes") {
    CHECK_THROWS_AS(make_grid(0, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, {8, 8}, {0.1, 0.1}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, {1}, {0.1}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, {8}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, {8}, {-1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(1, {8}, {NAN}), std::invalid_argument);

    const Grid g = make_grid(2, {4, 5}, {0.5, 0.2});
    CHECK(g.point_count() == 20);
    CHECK(g.cell_volume() == doctest::Approx(0.1));
    CHECK(g == make_grid(2, {4, 5}, {0.5, 0.2}));
    CHECK_FALSE(g == make_grid(2, {5, 4}, {0.5, 0.2}));
}

TEST_CASE("unflatten is row-major") {
    const Grid g = make_grid(3, {2, 3, 4}, {1.0, 1.0, 1.0});
    Eigen::Index flat = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 4; ++c) CHECK(g.unflatten(flat++) == std::vector<int>{a, b, c});
}

TEST_CASE("fields validate their length and kind") {
    const Grid g = make_grid(1, {8}, {0.1});
    CHECK_THROWS_AS(Field(g, CVector::Zero(7)), GridMismatch);
    CVector v = CVector::Zero(8);
    v[3] = Complex(0.0, 1.0);
    CHECK_THROWS_AS(Field(g, v, ScalarKind::real), std::invalid_argument);
    const Field r = sample_field(g, 4, ScalarKind::real);
    for (Eigen::Index i = 0; i < 8; ++i) CHECK(r.values()[i].imag() == 0.0);
    CHECK_THROWS_AS(inner_product(r, sample_field(g, 4)), std::invalid_argument);
    CHECK_THROWS_AS(inner_product(sample_field(g, 1), sample_field(make_grid(1, {8}, {0.2}), 1)), GridMismatch);
}

TEST_CASE("sample_field is a pure function of the seed") {
    const Grid g = make_grid(2, {4, 4}, {0.1, 0.1});
    CHECK(sample_field(g, 17).values() == sample_field(g, 17).values());
    CHECK(sample_field(g, 17).values() != sample_field(g, 18).values());
}

TEST_CASE("fourier modes are orthogonal with norm N h") {
    const Grid g = make_grid(1, {12}, {0.3});
    for (int k = 0; k < 12; ++k)
        for (int j = 0; j < 12; ++j) {
            const Complex ip = inner_product(Field::fourier_mode(g, k), Field::fourier_mode(g, j));
            CHECK(std::abs(ip - Complex(k == j ? 12 * 0.3 : 0.0)) < 1e-12);
        }
}

TEST_CASE("pairing: hermitian, sesquilinear, consistent with norm (property)") {
    gen::Rng rng(101);
    for (int c = 0; c < 200; ++c) {
        CAPTURE(c);
        const Grid g = gen::grid(rng);
        const Field a = gen::field(rng, g), b = gen::field(rng, g), d = gen::field(rng, g);
        const Complex s = gen::complex_normal(rng);

        // independent oracle: explicit quadrature loop
        Complex direct = 0.0;
        for (Eigen::Index i = 0; i < g.point_count(); ++i) direct += std::conj(a.values()[i]) * b.values()[i];
        direct *= g.cell_volume();
        const Complex ab = inner_product(a, b);
        CHECK(std::abs(ab - direct) <= 1e-12 * std::abs(direct) + 1e-14);
        CHECK(std::abs(inner_product(b, a) - std::conj(ab)) <= 1e-12 * std::abs(ab));

        const Field lin(g, s * b.values() + d.values());
        const Complex lhs = inner_product(a, lin);
        const Complex rhs = s * ab + inner_product(a, d);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0));
        const Field scaled_a(g, s * a.values());
        CHECK(std::abs(inner_product(scaled_a, b) - std::conj(s) * ab) <= 1e-12 * std::abs(s * ab) + 1e-14);

        const double n = norm(a);
        CHECK(std::abs(n * n - inner_product(a, a).real()) <= 1e-12 * n * n);
        CHECK(std::abs(inner_product(a, a).imag()) <= 1e-12 * n * n);
    }
}
