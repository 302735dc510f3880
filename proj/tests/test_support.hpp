#pragma once

// Test-only generators. These use std::mt19937 and std::normal_distribution
// directly so they stay independent of the library's own sampling code.

#include <cmath>
#include <random>

#include "nmecut/linalg.hpp"

namespace nmecut::testing {

inline ComplexMatrix random_matrix(std::mt19937& gen, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> n(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = Complex{n(gen), n(gen)};
    return m;
}

// Ginibre-distributed full-rank density operator.
inline DensityOperator random_density(std::mt19937& gen, std::size_t dim) {
    const ComplexMatrix g = random_matrix(gen, dim, dim);
    ComplexMatrix rho = g * g.adjoint();
    rho *= Complex{1.0 / rho.trace().real(), 0.0};
    return DensityOperator::validate(rho);
}

// One-qubit unitary from Euler angles: Rz(a) Ry(b) Rz(c) times a global phase.
inline ComplexMatrix random_unitary_2(std::mt19937& gen) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    const double a = angle(gen), b = angle(gen), c = angle(gen), phase = angle(gen);
    const Complex ea = std::polar(1.0, a / 2), ec = std::polar(1.0, c / 2), g = std::polar(1.0, phase);
    const double cb = std::cos(b / 2), sb = std::sin(b / 2);
    return ComplexMatrix{{g * std::conj(ea) * cb * std::conj(ec), -g * std::conj(ea) * sb * ec},
                         {g * ea * sb * std::conj(ec), g * ea * cb * ec}};
}

inline PureState random_pure(std::mt19937& gen, std::size_t dim) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<Complex> a(dim);
    for (auto& x : a) x = Complex{n(gen), n(gen)};
    return PureState::normalized(std::move(a));
}

}  // namespace nmecut::testing
