#pragma once

// Dense complex linear algebra for systems of at most three qubits.
//
// Qubit ordering: the leftmost tensor factor is qubit 0 and maps to the most
// significant bit of the computational-basis index.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "nmecut/error.hpp"

namespace nmecut {

using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPositivityTol = 1e-10;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-10;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const Complex> values);
    // |i><j| in an n-dimensional space.
    static ComplexMatrix basis_op(std::size_t n, std::size_t i, std::size_t j);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    std::span<const Complex> entries() const noexcept { return entries_; }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    ComplexMatrix adjoint() const;
    Complex trace() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scalar);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Largest entrywise modulus of a - b. Shapes must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs(const ComplexMatrix& m);

// Eigenvalues of a Hermitian matrix in ascending order.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

// max |M - M^dagger|
double hermiticity_residual(const ComplexMatrix& m);
// max |U^dagger U - I|
double unitarity_residual(const ComplexMatrix& u);
void require_unitary(const ComplexMatrix& u, double tol = kUnitaryTol);

class DensityOperator {
public:
    // Throws Error{NotHermitian|NotUnitTrace|NotPositive|DimensionMismatch}.
    static DensityOperator validate(ComplexMatrix m);

    std::size_t dim() const noexcept { return matrix_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }

    static DensityOperator maximally_mixed(std::size_t dim);

private:
    explicit DensityOperator(ComplexMatrix m) : matrix_(std::move(m)) {}
    ComplexMatrix matrix_;
};

inline DensityOperator validate_density(ComplexMatrix m) { return DensityOperator::validate(std::move(m)); }

class PureState {
public:
    // Throws Error{NotNormalized} when | ||v|| - 1 | > 1e-12.
    static PureState from_amplitudes(std::vector<Complex> amplitudes);
    // Normalizes first; throws on the zero vector.
    static PureState normalized(std::vector<Complex> amplitudes);
    static PureState basis(std::size_t dim, std::size_t index);

    std::size_t dim() const noexcept { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    Complex operator[](std::size_t i) const { return amplitudes_[i]; }

    PureState apply(const ComplexMatrix& unitary) const;
    ComplexMatrix projector() const;
    DensityOperator density() const;
    Complex inner(const PureState& other) const;  // <this|other>

private:
    explicit PureState(std::vector<Complex> a) : amplitudes_(std::move(a)) {}
    std::vector<Complex> amplitudes_;
};

PureState kron(const PureState& a, const PureState& b);

// Partial trace of an operator over the subsystems listed in `traced`.
// `dims` gives the subsystem dimensions in tensor order.
ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> traced);
DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> dims,
                              std::span<const std::size_t> traced);

// Fixed one-qubit gates. S = diag(1, i).
namespace gates {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
ComplexMatrix h();
ComplexMatrix s();
// Control on the more significant qubit.
ComplexMatrix cnot();
}  // namespace gates

enum class Pauli { I = 0, X = 1, Y = 2, Z = 3 };
inline constexpr Pauli kPaulis[] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
ComplexMatrix pauli_matrix(Pauli p);
char pauli_label(Pauli p);

}  // namespace nmecut
