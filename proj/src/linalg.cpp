#include "nmecut/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nmecut {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFinite: return "NonFinite";
        case ErrorKind::NotHermitian: return "NotHermitian";
        case ErrorKind::NotUnitTrace: return "NotUnitTrace";
        case ErrorKind::NotPositive: return "NotPositive";
        case ErrorKind::NotNormalized: return "NotNormalized";
        case ErrorKind::NotUnitary: return "NotUnitary";
        case ErrorKind::NotTracePreserving: return "NotTracePreserving";
        case ErrorKind::InvalidParameter: return "InvalidParameter";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::InvalidObservable: return "InvalidObservable";
        case ErrorKind::InvalidProbability: return "InvalidProbability";
        case ErrorKind::ZeroShots: return "ZeroShots";
        case ErrorKind::Io: return "Io";
        case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

namespace {

bool all_finite(std::span<const Complex> v) {
    return std::all_of(v.begin(), v.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

std::string fmt_residual(double r) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << r;
    return os.str();
}

Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
    Eigen::MatrixXcd e(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(r, c);
    return e;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_)
        throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(rows_ * cols_) + " entries, got " +
                                                      std::to_string(entries_.size()));
    if (!all_finite(entries_)) throw Error(ErrorKind::NonFinite, "matrix contains NaN or Inf");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged initializer list");
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
    if (!all_finite(entries_)) throw Error(ErrorKind::NonFinite, "matrix contains NaN or Inf");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::basis_op(std::size_t n, std::size_t i, std::size_t j) {
    if (i >= n || j >= n) throw Error(ErrorKind::OutOfRange, "basis_op index out of range");
    ComplexMatrix m(n, n);
    m(i, j) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

Complex ComplexMatrix::trace() const {
    if (!is_square()) throw Error(ErrorKind::DimensionMismatch, "trace of non-square matrix");
    Complex t{0.0, 0.0};
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw Error(ErrorKind::DimensionMismatch, "matrix sum shape mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw Error(ErrorKind::DimensionMismatch, "matrix difference shape mismatch");
    for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
    for (auto& e : entries_) e *= scalar;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw Error(ErrorKind::DimensionMismatch, "product of " + std::to_string(a.rows()) + "x" +
                                                      std::to_string(a.cols()) + " and " + std::to_string(b.rows()) +
                                                      "x" + std::to_string(b.cols()));
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex lhs = a(r, k);
            if (lhs == Complex{0.0, 0.0}) continue;
            for (std::size_t c = 0; c < b.cols(); ++c) out(r, c) += lhs * b(k, c);
        }
    return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar)
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex s = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br)
                for (std::size_t bc = 0; bc < b.cols(); ++bc)
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
        }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw Error(ErrorKind::DimensionMismatch, "max_abs_diff shape mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.entries().size(); ++i)
        worst = std::max(worst, std::abs(a.entries()[i] - b.entries()[i]));
    return worst;
}

double max_abs(const ComplexMatrix& m) {
    double worst = 0.0;
    for (const auto& e : m.entries()) worst = std::max(worst, std::abs(e));
    return worst;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    if (!m.is_square()) throw Error(ErrorKind::DimensionMismatch, "eigenvalues of non-square matrix");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(m), Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return {ev.data(), ev.data() + ev.size()};
}

double hermiticity_residual(const ComplexMatrix& m) {
    if (!m.is_square()) throw Error(ErrorKind::DimensionMismatch, "hermiticity of non-square matrix");
    return max_abs_diff(m, m.adjoint());
}

double unitarity_residual(const ComplexMatrix& u) {
    if (!u.is_square()) throw Error(ErrorKind::DimensionMismatch, "unitarity of non-square matrix");
    return max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.rows()));
}

void require_unitary(const ComplexMatrix& u, double tol) {
    const double residual = unitarity_residual(u);
    if (residual > tol) throw Error(ErrorKind::NotUnitary, "max|U^dagger U - I| = " + fmt_residual(residual));
}

DensityOperator DensityOperator::validate(ComplexMatrix m) {
    if (!m.is_square() || (m.rows() != 2 && m.rows() != 4 && m.rows() != 8))
        throw Error(ErrorKind::DimensionMismatch, "density operator must be 2x2, 4x4 or 8x8, got " +
                                                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    const double herm = hermiticity_residual(m);
    if (herm > kHermitianTol) throw Error(ErrorKind::NotHermitian, "max|M - M^dagger| = " + fmt_residual(herm));
    const double tr = std::abs(m.trace() - Complex{1.0, 0.0});
    if (tr > kTraceTol) throw Error(ErrorKind::NotUnitTrace, "|tr(M) - 1| = " + fmt_residual(tr));
    const double min_eig = hermitian_eigenvalues(m).front();
    if (min_eig < -kPositivityTol)
        throw Error(ErrorKind::NotPositive, "minimum eigenvalue " + fmt_residual(min_eig));
    return DensityOperator(std::move(m));
}

DensityOperator DensityOperator::maximally_mixed(std::size_t dim) {
    return validate(ComplexMatrix::identity(dim) * Complex{1.0 / static_cast<double>(dim), 0.0});
}

PureState PureState::from_amplitudes(std::vector<Complex> amplitudes) {
    if (!is_power_of_two(amplitudes.size()))
        throw Error(ErrorKind::DimensionMismatch, "state dimension must be a power of two");
    if (!all_finite(amplitudes)) throw Error(ErrorKind::NonFinite, "amplitudes contain NaN or Inf");
    double norm2 = 0.0;
    for (const auto& a : amplitudes) norm2 += std::norm(a);
    const double deviation = std::abs(std::sqrt(norm2) - 1.0);
    if (deviation > kNormTol) throw Error(ErrorKind::NotNormalized, "| ||v|| - 1 | = " + fmt_residual(deviation));
    return PureState(std::move(amplitudes));
}

PureState PureState::normalized(std::vector<Complex> amplitudes) {
    double norm2 = 0.0;
    for (const auto& a : amplitudes) norm2 += std::norm(a);
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw Error(ErrorKind::NotNormalized, "cannot normalize zero vector");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : amplitudes) a *= inv;
    return from_amplitudes(std::move(amplitudes));
}

PureState PureState::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) throw Error(ErrorKind::OutOfRange, "basis index out of range");
    std::vector<Complex> a(dim, Complex{0.0, 0.0});
    a[index] = 1.0;
    return from_amplitudes(std::move(a));
}

PureState PureState::apply(const ComplexMatrix& unitary) const {
    if (unitary.cols() != dim() || unitary.rows() != dim())
        throw Error(ErrorKind::DimensionMismatch, "unitary does not match state dimension");
    std::vector<Complex> out(dim(), Complex{0.0, 0.0});
    for (std::size_t r = 0; r < dim(); ++r)
        for (std::size_t c = 0; c < dim(); ++c) out[r] += unitary(r, c) * amplitudes_[c];
    return normalized(std::move(out));
}

ComplexMatrix PureState::projector() const {
    ComplexMatrix m(dim(), dim());
    for (std::size_t r = 0; r < dim(); ++r)
        for (std::size_t c = 0; c < dim(); ++c) m(r, c) = amplitudes_[r] * std::conj(amplitudes_[c]);
    return m;
}

DensityOperator PureState::density() const { return DensityOperator::validate(projector()); }

Complex PureState::inner(const PureState& other) const {
    if (other.dim() != dim()) throw Error(ErrorKind::DimensionMismatch, "inner product dimension mismatch");
    Complex s{0.0, 0.0};
    for (std::size_t i = 0; i < dim(); ++i) s += std::conj(amplitudes_[i]) * other.amplitudes_[i];
    return s;
}

PureState kron(const PureState& a, const PureState& b) {
    std::vector<Complex> out;
    out.reserve(a.dim() * b.dim());
    for (const auto& x : a.amplitudes())
        for (const auto& y : b.amplitudes()) out.push_back(x * y);
    return PureState::normalized(std::move(out));
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> traced) {
    const std::size_t total = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (!m.is_square() || total != m.rows())
        throw Error(ErrorKind::DimensionMismatch, "subsystem dimensions multiply to " + std::to_string(total) +
                                                      " but operator is " + std::to_string(m.rows()) + "x" +
                                                      std::to_string(m.cols()));
    std::vector<bool> is_traced(dims.size(), false);
    for (std::size_t t : traced) {
        if (t >= dims.size()) throw Error(ErrorKind::OutOfRange, "traced subsystem index out of range");
        is_traced[t] = true;
    }
    const auto n_traced = static_cast<std::size_t>(std::count(is_traced.begin(), is_traced.end(), true));
    if (n_traced == 0 || n_traced == dims.size())
        throw Error(ErrorKind::InvalidParameter, "traced set must be a nonempty proper subset");

    std::size_t keep_dim = 1;
    std::size_t trace_dim = 1;
    for (std::size_t s = 0; s < dims.size(); ++s) (is_traced[s] ? trace_dim : keep_dim) *= dims[s];

    // Compose a full index from a kept multi-index and a traced multi-index.
    auto compose = [&](std::size_t keep_idx, std::size_t trace_idx) {
        std::size_t full = 0;
        std::size_t keep_stride = keep_dim;
        std::size_t trace_stride = trace_dim;
        for (std::size_t s = 0; s < dims.size(); ++s) {
            std::size_t digit;
            if (is_traced[s]) {
                trace_stride /= dims[s];
                digit = (trace_idx / trace_stride) % dims[s];
            } else {
                keep_stride /= dims[s];
                digit = (keep_idx / keep_stride) % dims[s];
            }
            full = full * dims[s] + digit;
        }
        return full;
    };

    ComplexMatrix out(keep_dim, keep_dim);
    for (std::size_t r = 0; r < keep_dim; ++r)
        for (std::size_t c = 0; c < keep_dim; ++c) {
            Complex s{0.0, 0.0};
            for (std::size_t t = 0; t < trace_dim; ++t) s += m(compose(r, t), compose(c, t));
            out(r, c) = s;
        }
    return out;
}

DensityOperator partial_trace(const DensityOperator& rho, std::span<const std::size_t> dims,
                              std::span<const std::size_t> traced) {
    return DensityOperator::validate(partial_trace(rho.matrix(), dims, traced));
}

namespace gates {

ComplexMatrix identity() { return ComplexMatrix::identity(2); }
ComplexMatrix x() { return {{0.0, 1.0}, {1.0, 0.0}}; }
ComplexMatrix y() { return {{0.0, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, 0.0}}; }
ComplexMatrix z() { return {{1.0, 0.0}, {0.0, -1.0}}; }
ComplexMatrix h() {
    const double r = 1.0 / std::sqrt(2.0);
    return {{r, r}, {r, -r}};
}
ComplexMatrix s() { return {{1.0, 0.0}, {0.0, Complex{0.0, 1.0}}}; }
ComplexMatrix cnot() {
    return {{1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 1.0}, {0.0, 0.0, 1.0, 0.0}};
}

}  // namespace gates

ComplexMatrix pauli_matrix(Pauli p) {
    switch (p) {
        case Pauli::I: return gates::identity();
        case Pauli::X: return gates::x();
        case Pauli::Y: return gates::y();
        case Pauli::Z: return gates::z();
    }
    throw Error(ErrorKind::InvalidParameter, "unknown Pauli label");
}

char pauli_label(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

}  // namespace nmecut
