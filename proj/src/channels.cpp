#include "nmecut/channels.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <mutex>
#include <sstream>

namespace nmecut {

struct QuantumChannel::ChoiCache {
    std::once_flag once;
    ComplexMatrix choi;
};

QuantumChannel::QuantumChannel(std::vector<ComplexMatrix> kraus, std::string label)
    : in_dim_(0), out_dim_(0), kraus_(std::move(kraus)), label_(std::move(label)),
      cache_(std::make_shared<ChoiCache>()) {
    if (kraus_.empty()) throw Error(ErrorKind::InvalidParameter, "channel needs at least one Kraus operator");
    out_dim_ = kraus_.front().rows();
    in_dim_ = kraus_.front().cols();
    for (const auto& k : kraus_)
        if (k.rows() != out_dim_ || k.cols() != in_dim_)
            throw Error(ErrorKind::DimensionMismatch, "Kraus operators of channel '" + label_ + "' differ in shape");
    const double residual = trace_preservation_residual();
    if (residual > 1e-10) {
        std::ostringstream os;
        os << "channel '" << label_ << "': max|sum K^dagger K - I| = " << residual;
        throw Error(ErrorKind::NotTracePreserving, os.str());
    }
}

double QuantumChannel::trace_preservation_residual() const {
    ComplexMatrix acc(in_dim_, in_dim_);
    for (const auto& k : kraus_) acc += k.adjoint() * k;
    return max_abs_diff(acc, ComplexMatrix::identity(in_dim_));
}

ComplexMatrix QuantumChannel::apply(const ComplexMatrix& op) const {
    if (op.rows() != in_dim_ || op.cols() != in_dim_)
        throw Error(ErrorKind::DimensionMismatch, "channel '" + label_ + "' expects a " + std::to_string(in_dim_) +
                                                      "-dimensional input, got " + std::to_string(op.rows()));
    ComplexMatrix out(out_dim_, out_dim_);
    for (const auto& k : kraus_) out += k * op * k.adjoint();
    return out;
}

DensityOperator QuantumChannel::apply(const DensityOperator& rho) const {
    return DensityOperator::validate(apply(rho.matrix()));
}

ComplexMatrix QuantumChannel::choi() const {
    std::call_once(cache_->once, [this] {
        ComplexMatrix c(in_dim_ * out_dim_, in_dim_ * out_dim_);
        for (std::size_t i = 0; i < in_dim_; ++i)
            for (std::size_t j = 0; j < in_dim_; ++j)
                c += kron(ComplexMatrix::basis_op(in_dim_, i, j), apply(ComplexMatrix::basis_op(in_dim_, i, j)));
        cache_->choi = std::move(c);
    });
    return cache_->choi;
}

QuantumChannel identity_channel(std::size_t dim) { return QuantumChannel({ComplexMatrix::identity(dim)}, "I"); }

QuantumChannel unitary_channel(const ComplexMatrix& u, std::string label) {
    require_unitary(u);
    return QuantumChannel({u}, std::move(label));
}

QuantumChannel conjugate(const QuantumChannel& ch, const ComplexMatrix& u, const std::string& u_label) {
    require_unitary(u);
    const ComplexMatrix u_dag = u.adjoint();
    std::vector<ComplexMatrix> kraus;
    kraus.reserve(ch.kraus().size());
    for (const auto& k : ch.kraus()) kraus.push_back(u * k * u_dag);
    return QuantumChannel(std::move(kraus), u_label + "." + ch.label() + "." + u_label + "^dag");
}

BellOverlaps bell_overlaps(const DensityOperator& rho) {
    if (rho.dim() != 4) throw Error(ErrorKind::DimensionMismatch, "Bell overlaps need a two-qubit state");
    BellOverlaps out;
    const double r = 1.0 / std::sqrt(2.0);
    const PureState phi = PureState::from_amplitudes({r, 0.0, 0.0, r});
    for (Pauli p : kPaulis) {
        const PureState bell = phi.apply(kron(pauli_matrix(p), gates::identity()));
        Complex acc{0.0, 0.0};
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) acc += std::conj(bell[i]) * rho.matrix()(i, j) * bell[j];
        out.values[static_cast<int>(p)] = acc.real();
    }
    return out;
}

QuantumChannel teleportation_channel(const DensityOperator& resource) {
    const BellOverlaps w = bell_overlaps(resource);
    std::vector<ComplexMatrix> kraus;
    std::string label = "tel[";
    for (Pauli p : kPaulis) {
        const double weight = w[p];
        if (weight <= 0.0) continue;
        kraus.push_back(pauli_matrix(p) * Complex{std::sqrt(weight), 0.0});
        label += pauli_label(p);
    }
    return QuantumChannel(std::move(kraus), label + "]");
}

namespace {

// (H (x) I (x) I)(CNOT (x) I) on qubits A, B, C.
ComplexMatrix sender_unitary() {
    const ComplexMatrix i2 = gates::identity();
    return kron(kron(gates::h(), i2), i2) * kron(gates::cnot(), i2);
}

// X^b first, then Z^a.
ComplexMatrix receiver_correction(int a, int b) {
    ComplexMatrix c = gates::identity();
    if (b == 1) c = gates::x() * c;
    if (a == 1) c = gates::z() * c;
    return c;
}

}  // namespace

std::array<TeleportationBranch, 4> simulate_teleportation(const DensityOperator& input,
                                                          const DensityOperator& resource) {
    if (input.dim() != 2 || resource.dim() != 4)
        throw Error(ErrorKind::DimensionMismatch, "teleportation needs a one-qubit input and two-qubit resource");
    const ComplexMatrix u = sender_unitary();
    const ComplexMatrix evolved = u * kron(input.matrix(), resource.matrix()) * u.adjoint();

    constexpr std::size_t dims[] = {2, 2, 2};
    constexpr std::size_t sender[] = {0, 1};
    std::array<TeleportationBranch, 4> branches;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const ComplexMatrix proj =
                kron(kron(ComplexMatrix::basis_op(2, a, a), ComplexMatrix::basis_op(2, b, b)), gates::identity());
            const ComplexMatrix receiver = partial_trace(proj * evolved * proj, dims, sender);
            TeleportationBranch& br = branches[static_cast<std::size_t>(2 * a + b)];
            br.outcome_a = a;
            br.outcome_b = b;
            br.probability = receiver.trace().real();
            if (br.probability > 0.0) {
                const ComplexMatrix corr = receiver_correction(a, b);
                br.state = corr * receiver * corr.adjoint() * Complex{1.0 / br.probability, 0.0};
            } else {
                br.probability = 0.0;
                br.state = ComplexMatrix::identity(2) * Complex{0.5, 0.0};
            }
        }
    return branches;
}

QuantumChannel teleportation_circuit_channel(const DensityOperator& resource) {
    if (resource.dim() != 4) throw Error(ErrorKind::DimensionMismatch, "teleportation resource must be two-qubit");
    Eigen::Matrix4cd res;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) res(i, j) = resource.matrix()(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(res);

    const ComplexMatrix u = sender_unitary();
    std::vector<ComplexMatrix> kraus;
    for (int r = 0; r < 4; ++r) {
        const double lambda = eig.eigenvalues()(r);
        if (lambda <= 1e-15) continue;
        const double amp = std::sqrt(lambda);
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                // Columns indexed by the input basis state |i>_A.
                ComplexMatrix raw(2, 2);
                for (std::size_t i = 0; i < 2; ++i) {
                    std::vector<Complex> joint(8, Complex{0.0, 0.0});
                    for (std::size_t bc = 0; bc < 4; ++bc) joint[i * 4 + bc] = eig.eigenvectors()(static_cast<int>(bc), r);
                    for (std::size_t c = 0; c < 2; ++c) {
                        const std::size_t row = static_cast<std::size_t>(a) * 4 + static_cast<std::size_t>(b) * 2 + c;
                        Complex acc{0.0, 0.0};
                        for (std::size_t col = 0; col < 8; ++col) acc += u(row, col) * joint[col];
                        raw(c, i) = amp * acc;
                    }
                }
                kraus.push_back(receiver_correction(a, b) * raw);
            }
    }
    return QuantumChannel(std::move(kraus), "tel-circuit");
}

QuantumChannel measure_prepare_channel(const ComplexMatrix& basis_unitary, const std::string& label) {
    require_unitary(basis_unitary);
    // Kraus U|j><j|U^dagger: measure in the rotated basis, prepare the same vector.
    std::vector<ComplexMatrix> kraus;
    for (std::size_t j = 0; j < 2; ++j)
        kraus.push_back(basis_unitary * ComplexMatrix::basis_op(2, j, j) * basis_unitary.adjoint());
    return QuantumChannel(std::move(kraus), "mp[" + label + "]");
}

QuantumChannel measure_prepare_flip_channel() {
    return QuantumChannel({ComplexMatrix::basis_op(2, 1, 0), ComplexMatrix::basis_op(2, 0, 1)}, "mp-flip");
}

}  // namespace nmecut
