#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "nmecut/linalg.hpp"

namespace nmecut {

// Trace-preserving completely positive map in Kraus form. Immutable; the Choi
// matrix is computed on first request and shared between copies.
class QuantumChannel {
public:
    // Throws Error{DimensionMismatch} on inconsistent Kraus shapes and
    // Error{NotTracePreserving} when max|sum K^dagger K - I| > 1e-10.
    QuantumChannel(std::vector<ComplexMatrix> kraus, std::string label);

    std::size_t in_dim() const noexcept { return in_dim_; }
    std::size_t out_dim() const noexcept { return out_dim_; }
    const std::vector<ComplexMatrix>& kraus() const& noexcept { return kraus_; }
    // Rvalue channels hand back their operators so range-for over a temporary stays valid.
    std::vector<ComplexMatrix> kraus() && { return std::move(kraus_); }
    const std::string& label() const noexcept { return label_; }

    // Linear action on an arbitrary operator (not necessarily a state).
    ComplexMatrix apply(const ComplexMatrix& op) const;
    DensityOperator apply(const DensityOperator& rho) const;

    // sum_ij |i><j| (x) E(|i><j|); trace equals in_dim.
    ComplexMatrix choi() const;

    double trace_preservation_residual() const;

private:
    struct ChoiCache;

    std::size_t in_dim_;
    std::size_t out_dim_;
    std::vector<ComplexMatrix> kraus_;
    std::string label_;
    std::shared_ptr<ChoiCache> cache_;
};

inline DensityOperator apply(const QuantumChannel& ch, const DensityOperator& rho) { return ch.apply(rho); }
inline ComplexMatrix choi(const QuantumChannel& ch) { return ch.choi(); }

QuantumChannel identity_channel(std::size_t dim);
// Throws Error{NotUnitary}.
QuantumChannel unitary_channel(const ComplexMatrix& u, std::string label = "U");
// U (E (U^dagger . U)) U^dagger
QuantumChannel conjugate(const QuantumChannel& ch, const ComplexMatrix& u, const std::string& u_label);

struct BellOverlaps {
    std::array<double, 4> values{};  // indexed by Pauli

    double operator[](Pauli p) const { return values[static_cast<int>(p)]; }
    double sum() const { return values[0] + values[1] + values[2] + values[3]; }
};

// sigma -> <Phi^sigma| rho |Phi^sigma> with |Phi^sigma> = (sigma (x) I)|Phi>.
BellOverlaps bell_overlaps(const DensityOperator& rho);

// Analytic teleportation channel: Kraus set {sqrt(w_sigma) sigma}. Pauli terms
// with zero weight are omitted.
QuantumChannel teleportation_channel(const DensityOperator& resource);

struct TeleportationBranch {
    int outcome_a = 0;  // measurement of the input qubit (after H)
    int outcome_b = 0;  // measurement of the sender's resource half
    double probability = 0.0;
    // Receiver state after correction; maximally mixed placeholder when probability == 0.
    ComplexMatrix state;
};

// Explicit three-qubit simulation: input (x) resource, CNOT(A->B), H(A),
// computational measurement of A and B, X^b then Z^a on C.
std::array<TeleportationBranch, 4> simulate_teleportation(const DensityOperator& input,
                                                          const DensityOperator& resource);

// Channel obtained from the same circuit by enumerating the measurement branches
// and the eigen-decomposition of the resource into Kraus operators.
QuantumChannel teleportation_circuit_channel(const DensityOperator& resource);

// Measure in the basis {U|j>} and prepare U|j> on the receiving wire.
QuantumChannel measure_prepare_channel(const ComplexMatrix& basis_unitary, const std::string& label);

// Computational-basis measurement followed by preparing the flipped outcome.
QuantumChannel measure_prepare_flip_channel();

}  // namespace nmecut
