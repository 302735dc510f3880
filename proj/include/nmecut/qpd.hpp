#pragma once

#include <iosfwd>
#include <vector>

#include "nmecut/channels.hpp"
#include "nmecut/states.hpp"

namespace nmecut {

struct QpdTerm {
    double coefficient;
    QuantumChannel channel;
    bool consumes_resource = false;
};

// Signed mixture sum_i c_i F_i of one-qubit channels with sum_i c_i = 1.
class QuasiProbDecomposition {
public:
    // Throws Error{InvalidParameter} on an empty list, zero or non-finite
    // coefficients, non one-qubit channels, or |sum c_i - 1| > 1e-12.
    explicit QuasiProbDecomposition(std::vector<QpdTerm> terms);

    const std::vector<QpdTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    double kappa() const noexcept { return kappa_; }
    const std::vector<double>& probabilities() const noexcept { return probabilities_; }
    int sign(std::size_t i) const { return terms_.at(i).coefficient < 0.0 ? -1 : 1; }

private:
    std::vector<QpdTerm> terms_;
    double kappa_ = 0.0;
    std::vector<double> probabilities_;
};

// Entanglement-free optimal cut: MP[H] + MP[SH] - MP-flip.
QuasiProbDecomposition harada_wire_cut();

// Teleportation-based cut with resource K(|00> + k|11>). The negative term is
// omitted at exactly k = 1, where its coefficient vanishes.
QuasiProbDecomposition nme_wire_cut(NmeParameter k);

// (k^2+1)/(k+1)^2 and (k-1)^2/(k+1)^2.
double nme_teleport_coefficient(NmeParameter k);
double nme_flip_coefficient(NmeParameter k);

// 2/f - 1; throws Error{OutOfRange} for f outside [0.5, 1].
double optimal_overhead(double f);
// 4(k^2+1)/(k+1)^2 - 1
double optimal_overhead_pure(NmeParameter k);
// Expected resource pairs per sampled shot, 2(k^2+1)/(k+1)^2. Throws for k = 0.
double resource_consumption_rate(NmeParameter k);

// sum_i c_i choi(F_i); a Choi matrix of a (possibly non-physical) linear map.
ComplexMatrix reconstruct_channel(const QuasiProbDecomposition& qpd);
// Max-norm distance between the reconstruction and the identity channel's Choi matrix.
double reconstruction_error(const QuasiProbDecomposition& qpd);

// One line per term: "<index> <coefficient> <channel label> <resource|local>",
// followed by "kappa <value>". Numbers use 12 significant digits.
void write_description(std::ostream& os, const QuasiProbDecomposition& qpd);

}  // namespace nmecut
