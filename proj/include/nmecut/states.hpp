#pragma once

#include <array>
#include <span>

#include "nmecut/linalg.hpp"

namespace nmecut {

// Schmidt parameter k of the family K(|00> + k|11>), K = 1/sqrt(1 + k^2).
class NmeParameter {
public:
    // Throws Error{InvalidParameter} for negative or non-finite k.
    explicit NmeParameter(double k);

    double k() const noexcept { return k_; }
    double normalizer() const noexcept { return normalizer_; }

private:
    double k_;
    double normalizer_;
};

struct SchmidtForm {
    std::array<double, 2> coefficients;  // descending
    std::array<PureState, 2> left_basis;
    std::array<PureState, 2> right_basis;
    double k;  // coefficients[1] / coefficients[0]
};

PureState nme_state(NmeParameter k);
PureState bell_state(Pauli sigma);

SchmidtForm schmidt_decompose(const PureState& psi);

double m_distillation_norm(std::span<const double> coefficients, int m);

// Maximal overlap with |Phi> reachable under LOCC, for a pure two-qubit state.
double overlap_f_pure(const PureState& psi);

// Closed form (k+1)^2 / (2(k^2+1)).
double nme_overlap(NmeParameter k);

// Root k in [0, 1] of (k+1)^2 = 2f(k^2+1). Throws Error{OutOfRange} outside [0.5, 1].
NmeParameter k_from_f(double f);

}  // namespace nmecut
