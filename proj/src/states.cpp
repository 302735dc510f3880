#include "nmecut/states.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace nmecut {

NmeParameter::NmeParameter(double k) : k_(k), normalizer_(0.0) {
    if (!std::isfinite(k) || k < 0.0)
        throw Error(ErrorKind::InvalidParameter, "k must be finite and nonnegative, got " + std::to_string(k));
    normalizer_ = 1.0 / std::sqrt(1.0 + k * k);
}

PureState nme_state(NmeParameter k) {
    const double K = k.normalizer();
    return PureState::from_amplitudes({K, 0.0, 0.0, k.k() * K});
}

PureState bell_state(Pauli sigma) {
    const double r = 1.0 / std::sqrt(2.0);
    const PureState phi = PureState::from_amplitudes({r, 0.0, 0.0, r});
    return phi.apply(kron(pauli_matrix(sigma), gates::identity()));
}

SchmidtForm schmidt_decompose(const PureState& psi) {
    if (psi.dim() != 4) throw Error(ErrorKind::DimensionMismatch, "Schmidt decomposition needs a two-qubit state");
    // psi_ij = sum_r s_r U_ir conj(V_jr), so |xi_r> = U[:, r], |zeta_r> = conj(V[:, r]).
    Eigen::Matrix2cd amp;
    amp << psi[0], psi[1], psi[2], psi[3];
    Eigen::JacobiSVD<Eigen::Matrix2cd> svd(amp, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const auto& u = svd.matrixU();
    const auto& v = svd.matrixV();

    auto column = [](const Eigen::Matrix2cd& m, int c, bool conjugate) {
        std::vector<Complex> a{m(0, c), m(1, c)};
        if (conjugate)
            for (auto& x : a) x = std::conj(x);
        return PureState::normalized(std::move(a));
    };

    const double p0 = s(0);
    const double p1 = s(1) < 1e-12 ? 0.0 : s(1);
    return SchmidtForm{
        .coefficients = {p0, p1},
        .left_basis = {column(u, 0, false), column(u, 1, false)},
        .right_basis = {column(v, 0, true), column(v, 1, true)},
        .k = p0 > 0.0 ? p1 / p0 : 0.0,
    };
}

double m_distillation_norm(std::span<const double> coefficients, int m) {
    if (m < 1) throw Error(ErrorKind::InvalidParameter, "m must be positive");
    if (coefficients.empty()) throw Error(ErrorKind::InvalidParameter, "empty coefficient vector");
    double norm2 = 0.0;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
        const double c = coefficients[i];
        if (!std::isfinite(c) || c < 0.0) throw Error(ErrorKind::InvalidParameter, "coefficients must be nonnegative");
        if (i > 0 && c > coefficients[i - 1]) throw Error(ErrorKind::InvalidParameter, "coefficients must be descending");
        norm2 += c * c;
    }
    if (norm2 > 1.0 + 1e-10) throw Error(ErrorKind::InvalidParameter, "squared coefficients sum above 1");

    const std::size_t d = coefficients.size();
    // Squared 2-norm of the 1-based slice [from, d]; empty when from > d.
    auto tail_norm2 = [&](std::size_t from) {
        double acc = 0.0;
        for (std::size_t i = from; i <= d; ++i) acc += coefficients[i - 1] * coefficients[i - 1];
        return acc;
    };

    std::size_t j_star = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= static_cast<std::size_t>(m); ++j) {
        const std::size_t from = static_cast<std::size_t>(m) - j + 1;
        const double value = tail_norm2(from) / static_cast<double>(j);
        if (value < best) {
            best = value;
            j_star = j;
        }
    }

    double head = 0.0;
    for (std::size_t i = 1; i <= std::min(j_star, d); ++i) head += coefficients[i - 1];
    return head + std::sqrt(static_cast<double>(j_star)) * std::sqrt(tail_norm2(j_star + 1));
}

double overlap_f_pure(const PureState& psi) {
    const SchmidtForm form = schmidt_decompose(psi);
    const double norm = m_distillation_norm(form.coefficients, 2);
    return 0.5 * norm * norm;
}

double nme_overlap(NmeParameter k) {
    const double kk = k.k();
    return (kk + 1.0) * (kk + 1.0) / (2.0 * (kk * kk + 1.0));
}

NmeParameter k_from_f(double f) {
    if (!std::isfinite(f) || f < 0.5 || f > 1.0)
        throw Error(ErrorKind::OutOfRange, "f must lie in [0.5, 1], got " + std::to_string(f));
    // Smaller root of k^2(1-2f) + 2k + (1-2f) = 0, in cancellation-free form.
    return NmeParameter((2.0 * f - 1.0) / (1.0 + 2.0 * std::sqrt(f * (1.0 - f))));
}

}  // namespace nmecut
