#include "nmecut/qpd.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace nmecut {

QuasiProbDecomposition::QuasiProbDecomposition(std::vector<QpdTerm> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw Error(ErrorKind::InvalidParameter, "decomposition needs at least one term");
    double sum = 0.0;
    for (const auto& t : terms_) {
        if (!std::isfinite(t.coefficient) || t.coefficient == 0.0)
            throw Error(ErrorKind::InvalidParameter, "coefficients must be finite and nonzero");
        if (t.channel.in_dim() != 2 || t.channel.out_dim() != 2)
            throw Error(ErrorKind::InvalidParameter, "wire-cut terms must be one-qubit channels");
        sum += t.coefficient;
        kappa_ += std::abs(t.coefficient);
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        std::ostringstream os;
        os << "coefficients sum to " << sum << ", expected 1";
        throw Error(ErrorKind::InvalidParameter, os.str());
    }
    probabilities_.reserve(terms_.size());
    for (const auto& t : terms_) probabilities_.push_back(std::abs(t.coefficient) / kappa_);
}

QuasiProbDecomposition harada_wire_cut() {
    const ComplexMatrix sh = gates::s() * gates::h();
    return QuasiProbDecomposition({
        {1.0, measure_prepare_channel(gates::h(), "H"), false},
        {1.0, measure_prepare_channel(sh, "SH"), false},
        {-1.0, measure_prepare_flip_channel(), false},
    });
}

double nme_teleport_coefficient(NmeParameter k) {
    const double kk = k.k();
    return (kk * kk + 1.0) / ((kk + 1.0) * (kk + 1.0));
}

double nme_flip_coefficient(NmeParameter k) {
    const double kk = k.k();
    return (kk - 1.0) * (kk - 1.0) / ((kk + 1.0) * (kk + 1.0));
}

QuasiProbDecomposition nme_wire_cut(NmeParameter k) {
    const double a = nme_teleport_coefficient(k);
    const double b = nme_flip_coefficient(k);
    const QuantumChannel tel = teleportation_channel(nme_state(k).density());

    std::vector<QpdTerm> terms{
        {a, conjugate(tel, gates::h(), "H"), true},
        {a, conjugate(tel, gates::s() * gates::h(), "SH"), true},
    };
    if (b != 0.0) terms.push_back({-b, measure_prepare_flip_channel(), false});
    return QuasiProbDecomposition(std::move(terms));
}

double optimal_overhead(double f) {
    if (!std::isfinite(f) || f < 0.5 || f > 1.0)
        throw Error(ErrorKind::OutOfRange, "f must lie in [0.5, 1], got " + std::to_string(f));
    return 2.0 / f - 1.0;
}

double optimal_overhead_pure(NmeParameter k) { return 4.0 * nme_teleport_coefficient(k) - 1.0; }

double resource_consumption_rate(NmeParameter k) {
    if (k.k() <= 0.0) throw Error(ErrorKind::InvalidParameter, "resource consumption rate needs k > 0");
    return 2.0 * nme_teleport_coefficient(k);
}

ComplexMatrix reconstruct_channel(const QuasiProbDecomposition& qpd) {
    ComplexMatrix acc(4, 4);
    for (const auto& t : qpd.terms()) acc += t.channel.choi() * Complex{t.coefficient, 0.0};
    return acc;
}

double reconstruction_error(const QuasiProbDecomposition& qpd) {
    return max_abs_diff(reconstruct_channel(qpd), identity_channel(2).choi());
}

void write_description(std::ostream& os, const QuasiProbDecomposition& qpd) {
    char buf[64];
    for (std::size_t i = 0; i < qpd.size(); ++i) {
        const auto& t = qpd.terms()[i];
        std::snprintf(buf, sizeof buf, "%.12g", t.coefficient);
        os << i << ' ' << buf << ' ' << t.channel.label() << ' ' << (t.consumes_resource ? "resource" : "local")
           << '\n';
    }
    std::snprintf(buf, sizeof buf, "%.12g", qpd.kappa());
    os << "kappa " << buf << '\n';
}

}  // namespace nmecut
