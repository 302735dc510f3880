#include "nmecut/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

namespace nmecut {

std::string_view to_string(SamplingMode mode) {
    return mode == SamplingMode::Stratified ? "stratified" : "multinomial";
}

SamplingMode parse_sampling_mode(std::string_view text) {
    if (text == "stratified") return SamplingMode::Stratified;
    if (text == "multinomial") return SamplingMode::Multinomial;
    throw Error(ErrorKind::InvalidParameter, "unknown sampling mode '" + std::string(text) + "'");
}

namespace {

void require_hermitian(const ComplexMatrix& o) {
    const double residual = hermiticity_residual(o);
    if (residual > kHermitianTol) {
        std::ostringstream os;
        os << "observable: max|O - O^dagger| = " << residual;
        throw Error(ErrorKind::NotHermitian, os.str());
    }
}

void require_pm_one(const ComplexMatrix& o) {
    if (!o.is_square() || o.rows() != 2) throw Error(ErrorKind::InvalidObservable, "observable must be 2x2");
    if (hermiticity_residual(o) > kHermitianTol) throw Error(ErrorKind::InvalidObservable, "observable not Hermitian");
    for (double ev : hermitian_eigenvalues(o))
        if (std::abs(std::abs(ev) - 1.0) > 1e-10) {
            std::ostringstream os;
            os << "eigenvalue " << ev << " is not +-1";
            throw Error(ErrorKind::InvalidObservable, os.str());
        }
}

DensityOperator prepared_state(const ComplexMatrix& prep) {
    require_unitary(prep);
    if (prep.rows() != 2) throw Error(ErrorKind::DimensionMismatch, "preparation unitary must be 2x2");
    return PureState::basis(2, 0).apply(prep).density();
}

double expectation(const ComplexMatrix& observable, const ComplexMatrix& rho) {
    return (observable * rho).trace().real();
}

}  // namespace

double exact_expectation(const ComplexMatrix& prep, const ComplexMatrix& observable) {
    require_unitary(prep);
    require_hermitian(observable);
    if (observable.rows() != prep.rows())
        throw Error(ErrorKind::DimensionMismatch, "observable and preparation differ in dimension");
    const ComplexMatrix m = prep.adjoint() * observable * prep;
    return m(0, 0).real();
}

ShotAllocation allocate_shots(const QuasiProbDecomposition& qpd, std::uint64_t total) {
    const auto& p = qpd.probabilities();
    const std::size_t n = p.size();
    ShotAllocation out{total, std::vector<std::uint64_t>(n, 0)};
    if (total == 0) return out;

    std::vector<double> remainder(n);
    std::uint64_t assigned = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double quota = static_cast<double>(total) * p[i];
        const double whole = std::floor(quota);
        out.per_term[i] = static_cast<std::uint64_t>(whole);
        remainder[i] = quota - whole;
        assigned += out.per_term[i];
    }
    // Floating-point quotas can overshoot by one in pathological cases.
    while (assigned > total) {
        const auto it = std::max_element(out.per_term.begin(), out.per_term.end());
        --*it;
        --assigned;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t r = 0; assigned < total; r = (r + 1) % n) {
        ++out.per_term[order[r]];
        ++assigned;
    }

    const auto nonzero = static_cast<std::uint64_t>(std::count_if(p.begin(), p.end(), [](double x) { return x > 0.0; }));
    if (total >= nonzero) {
        for (std::size_t i = 0; i < n; ++i) {
            if (p[i] <= 0.0 || out.per_term[i] > 0) continue;
            // max_element returns the first maximum, i.e. the lowest index on ties.
            const auto donor = std::max_element(out.per_term.begin(), out.per_term.end());
            --*donor;
            ++out.per_term[i];
        }
    }
    return out;
}

double plus_probability(const QuantumChannel& ch, const DensityOperator& input, const ComplexMatrix& observable) {
    require_pm_one(observable);
    const double p = 0.5 * (1.0 + expectation(observable, ch.apply(input.matrix())));
    if (p < -1e-10 || p > 1.0 + 1e-10) {
        std::ostringstream os;
        os << "outcome probability " << p << " outside [0, 1]";
        throw Error(ErrorKind::InvalidProbability, os.str());
    }
    if (p < 1e-12) return 0.0;
    if (p > 1.0 - 1e-12) return 1.0;
    return p;
}

double sample_branch_expectation(const QuantumChannel& ch, const DensityOperator& input,
                                 const ComplexMatrix& observable, std::uint64_t shots, RandomSource& rng) {
    if (shots == 0) throw Error(ErrorKind::ZeroShots, "branch needs at least one shot");
    const double p = plus_probability(ch, input, observable);
    const std::uint64_t plus = rng.binomial(shots, p);
    return (2.0 * static_cast<double>(plus) - static_cast<double>(shots)) / static_cast<double>(shots);
}

std::size_t sample_term_index(const QuasiProbDecomposition& qpd, RandomSource& rng) {
    const auto& p = qpd.probabilities();
    const double u = rng.uniform();
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        cumulative += p[i];
        if (u < cumulative) return i;
    }
    return p.size() - 1;
}

double estimate_cut_expectation(const QuasiProbDecomposition& qpd, const ComplexMatrix& prep,
                                const ComplexMatrix& observable, std::uint64_t total_shots, RandomSource& rng,
                                SamplingMode mode) {
    if (total_shots == 0) throw Error(ErrorKind::ZeroShots, "estimate needs at least one shot");
    const DensityOperator input = prepared_state(prep);

    if (mode == SamplingMode::Stratified) {
        const ShotAllocation alloc = allocate_shots(qpd, total_shots);
        double estimate = 0.0;
        for (std::size_t i = 0; i < qpd.size(); ++i) {
            if (alloc.per_term[i] == 0) continue;
            const auto& term = qpd.terms()[i];
            estimate += term.coefficient * sample_branch_expectation(term.channel, input, observable,
                                                                     alloc.per_term[i], rng);
        }
        return estimate;
    }

    std::vector<double> plus(qpd.size());
    for (std::size_t i = 0; i < qpd.size(); ++i) plus[i] = plus_probability(qpd.terms()[i].channel, input, observable);
    double acc = 0.0;
    for (std::uint64_t s = 0; s < total_shots; ++s) {
        const std::size_t i = sample_term_index(qpd, rng);
        const double outcome = rng.bernoulli(plus[i]) ? 1.0 : -1.0;
        acc += static_cast<double>(qpd.sign(i)) * outcome;
    }
    return qpd.kappa() * acc / static_cast<double>(total_shots);
}

ResourceTally count_resource_draws(const QuasiProbDecomposition& qpd, std::uint64_t draws, RandomSource& rng) {
    ResourceTally tally{draws, 0, qpd.kappa()};
    for (std::uint64_t d = 0; d < draws; ++d)
        if (qpd.terms()[sample_term_index(qpd, rng)].consumes_resource) ++tally.resource_draws;
    return tally;
}

}  // namespace nmecut
