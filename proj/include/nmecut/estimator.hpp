#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "nmecut/qpd.hpp"
#include "nmecut/random.hpp"

namespace nmecut {

enum class SamplingMode { Stratified, Multinomial };

std::string_view to_string(SamplingMode mode);
// Accepts "stratified" or "multinomial"; throws Error{InvalidParameter}.
SamplingMode parse_sampling_mode(std::string_view text);

struct ShotAllocation {
    std::uint64_t total = 0;
    std::vector<std::uint64_t> per_term;
};

// <0| W^dagger O W |0>. Throws Error{NotUnitary|NotHermitian}.
double exact_expectation(const ComplexMatrix& prep, const ComplexMatrix& observable);

// Largest-remainder split of total * p_i, ties to the lower index. When total is
// at least the number of nonzero-probability terms, each of them gets a shot.
ShotAllocation allocate_shots(const QuasiProbDecomposition& qpd, std::uint64_t total);

// Exact outcome probability p+ = (1 + tr[O ch(input)]) / 2 of a +-1 observable.
// Probabilities within 1e-12 of 0 or 1 are snapped to the endpoint.
double plus_probability(const QuantumChannel& ch, const DensityOperator& input, const ComplexMatrix& observable);

// (2 n+ - shots) / shots with n+ ~ Binomial(shots, p+).
double sample_branch_expectation(const QuantumChannel& ch, const DensityOperator& input,
                                 const ComplexMatrix& observable, std::uint64_t shots, RandomSource& rng);

double estimate_cut_expectation(const QuasiProbDecomposition& qpd, const ComplexMatrix& prep,
                                const ComplexMatrix& observable, std::uint64_t total_shots, RandomSource& rng,
                                SamplingMode mode = SamplingMode::Stratified);

// Term index drawn with probability |c_i| / kappa.
std::size_t sample_term_index(const QuasiProbDecomposition& qpd, RandomSource& rng);

struct ResourceTally {
    std::uint64_t draws = 0;
    std::uint64_t resource_draws = 0;
    double kappa = 0.0;

    // Resource-consuming fraction scaled by kappa: pairs per shot of the cut.
    double rate() const { return draws == 0 ? 0.0 : kappa * static_cast<double>(resource_draws) / static_cast<double>(draws); }
};

ResourceTally count_resource_draws(const QuasiProbDecomposition& qpd, std::uint64_t draws, RandomSource& rng);

}  // namespace nmecut
