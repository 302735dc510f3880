#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "nmecut/estimator.hpp"

namespace nmecut {

struct ExperimentConfig {
    std::vector<double> f_values{0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<std::uint64_t> shot_grid = default_shot_grid();
    std::uint64_t n_states = 1000;
    std::uint64_t seed = 0;
    SamplingMode mode = SamplingMode::Stratified;
    // Reuse the same preparation unitaries for every f value.
    bool paired_states = true;
    // Test hook: prepare |0> instead of a Haar-random state.
    bool identity_prep = false;
    // 0 selects std::thread::hardware_concurrency().
    unsigned threads = 1;

    // 250, 500, ..., 5000
    static std::vector<std::uint64_t> default_shot_grid();

    // Throws Error{InvalidParameter|OutOfRange}.
    void validate() const;
};

struct ExperimentRecord {
    double f = 0.0;
    double k = 0.0;
    std::uint64_t shots = 0;
    double avg_error = 0.0;
    double std_error = 0.0;  // sample std of the per-state errors / sqrt(n_states)
    std::uint64_t n_states = 0;

    friend bool operator==(const ExperimentRecord&, const ExperimentRecord&) = default;
};

// Haar-distributed 2x2 unitary: QR of a complex Gaussian matrix with the
// diagonal phases of R moved into Q.
ComplexMatrix haar_random_unitary(RandomSource& rng);

// |estimate - exact| for one preparation, observable Z.
double run_trial(NmeParameter k, const ComplexMatrix& prep, std::uint64_t shots, RandomSource& rng,
                 SamplingMode mode = SamplingMode::Stratified);

// One record per (f, shots) pair, f-major then shots in grid order.
std::vector<ExperimentRecord> run_sweep(const ExperimentConfig& config);

ExperimentConfig load_config(const std::filesystem::path& path);

// Header `f,k,shots,avg_error,std_error,n_states`; shortest round-trip decimals.
std::string to_csv(std::span<const ExperimentRecord> records);
std::vector<ExperimentRecord> parse_csv(const std::string& text);
void write_csv(std::span<const ExperimentRecord> records, const std::filesystem::path& path);
std::vector<ExperimentRecord> read_csv(const std::filesystem::path& path);

// Log-scaled y axis, one series per f value sorted ascending. Throws on empty input.
std::string to_svg(std::span<const ExperimentRecord> records);
void render_svg(std::span<const ExperimentRecord> records, const std::filesystem::path& path);

struct SweepCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Shape checks on a sweep: per-f log-log slope in [-0.65, -0.35], strict
// ordering of the lowest against the highest f at every budget >= 1000 shots,
// and a 4-sigma separation of those two series at the largest budget.
std::vector<SweepCheck> check_sweep_invariants(std::span<const ExperimentRecord> records);

// Least-squares slope of log(avg_error) against log(shots).
double log_log_slope(std::span<const ExperimentRecord> series);

}  // namespace nmecut
