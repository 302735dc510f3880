#include "nmecut/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "nmecut/experiment.hpp"
#include "nmecut/qpd.hpp"

namespace nmecut {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string g12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv(kSeedEnvVar)) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
        }
    }
    return 42;
}

int usage_error(std::ostream& err, const std::string& message) {
    err << "error: " << message << '\n';
    return kExitUsage;
}

struct OverheadArgs {
    std::optional<double> k;
    std::optional<double> f;
};

int cmd_overhead(const OverheadArgs& args, std::ostream& out, std::ostream& err) {
    if (args.k.has_value() == args.f.has_value()) return usage_error(err, "give exactly one of --k or --f");
    try {
        const double gamma = args.k ? optimal_overhead_pure(NmeParameter(*args.k)) : optimal_overhead(*args.f);
        out << g12(gamma) << '\n';
        return kExitOk;
    } catch (const Error& e) {
        return usage_error(err, e.what());
    }
}

int cmd_decompose(double k, std::ostream& out, std::ostream& err) {
    try {
        write_description(out, nme_wire_cut(NmeParameter(k)));
        return kExitOk;
    } catch (const Error& e) {
        return usage_error(err, e.what());
    }
}

int cmd_verify(std::optional<double> k, bool all, std::ostream& out, std::ostream& err) {
    if (k.has_value() == all) return usage_error(err, "give exactly one of --k or --all");
    constexpr double tol = 1e-10;
    std::vector<std::pair<std::string, QuasiProbDecomposition>> cases;
    try {
        if (all) {
            for (int i = 0; i <= 10; ++i) {
                const double kv = i / 10.0;
                cases.emplace_back("k=" + g12(kv), nme_wire_cut(NmeParameter(kv)));
            }
            cases.emplace_back("harada", harada_wire_cut());
        } else {
            cases.emplace_back("k=" + g12(*k), nme_wire_cut(NmeParameter(*k)));
        }
    } catch (const Error& e) {
        return usage_error(err, e.what());
    }

    bool ok = true;
    for (const auto& [name, qpd] : cases) {
        const double dev = reconstruction_error(qpd);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3e", dev);
        const bool pass = dev <= tol;
        ok = ok && pass;
        out << name << " max_choi_deviation=" << buf << (pass ? " ok" : " FAIL") << '\n';
    }
    return ok ? kExitOk : kExitFailure;
}

struct ExperimentArgs {
    std::string config_path;
    std::vector<double> f_values;
    std::vector<std::uint64_t> shots;
    std::uint64_t n_states = 1000;
    std::uint64_t seed = 0;
    std::string mode = "stratified";
    unsigned threads = 0;
    bool unpaired = false;
    bool identity_prep = false;
    std::string out_path;
};

int cmd_experiment(const ExperimentArgs& args, const CLI::App& sub, std::ostream& out, std::ostream& err) {
    ExperimentConfig config;
    try {
        if (!args.config_path.empty()) config = load_config(args.config_path);
        if (sub.count("--f")) config.f_values = args.f_values;
        if (sub.count("--shots")) config.shot_grid = args.shots;
        if (sub.count("--n-states") || args.config_path.empty()) config.n_states = args.n_states;
        if (sub.count("--seed") || args.config_path.empty()) config.seed = args.seed;
        if (sub.count("--mode")) config.mode = parse_sampling_mode(args.mode);
        if (sub.count("--threads") || args.config_path.empty()) config.threads = args.threads;
        if (sub.count("--unpaired")) config.paired_states = false;
        if (sub.count("--identity-prep")) config.identity_prep = true;
        config.validate();
    } catch (const Error& e) {
        return e.kind() == ErrorKind::Io ? (err << "error: " << e.what() << '\n', kExitFailure)
                                         : usage_error(err, e.what());
    }

    try {
        const auto records = run_sweep(config);
        write_csv(records, args.out_path);
        out << "f        k              shots  avg_error       std_error\n";
        for (const auto& r : records) {
            if (r.shots != config.shot_grid.back()) continue;
            char buf[160];
            std::snprintf(buf, sizeof buf, "%-8.6g %-14.6g %-6llu %-15.6e %-15.6e\n", r.f, r.k,
                          static_cast<unsigned long long>(r.shots), r.avg_error, r.std_error);
            out << buf;
        }
        out << "wrote " << records.size() << " records to " << args.out_path << '\n';
        return kExitOk;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

int cmd_plot(const std::string& in_path, const std::string& out_path, bool assert_invariants, std::ostream& out,
             std::ostream& err) {
    std::vector<ExperimentRecord> records;
    try {
        records = read_csv(in_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::Io ? kExitFailure : kExitUsage;
    }
    if (records.empty()) return usage_error(err, in_path + " contains no records");
    try {
        render_svg(records, out_path);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    out << "wrote " << out_path << '\n';
    if (!assert_invariants) return kExitOk;

    bool ok = true;
    for (const auto& check : check_sweep_invariants(records)) {
        out << (check.passed ? "PASS " : "FAIL ") << check.name << ": " << check.detail << '\n';
        ok = ok && check.passed;
    }
    return ok ? kExitOk : kExitFailure;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wire cutting with non-maximally entangled resource states"};
    app.require_subcommand(1, 1);

    OverheadArgs overhead;
    auto* overhead_cmd = app.add_subcommand("overhead", "Optimal sampling overhead of a single wire cut");
    auto* ok_opt = overhead_cmd->add_option("--k", overhead.k, "Schmidt parameter k >= 0 of the resource state");
    auto* of_opt = overhead_cmd->add_option("--f", overhead.f, "Entanglement overlap f in [0.5, 1]");
    ok_opt->excludes(of_opt);

    double decompose_k = 0.0;
    auto* decompose_cmd = app.add_subcommand("decompose", "Print the teleportation-based decomposition");
    decompose_cmd->add_option("--k", decompose_k, "Schmidt parameter k >= 0")->required();

    std::optional<double> verify_k;
    bool verify_all = false;
    auto* verify_cmd = app.add_subcommand("verify", "Check that decompositions reconstruct the identity channel");
    auto* vk_opt = verify_cmd->add_option("--k", verify_k, "Schmidt parameter to verify");
    auto* va_opt = verify_cmd->add_flag("--all", verify_all, "Verify k = 0, 0.1, ..., 1 and the entanglement-free cut");
    vk_opt->excludes(va_opt);

    ExperimentArgs exp;
    exp.seed = default_seed();
    auto* exp_cmd = app.add_subcommand("experiment", "Run the shot-budget sweep and write a CSV");
    exp_cmd->add_option("--config", exp.config_path, "JSON config file; flags override its values");
    exp_cmd->add_option("--f", exp.f_values, "Overlap values (comma separated)")
        ->delimiter(',')
        ->default_str("0.5,0.6,0.7,0.8,0.9,1.0");
    exp_cmd->add_option("--shots", exp.shots, "Shot budgets (comma separated, increasing)")
        ->delimiter(',')
        ->default_str("250,500,...,5000");
    exp_cmd->add_option("--n-states", exp.n_states, "Number of random input states")->capture_default_str();
    exp_cmd->add_option("--seed", exp.seed, std::string("Seed (default from ") + kSeedEnvVar + " or 42)")
        ->capture_default_str();
    exp_cmd->add_option("--mode", exp.mode, "stratified | multinomial")->capture_default_str();
    exp_cmd->add_option("--threads", exp.threads, "Worker threads, 0 = hardware concurrency")->capture_default_str();
    exp_cmd->add_flag("--unpaired", exp.unpaired, "Draw independent input states per f value");
    exp_cmd->add_flag("--identity-prep", exp.identity_prep, "Prepare |0> instead of Haar-random states");
    exp_cmd->add_option("--out", exp.out_path, "Output CSV path")->required();

    std::string plot_in, plot_out;
    bool plot_assert = false;
    auto* plot_cmd = app.add_subcommand("plot", "Render a sweep CSV as a log-scale SVG chart");
    plot_cmd->add_option("--in", plot_in, "Input CSV")->required();
    plot_cmd->add_option("--out", plot_out, "Output SVG")->required();
    plot_cmd->add_flag("--assert", plot_assert, "Exit 1 unless the slope and ordering checks pass");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (overhead_cmd->parsed()) return cmd_overhead(overhead, out, err);
    if (decompose_cmd->parsed()) return cmd_decompose(decompose_k, out, err);
    if (verify_cmd->parsed()) return cmd_verify(verify_k, verify_all, out, err);
    if (exp_cmd->parsed()) return cmd_experiment(exp, *exp_cmd, out, err);
    if (plot_cmd->parsed()) return cmd_plot(plot_in, plot_out, plot_assert, out, err);
    return kExitUsage;
}

}  // namespace nmecut
