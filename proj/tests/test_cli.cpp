#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nmecut/cli.hpp"
#include "nmecut/experiment.hpp"

using namespace nmecut;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "nmecut");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("nmecut_test_cli_" + name);
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("overhead") {
    CHECK(run({"overhead", "--f", "0.5"}).out == "3\n");
    CHECK(run({"overhead", "--k", "1"}).out == "1\n");
    CHECK(run({"overhead", "--f", "0.9"}).out == "1.22222222222\n");
    CHECK(run({"overhead", "--k", "0"}).out == "3\n");
    CHECK(run({"overhead", "--k", "0.5"}).out == "1.22222222222\n");
    CHECK(run({"overhead", "--f", "0.4"}).code == 2);
    CHECK(run({"overhead", "--k", "-1"}).code == 2);
    CHECK(run({"overhead"}).code == 2);
    CHECK(run({"overhead", "--k", "1", "--f", "1"}).code == 2);
    CHECK(run({"overhead", "--k", "abc"}).code == 2);
}

TEST_CASE("decompose") {
    const Run one = run({"decompose", "--k", "1"});
    CHECK(one.code == 0);
    CHECK(one.out ==
          "0 0.5 H.tel[I].H^dag resource\n"
          "1 0.5 SH.tel[I].SH^dag resource\n"
          "kappa 1\n");
    const Run half = run({"decompose", "--k", "0.5"});
    CHECK(half.out ==
          "0 0.555555555556 H.tel[IZ].H^dag resource\n"
          "1 0.555555555556 SH.tel[IZ].SH^dag resource\n"
          "2 -0.111111111111 mp-flip local\n"
          "kappa 1.22222222222\n");
    const Run zero = run({"decompose", "--k", "0"});
    CHECK(zero.out ==
          "0 1 H.tel[IZ].H^dag resource\n"
          "1 1 SH.tel[IZ].SH^dag resource\n"
          "2 -1 mp-flip local\n"
          "kappa 3\n");
    CHECK(run({"decompose", "--k", "-0.5"}).code == 2);
    CHECK(run({"decompose"}).code == 2);
}

TEST_CASE("verify") {
    const Run all = run({"verify", "--all"});
    CHECK(all.code == 0);
    std::istringstream lines(all.out);
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        ++n;
        CHECK(line.size() > 3);
        CHECK(line.substr(line.size() - 3) == " ok");
    }
    CHECK(n == 12);
    CHECK(all.out.find("harada max_choi_deviation=") != std::string::npos);

    const Run one = run({"verify", "--k", "1"});
    CHECK(one.code == 0);
    const auto pos = one.out.find("deviation=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(one.out.substr(pos + 10)) <= 1e-12);

    CHECK(run({"verify", "--k", "-1"}).code == 2);
    CHECK(run({"verify"}).code == 2);
    CHECK(run({"verify", "--k", "1", "--all"}).code == 2);
}

TEST_CASE("experiment determinism") {
    const auto a = temp_path("a.csv"), b = temp_path("b.csv");
    const std::vector<std::string> common{"experiment", "--n-states", "5", "--shots", "250,500,750", "--seed", "42"};
    auto args_a = common, args_b = common;
    args_a.insert(args_a.end(), {"--out", a.string()});
    args_b.insert(args_b.end(), {"--out", b.string(), "--threads", "3"});
    const Run ra = run(args_a);
    const Run rb = run(args_b);
    CHECK(ra.code == 0);
    CHECK(rb.code == 0);
    CHECK(ra.out.find("wrote 18 records") != std::string::npos);
    const std::string csv = slurp(a);
    CHECK(csv == slurp(b));
    CHECK(read_csv(a).size() == 18);
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("experiment seed from the environment") {
    const auto a = temp_path("env_a.csv"), b = temp_path("env_b.csv");
    ::setenv(kSeedEnvVar, "7", 1);
    CHECK(run({"experiment", "--n-states", "3", "--shots", "100", "--f", "0.5", "--out", a.string()}).code == 0);
    ::unsetenv(kSeedEnvVar);
    CHECK(run({"experiment", "--n-states", "3", "--shots", "100", "--f", "0.5", "--seed", "7", "--out", b.string()})
              .code == 0);
    CHECK(slurp(a) == slurp(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST_CASE("experiment with identity preparation") {
    const auto out = temp_path("ident.csv");
    const Run r =
        run({"experiment", "--n-states", "1", "--shots", "100", "--f", "1.0", "--identity-prep", "--out", out.string()});
    CHECK(r.code == 0);
    const auto records = read_csv(out);
    REQUIRE(records.size() == 1);
    CHECK(records[0].avg_error == 0.0);
    std::filesystem::remove(out);
}

TEST_CASE("experiment config file and errors") {
    const auto cfg = temp_path("cfg.json"), out = temp_path("cfg.csv");
    {
        std::ofstream c(cfg);
        c << R"({"f_values": [0.5, 1.0], "shots": [100, 200], "n_states": 2, "seed": 1})";
    }
    CHECK(run({"experiment", "--config", cfg.string(), "--out", out.string()}).code == 0);
    CHECK(read_csv(out).size() == 4);
    // Flags override the file.
    CHECK(run({"experiment", "--config", cfg.string(), "--f", "0.7", "--out", out.string()}).code == 0);
    const auto overridden = read_csv(out);
    REQUIRE(overridden.size() == 2);
    CHECK(overridden[0].f == 0.7);
    CHECK(overridden[0].n_states == 2);

    CHECK(run({"experiment", "--f", "0.3", "--out", out.string()}).code == 2);
    CHECK(run({"experiment", "--shots", "500,250", "--out", out.string()}).code == 2);
    CHECK(run({"experiment", "--mode", "bogus", "--out", out.string()}).code == 2);
    CHECK(run({"experiment", "--n-states", "0", "--out", out.string()}).code == 2);
    CHECK(run({"experiment", "--n-states", "1"}).code == 2);
    CHECK(run({"experiment", "--config", temp_path("missing.json").string(), "--out", out.string()}).code == 1);
    CHECK(run({"experiment", "--n-states", "1", "--shots", "10", "--out",
               (temp_path("no_dir") / "x.csv").string()})
              .code == 1);
    std::filesystem::remove(cfg);
    std::filesystem::remove(out);
}

TEST_CASE("plot") {
    const auto csv = temp_path("plot.csv"), svg = temp_path("plot.svg");
    std::vector<ExperimentRecord> records;
    for (double f : {0.5, 1.0})
        for (std::uint64_t s = 250; s <= 5000; s += 250)
            records.push_back({f, k_from_f(f).k(), s, (f == 0.5 ? 3.0 : 0.8) / std::sqrt(static_cast<double>(s)),
                               1e-5, 200});
    write_csv(records, csv);
    const Run r = run({"plot", "--in", csv.string(), "--out", svg.string(), "--assert"});
    CHECK(r.code == 0);
    CHECK(slurp(svg) == to_svg(records));
    CHECK(r.out.find("FAIL") == std::string::npos);

    for (auto& rec : records)
        if (rec.f == 1.0) rec.avg_error *= 10.0;
    write_csv(records, csv);
    CHECK(run({"plot", "--in", csv.string(), "--out", svg.string()}).code == 0);
    CHECK(run({"plot", "--in", csv.string(), "--out", svg.string(), "--assert"}).code == 1);

    {
        std::ofstream bad(csv);
        bad << "f,k,shots\n1,2,3\n";
    }
    CHECK(run({"plot", "--in", csv.string(), "--out", svg.string()}).code == 2);
    {
        std::ofstream empty(csv);
        empty << "f,k,shots,avg_error,std_error,n_states\n";
    }
    CHECK(run({"plot", "--in", csv.string(), "--out", svg.string()}).code == 2);
    CHECK(run({"plot", "--in", temp_path("missing.csv").string(), "--out", svg.string()}).code == 1);
    CHECK(run({"plot", "--in", csv.string()}).code == 2);
    std::filesystem::remove(csv);
    std::filesystem::remove(svg);
}

TEST_CASE("usage and help") {
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
    for (const char* sub : {"overhead", "decompose", "verify", "experiment", "plot"}) {
        const Run h = run({sub, "--help"});
        CAPTURE(sub);
        CHECK(h.code == 0);
        CHECK_FALSE(h.out.empty());
    }
    const Run h = run({"experiment", "--help"});
    for (const char* flag : {"--config", "--f", "--shots", "--n-states", "--seed", "--mode", "--threads", "--unpaired",
                             "--identity-prep", "--out"})
        CHECK(h.out.find(flag) != std::string::npos);
    CHECK(h.out.find(kSeedEnvVar) != std::string::npos);
    CHECK(h.out.find("250,500,...,5000") != std::string::npos);
    CHECK(h.out.find("stratified") != std::string::npos);
}
