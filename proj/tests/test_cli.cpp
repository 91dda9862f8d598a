#include <doctest.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "stabcert/bounds.hpp"
#include "stabcert/cli.hpp"
#include "stabcert/csv.hpp"
#include "stabcert/rng.hpp"

using namespace stabcert;

namespace {

std::string temp_path(const std::string& name) {
    return std::string("/tmp/stabcert_test_") + name;
}

int run_cli(std::initializer_list<std::string> args) {
    std::vector<std::string> argv{"stabcert"};
    argv.insert(argv.end(), args.begin(), args.end());
    return cli::run(argv);
}

}  // namespace

TEST_CASE("verify subcommand parses and certifies the worked setup") {
    const int code = run_cli({"verify", "--model", "sgn-cubic", "--dt", "0.01", "--steps",
                              "400", "--delta", "0.1", "--k", "2.6666666666666667", "--lambda",
                              "3", "--r0", "1.5", "--ell", "1.125"});
    CHECK(code == cli::kExitOk);
}

TEST_CASE("usage errors exit with 64") {
    CHECK(run_cli({"verify", "--dt", "0.01", "--ell", "1.0"}) == cli::kExitUsage);  // no model
    CHECK(run_cli({"verify", "--model", "sgn-cubic", "--ell", "1.0", "--no-such-flag", "1"}) ==
          cli::kExitUsage);
    CHECK(run_cli({}) == cli::kExitUsage);
}

TEST_CASE("data errors exit with 65") {
    CHECK(run_cli({"verify", "--model", "unknown-model", "--ell", "1.0"}) == cli::kExitData);
    CHECK(run_cli({"repro", "ex999"}) == cli::kExitData);
    CHECK(run_cli({"verify", "--model", "sgn-cubic", "--ell", "1.125", "--P", "1,2,3"}) ==
          cli::kExitData);
}

TEST_CASE("config file values are overridden by explicit flags") {
    const std::string cfg_path = temp_path("precedence.cfg");
    {
        std::ofstream cfg(cfg_path);
        cfg << "# config for the bounds table\n"
            << "model = sgn-cubic\n"
            << "dt = 0.01\n"
            << "t-min = 1\n"
            << "t-max = 2\n"
            << "t-step = 1\n";
    }
    const std::string out = temp_path("precedence.csv");

    SUBCASE("file value used when no flag is given") {
        REQUIRE(run_cli({"bounds", "--config", cfg_path, "--out", out}) == cli::kExitOk);
        std::ifstream in(out);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        CHECK(text.find("# dt=0.01") != std::string::npos);
    }

    SUBCASE("flag wins over the file") {
        REQUIRE(run_cli({"bounds", "--config", cfg_path, "--dt", "0.5", "--out", out}) ==
                cli::kExitOk);
        std::ifstream in(out);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        CHECK(text.find("# dt=0.5") != std::string::npos);
    }

    SUBCASE("unknown config keys are rejected as usage errors") {
        std::ofstream(cfg_path, std::ios::app) << "not-a-key = 1\n";
        CHECK(run_cli({"bounds", "--config", cfg_path, "--out", out}) == cli::kExitUsage);
    }

    std::remove(cfg_path.c_str());
    std::remove(out.c_str());
}

TEST_CASE("verdict exit codes") {
    // unstable linear growth under a fabricated stability claim
    CHECK(run_cli({"verify", "--model", "linear-1d", "--rate", "-1", "--dt", "0.01", "--steps",
                   "200", "--delta", "0.1", "--k", "2", "--lambda", "1", "--r0", "1", "--ell",
                   "0.5"}) == cli::kExitFalsified);
}

TEST_CASE("full-precision text round-trips bit-exactly") {
    SplitMix64 rng(71);
    for (int i = 0; i < 2000; ++i) {
        double value;
        switch (i % 5) {
            case 0: value = rng.uniform(-1.0, 1.0); break;
            case 1: value = rng.uniform(-1e300, 1e300); break;
            case 2: value = rng.uniform(0.0, 1.0) * 1e-300; break;
            case 3: value = -rng.uniform(0.0, 1e-10); break;
            default: value = rng.uniform(-1e6, 1e6); break;
        }
        const std::string text = format_double(value);
        const double parsed = std::strtod(text.c_str(), nullptr);
        CHECK(std::memcmp(&parsed, &value, sizeof(double)) == 0);
    }
}

TEST_CASE("emitted CSV rows re-read to the exact in-memory values") {
    const std::string out = temp_path("roundtrip.csv");
    REQUIRE(run_cli({"bounds", "--model", "sgn-cubic", "--dt", "0.01", "--k",
                     "2.6666666666666667", "--lambda", "3", "--r0", "1.5", "--t-min", "3",
                     "--t-max", "3", "--t-step", "1", "--out", out}) == cli::kExitOk);

    std::ifstream in(out);
    std::string line;
    std::vector<double> data;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'T') continue;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) data.push_back(std::strtod(cell.c_str(), nullptr));
    }
    REQUIRE(data.size() == 6);
    // recompute the same row through the library and compare bitwise
    const auto rows = bounds_table(0.75, 4.0, 0.01, IntegratorKind::RK4,
                                   StabilityParams{2.6666666666666667, 3.0, 1.5}, {3.0});
    const double expected[6] = {rows[0].T,         rows[0].a,           rows[0].b,
                                rows[0].exp_bound, rows[0].sqrt_a_term, rows[0].sqrt_b_term};
    for (int i = 0; i < 6; ++i) CHECK(std::memcmp(&data[i], &expected[i], sizeof(double)) == 0);
    std::remove(out.c_str());
}
