#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "tpx/io.hpp"

// End-to-end runs of the installed CLI binary (path injected by the build).

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string out_file = "/tmp/tpx_cli_out.txt";
    std::string cmd = std::string(TPX_CLI_PATH) + " " + args + " > " + out_file + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::stringstream ss;
    ss << in.rdbuf();
    return {code, ss.str()};
}

int line_count(const std::string& s) {
    int lines = 0;
    for (char c : s)
        if (c == '\n') ++lines;
    return lines;
}

} // namespace

TEST_CASE("partitions command") {
    RunResult two = run_cli("partitions --n 2");
    CHECK(two.exit_code == 0);
    CHECK(line_count(two.out) == 2);

    RunResult four = run_cli("partitions --n 4");
    CHECK(four.exit_code == 0);
    CHECK(line_count(four.out) == 15);

    RunResult over = run_cli("partitions --n 13");
    CHECK(over.exit_code == 2);

    RunResult json_fmt = run_cli("partitions --n 3 --format json");
    auto parsed = nlohmann::json::parse(json_fmt.out);
    CHECK(parsed.size() == 5);
    CHECK(parsed[0].get<std::string>() == "1,2,3");
}

TEST_CASE("gap lemma command and determinism") {
    RunResult a = run_cli("gap lemma --n 16 --k 1");
    REQUIRE(a.exit_code == 0);
    auto ra = nlohmann::json::parse(a.out);
    CHECK(ra["lambda"].get<double>() <= 1e-10);
    CHECK(ra["bound"] == "vacuous");

    RunResult b = run_cli("gap lemma --n 8 --k 2 --method dense --seed 99");
    RunResult c = run_cli("gap lemma --n 8 --k 2 --method dense --seed 99");
    REQUIRE(b.exit_code == 0);
    CHECK(b.out == c.out); // byte-identical report bodies

    RunResult bad = run_cli("gap lemma --n 3 --k 2");
    CHECK(bad.exit_code == 2); // N < 2k regime guard
}

TEST_CASE("classical gap command matches the library") {
    std::string perms_file = "/tmp/tpx_cli_perms.json";
    RunResult gen = run_cli("perms --n 16 --count 3 --seed 5 --out " + perms_file);
    REQUIRE(gen.exit_code == 0);

    RunResult gap = run_cli("gap classical --ensemble " + perms_file + " --copies 2 --seed 5");
    REQUIRE(gap.exit_code == 0);
    auto report = nlohmann::json::parse(gap.out);

    tpx::PermDistribution nu = tpx::io::load_perm_distribution(perms_file);
    tpx::GapOptions opts;
    opts.seed = 5;
    tpx::GapReport lib = tpx::classical_gap(nu, 2, opts);
    CHECK(report["lambda"].get<double>() == *lib.lambda);
    CHECK(report["method"] == "blockwise");
    CHECK(report["d"] == 3);
}

TEST_CASE("construct and design pipeline") {
    std::string perms_file = "/tmp/tpx_cli_perms4.json";
    std::string ens_file = "/tmp/tpx_cli_ens4.json";
    std::string rep_file = "/tmp/tpx_cli_rep4.json";
    REQUIRE(run_cli("perms --n 4 --count 3 --seed 7 --out " + perms_file).exit_code == 0);
    RunResult cons = run_cli("construct --ensemble " + perms_file + " --k 1 --out-ensemble " +
                             ens_file + " --out-report " + rep_file);
    REQUIRE(cons.exit_code == 0);

    auto ens = nlohmann::json::parse(tpx::io::read_file(ens_file));
    CHECK(ens["entries"].size() == 4); // D + 1
    double total = 0.0;
    for (const auto& e : ens["entries"]) total += e["weight"].get<double>();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    auto rep = nlohmann::json::parse(tpx::io::read_file(rep_file));
    CHECK(rep["p"].get<double>() ==
          doctest::Approx(1.0 / (1.0 + rep["eps_c"].get<double>())).epsilon(1e-12));

    // design run: distance present at this dimension and within target
    RunResult design = run_cli("design --ensemble " + ens_file + " --epsilon 0.01");
    REQUIRE(design.exit_code == 0);
    auto spec = nlohmann::json::parse(design.out);
    CHECK(spec.contains("distance"));
    CHECK(spec["distance"].get<double>() <= 0.01);
    CHECK(spec["m"].get<int>() >= 1);

    // a deliberately understated lambda makes m too small -> exit 4
    RunResult fail = run_cli("design --ensemble " + ens_file + " --epsilon 1e-6 --lambda 0.05");
    CHECK(fail.exit_code == 4);
}

TEST_CASE("verify command exit codes and failure injection") {
    CHECK(run_cli("verify --suite mobius").exit_code == 0);
    RunResult injected = run_cli("verify --suite mobius --inject-failure");
    CHECK(injected.exit_code != 0);
    CHECK(injected.out.find("[FAIL] zeta-mobius-inverse-n2") != std::string::npos);
}

TEST_CASE("sweep command") {
    RunResult sweep = run_cli("sweep lemma --k 2 --n 16:256:x4");
    REQUIRE(sweep.exit_code == 0);
    std::istringstream lines(sweep.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "n,k,method,lambda,bound,runtime_ms");
    int rows = 0;
    double prev = 1e300;
    std::string row;
    while (std::getline(lines, row)) {
        ++rows;
        auto first = row.find(',');
        auto second = row.find(',', first + 1);
        auto third = row.find(',', second + 1);
        auto fourth = row.find(',', third + 1);
        double lambda = std::stod(row.substr(third + 1, fourth - third - 1));
        CHECK(lambda <= prev * 1.1); // nonincreasing within 10% slack
        prev = lambda;
    }
    CHECK(rows == 3); // 16, 64, 256
}
