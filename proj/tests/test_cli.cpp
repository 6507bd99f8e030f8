#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "marginforge/io.hpp"
#include "testutil.hpp"

namespace {

namespace fs = std::filesystem;

struct CliSandbox {
    fs::path dir;
    CliSandbox() {
        dir = fs::temp_directory_path() / "marginforge_cli_test";
        fs::create_directories(dir);
    }
    std::string file(const std::string& name) const { return (dir / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MARGINFORGE_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("gen-data writes a readable dataset") {
    CliSandbox sandbox;
    const auto out = sandbox.file("blob.csv");
    CHECK(run_cli("gen-data --m 30 --dim 2 --seed 7 --out " + out) == 0);
    CHECK(std::filesystem::exists(out));
    const auto ds = marginforge::io::load_dataset(out, marginforge::io::DatasetFormat::Csv);
    CHECK(ds.size() == 60);
    CHECK(ds.dim() == 2);
}

TEST_CASE("train-dual emits a model with the contract keys") {
    CliSandbox sandbox;
    const auto data = sandbox.file("train.csv");
    const auto model = sandbox.file("model.json");
    REQUIRE(run_cli("gen-data --m 25 --dim 2 --seed 3 --out " + data) == 0);
    CHECK(run_cli("train-dual --data " + data + " --theta ball:0,0,0:10 --C 1 --tol 1e-8 --model " +
                  model) == 0);
    const auto text = slurp(model);
    for (const char* key : {"\"w\"", "\"lambda\"", "\"theta\"", "\"C\"", "\"dual_value\"", "\"gap\""}) {
        CHECK(text.find(key) != std::string::npos);
    }
}

TEST_CASE("diagnose reports near-zero kkt residuals on the shipped fixture") {
    CliSandbox sandbox;
    const std::string data = std::string(MARGINFORGE_FIXTURE_DIR) + "/two_point.csv";
    const auto model = sandbox.file("twopoint_model.json");
    REQUIRE(run_cli("train-dual --data " + data + " --theta whole --hard --tol 1e-12 --max-iter 8000 --model " +
                    model) == 0);
    const auto report = sandbox.file("report.json");
    REQUIRE(run_cli("diagnose --data " + data + " --model " + model + " --out " + report) == 0);
    const auto text = slurp(report);
    // all four residuals present; spot-check they parse as small numbers
    const auto grab = [&text](const std::string& key) {
        const auto pos = text.find('"' + key + '"');
        REQUIRE(pos != std::string::npos);
        return std::strtod(text.c_str() + text.find(':', pos) + 1, nullptr);
    };
    CHECK(grab("stationarity") <= 1e-6);
    CHECK(grab("primal_feasibility") <= 1e-6);
    CHECK(grab("dual_feasibility") <= 1e-6);
    CHECK(grab("complementarity") <= 1e-6);
}

TEST_CASE("compare surfaces a nonnegative gap") {
    CliSandbox sandbox;
    const auto data = sandbox.file("cmp.csv");
    REQUIRE(run_cli("gen-data --m 20 --dim 2 --seed 5 --out " + data) == 0);
    const auto out = sandbox.file("cmp.json");
    REQUIRE(run_cli("compare --data " + data + " --theta whole --C 1 --iters 4000 --out " + out) ==
            0);
    const auto text = slurp(out);
    const auto pos = text.find("\"gap\"");
    REQUIRE(pos != std::string::npos);
    const double gap = std::strtod(text.c_str() + text.find(':', pos) + 1, nullptr);
    CHECK(gap >= -1e-9);
    CHECK(text.find("\"weak_duality_violated\": false") != std::string::npos);
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("train-dual") == 1);                    // missing --data
    CHECK(run_cli("no-such-subcommand") == 1);
    CliSandbox sandbox;
    const auto data = sandbox.file("usage.csv");
    REQUIRE(run_cli("gen-data --m 5 --dim 2 --seed 1 --out " + data) == 0);
    CHECK(run_cli("train-dual --data " + data + " --theta ball:0,0:nope") == 1);
}

TEST_CASE("numerical failure exits with code 2") {
    CliSandbox sandbox;
    const auto data = sandbox.file("overflow.csv");
    {
        std::ofstream out(data);
        out << "1,1e308,0\n-1,-1e308,0\n";  // first subgradient step overflows the quadratic
    }
    CHECK(run_cli("train-primal --data " + data +
                  " --theta whole --C 1 --schedule pegasos --max-iter 50") == 2);
}

TEST_CASE("an unsatisfiable hard margin exits with code 3") {
    CliSandbox sandbox;
    const auto data = sandbox.file("clash.csv");
    {
        std::ofstream out(data);
        out << "1,1,0\n-1,1,0\n";  // identical point, opposite labels
    }
    CHECK(run_cli("train-dual --data " + data +
                  " --theta whole --hard --tol 1e-12 --max-iter 20000 --infeasible-above 1e4") ==
          3);
}

TEST_CASE("traces are byte identical across repeated runs") {
    CliSandbox sandbox;
    const auto data = sandbox.file("det.csv");
    REQUIRE(run_cli("gen-data --m 15 --dim 2 --seed 11 --out " + data) == 0);

    const auto t1 = sandbox.file("trace1.csv");
    const auto t2 = sandbox.file("trace2.csv");
    const std::string primalArgs = " --data " + data +
                                   " --theta whole --C 1 --schedule pegasos --max-iter 500 --seed 9 "
                                   "--batch 2 --trace ";
    REQUIRE(run_cli("train-primal" + primalArgs + t1) == 0);
    REQUIRE(run_cli("train-primal" + primalArgs + t2) == 0);
    CHECK(slurp(t1) == slurp(t2));
    CHECK(!slurp(t1).empty());

    const auto d1 = sandbox.file("dtrace1.csv");
    const auto d2 = sandbox.file("dtrace2.csv");
    const std::string dualArgs =
        " --data " + data + " --theta ball:0,0,0:5 --C 1 --tol 1e-10 --max-iter 800 --trace ";
    REQUIRE(run_cli("train-dual" + dualArgs + d1) == 0);
    REQUIRE(run_cli("train-dual" + dualArgs + d2) == 0);
    CHECK(slurp(d1) == slurp(d2));
}
