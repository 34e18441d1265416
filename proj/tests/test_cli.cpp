#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "daeeda/harness.hpp"

using namespace daeeda;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

std::filesystem::path scratch() {
    auto dir = std::filesystem::temp_directory_path() / "daeeda_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

Result cli(const std::string& args) {
    const auto out_path = scratch() / "stdout.txt";
    const std::string cmd = std::string("\"") + DAEEDA_CLI_PATH + "\" " + args + " > \"" + out_path.string() +
                            "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    Result r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    return r;
}

} // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(cli("").code == 1);
    CHECK(cli("frobnicate").code == 1);
    CHECK(cli("run --problem trap -n 20 -k 4").code == 1); // seed is mandatory
    CHECK(cli("run --seed 1 --problem trap -n 21 -k 4").code == 1);
    CHECK(cli("run --seed 1 --popsize 10").code == 1);
    CHECK(cli("--help").code == 0);
}

TEST_CASE("runtime failures exit with 2") {
    CHECK(cli("solve-nk /nonexistent/instance.nk").code == 2);
    CHECK(cli("report /nonexistent/runs.csv").code == 2);
}

TEST_CASE("gen-nk and solve-nk") {
    const auto path = (scratch() / "inst.nk").string();
    REQUIRE(cli("gen-nk -n 10 -k 2 --seed 3 -o " + path).code == 0);
    auto inst = NkInstance::load(path);
    CHECK(inst == generate_nk(10, 2, 3));
    auto r = cli("solve-nk " + path);
    REQUIRE(r.code == 0);
    auto [x, f] = solve_nk_exact(inst);
    CHECK(r.out.rfind(x.to_string() + " ", 0) == 0);
}

TEST_CASE("run prints a record") {
    auto r = cli("run --problem trap -n 8 -k 4 --popsize 60 --seed 2");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("evaluations ") != std::string::npos);
    CHECK(r.out.find("stop ") != std::string::npos);
    auto p = cli("run --algo pbil --problem hiff -n 16 --popsize 20 --seed 2 --max-generations 5 --trace");
    REQUIRE(p.code == 0);
    CHECK(p.out.find("gen 5 ") != std::string::npos);
}

TEST_CASE("sweep and report") {
    const auto csv = (scratch() / "sweep.csv").string();
    const auto json = (scratch() / "summary.json").string();
    auto r = cli("sweep --problem trap -n 8 -k 4 --popsize-range 40 80 --runs 2 --seed 7 --max-generations 5 -o " +
                 csv);
    REQUIRE(r.code == 0);
    CHECK(r.out.find("4-Traps 8 bit") != std::string::npos);
    CHECK(read_csv_file(csv).size() == 4);
    auto rep = cli("report " + csv + " --json " + json);
    REQUIRE(rep.code == 0);
    CHECK(rep.out == r.out);
    CHECK(std::filesystem::file_size(json) > 0);
}
