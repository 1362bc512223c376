#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code{-1};
    std::string output; // stdout + stderr
};

// Runs the installed CLI with VARFIELD_COLOR=0 and captures combined output.
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    fs::path out = fs::temp_directory_path() /
                   ("varfield_cli_" + std::to_string(++counter) + ".txt");
    std::string cmd = "VARFIELD_COLOR=0 \"" VARFIELD_CLI_PATH "\" " + args + " > \"" +
                      out.string() + "\" 2>&1";
    int status = std::system(cmd.c_str());
    RunResult r;
#ifdef _WIN32
    r.exit_code = status;
#else
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
#endif
    std::ifstream in(out);
    std::ostringstream os;
    os << in.rdbuf();
    r.output = os.str();
    fs::remove(out);
    return r;
}

std::string data(const std::string& name) {
    return std::string("\"") + VARFIELD_DATA_DIR "/" + name + "\"";
}

} // namespace

TEST_CASE("derive prints one equation per varied component") {
    RunResult r = run_cli("derive " + data("wave.lag"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("psi: 0 =") != std::string::npos);
    CHECK(r.output.find("d2psi/dt^2") != std::string::npos);
    // VARFIELD_COLOR=0 strips ANSI escapes.
    CHECK(r.output.find('\033') == std::string::npos);
}

TEST_CASE("derive --format json emits a JSON equation array") {
    RunResult r = run_cli("derive " + data("wave.lag") + " --format json");
    CHECK(r.exit_code == 0);
    auto j = nlohmann::json::parse(r.output);
    REQUIRE(j.is_array());
    REQUIRE(j.size() == 1);
    CHECK(j[0]["field"] == "psi");

    RunResult em = run_cli("derive " + data("electrodynamics.lag") + " --format json");
    CHECK(em.exit_code == 0);
    CHECK(nlohmann::json::parse(em.output).size() == 4);
}

TEST_CASE("--out writes the report to a file") {
    fs::path out = fs::temp_directory_path() / "varfield_out.txt";
    RunResult r = run_cli("derive " + data("wave.lag") + " --out \"" + out.string() + "\"");
    CHECK(r.exit_code == 0);
    std::ifstream in(out);
    std::ostringstream os;
    os << in.rdbuf();
    CHECK(os.str().find("psi: 0 =") != std::string::npos);
    fs::remove(out);
}

TEST_CASE("transform applies a map file") {
    RunResult r = run_cli("transform " + data("wave.lag") + " " + data("scaling.map"));
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("det: 8") != std::string::npos);
    CHECK(r.output.find("field psib[1];") != std::string::npos);
}

TEST_CASE("demo-em verifies the Maxwell derivation") {
    RunResult r = run_cli("demo-em");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);

    RunResult withf = run_cli("demo-em --targets " + data("em_targets.json"));
    CHECK(withf.exit_code == 0);

    RunResult j = run_cli("demo-em --format json");
    CHECK(j.exit_code == 0);
    CHECK(nlohmann::json::parse(j.output)["all_match"] == true);
}

TEST_CASE("demo-em detects perturbed targets") {
    std::ifstream in(VARFIELD_DATA_DIR "/em_targets.json");
    auto targets = nlohmann::json::parse(in);
    // Corrupt one coefficient of the phi target.
    targets[0]["lhs_tree"]["terms"][0]["coeff"] = "7/3";
    fs::path bad = fs::temp_directory_path() / "varfield_bad_targets.json";
    std::ofstream(bad) << targets.dump();
    RunResult r = run_cli("demo-em --targets \"" + bad.string() + "\"");
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("FAIL") != std::string::npos);
    fs::remove(bad);
}

TEST_CASE("check runs a small refinement study deterministically") {
    std::string args = "check " + data("wave.lag") +
                       " --nt 5 --nx 5 --levels 3 --variations 3 --seed 4242 --format csv";
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("h,value,error,estimated_order") != std::string::npos);
}

TEST_CASE("exit codes distinguish domain failures from I/O failures") {
    CHECK(run_cli("derive " + data("no_such_file.lag")).exit_code == 2);
    // Invalid DSL input is a domain failure.
    fs::path bad = fs::temp_directory_path() / "varfield_bad.lag";
    std::ofstream(bad) << "field psi[1];\nL = dt(dt(psi))\n";
    CHECK(run_cli("derive \"" + bad.string() + "\"").exit_code == 1);
    fs::remove(bad);
    // Too-coarse grids are a domain failure too.
    CHECK(run_cli("check " + data("wave.lag") + " --nx 3").exit_code == 1);
}
