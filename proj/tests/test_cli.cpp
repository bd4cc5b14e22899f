// End-to-end checks of the installed CLI: exit codes, report emission,
// bit-exact replay. Drives the real binary through std::system.

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace {

const std::string kCli = VALLAB_CLI_PATH;

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>/dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json load(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    nlohmann::json j;
    in >> j;
    return j;
}

} // namespace

TEST_CASE("exit codes") {
    CHECK(run("verify-suite valuation-law --space uniform:64 --trials 20 --seed 7") == 0);
    CHECK(run("verify-suite no-such-suite") == 2);
    CHECK(run("verify-suite valuation-law --space /nonexistent/space.json") == 2);
    // A tolerance below the observed rounding floor fails the suite.
    CHECK(run("verify-suite valuation-law --space uniform:64 --trials 20 --seed 7 --tol 1e-30") ==
          1);
    CHECK(run("probe c0-series --n 5") == 0);
    CHECK(run("probe boundedness --space uniform:512 --delta 0.5 --q 2 --trials 3") == 0);
    CHECK(run("decompose --space uniform:8 --kernel sine --f [1,2,0.5,1,1,1,1,1]") == 0);
    CHECK(run("recover --space uniform:32 --kernel power:2 --trials 10") == 0);
}

TEST_CASE("reports replay bit-exactly") {
    const std::string report_path = "cli_report_test.json";
    CHECK(run("verify-suite recovery --space uniform:32 --trials 10 --seed 19 --out " +
              report_path) == 0);
    const nlohmann::json original = load(report_path);
    CHECK(original["pass"].get<bool>());

    CHECK(run("replay " + report_path) == 0);

    // Tampering with the recorded defect makes replay fail.
    nlohmann::json tampered = original;
    tampered["max_defect"] = 0.125;
    {
        std::ofstream out("cli_report_tampered.json");
        out << tampered.dump();
    }
    CHECK(run("replay cli_report_tampered.json") == 1);
    CHECK(run("replay /nonexistent/report.json") == 2);
    {
        std::ofstream out("cli_not_a_report.json");
        out << "{\"foo\": 1}";
    }
    CHECK(run("replay cli_not_a_report.json") == 2);
}

TEST_CASE("identical invocations emit byte-identical defects") {
    CHECK(run("verify-suite orthogonality --space uniform:64 --trials 25 --seed 3 --out "
              "cli_det_a.json") == 0);
    CHECK(run("verify-suite orthogonality --space uniform:64 --trials 25 --seed 3 --out "
              "cli_det_b.json") == 0);
    const nlohmann::json a = load("cli_det_a.json");
    const nlohmann::json b = load("cli_det_b.json");
    CHECK(a["max_defect"].dump() == b["max_defect"].dump());
}

TEST_CASE("csv flag writes a summary") {
    CHECK(run("verify-suite valuation-law --space uniform:32 --trials 5 --seed 1 --out "
              "cli_csv_test.json --csv") == 0);
    std::ifstream csv("cli_csv_test.json.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == "suite,pass,max_defect,seed,trials,tol,wall_time_s");
}
