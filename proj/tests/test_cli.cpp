#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("cnlse_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const std::string& args, const std::string& redirect = "> /dev/null 2>&1") {
    const std::string cmd = std::string("\"") + CNLSE_CLI_PATH + "\" " + args + " " + redirect;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p) << text;
}

} // namespace

TEST_CASE("figures are deterministic") {
    for (int which : {1, 2, 3}) {
        const auto a = scratch("fig_a" + std::to_string(which));
        const auto b = scratch("fig_b" + std::to_string(which));
        const std::string cmd = "figure " + std::to_string(which) + " -q --out ";
        CHECK(run(cmd + a.string()) == 0);
        CHECK(run(cmd + b.string()) == 0);
        int files = 0;
        for (const auto& e : fs::directory_iterator(a)) {
            const fs::path other = b / e.path().filename();
            REQUIRE(fs::exists(other));
            CHECK_MESSAGE(slurp(e.path()) == slurp(other), e.path().filename().string());
            ++files;
        }
        CHECK(files >= 2);
    }
}

TEST_CASE("figure tables have the fixed headers") {
    const auto d = scratch("headers");
    REQUIRE(run("figure 1 -q --out " + d.string()) == 0);
    REQUIRE(run("figure 2 -q --out " + d.string()) == 0);
    REQUIRE(run("figure 3 -q --out " + d.string()) == 0);
    auto header = [&](const char* f) {
        std::ifstream in(d / f);
        std::string line;
        std::getline(in, line);
        return line;
    };
    CHECK(header("figure1.csv") == "f0,R2");
    CHECK(header("figure2.csv") == "t,delta,curve_residual");
    for (const char* f : {"figure3a.csv", "figure3b.csv", "figure3c.csv"})
        CHECK(header(f) == "t,z,re_psi,im_psi,abs2");
}

TEST_CASE("exit codes") {
    const auto d = scratch("exit");
    const std::string out = " -q --out " + d.string();
    CHECK(run("verify --family sech --a 1 --c1 1 --c2 0 --c3 0" + out) == 0);
    // Far below rounding: the residual cannot meet it.
    CHECK(run("verify --family sech --a 1 --c1 1 --c2 0 --c3 0 --tolerance 1e-30" + out) == 1);
    CHECK(run("classify --a -1 --c1 -2 --c2 -1" + out) == 0);
    CHECK(run("audit" + out) == 0);
    CHECK(run("verify --nonsense" + out) == 2);
    CHECK(run("verify --family cn" + out) == 2);
    CHECK(run("verify --a 0" + out) == 2);
    // g-families need c3 = 0.
    CHECK(run("verify --family g+ --c3 0.5" + out) == 2);
    write(d / "bad.json", R"({"grid": {"n_t": 40, "oops": 1}})");
    CHECK(run("verify --config " + (d / "bad.json").string() + out) == 2);
}

TEST_CASE("counterexample exit code follows the reproduced flag") {
    const auto d = scratch("ce");
    write(d / "control.json",
          R"({"generic": {"f0_rule": "explicit", "f0_value": 0.008217}})");
    const int code = run("counterexample --config " + (d / "control.json").string() + " -q --out " +
                         d.string());
    CHECK(code == 0);
    const std::string report = slurp(d / "counterexample.json");
    CHECK(report.find("\"reproduced\": true") != std::string::npos);

    const int text_code = run("counterexample -q --out " + d.string());
    const std::string text_report = slurp(d / "counterexample.json");
    const bool reproduced = text_report.find("\"reproduced\": true") != std::string::npos;
    CHECK(text_code == (reproduced ? 0 : 1));
}

TEST_CASE("dump-config round trip") {
    const auto d = scratch("dump");
    const auto first = d / "first.json";
    const auto second = d / "second.json";
    REQUIRE(run("counterexample --c3 0.131 --convention derived --n-t 301 --dump-config",
                "> " + first.string()) == 0);
    REQUIRE(run("counterexample --config " + first.string() + " --dump-config",
                "> " + second.string()) == 0);
    CHECK(slurp(first) == slurp(second));
    CHECK(slurp(first).find("0.131") != std::string::npos);
}
