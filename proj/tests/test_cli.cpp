#include <json.hpp>

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Sandbox {
    fs::path dir;
    Sandbox() {
        dir = fs::temp_directory_path() / ("medwit_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Sandbox() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    fs::path write(const std::string& name, const std::string& text) const {
        const fs::path p = dir / name;
        std::ofstream(p) << text;
        return p;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the CLI with `args`; stdout and stderr go to files in the sandbox.
int medwit(const Sandbox& sb, const std::string& args) {
    const std::string cmd = std::string("'") + MEDWIT_BIN + "' " + args + " > '" + (sb.dir / "stdout").string() +
                            "' 2> '" + (sb.dir / "stderr").string() + "'";
    const int rc = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(rc));
    return WEXITSTATUS(rc);
}

std::string quoted(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("usage and listing") {
    Sandbox sb;
    CHECK(medwit(sb, "list-scenarios") == 0);
    const std::string out = slurp(sb.dir / "stdout");
    for (const char* name : {"appendix-b", "max-entangler", "swap-dilation", "strict-inclusion", "trotter-sweep",
                             "gravity-threshold", "classical-control"}) {
        CHECK(out.find(name) != std::string::npos);
    }
    CHECK(medwit(sb, "--version") == 0);
    CHECK(slurp(sb.dir / "stdout").find("0.1.0") != std::string::npos);
    CHECK(medwit(sb, "--help") == 0);
    CHECK(medwit(sb, "") == 1);
    CHECK(medwit(sb, "frobnicate") == 1);
    CHECK(medwit(sb, "run") == 1);
    CHECK(medwit(sb, "run x.json --seed notanumber") == 1);
}

TEST_CASE("validate") {
    Sandbox sb;
    const auto good = sb.write("good.json", R"({"scenario": "strict-inclusion", "m": 2})");
    CHECK(medwit(sb, "validate " + quoted(good)) == 0);
    const auto echoed = nlohmann::json::parse(slurp(sb.dir / "stdout"));
    CHECK(echoed["m"] == 2);
    CHECK(echoed["dims"] == nlohmann::json::array({4, 2, 4}));

    const auto unknown = sb.write("unknown.json", R"({"scenario": "strict-inclusion", "mm": 2})");
    CHECK(medwit(sb, "validate " + quoted(unknown)) == 1);
    CHECK(slurp(sb.dir / "stderr").find("'mm'") != std::string::npos);

    const auto broken = sb.write("broken.json", "{\n  \"scenario\": \"strict-inclusion\",,\n}");
    CHECK(medwit(sb, "validate " + quoted(broken)) == 1);
    CHECK(slurp(sb.dir / "stderr").find("line 2") != std::string::npos);

    CHECK(medwit(sb, "validate " + quoted(sb.dir / "missing.json")) == 1);
}

TEST_CASE("run writes results and honours overrides") {
    Sandbox sb;
    const auto cfg = sb.write("g.json", R"({"scenario": "gravity-threshold", "output": "ignored"})");
    const fs::path out = sb.dir / "out";
    CHECK(medwit(sb, "run " + quoted(cfg) + " --out " + quoted(out)) == 0);
    const std::string csv = slurp(out / "results.csv");
    CHECK(csv.rfind("scenario,paper_eq,lhs,capacity,total_corr,bound,violation,nd_lower_bound,status,seed\r\n", 0) ==
          0);
    const auto man = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(man["invariants_hold"] == true);
    CHECK(man["scenario"] == "gravity-threshold");

    const auto swap = sb.write("s.json", R"({"scenario": "swap-dilation", "seed": 1, "samples": 4, "restarts": 1})");
    const fs::path out2 = sb.dir / "out2";
    CHECK(medwit(sb, "run " + quoted(swap) + " --seed 42 --out " + quoted(out2)) == 0);
    const std::string csv2 = slurp(out2 / "results.csv");
    CHECK(csv2.find(",42\r\n") != std::string::npos);
    CHECK(csv2.find(",1\r\n") == std::string::npos);

    // Randomized scenario without any seed is a config error.
    const auto noseed = sb.write("n.json", R"({"scenario": "swap-dilation"})");
    CHECK(medwit(sb, "run " + quoted(noseed) + " --out " + quoted(sb.dir / "out3")) == 1);
    CHECK(medwit(sb, "run " + quoted(noseed) + " --seed 3 --out " + quoted(sb.dir / "out3")) == 0);
}

TEST_CASE("an unmet invariant exits with 3") {
    Sandbox sb;
    // The allowed-order decomposition is exact only to rounding, so this tolerance cannot be met.
    const auto cfg = sb.write("b.json", R"({"scenario": "appendix-b", "seed": 2, "restarts": 2, "t_grid": [1],
                                           "tolerances": {"decomposition": 1e-30}})");
    CHECK(medwit(sb, "run " + quoted(cfg) + " --out " + quoted(sb.dir / "out")) == 3);
    CHECK(slurp(sb.dir / "stderr").find("allowed order is reproduced") != std::string::npos);
    const auto man = nlohmann::json::parse(slurp(sb.dir / "out" / "manifest.json"));
    CHECK(man["invariants_hold"] == false);
}
