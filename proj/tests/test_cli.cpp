#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Sandbox {
    fs::path dir;
    Sandbox() {
        dir = fs::temp_directory_path() / ("rtslearn_cli_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }

    void write(const std::string& name, const std::string& text) const { std::ofstream(dir / name) << text; }
    std::string read(const fs::path& rel) const {
        std::ifstream in(dir / rel, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    int run(const std::string& args) const {
        const std::string cmd = "cd '" + dir.string() + "' && '" RTSLEARN_CLI "' " + args + " >/dev/null 2>err.txt";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
};

const char* kConfig = R"({"alpha": 0.5, "horizon": 25, "labor_supply": 10, "seed": 2,
  "sectors": [{"zeta_star": 0.5, "sigma": 0.1, "tau": 0.1, "zeta0": 0.1},
              {"zeta_star": 0.3, "sigma": 0.2, "tau": 0.1, "zeta0": 0.8}]})";

}  // namespace

TEST_CASE("simulate writes a trajectory and manifest") {
    Sandbox sb;
    sb.write("c.json", kConfig);
    REQUIRE(sb.run("simulate --config c.json --out runs --seed 17") == 0);
    CHECK(sb.read("runs/trajectory.csv").rfind("t,sector,w,l,x,p,zeta,zeta_hat,gdp,labor_share\n", 0) == 0);
    const auto m = nlohmann::json::parse(sb.read("runs/manifest.json"));
    CHECK(m.at("seed") == 17);
    CHECK(m.at("config").at("seed") == 17);
    CHECK(m.contains("version"));
    CHECK(m.at("wall_clock_seconds").get<double>() >= 0.0);

    CHECK(sb.run("simulate --config c.json --out runs") == 1);
    CHECK(sb.read("err.txt").find("--force") != std::string::npos);
    CHECK(sb.run("simulate --config c.json --out runs --force") == 0);
}

TEST_CASE("ensemble output is reproducible") {
    Sandbox sb;
    sb.write("c.json", kConfig);
    REQUIRE(sb.run("ensemble --config c.json --reps 30 --seed 7 --threads 1 --out a") == 0);
    REQUIRE(sb.run("ensemble --config c.json --reps 30 --seed 7 --threads 3 --out b") == 0);
    CHECK(sb.read("a/ensemble.csv") == sb.read("b/ensemble.csv"));
    CHECK(sb.read("a/zeta_band.csv") == sb.read("b/zeta_band.csv"));
    CHECK(sb.read("a/summary.json") == sb.read("b/summary.json"));
}

TEST_CASE("scenario and moments") {
    Sandbox sb;
    REQUIRE(sb.run("scenario example2 --reps 10 --out ex2") == 0);
    for (const char* f : {"histogram_zeta0_0.1.csv", "histogram_zeta0_0.5.csv", "histogram_zeta0_0.9.csv",
                          "table2.csv", "manifest.json"})
        CHECK(fs::exists(sb.dir / "ex2" / f));
    CHECK(sb.run("scenario nope --out x") == 1);
    CHECK(sb.run("scenario --list") == 0);
    sb.write("c.json", kConfig);
    CHECK(sb.run("moments --config c.json --out m") == 0);
    CHECK(fs::exists(sb.dir / "m" / "moments.csv"));
}

TEST_CASE("high-dimensional subcommand") {
    Sandbox sb;
    sb.write("h.json", R"({"beta_star": [[0.3, 0.2], [0.1, 0.4]], "sigma": 0.1, "tau": 0.5, "horizon": 10})");
    REQUIRE(sb.run("highdim --config h.json --out hd") == 0);
    CHECK(sb.read("hd/elasticity_trace.csv").rfind("t,firm,input,beta,beta_star,active\n", 0) == 0);
}

TEST_CASE("exit codes") {
    Sandbox sb;
    sb.write("bad.json", "{\n  \"alpha\": 0.5,\n  \"horizon\": ,\n}");
    CHECK(sb.run("simulate --config bad.json --out o") == 1);
    CHECK(sb.read("err.txt").find("line 3") != std::string::npos);
    sb.write("unknown.json", R"({"alpha": 0.5, "horizon": 5, "labor_supply": 10, "sectors": [], "extra": 1})");
    CHECK(sb.run("simulate --config unknown.json --out o") == 1);
    CHECK(sb.read("err.txt").find("extra") != std::string::npos);
    CHECK(sb.run("simulate --config missing.json --out o") == 3);
    CHECK(sb.run("frobnicate") == 1);
    sb.write("huge.json", R"({"alpha": 0.01, "horizon": 3, "labor_supply": 1e300, "l0": 0,
      "sectors": [{"zeta_star": 0.5, "sigma": 0.1, "tau": 0.1, "zeta0": 0.1}]})");
    CHECK(sb.run("simulate --config huge.json --out o") == 2);
    sb.write("c.json", kConfig);
    sb.write("blocker", "");
    CHECK(sb.run("simulate --config c.json --out blocker/sub") == 3);
}
