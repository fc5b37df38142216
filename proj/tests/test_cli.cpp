#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rlrs/io.hpp"

namespace fs = std::filesystem;

namespace {

std::string g_cli;

int run_cli(const std::string& args) {
    const int rc = std::system((g_cli + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("rlrs-cli-" + tag + "-" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::size_t data_rows(const fs::path& csv) {
    std::ifstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    return rows;
}

}  // namespace

TEST_CASE("gen writes loadable instances plus a config record") {
    TempDir tmp("gen");
    const std::string out = (tmp.path / "g").string();
    REQUIRE(run_cli("gen --d 8 --r 2 --m 40 --p 0.2 --seeds 3 --seeds 4 --out " + out) == 0);

    for (const int seed : {3, 4}) {
        const rlrs::ProblemInstance inst =
            rlrs::load_instance(fs::path(out) / ("instance_seed" + std::to_string(seed) + ".rlrs"));
        CHECK(inst.dim() == 8);
        CHECK(inst.measurements() == 40);
        CHECK(inst.truth.rank == 2);
        CHECK(inst.meta.seed == static_cast<std::uint64_t>(seed));
    }
    const std::string meta = slurp(fs::path(out) / "gen_config.json");
    CHECK(meta.find("config_hash") != std::string::npos);
}

TEST_CASE("run with zero iterations emits a single-row trace and a summary") {
    TempDir tmp("run");
    const std::string out = (tmp.path / "r").string();
    REQUIRE(run_cli("run --d 8 --r 2 --m 40 --p 0.2 --iters 0 --seeds 7 --out " + out) == 0);

    const fs::path trace = fs::path(out) / "trace_adaptive_seed7.csv";
    REQUIRE(fs::exists(trace));
    std::ifstream in(trace);
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,op_error,fro_error,objective,eta,tau");
    CHECK(data_rows(trace) == 1);
    CHECK(fs::exists(fs::path(out) / "summary.json"));
}

TEST_CASE("repeated runs are byte identical") {
    TempDir tmp("repro");
    const std::string a = (tmp.path / "a").string();
    const std::string b = (tmp.path / "b").string();
    const std::string args = "run --d 10 --r 2 --m 100 --p 0.2 --iters 25 --seeds 11 --out ";
    REQUIRE(run_cli(args + a) == 0);
    REQUIRE(run_cli(args + b) == 0);
    CHECK(slurp(fs::path(a) / "trace_adaptive_seed11.csv") ==
          slurp(fs::path(b) / "trace_adaptive_seed11.csv"));
}

TEST_CASE("sweep accounts for every rule, seed, and iterate") {
    TempDir tmp("sweep");
    const std::string out = (tmp.path / "s").string();
    REQUIRE(run_cli("sweep --d 8 --r 2 --m 60 --p 0.0 --iters 10 --seeds 1 --seeds 2 --out " +
                    out) == 0);
    // 5 rules x 2 seeds x (10 + 1) records unless a run stops early; with
    // p = 0 and these rules none should at this scale.
    CHECK(data_rows(fs::path(out) / "sweep.csv") <= 5 * 2 * 11);
    CHECK(data_rows(fs::path(out) / "sweep.csv") >= 5 * 2 * 2);
    CHECK(fs::exists(fs::path(out) / "sweep_summary.json"));
}

TEST_CASE("config file values are applied and flags still override") {
    TempDir tmp("cfg");
    const fs::path cfg = tmp.path / "cfg.json";
    std::ofstream(cfg) << R"({"d": 9, "r": 2, "m": 30, "p": 0.0, "iters": 0, "seeds": [5]})";
    const std::string out = (tmp.path / "c").string();
    REQUIRE(run_cli("run --config " + cfg.string() + " --iters 2 --out " + out) == 0);
    CHECK(data_rows(fs::path(out) / "trace_adaptive_seed5.csv") == 3);
}

TEST_CASE("failure exit codes") {
    TempDir tmp("err");
    const std::string out = (tmp.path / "e").string();
    CHECK(run_cli("run --d 8 --r 2 --m 20 --rule bogus --iters 0 --seeds 1 --out " + out) == 2);
    CHECK(run_cli("run --d 8 --r 2 --m 20 --p 1.5 --iters 0 --seeds 1 --out " + out) == 2);
    CHECK(run_cli("run --config /nonexistent/cfg.json --out " + out) == 3);
    CHECK(run_cli("gen --d 500 --r 2 --m 100000 --seeds 1 --budget-bytes 1000000 --out " + out) ==
          4);
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_tests <path-to-cli> [doctest args]\n");
        return 1;
    }
    g_cli = argv[1];
    doctest::Context ctx;
    ctx.applyCommandLine(argc - 1, argv + 1);
    return ctx.run();
}
