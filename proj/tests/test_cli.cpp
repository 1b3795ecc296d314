#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

// End-to-end checks against the built binary; the path arrives in NLROTHE_CLI.
namespace {

std::string cli_path() {
    const char* env = std::getenv("NLROTHE_CLI");
    return env ? env : "";
}

int run(const std::string& args, bool raw = false) {
    const std::string cmd = raw ? args : cli_path() + " " + args;
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("nlrothe_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
};

}  // namespace

TEST_CASE("cli binary is configured") { REQUIRE(!cli_path().empty()); }

TEST_CASE("help and usage errors") {
    CHECK(run("--help > /dev/null") == 0);
    CHECK(run("2> /dev/null") == 2);
    CHECK(run("frobnicate 2> /dev/null") == 2);
}

TEST_CASE("solve is byte-deterministic") {
    TempDir dir;
    const std::string base = " solve --m 12 --n_steps 6 --u0 bump:0.7 --f constant:0.3 ";
    CHECK(run(base + "--out_dir " + (dir.path / "a").string() + " 2> /dev/null") == 0);
    CHECK(run(base + "--out_dir " + (dir.path / "b").string() + " 2> /dev/null") == 0);
    const std::string ta = slurp(dir.path / "a" / "trajectory.csv");
    CHECK(!ta.empty());
    CHECK(ta == slurp(dir.path / "b" / "trajectory.csv"));
    CHECK(slurp(dir.path / "a" / "apriori.csv") == slurp(dir.path / "b" / "apriori.csv"));
}

TEST_CASE("config errors exit with 2") {
    TempDir dir;
    std::ofstream(dir.path / "bad.cfg") << "s = 1.5\n";
    CHECK(run("solve " + (dir.path / "bad.cfg").string() + " 2> /dev/null") == 2);
    std::ofstream(dir.path / "unk.cfg") << "mystery = 1\n";
    CHECK(run("solve " + (dir.path / "unk.cfg").string() + " 2> /dev/null") == 2);
    CHECK(run("solve /no/such/file.cfg 2> /dev/null") == 2);
}

TEST_CASE("verify and compare exit codes") {
    TempDir dir;
    const std::string common = "--m 12 --n_steps 6 --t_end 0.2 ";
    CHECK(run("verify " + common + "--u0 bump:0.6 --f constant:0.4 --out_dir " +
              (dir.path / "v").string() + " > /dev/null 2>&1") == 0);

    std::ofstream(dir.path / "small.cfg") << "m = 12\nn_steps = 6\nt_end = 0.2\n"
                                          << "u0 = bump:0.5\nf = constant:0.2\n"
                                          << "out_dir = " << (dir.path / "c").string() << "\n";
    std::ofstream(dir.path / "large.cfg") << "m = 12\nn_steps = 6\nt_end = 0.2\n"
                                          << "u0 = bump:0.5\nf = constant:0.9\n";
    // ordered pair passes, reversed pair fails with exit 1
    CHECK(run("compare " + (dir.path / "small.cfg").string() + " " +
              (dir.path / "large.cfg").string() + " > /dev/null 2>&1") == 0);
    CHECK(run("compare " + (dir.path / "large.cfg").string() + " " +
              (dir.path / "small.cfg").string() + " --out_dir " + (dir.path / "c2").string() +
              " > /dev/null 2>&1") == 1);
}

TEST_CASE("weights profile dump") {
    TempDir dir;
    CHECK(run("weights --m 8 --out_dir " + (dir.path / "w").string() + " 2> /dev/null") == 0);
    const std::string csv = slurp(dir.path / "w" / "weights_profile.csv");
    CHECK(csv.rfind("d,weight\n", 0) == 0);
    // header plus one row per separation
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);
}

TEST_CASE("solve on zero data emits a zero trajectory") {
    TempDir dir;
    CHECK(run("solve --m 8 --n_steps 4 --u0 constant:0 --f constant:0 --out_dir " +
              (dir.path / "z").string() + " 2> /dev/null") == 0);
    const std::string csv = slurp(dir.path / "z" / "trajectory.csv");
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        CHECK(line.substr(line.rfind(',') + 1) == "0");
    }
}

TEST_CASE("thread cap does not change the bytes") {
    TempDir dir;
    const std::string base = " solve --m 160 --n_steps 3 --u0 bump:0.7 --f constant:0.3 ";
    CHECK(run("NONLOCAL_ROTHE_THREADS=1 " + cli_path() + base + "--out_dir " +
              (dir.path / "t1").string() + " 2> /dev/null",
              true) == 0);
    CHECK(run("NONLOCAL_ROTHE_THREADS=3 " + cli_path() + base + "--out_dir " +
              (dir.path / "t3").string() + " 2> /dev/null",
              true) == 0);
    const std::string a = slurp(dir.path / "t1" / "trajectory.csv");
    CHECK(!a.empty());
    CHECK(a == slurp(dir.path / "t3" / "trajectory.csv"));
}

TEST_CASE("bench writes a timing table") {
    TempDir dir;
    CHECK(run("bench --bench_m 48 --bench_reps 2 --out_dir " + (dir.path / "b").string() +
              " 2> /dev/null") == 0);
    const std::string csv = slurp(dir.path / "b" / "bench.csv");
    CHECK(csv.rfind("operation,m,reps,total_seconds,per_call_seconds\n", 0) == 0);
    CHECK(csv.find("assemble,48,") != std::string::npos);
    CHECK(csv.find("apply,48,2,") != std::string::npos);
}

TEST_CASE("verify accepts an ingested trajectory") {
    TempDir dir;
    const std::string common = "--m 12 --n_steps 6 --t_end 0.2 --u0 bump:0.6 --f constant:0.4 ";
    CHECK(run("solve " + common + "--out_dir " + (dir.path / "s").string() +
              " 2> /dev/null") == 0);
    CHECK(run("verify " + common + "--trajectory_csv " +
              (dir.path / "s" / "trajectory.csv").string() + " --out_dir " +
              (dir.path / "v").string() + " > /dev/null 2>&1") == 0);
    const std::string report = slurp(dir.path / "v" / "report.csv");
    CHECK(report.find("weak_residual_max") != std::string::npos);
    CHECK(report.find("fail") == std::string::npos);
}

TEST_CASE("failing compare names the entry") {
    TempDir dir;
    std::ofstream(dir.path / "hi.cfg") << "m = 12\nn_steps = 6\nt_end = 0.2\n"
                                       << "u0 = bump:0.5\nf = constant:0.9\n"
                                       << "out_dir = " << (dir.path / "out").string() << "\n";
    std::ofstream(dir.path / "lo.cfg") << "m = 12\nn_steps = 6\nt_end = 0.2\n"
                                       << "u0 = bump:0.5\nf = constant:0.2\n";
    CHECK(run("compare " + (dir.path / "hi.cfg").string() + " " +
              (dir.path / "lo.cfg").string() + " > /dev/null 2>&1") == 1);
    const std::string csv = slurp(dir.path / "out" / "compare.csv");
    CHECK(csv.find("comparison,") != std::string::npos);
    CHECK(csv.find(",fail") != std::string::npos);
}
