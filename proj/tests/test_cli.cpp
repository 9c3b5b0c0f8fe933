///  \file test_cli.cpp
///  End-to-end checks of the command-line tool: exit codes, output sets,
///  byte determinism. argv[1] is the binary under test.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int g_failures = 0;
std::string g_bin;
fs::path g_tmp;

#define EXPECT(cond)                                                            \
    do {                                                                        \
        if (!(cond)) {                                                          \
            ++g_failures;                                                       \
            std::cerr << "FAIL " << __FILE__ << ':' << __LINE__ << "  " #cond   \
                      << "\n";                                                  \
        }                                                                       \
    } while (0)

int run(const std::string& args, const std::string& out_file = "") {
    std::string cmd = g_bin + " " + args;
    if (!out_file.empty()) cmd += " > " + out_file + " 2>&1";
    else cmd += " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

const char* kSolveConfig =
    "alpha = 0.75\n"
    "L = 100\n"
    "N = 4096\n"
    "dt = 0.01\n"
    "t_end = 0.2\n"
    "snapshot_times = 0:0.025:0.2\n"
    "kind = smooth_bump\n"
    "eps = 1\n"
    "r0 = 2\n"
    "ramp = 0.25\n";

void test_version_and_usage() {
    EXPECT(run("--version") == 0);
    EXPECT(run("") != 0);             // a subcommand is required
    EXPECT(run("frobnicate") != 0);   // unknown subcommand
}

void test_tau() {
    const auto out = g_tmp / "tau.txt";
    EXPECT(run("tau --alpha 0.75", out.string()) == 0);
    const auto j = json::parse(slurp(out));
    EXPECT(std::fabs(j["tau_alpha"].get<double>() - 4.5915639324029154) < 1e-9);
    EXPECT(std::fabs(j["tau_log"].get<double>() - 1.3862943611198906) < 1e-12);
    EXPECT(j["d"] == 1);
    // alpha = 1 has no finite transition scale.
    EXPECT(run("tau --alpha 1") == 2);
    EXPECT(run("tau --alpha 0") == 2);
}

void test_kernel() {
    const auto out = g_tmp / "kernel.txt";
    EXPECT(run("kernel --alpha 0.5 --xs 0,1,2 --method quadrature", out.string()) == 0);
    const std::string csv = slurp(out);
    EXPECT(csv.rfind("x,p,method,alpha,d,t", 0) == 0);
    EXPECT(csv.find("quadrature") != std::string::npos);

    // Bad xs string is a usage error.
    EXPECT(run("kernel --alpha 0.5 --xs nope") == 1);
    // Bad method string too.
    EXPECT(run("kernel --alpha 0.5 --xs 0 --method wavelets") == 1);
    // alpha out of range is a domain error.
    EXPECT(run("kernel --alpha 1.5 --xs 0") == 2);

    // File output mode produces kernel.csv plus a manifest with digests.
    const auto dir = g_tmp / "kernel_out";
    EXPECT(run("kernel --alpha 0.75 --xs 0,1 --method both --t 1 --out " + dir.string()) == 0);
    EXPECT(fs::exists(dir / "kernel.csv"));
    const auto man = json::parse(slurp(dir / "manifest.json"));
    EXPECT(man.contains("outputs"));
    EXPECT(man["outputs"].size() == 1);
    EXPECT(man["outputs"][0]["file"] == "kernel.csv");
    EXPECT(man["outputs"][0]["fnv1a64"].get<std::string>().size() == 16);
    EXPECT(man.contains("max_discrepancy"));
    EXPECT(man["max_discrepancy"].get<double>() < 1e-5);
}

void test_validate_asymptotics() {
    const auto dir = g_tmp / "validate_out";
    EXPECT(run("validate-asymptotics --alphas 0.9,0.95 --x-lo 1 --x-hi 10 --samples 5 --out " +
               dir.string()) == 0);
    EXPECT(fs::exists(dir / "decomposition.csv"));
    const auto rep = json::parse(slurp(dir / "report.json"));
    EXPECT(rep["max_over_min"].get<double>() > 1.0);
    EXPECT(rep["entries"].size() == 2);
    EXPECT(rep["entries"][0]["ok"].get<bool>());
    const auto vman = json::parse(slurp(dir / "manifest.json"));
    EXPECT(vman["bounded"].get<bool>());

    // An unreachable ratio limit turns into a validation failure exit, with
    // the report still written.
    const auto dir2 = g_tmp / "validate_fail";
    EXPECT(run("validate-asymptotics --alphas 0.9,0.99 --x-lo 1 --x-hi 10 --samples 5 "
               "--limit 1.01 --out " + dir2.string()) == 4);
    EXPECT(fs::exists(dir2 / "report.json"));
}

void test_solve_and_determinism() {
    write_file(g_tmp / "solve.cfg", kSolveConfig);
    const auto d1 = g_tmp / "solve1";
    const auto d2 = g_tmp / "solve2";
    EXPECT(run("solve " + (g_tmp / "solve.cfg").string() + " " + d1.string()) == 0);
    EXPECT(run("solve " + (g_tmp / "solve.cfg").string() + " " + d2.string()) == 0);
    EXPECT(fs::exists(d1 / "snapshots.csv"));
    EXPECT(slurp(d1 / "snapshots.csv") == slurp(d2 / "snapshots.csv"));

    const auto m1 = json::parse(slurp(d1 / "manifest.json"));
    const auto m2 = json::parse(slurp(d2 / "manifest.json"));
    EXPECT(m1["termination"] == "completed");
    EXPECT(m1["steps"] == 20);
    EXPECT(m1["snapshots"].size() == 9);
    EXPECT(m1["outputs"] == m2["outputs"]);  // digests identical across runs
    EXPECT(m1["config"] == m2["config"]);
    for (const auto& s : m1["snapshots"]) {
        EXPECT(s["umin"].get<double>() >= 0.0);
        EXPECT(s["umax"].get<double>() <= 1.0);
    }

    // Unknown config key.
    write_file(g_tmp / "bad.cfg", std::string(kSolveConfig) + "wat = 1\n");
    EXPECT(run("solve " + (g_tmp / "bad.cfg").string() + " " + (g_tmp / "bad_out").string()) == 1);
    // Missing config file.
    EXPECT(run("solve " + (g_tmp / "missing.cfg").string() + " " +
               (g_tmp / "missing_out").string()) == 1);
}

void test_solve_truncation() {
    // Fat-tailed spreading on a deliberately small box trips the edge guard;
    // partial outputs plus exit code 5.
    write_file(g_tmp / "trunc.cfg",
               "alpha = 0.6\n"
               "L = 40\n"
               "N = 4096\n"
               "dt = 0.01\n"
               "t_end = 8\n"
               "snapshot_times = 0:1:8\n"
               "kind = smooth_bump\n"
               "eps = 1\n"
               "r0 = 5\n"
               "ramp = 0.25\n"
               "edge_guard = 0.05\n");
    const auto dir = g_tmp / "trunc_out";
    EXPECT(run("solve " + (g_tmp / "trunc.cfg").string() + " " + dir.string()) == 5);
    EXPECT(fs::exists(dir / "snapshots.csv"));
    const auto man = json::parse(slurp(dir / "manifest.json"));
    EXPECT(man["termination"] == "edge_guard_truncated");
    EXPECT(man["snapshots"].size() < 9);
}

void test_front() {
    write_file(g_tmp / "front.cfg",
               std::string(kSolveConfig) +
                   "level = 0.5\n"
                   "side = right\n"
                   "linear_window = 0:0.2\n"
                   "exp_window = 0:0.2\n");
    const auto d1 = g_tmp / "front1";
    const auto d2 = g_tmp / "front2";
    EXPECT(run("front " + (g_tmp / "front.cfg").string() + " " + d1.string()) == 0);
    EXPECT(run("front " + (g_tmp / "front.cfg").string() + " " + d2.string()) == 0);
    EXPECT(fs::exists(d1 / "trace.csv"));
    EXPECT(fs::exists(d1 / "fit.json"));
    EXPECT(slurp(d1 / "trace.csv") == slurp(d2 / "trace.csv"));
    EXPECT(slurp(d1 / "fit.json") == slurp(d2 / "fit.json"));
    const auto fit = json::parse(slurp(d1 / "fit.json"));
    EXPECT(fit["alpha"] == 0.75);
    EXPECT(fit["sigma_linear"].is_number());
    const auto man = json::parse(slurp(d1 / "manifest.json"));
    EXPECT(man["trace_complete"].get<bool>());
    EXPECT(man["outputs"].size() == 3);

    const std::string trace = slurp(d1 / "trace.csv");
    EXPECT(trace.rfind("alpha,level,side,t,x", 0) == 0);
}

void test_sweep() {
    write_file(g_tmp / "sweep.cfg",
               "alpha = 0.6\n"
               "alphas = 0.6,0.7\n"
               "L = 100\n"
               "N = 4096\n"
               "dt = 0.01\n"
               "t_end = 0.5\n"
               "snapshot_times = 0:0.05:0.5\n"
               "kind = smooth_bump\n"
               "eps = 1\n"
               "r0 = 2\n"
               "ramp = 0.25\n"
               "level = 0.5\n"
               "side = right\n"
               "linear_window = 0:0.25\n"
               "exp_window = 0.25:0.5\n");
    const auto dir = g_tmp / "sweep_out";
    const std::string env = "FKPP_THREADS=2 ";
    const std::string cmd = env + g_bin + " sweep " + (g_tmp / "sweep.cfg").string() + " " +
                            dir.string() + " > /dev/null 2>&1";
    EXPECT(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    EXPECT(fs::exists(dir / "transition.csv"));
    EXPECT(fs::exists(dir / "alpha_0.6" / "trace.csv"));
    EXPECT(fs::exists(dir / "alpha_0.6" / "fit.json"));
    EXPECT(fs::exists(dir / "alpha_0.7" / "trace.csv"));
    const std::string tcsv = slurp(dir / "transition.csv");
    EXPECT(tcsv.rfind("alpha,crossover_time,tau_alpha,tau_log", 0) == 0);
    const auto man = json::parse(slurp(dir / "manifest.json"));
    EXPECT(man["members"].size() == 2);
    EXPECT(man["members"][0]["ok"].get<bool>());
    EXPECT(man["members"][1]["ok"].get<bool>());

    // Sweep alphas outside (0.5, 1) are rejected before any run.
    write_file(g_tmp / "sweep_bad.cfg",
               std::string("alphas = 0.4,0.7\n") +
                   "alpha = 0.6\nL = 100\nN = 4096\ndt = 0.01\nt_end = 0.5\n"
                   "kind = smooth_bump\neps = 1\nr0 = 2\nramp = 0.25\n"
                   "linear_window = 0:0.25\nexp_window = 0.25:0.5\n");
    EXPECT(run("sweep " + (g_tmp / "sweep_bad.cfg").string() + " " +
               (g_tmp / "sweep_bad_out").string()) == 2);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-binary>\n";
        return 2;
    }
    g_bin = argv[1];
    g_tmp = fs::temp_directory_path() / ("fkpp_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(g_tmp);

    test_version_and_usage();
    test_tau();
    test_kernel();
    test_validate_asymptotics();
    test_solve_and_determinism();
    test_solve_truncation();
    test_front();
    test_sweep();

    if (g_failures == 0) {
        std::cout << "test_cli: all checks passed\n";
        fs::remove_all(g_tmp);
        return 0;
    }
    std::cerr << "test_cli: " << g_failures << " failure(s); artifacts kept in " << g_tmp << "\n";
    return 1;
}
