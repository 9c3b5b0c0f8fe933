// fkpp: fractional Fisher-KPP laboratory driver.
//
// Subcommands: kernel, validate-asymptotics, tau, solve, front, sweep.
// Exit codes: 0 ok, 1 usage, 2 domain, 3 quadrature, 4 validation, 5 truncated.

#include "CLI11.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "fkpp/asymptotics.hpp"
#include "fkpp/config.hpp"
#include "fkpp/front.hpp"
#include "fkpp/kernel.hpp"
#include "fkpp/solver.hpp"

namespace fs = std::filesystem;
using namespace fkpp;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string iso_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open config file " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/// Written files with their digests, in write order, for the manifest.
class OutputSet {
public:
    explicit OutputSet(fs::path root) : root_(std::move(root)) {
        std::error_code ec;
        fs::create_directories(root_, ec);
        if (ec) throw UsageError("cannot create output directory " + root_.string());
    }

    /// name may carry one subdirectory level ("alpha_0.99/trace.csv").
    void add(const std::string& name, const std::string& content) {
        const fs::path path = root_ / name;
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        std::ofstream os(path, std::ios::binary);
        if (!os) throw UsageError("cannot write " + path.string());
        os << content;
        if (!os) throw UsageError("write failed for " + path.string());
        files_.emplace_back(name, fnv1a_hex(content));
    }

    std::string outputs_json() const {
        std::ostringstream os;
        os << '[';
        for (size_t i = 0; i < files_.size(); ++i)
            os << (i ? "," : "") << "{\"file\":\"" << json_escape(files_[i].first)
               << "\",\"fnv1a64\":\"" << files_[i].second << "\"}";
        os << ']';
        return os.str();
    }

    const fs::path& root() const { return root_; }

private:
    fs::path root_;
    std::vector<std::pair<std::string, std::string>> files_;
};

std::string snapshot_diag_json(const std::vector<solver::SnapshotInfo>& infos) {
    std::ostringstream os;
    os << '[';
    for (size_t i = 0; i < infos.size(); ++i)
        os << (i ? "," : "") << "{\"t\":" << fmt_double(infos[i].t)
           << ",\"mass\":" << fmt_double(infos[i].mass) << ",\"umin\":" << fmt_double(infos[i].umin)
           << ",\"umax\":" << fmt_double(infos[i].umax)
           << ",\"edge_max\":" << fmt_double(infos[i].edge_max) << '}';
    os << ']';
    return os.str();
}

int sweep_thread_cap(size_t members) {
    long cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FKPP_THREADS")) {
        cap = config::parse_long(env, "FKPP_THREADS");
        if (cap < 1) throw UsageError("FKPP_THREADS must be >= 1");
    }
    return static_cast<int>(std::min<long>(cap, static_cast<long>(members)));
}

// ---------------------------------------------------------------------------
// kernel

struct KernelArgs {
    double alpha = 0.75;
    int d = 1;
    double t = 1.0;
    std::string xs;
    std::string method = "quadrature";
    std::string out;
    double L = 0.0;  ///< spectral half-width override, 0 = automatic
    long N = 0;      ///< spectral mode-count override, 0 = automatic
};

/// Direct symbol-series evaluation of the periodized 1D kernel at arbitrary
/// points: p(x,t) = (1/2L) sum_m e^(-|pi m/L|^(2 alpha) t) cos(pi m x / L).
std::vector<double> spectral_series_1d(const FracParams& params, double t,
                                       const std::vector<double>& xs, double L, long N) {
    if (!(t > 0.0)) throw DomainError("spectral evaluation requires t > 0");
    const double a2 = 2.0 * params.alpha;
    if (L <= 0.0) {
        double xmax = 0.0;
        for (double x : xs) xmax = std::max(xmax, std::fabs(x));
        L = std::max(60.0, 4.0 * xmax) * std::max(1.0, std::pow(t, 1.0 / a2));
    }
    if (N <= 0) {
        N = 4096;
        while (N < (1L << 24) && std::pow(PI * N / (2.0 * L), a2) * t < 33.0) N *= 2;
    }
    if (!(std::pow(PI * N / (2.0 * L), a2) * t > 32.3))
        throw ValidationError("spectral grid cannot resolve the symbol decay; raise N or shrink L");
    // Symbol values below ~1e-18 cannot move the sum; stop there.
    long mstop = N / 2;
    for (long m = 1; m <= N / 2; ++m)
        if (std::pow(PI * m / L, a2) * t > 41.5) {
            mstop = m;
            break;
        }
    std::vector<double> symbol(mstop + 1);
    for (long m = 0; m <= mstop; ++m) symbol[m] = std::exp(-std::pow(PI * m / L, a2) * t);
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) {
        double sum = 0.5 * symbol[0];
        for (long m = 1; m <= mstop; ++m) sum += symbol[m] * std::cos(PI * m * x / L);
        out.push_back(std::max(0.0, sum / L));
    }
    return out;
}

int cmd_kernel(const KernelArgs& args) {
    if (args.method != "quadrature" && args.method != "spectral" && args.method != "both")
        throw UsageError("method must be quadrature, spectral or both, got " + args.method);
    const std::vector<double> xs = config::parse_times(args.xs, "xs");
    const FracParams params{args.alpha, args.d};
    const auto started = iso_now();
    const auto t0 = std::chrono::steady_clock::now();

    std::vector<kernel::KernelCsvRow> rows;
    std::vector<double> quad_vals, spec_vals;
    if (args.method == "quadrature" || args.method == "both") {
        for (double x : xs)
            quad_vals.push_back(kernel::kernel_spacetime(params, std::fabs(x), args.t));
        for (size_t i = 0; i < xs.size(); ++i)
            rows.push_back({xs[i], quad_vals[i], "quadrature", params, args.t});
    }
    if (args.method == "spectral" || args.method == "both") {
        if (params.d == 1) {
            check_alpha(params.alpha);
            spec_vals = spectral_series_1d(params, args.t, xs, args.L, args.N);
        } else {
            const double scale = std::pow(args.t, -1.0 / (2.0 * params.alpha));
            for (double x : xs)
                spec_vals.push_back(std::pow(scale, params.d) *
                                    kernel::kernel_profile_slice(params, std::fabs(x) * scale));
        }
        for (size_t i = 0; i < xs.size(); ++i)
            rows.push_back({xs[i], spec_vals[i], "spectral", params, args.t});
    }

    double max_disc = 0.0;
    if (args.method == "both")
        for (size_t i = 0; i < xs.size(); ++i)
            max_disc = std::max(max_disc, std::fabs(quad_vals[i] - spec_vals[i]));

    std::ostringstream csv;
    kernel::write_kernel_csv(csv, rows);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (args.out.empty()) {
        std::cout << csv.str();
        if (args.method == "both")
            std::cerr << "max_discrepancy = " << fmt_double(max_disc) << "\n";
        return 0;
    }
    OutputSet outputs{args.out};
    outputs.add("kernel.csv", csv.str());
    std::ostringstream man;
    man << "{\"command\":\"kernel\",\"version\":\"" << kVersion << "\",\"config\":{\"alpha\":"
        << fmt_double(args.alpha) << ",\"d\":" << args.d << ",\"t\":" << fmt_double(args.t)
        << ",\"xs\":[";
    for (size_t i = 0; i < xs.size(); ++i) man << (i ? "," : "") << fmt_double(xs[i]);
    man << "],\"method\":\"" << args.method << "\"}";
    if (args.method == "both") man << ",\"max_discrepancy\":" << fmt_double(max_disc);
    man << ",\"clamped\":" << kernel::clamp_count() << ",\"started\":\"" << started
        << "\",\"finished\":\"" << iso_now() << "\",\"wall_seconds\":" << fmt_double(wall)
        << ",\"outputs\":" << outputs.outputs_json() << "}\n";
    outputs.add("manifest.json", man.str());
    return 0;
}

// ---------------------------------------------------------------------------
// validate-asymptotics

struct ValidateArgs {
    std::string alphas;
    int d = 1;
    double x_lo = 1.0;
    double x_hi = 100.0;
    int samples = 40;
    double limit = 3.0;
    std::string out;
};

std::string scaling_report_json(const asym::ResidualReport& report, double limit) {
    std::ostringstream os;
    os << "{\"d\":" << report.d << ",\"limit\":" << fmt_double(limit)
       << ",\"max_over_min\":" << fmt_double(report.max_over_min) << ",\"entries\":[";
    for (size_t i = 0; i < report.entries.size(); ++i) {
        const auto& e = report.entries[i];
        os << (i ? "," : "") << "{\"alpha\":" << fmt_double(e.alpha)
           << ",\"ok\":" << (e.ok ? "true" : "false");
        if (e.ok)
            os << ",\"sup_normalized\":" << fmt_double(e.sup_normalized)
               << ",\"sup_x\":" << fmt_double(e.sup_x);
        else
            os << ",\"error\":\"" << json_escape(e.error) << "\"";
        os << '}';
    }
    os << "]}";
    return os.str();
}

int cmd_validate(const ValidateArgs& args) {
    const std::vector<double> alphas = config::parse_double_list(args.alphas, "alphas");
    const auto started = iso_now();
    const auto t0 = std::chrono::steady_clock::now();
    const FracParams base{alphas.front(), args.d};
    const asym::ResidualReport report =
        asym::residual_scaling_report(base, alphas, args.x_lo, args.x_hi, args.samples);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    bool all_ok = true;
    for (const auto& e : report.entries) all_ok = all_ok && e.ok;
    const bool bounded = all_ok && report.max_over_min <= args.limit;
    const std::string report_json = scaling_report_json(report, args.limit);

    if (args.out.empty()) {
        std::cout << report_json << "\n";
    } else {
        OutputSet outputs{args.out};
        std::ostringstream csv;
        asym::write_decomposition_csv(csv, report);
        outputs.add("decomposition.csv", csv.str());
        outputs.add("report.json", report_json + "\n");
        std::ostringstream man;
        man << "{\"command\":\"validate-asymptotics\",\"version\":\"" << kVersion
            << "\",\"config\":{\"alphas\":[";
        for (size_t i = 0; i < alphas.size(); ++i) man << (i ? "," : "") << fmt_double(alphas[i]);
        man << "],\"d\":" << args.d << ",\"x_lo\":" << fmt_double(args.x_lo)
            << ",\"x_hi\":" << fmt_double(args.x_hi) << ",\"samples\":" << args.samples
            << ",\"limit\":" << fmt_double(args.limit) << "}"
            << ",\"bounded\":" << (bounded ? "true" : "false") << ",\"started\":\"" << started
            << "\",\"finished\":\"" << iso_now() << "\",\"wall_seconds\":" << fmt_double(wall)
            << ",\"outputs\":" << outputs.outputs_json() << "}\n";
        outputs.add("manifest.json", man.str());
    }
    if (!bounded) {
        std::cerr << "error: residual scaling check failed ("
                  << (all_ok ? "ratio " + fmt_double(report.max_over_min) + " > limit " +
                                   fmt_double(args.limit)
                             : "some sweep members failed")
                  << ")\n";
        return 4;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// solve / front / sweep

std::string run_manifest_json(const char* command, const config::ExperimentConfig& cfg,
                              const solver::RunResult& result, const std::string& started,
                              const OutputSet& outputs, const std::string& extra) {
    std::ostringstream man;
    man << "{\"command\":\"" << command << "\",\"version\":\"" << kVersion
        << "\",\"config\":" << config::echo_json(cfg) << ",\"termination\":\""
        << result.termination << "\",\"steps\":" << result.steps
        << ",\"range_excursions\":" << result.range_excursions
        << ",\"snapshots\":" << snapshot_diag_json(result.snapshots) << extra << ",\"started\":\""
        << started << "\",\"finished\":\"" << iso_now()
        << "\",\"wall_seconds\":" << fmt_double(result.wall_seconds)
        << ",\"outputs\":" << outputs.outputs_json() << "}\n";
    return man.str();
}

int cmd_solve(const std::string& config_path, const std::string& out_dir) {
    const config::ExperimentConfig cfg = config::parse_experiment(slurp(config_path));
    const auto started = iso_now();
    OutputSet outputs{out_dir};
    const solver::CollectedRun collected = solver::run_collect(cfg.solver, cfg.datum);
    std::ostringstream csv;
    solver::write_snapshot_csv(csv, cfg.solver, collected.states);
    outputs.add("snapshots.csv", csv.str());
    outputs.add("manifest.json",
                run_manifest_json("solve", cfg, collected.result, started, outputs, ""));
    if (collected.result.termination != "completed") {
        std::cerr << "error: run truncated (" << collected.result.termination << ")\n";
        return 5;
    }
    return 0;
}

int cmd_front(const std::string& config_path, const std::string& out_dir) {
    const config::ExperimentConfig cfg = config::parse_experiment(slurp(config_path));
    const auto started = iso_now();
    OutputSet outputs{out_dir};
    const solver::CollectedRun collected = solver::run_collect(cfg.solver, cfg.datum);
    std::ostringstream csv;
    solver::write_snapshot_csv(csv, cfg.solver, collected.states);
    outputs.add("snapshots.csv", csv.str());

    const front::FrontTrace trace =
        front::trace_from_states(cfg.solver, collected.states, cfg.level, cfg.side);
    std::ostringstream trace_csv;
    front::write_trace_csv(trace_csv, cfg.solver.params.alpha, trace);
    outputs.add("trace.csv", trace_csv.str());

    std::string extra = std::string(",\"trace_complete\":") + (trace.complete ? "true" : "false");
    std::string fit_error;
    if (cfg.have_linear_window && cfg.have_exp_window) {
        try {
            const front::RegimeFit fit =
                front::fit_regimes(trace, cfg.linear_window, cfg.exp_window);
            std::optional<double> tau_alpha, tau_log;
            if (cfg.solver.params.alpha < 1.0) {
                try {
                    const asym::TransitionScales scales =
                        asym::critical_radius(cfg.solver.params);
                    tau_alpha = scales.tau_alpha;
                    tau_log = scales.tau_log;
                } catch (const DomainError&) {
                    // no transition root at this alpha; tau fields stay null
                }
            }
            outputs.add("fit.json", front::fit_json(cfg.solver.params.alpha, cfg.level, fit,
                                                    tau_alpha, tau_log) +
                                        "\n");
        } catch (const ValidationError& e) {
            fit_error = e.what();
            extra += ",\"fit_error\":\"" + json_escape(fit_error) + "\"";
        }
    }
    outputs.add("manifest.json",
                run_manifest_json("front", cfg, collected.result, started, outputs, extra));
    if (collected.result.termination != "completed") {
        std::cerr << "error: run truncated (" << collected.result.termination << ")\n";
        return 5;
    }
    if (!fit_error.empty()) {
        std::cerr << "error: " << fit_error << "\n";
        return 4;
    }
    return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir) {
    const config::ExperimentConfig cfg = config::parse_experiment(slurp(config_path));
    if (cfg.alphas.empty()) throw UsageError("sweep requires the alphas key");
    if (!cfg.have_linear_window || !cfg.have_exp_window)
        throw UsageError("sweep requires linear_window and exp_window");
    const auto started = iso_now();
    const auto t0 = std::chrono::steady_clock::now();

    front::SweepScenario scenario;
    scenario.config = cfg.solver;
    scenario.datum = cfg.datum;
    scenario.level = cfg.level;
    scenario.side = cfg.side;
    scenario.linear_window = cfg.linear_window;
    scenario.exp_window = cfg.exp_window;
    const int threads = sweep_thread_cap(cfg.alphas.size());
    const std::vector<front::SweepEntry> entries =
        front::transition_sweep(cfg.alphas, scenario, threads);

    OutputSet outputs{out_dir};
    for (const auto& entry : entries) {
        const std::string sub = "alpha_" + fmt_double(entry.alpha);
        std::ostringstream trace_csv;
        front::write_trace_csv(trace_csv, entry.alpha, entry.trace);
        outputs.add(sub + "/trace.csv", trace_csv.str());
        if (entry.ok)
            outputs.add(sub + "/fit.json",
                        front::fit_json(entry.alpha, cfg.level, entry.fit, entry.tau_alpha,
                                        entry.tau_log) +
                            "\n");
    }
    std::ostringstream comparison;
    front::write_transition_csv(comparison, entries);
    outputs.add("transition.csv", comparison.str());

    int ok_count = 0;
    std::ostringstream status;
    status << ",\"threads\":" << threads << ",\"members\":[";
    for (size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        status << (i ? "," : "") << "{\"alpha\":" << fmt_double(e.alpha)
               << ",\"ok\":" << (e.ok ? "true" : "false");
        if (!e.ok) status << ",\"error\":\"" << json_escape(e.error) << "\"";
        status << '}';
        ok_count += e.ok ? 1 : 0;
    }
    status << ']';
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream man;
    man << "{\"command\":\"sweep\",\"version\":\"" << kVersion
        << "\",\"config\":" << config::echo_json(cfg) << status.str() << ",\"started\":\""
        << started << "\",\"finished\":\"" << iso_now()
        << "\",\"wall_seconds\":" << fmt_double(wall) << ",\"outputs\":" << outputs.outputs_json()
        << "}\n";
    outputs.add("manifest.json", man.str());

    if (ok_count == 0) {
        std::cerr << "error: every sweep member failed; see manifest.json\n";
        return 4;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional Fisher-KPP laboratory"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    KernelArgs kargs;
    CLI::App* kernel_cmd = app.add_subcommand("kernel", "evaluate the fractional heat kernel");
    kernel_cmd->add_option("--alpha", kargs.alpha, "fractional exponent in (0,1]")->required();
    kernel_cmd->add_option("--d", kargs.d, "space dimension (default 1)");
    kernel_cmd->add_option("--t", kargs.t, "evaluation time (default 1)");
    kernel_cmd->add_option("--xs", kargs.xs, "points: comma list or start:step:end")->required();
    kernel_cmd->add_option("--method", kargs.method, "quadrature, spectral or both");
    kernel_cmd->add_option("--out", kargs.out, "output directory (stdout when absent)");
    kernel_cmd->add_option("--L", kargs.L, "spectral half-width override");
    kernel_cmd->add_option("--N", kargs.N, "spectral mode-count override");

    ValidateArgs vargs;
    CLI::App* validate_cmd =
        app.add_subcommand("validate-asymptotics", "check the residual scaling of the expansion");
    validate_cmd->add_option("--alphas", vargs.alphas, "comma list of exponents < 1")->required();
    validate_cmd->add_option("--d", vargs.d, "space dimension (default 1)");
    validate_cmd->add_option("--x-lo", vargs.x_lo, "sweep lower radius (default 1)");
    validate_cmd->add_option("--x-hi", vargs.x_hi, "sweep upper radius (default 100)");
    validate_cmd->add_option("--samples", vargs.samples, "log-uniform sample count (default 40)");
    validate_cmd->add_option("--limit", vargs.limit, "max/min sup ratio allowed (default 3)");
    validate_cmd->add_option("--out", vargs.out, "output directory (stdout when absent)");

    double tau_alpha = 0.75;
    int tau_d = 1;
    CLI::App* tau_cmd = app.add_subcommand("tau", "transition scales for one alpha");
    tau_cmd->add_option("--alpha", tau_alpha, "fractional exponent in (0,1)")->required();
    tau_cmd->add_option("--d", tau_d, "space dimension (default 1)");

    std::string solve_config, solve_out;
    CLI::App* solve_cmd = app.add_subcommand("solve", "integrate the reaction-diffusion field");
    solve_cmd->add_option("config", solve_config, "flat key = value config file")->required();
    solve_cmd->add_option("out", solve_out, "output directory")->required();

    std::string front_config, front_out;
    CLI::App* front_cmd =
        app.add_subcommand("front", "integrate, extract the level set and fit regimes");
    front_cmd->add_option("config", front_config, "flat key = value config file")->required();
    front_cmd->add_option("out", front_out, "output directory")->required();

    std::string sweep_config, sweep_out;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "front pipeline over a list of alphas");
    sweep_cmd->add_option("config", sweep_config, "flat key = value config file")->required();
    sweep_cmd->add_option("out", sweep_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (kernel_cmd->parsed()) return cmd_kernel(kargs);
        if (validate_cmd->parsed()) return cmd_validate(vargs);
        if (tau_cmd->parsed()) {
            std::cout << asym::transition_json(asym::critical_radius({tau_alpha, tau_d})) << "\n";
            return 0;
        }
        if (solve_cmd->parsed()) return cmd_solve(solve_config, solve_out);
        if (front_cmd->parsed()) return cmd_front(front_config, front_out);
        if (sweep_cmd->parsed()) return cmd_sweep(sweep_config, sweep_out);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const QuadratureError& e) {
        std::cerr << "error: " << e.what() << " (value " << fmt_double(e.value) << ", err "
                  << fmt_double(e.err_est) << ")\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const TruncationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
