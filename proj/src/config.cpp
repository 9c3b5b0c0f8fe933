#include "fkpp/config.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

namespace fkpp {
namespace config {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw UsageError("config line " + std::to_string(lineno) + ": empty key or value");
        if (!kv.emplace(key, value).second)
            throw UsageError("config line " + std::to_string(lineno) + ": duplicate key " + key);
    }
    return kv;
}

double parse_double(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
        throw UsageError("key " + key + ": cannot parse number from '" + s + "'");
    return v;
}

long parse_long(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw UsageError("key " + key + ": cannot parse integer from '" + s + "'");
    return v;
}

bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw UsageError("key " + key + ": expected true/false, got '" + s + "'");
}

std::vector<double> parse_double_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_double(trim(item), key));
    if (out.empty()) throw UsageError("key " + key + ": empty list");
    return out;
}

std::vector<double> parse_times(const std::string& s, const std::string& key) {
    if (s.find(':') == std::string::npos) return parse_double_list(s, key);
    std::istringstream in(s);
    std::string a, b, c;
    if (!std::getline(in, a, ':') || !std::getline(in, b, ':') || !std::getline(in, c))
        throw UsageError("key " + key + ": range must be start:step:end");
    const double start = parse_double(trim(a), key);
    const double step = parse_double(trim(b), key);
    const double end = parse_double(trim(c), key);
    if (!(step > 0.0) || end < start)
        throw UsageError("key " + key + ": range needs step > 0 and end >= start");
    const long n = std::lround(std::floor((end - start) / step + 1e-9));
    std::vector<double> out;
    out.reserve(n + 1);
    for (long i = 0; i <= n; ++i) out.push_back(start + i * step);
    return out;
}

front::Window parse_window(const std::string& s, const std::string& key) {
    const size_t colon = s.find(':');
    if (colon == std::string::npos)
        throw UsageError("key " + key + ": window must be lo:hi");
    front::Window w;
    w.lo = parse_double(trim(s.substr(0, colon)), key);
    w.hi = parse_double(trim(s.substr(colon + 1)), key);
    if (!(w.hi > w.lo)) throw UsageError("key " + key + ": window needs hi > lo");
    return w;
}

ExperimentConfig parse_experiment(const std::string& text) {
    auto kv = parse_kv(text);
    ExperimentConfig cfg;

    auto take = [&kv](const char* key) -> const std::string* {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        return &it->second;
    };
    auto require = [&](const char* key) -> const std::string& {
        const std::string* v = take(key);
        if (!v) throw UsageError(std::string("missing required key ") + key);
        return *v;
    };

    cfg.solver.params.alpha = parse_double(require("alpha"), "alpha");
    if (const auto* v = take("d")) cfg.solver.params.d = static_cast<int>(parse_long(*v, "d"));
    cfg.solver.L = parse_double(require("L"), "L");
    cfg.solver.N = static_cast<int>(parse_long(require("N"), "N"));
    cfg.solver.dt = parse_double(require("dt"), "dt");
    cfg.solver.t_end = parse_double(require("t_end"), "t_end");
    if (const auto* v = take("snapshot_times"))
        cfg.solver.snapshot_times = parse_times(*v, "snapshot_times");
    else
        cfg.solver.snapshot_times = {cfg.solver.t_end};
    if (const auto* v = take("dealias")) cfg.solver.dealias = parse_bool(*v, "dealias");
    if (const auto* v = take("edge_guard")) cfg.solver.edge_guard = parse_double(*v, "edge_guard");
    if (const auto* v = take("reaction_on")) cfg.solver.reaction_on = parse_bool(*v, "reaction_on");

    cfg.datum.kind = solver::parse_datum_kind(require("kind"));
    if (const auto* v = take("eps")) cfg.datum.eps = parse_double(*v, "eps");
    if (const auto* v = take("r0")) cfg.datum.r0 = parse_double(*v, "r0");
    if (const auto* v = take("ramp")) cfg.datum.ramp = parse_double(*v, "ramp");
    if (const auto* v = take("eps_alpha")) cfg.datum.eps_alpha = parse_double(*v, "eps_alpha");
    if (const auto* v = take("W")) cfg.datum.W = parse_double(*v, "W");
    if (const auto* v = take("gamma")) cfg.datum.gamma = parse_double(*v, "gamma");

    if (const auto* v = take("level")) cfg.level = parse_double(*v, "level");
    if (const auto* v = take("side")) cfg.side = front::parse_side(*v);
    if (const auto* v = take("linear_window")) {
        cfg.linear_window = parse_window(*v, "linear_window");
        cfg.have_linear_window = true;
    }
    if (const auto* v = take("exp_window")) {
        cfg.exp_window = parse_window(*v, "exp_window");
        cfg.have_exp_window = true;
    }
    if (const auto* v = take("alphas")) cfg.alphas = parse_double_list(*v, "alphas");

    static const char* known[] = {"alpha",       "d",           "L",
                                  "N",           "dt",          "t_end",
                                  "snapshot_times", "dealias",  "edge_guard",
                                  "reaction_on", "kind",        "eps",
                                  "r0",          "ramp",        "eps_alpha",
                                  "W",           "gamma",       "level",
                                  "side",        "linear_window", "exp_window",
                                  "alphas"};
    for (const auto& [key, value] : kv) {
        (void)value;
        bool ok = false;
        for (const char* k : known)
            if (key == k) {
                ok = true;
                break;
            }
        if (!ok) throw UsageError("unknown config key: " + key);
    }

    solver::validate_config(cfg.solver);
    if (!(cfg.level > 0.0 && cfg.level < 1.0)) throw DomainError("level must lie in (0,1)");
    return cfg;
}

std::string echo_json(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "{\"alpha\":" << fmt_double(cfg.solver.params.alpha) << ",\"d\":" << cfg.solver.params.d
       << ",\"L\":" << fmt_double(cfg.solver.L) << ",\"N\":" << cfg.solver.N
       << ",\"dt\":" << fmt_double(cfg.solver.dt) << ",\"t_end\":" << fmt_double(cfg.solver.t_end)
       << ",\"snapshot_times\":[";
    for (size_t i = 0; i < cfg.solver.snapshot_times.size(); ++i)
        os << (i ? "," : "") << fmt_double(cfg.solver.snapshot_times[i]);
    os << "],\"dealias\":" << (cfg.solver.dealias ? "true" : "false")
       << ",\"edge_guard\":" << fmt_double(cfg.solver.edge_guard)
       << ",\"reaction_on\":" << (cfg.solver.reaction_on ? "true" : "false")
       << ",\"kind\":\"" << solver::datum_kind_name(cfg.datum.kind) << "\""
       << ",\"eps\":" << fmt_double(cfg.datum.eps) << ",\"r0\":" << fmt_double(cfg.datum.r0)
       << ",\"ramp\":" << fmt_double(cfg.datum.ramp)
       << ",\"eps_alpha\":" << fmt_double(cfg.datum.eps_alpha)
       << ",\"W\":" << fmt_double(cfg.datum.W) << ",\"gamma\":" << fmt_double(cfg.datum.gamma)
       << ",\"level\":" << fmt_double(cfg.level) << ",\"side\":\"" << front::side_name(cfg.side)
       << "\"";
    if (cfg.have_linear_window)
        os << ",\"linear_window\":[" << fmt_double(cfg.linear_window.lo) << ','
           << fmt_double(cfg.linear_window.hi) << ']';
    if (cfg.have_exp_window)
        os << ",\"exp_window\":[" << fmt_double(cfg.exp_window.lo) << ','
           << fmt_double(cfg.exp_window.hi) << ']';
    if (!cfg.alphas.empty()) {
        os << ",\"alphas\":[";
        for (size_t i = 0; i < cfg.alphas.size(); ++i)
            os << (i ? "," : "") << fmt_double(cfg.alphas[i]);
        os << ']';
    }
    os << '}';
    return os.str();
}

}  // namespace config
}  // namespace fkpp
