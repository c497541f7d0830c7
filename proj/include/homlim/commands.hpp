#pragma once

// Subcommand implementations behind the `homlim` CLI. Every command reads a
// RunConfig, writes its report to `out`, diagnostics to `err`, and returns
// the process exit code: 0 success, 1 computation failure, 2 bad config.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "homlim/cost.hpp"
#include "homlim/io.hpp"
#include "homlim/keyvalue.hpp"
#include "homlim/model.hpp"
#include "homlim/presets.hpp"
#include "homlim/scaling.hpp"
#include "homlim/sweep.hpp"
#include "homlim/units.hpp"

namespace homlim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputeFailure = 1;
inline constexpr int kExitConfigError = 2;

/// Base machine for exploratory runs when no preset is named.
inline ComputerSpec ideal_machine() { return {1.0, 1.0, 1.0, 3e8, 1.0, DistanceFn::cube_root()}; }

struct RunConfig {
    std::string subcommand;
    std::vector<std::string> machines{"ideal"};
    std::vector<std::string> algorithms{"cg"};
    CustomCoefficients custom{};
    std::vector<double> n_values{1e6};
    std::optional<double> v;  // nullopt: optimize
    std::optional<double> pi, beta, s, c, V, distance_exponent, distance_prefactor;
    std::vector<SweepAxis> axes;
    Metric metric = Metric::TotalTime;
    KPolicy k = KPolicy::OutputSize;
    std::string mode = "strong";
    std::string law = "amdahl";
    std::optional<double> v0;
    std::vector<double> volumes;
    int v_points = 7;
    std::string format;
    std::string output;
    std::uint64_t seed = 0;
    std::size_t spot_check = 0;
    std::size_t max_points = kDefaultSweepCap;
    unsigned threads = 0;
    std::vector<std::string> args;
    KeyValues resolved;  // everything that was set, for provenance headers
};

inline const std::set<std::string>& custom_keys() {
    static const std::set<std::string> keys{"io_coeff",   "io_n_exp",   "io_s_exp",     "io_s_linear",
                                            "work_coeff", "work_n_exp", "work_log_exp", "wave_coeff",
                                            "wave_v_exp", "wave_n_exp", "output_coeff", "output_n_exp"};
    return keys;
}

inline const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = [] {
        std::set<std::string> k{"machine", "alg",    "n",      "v",     "pi",     "beta",      "s",
                                "c",       "V",      "distance_exponent", "distance_prefactor", "axis",
                                "metric",  "k",      "mode",   "law",   "v0",     "v_list",    "v_points",
                                "format",  "output", "seed",   "spot_check", "max_points", "threads"};
        k.insert(custom_keys().begin(), custom_keys().end());
        return k;
    }();
    return keys;
}

/// "pi" or "pi:lo:hi:points[:log|lin]".
inline SweepAxis parse_axis(std::string_view text) {
    const auto f = split(text, ':');
    SweepAxis a = default_axis(parse_sweep_param(trim(f[0])));
    if (f.size() == 1) return a;
    if (f.size() < 4 || f.size() > 5) throw SpecError("axis '" + std::string(text) + "': expected name:lo:hi:points[:log|lin]");
    a.lo = parse_number(f[1]);
    a.hi = parse_number(f[2]);
    const double pts = parse_number(f[3]);
    if (pts != std::floor(pts) || pts < 1 || pts > 1e7) throw SpecError("axis '" + std::string(text) + "': bad point count");
    a.points = static_cast<int>(pts);
    if (f.size() == 5) {
        if (f[4] == "lin" || f[4] == "linear") a.spacing = Spacing::Linear;
        else if (f[4] == "log") a.spacing = Spacing::Log;
        else throw SpecError("axis spacing must be log or lin");
    }
    return a;
}

inline std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    for (const auto& item : split(text, ',')) out.push_back(parse_number(item));
    return out;
}

inline std::vector<std::string> parse_name_list(std::string_view text) {
    std::vector<std::string> out;
    for (const auto& item : split(text, ',')) {
        const std::string t = trim(item);
        if (t.empty()) throw SpecError("empty entry in list '" + std::string(text) + "'");
        out.push_back(t);
    }
    return out;
}

inline RunConfig config_from_key_values(std::string subcommand, const KeyValues& kv,
                                        std::vector<std::string> args = {}) {
    RunConfig cfg;
    cfg.subcommand = std::move(subcommand);
    cfg.args = std::move(args);
    cfg.resolved = kv;
    for (const auto& [key, value] : kv) {
        if (!known_keys().contains(key)) throw SpecError("unknown configuration key '" + key + "'");
    }
    auto has = [&](const char* key) { return kv.contains(key); };
    auto num = [&](const char* key) { return parse_number(kv.at(key)); };
    auto count = [&](const char* key) -> std::size_t {
        const double x = num(key);
        if (x < 0 || x != std::floor(x)) throw SpecError(std::string(key) + " must be a non-negative integer");
        return static_cast<std::size_t>(x);
    };

    if (has("machine")) cfg.machines = parse_name_list(kv.at("machine"));
    if (has("alg")) cfg.algorithms = parse_name_list(kv.at("alg"));
    for (const auto& a : cfg.algorithms) parse_algorithm(a);
    if (has("n")) cfg.n_values = parse_number_list(kv.at("n"));
    if (has("v") && kv.at("v") != "auto") cfg.v = parse_quantity(kv.at("v"), Dimension::Volume);
    if (has("pi")) cfg.pi = num("pi");
    if (has("beta")) cfg.beta = num("beta");
    if (has("s")) cfg.s = num("s");
    if (has("c")) cfg.c = parse_quantity(kv.at("c"), Dimension::Speed);
    if (has("V")) cfg.V = parse_quantity(kv.at("V"), Dimension::Volume);
    if (has("distance_exponent")) cfg.distance_exponent = num("distance_exponent");
    if (has("distance_prefactor")) cfg.distance_prefactor = num("distance_prefactor");
    if (has("axis")) {
        for (const auto& a : parse_name_list(kv.at("axis"))) cfg.axes.push_back(parse_axis(a));
    }
    if (has("metric")) cfg.metric = parse_metric(kv.at("metric"));
    if (has("k")) cfg.k = parse_k_policy(kv.at("k"));
    if (has("mode")) cfg.mode = kv.at("mode");
    if (cfg.mode != "strong" && cfg.mode != "weak") throw SpecError("mode must be strong or weak");
    if (has("law")) cfg.law = kv.at("law");
    if (cfg.law != "amdahl" && cfg.law != "gustafson") throw SpecError("law must be amdahl or gustafson");
    if (has("v0")) cfg.v0 = parse_quantity(kv.at("v0"), Dimension::Volume);
    if (has("v_list")) {
        for (const auto& item : split(kv.at("v_list"), ',')) cfg.volumes.push_back(parse_quantity(item, Dimension::Volume));
    }
    if (has("v_points")) cfg.v_points = static_cast<int>(count("v_points"));
    if (cfg.v_points < 1) throw SpecError("v_points must be >= 1");
    if (has("format")) cfg.format = kv.at("format");
    if (has("output")) cfg.output = kv.at("output");
    if (has("seed")) cfg.seed = static_cast<std::uint64_t>(count("seed"));
    if (has("spot_check")) cfg.spot_check = count("spot_check");
    if (has("max_points")) cfg.max_points = count("max_points");
    if (has("threads")) cfg.threads = static_cast<unsigned>(count("threads"));

    CustomCoefficients k;
    auto coef = [&](const char* key, double& field) {
        if (has(key)) field = num(key);
    };
    coef("io_coeff", k.io_coeff);
    coef("io_n_exp", k.io_n_exp);
    coef("io_s_exp", k.io_s_exp);
    coef("io_s_linear", k.io_s_linear);
    coef("work_coeff", k.work_coeff);
    coef("work_n_exp", k.work_n_exp);
    coef("work_log_exp", k.work_log_exp);
    coef("wave_coeff", k.wave_coeff);
    coef("wave_v_exp", k.wave_v_exp);
    coef("wave_n_exp", k.wave_n_exp);
    coef("output_coeff", k.output_coeff);
    coef("output_n_exp", k.output_n_exp);
    custom_cost(k);  // validate now, before any computation
    cfg.custom = k;

    for (double n : cfg.n_values) {
        if (!(n >= 1.0) || !std::isfinite(n)) throw SpecError("invariant violated: n >= 1");
    }
    return cfg;
}

inline ComputerSpec resolve_spec(const RunConfig& cfg, const std::string& machine) {
    ComputerSpec base = machine == "ideal" ? ideal_machine() : PresetRegistry::with_search_path().get(machine).to_spec();
    DistanceFn d = base.distance();
    if (cfg.distance_exponent) d.exponent = *cfg.distance_exponent;
    if (cfg.distance_prefactor) d.prefactor = *cfg.distance_prefactor;
    return {cfg.pi.value_or(base.pi()),   cfg.beta.value_or(base.beta()), cfg.s.value_or(base.s()),
            cfg.c.value_or(base.c()),     cfg.V.value_or(base.volume()), d};
}

inline AlgorithmCost resolve_cost(const RunConfig& cfg, const std::string& alg) {
    const Algorithm a = parse_algorithm(alg);
    return a == Algorithm::Custom ? custom_cost(cfg.custom) : cost_for(a);
}

inline void write_provenance(std::ostream& os, const RunConfig& cfg) {
    os << "# homlim " << cfg.subcommand << '\n';
    for (const auto& [key, value] : cfg.resolved) {
        if (key == "output" || key == "threads" || key == "seed") continue;
        os << "# " << key << '=' << value << '\n';
    }
    os << "# seed=" << cfg.seed << '\n';
}

namespace detail {

/// Routes output to cfg.output when set.
class Sink {
public:
    Sink(const RunConfig& cfg, std::ostream& fallback) : path_(cfg.output), fallback_(fallback) {}
    std::ostream& stream() { return path_.empty() ? fallback_ : buffer_; }
    void flush() {
        if (path_.empty()) return;
        std::ofstream f(path_, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write '" + path_ + "'");
        f << buffer_.str();
    }

private:
    std::string path_;
    std::ostream& fallback_;
    std::ostringstream buffer_;
};

inline std::vector<double> log_spaced(double lo, double hi, int points) {
    if (points == 1 || lo == hi) return {lo};
    SweepAxis a{SweepParam::ActiveV, lo, hi, points, Spacing::Log};
    return a.values();
}

}  // namespace detail

inline int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const ComputerSpec spec = resolve_spec(cfg, cfg.machines.front());
    const AlgorithmCost cost = resolve_cost(cfg, cfg.algorithms.front());
    const double n = cfg.n_values.front();

    TimeBreakdown b;
    std::optional<OptResult> diag;
    try {
        if (cfg.v) {
            b = time_breakdown(spec, cost, n, *cfg.v);
        } else {
            const VolumeOptimum opt = optimal_volume(spec, cost, n);
            b = opt.breakdown;
            diag = opt.diagnostics;
        }
    } catch (const OptimizationError& e) {
        err << "optimizer failed: " << e.what() << "; best log(v) = " << e.x() << ", log(T) = " << e.fx() << '\n';
        return kExitComputeFailure;
    }

    detail::Sink sink(cfg, out);
    std::ostream& os = sink.stream();
    const Regime regime = classify_regime(b);
    if (cfg.format == "text") {
        auto row = [&](const char* k, const std::string& v) { os << std::left << std::setw(13) << k << v << '\n'; };
        row("machine", cfg.machines.front());
        row("alg", std::string(cost.name()));
        row("n", format_sci(n));
        row("v_star", format_sci(b.v_used));
        row("t_work", format_sci(b.t_work));
        row("t_io", format_sci(b.t_io));
        row("t_lat", format_sci(b.t_lat));
        row("total", format_sci(b.total));
        row("performance", format_sci(b.performance));
        row("regime", std::string(to_string(regime)));
        row("optimized", diag ? "true" : "false");
        if (diag) {
            row("method", to_string(diag->method));
            row("iterations", std::to_string(diag->iterations));
        }
    } else if (cfg.format.empty() || cfg.format == "json") {
        nlohmann::ordered_json j;
        j["machine"] = cfg.machines.front();
        j["alg"] = std::string(cost.name());
        j["n"] = n;
        j["v_star"] = b.v_used;
        j["t_work"] = b.t_work;
        j["t_io"] = b.t_io;
        j["t_lat"] = b.t_lat;
        j["total"] = b.total;
        j["performance"] = b.performance;
        j["regime"] = std::string(to_string(regime));
        j["optimized"] = diag.has_value();
        if (diag) {
            j["method"] = to_string(diag->method);
            j["iterations"] = diag->iterations;
            j["converged"] = diag->converged;
        }
        os << j.dump(2) << '\n';
    } else {
        throw SpecError("solve: format must be json or text");
    }
    sink.flush();
    return kExitOk;
}

inline int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::string format = cfg.format.empty() ? "csv" : cfg.format;
    if (format != "csv" && format != "json" && format != "table") throw SpecError("sweep: format must be csv, json or table");

    bool n_swept = false;
    for (const auto& a : cfg.axes) n_swept = n_swept || a.param == SweepParam::N;
    const std::vector<double> n_values = n_swept ? std::vector<double>{cfg.n_values.front()} : cfg.n_values;

    struct Block {
        std::string machine, alg;
        double n;
        SweepGrid grid;
        std::vector<SweepRecord> records;
    };
    std::vector<Block> blocks;
    std::size_t total_points = 0;
    for (const auto& m : cfg.machines) {
        for (const auto& a : cfg.algorithms) {
            for (double n : n_values) {
                Block b{m, a, n, {}, {}};
                b.grid.axes = cfg.axes;
                b.grid.n = n;
                b.grid.v = cfg.v;
                b.grid.metric = cfg.metric;
                b.grid.max_points = cfg.max_points;
                b.grid.validate();
                total_points += b.grid.size();
                blocks.push_back(std::move(b));
            }
        }
    }
    if (total_points > cfg.max_points) {
        throw SpecError("sweep has " + std::to_string(total_points) + " points, above the cap of " +
                        std::to_string(cfg.max_points));
    }

    int status = kExitOk;
    for (auto& b : blocks) {
        const ComputerSpec spec = resolve_spec(cfg, b.machine);
        const AlgorithmCost cost = resolve_cost(cfg, b.alg);
        b.records = run_sweep(b.grid, spec, cost, cfg.threads);
        if (cfg.spot_check > 0) {
            const auto bad = spot_check(b.records, b.grid, spec, cost, cfg.spot_check, cfg.seed);
            err << "spot-check " << b.machine << '/' << b.alg << ": " << (cfg.spot_check - bad.size()) << '/'
                << cfg.spot_check << " records reproduced\n";
            if (!bad.empty()) status = kExitComputeFailure;
        }
    }

    detail::Sink sink(cfg, out);
    std::ostream& os = sink.stream();
    const bool multi = blocks.size() > 1;
    if (format == "json") {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& b : blocks) {
            for (const auto& r : b.records) {
                nlohmann::ordered_json j;
                j["machine"] = b.machine;
                j["alg"] = b.alg;
                const auto fields = to_json(r);
                for (const auto& [k, v] : fields.items()) j[k] = v;
                arr.push_back(std::move(j));
            }
        }
        os << arr.dump(2) << '\n';
    } else {
        write_provenance(os, cfg);
        if (format == "csv") write_sweep_header(os);
        for (const auto& b : blocks) {
            if (multi) os << "# block machine=" << b.machine << " alg=" << b.alg << " n=" << format_sci(b.n) << '\n';
            if (format == "csv") {
                for (const auto& r : b.records) write_sweep_row(os, r);
            } else {
                write_metric_table(os, b.grid, b.records);
            }
        }
    }
    sink.flush();
    return status;
}

inline int cmd_scale(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const ComputerSpec spec = resolve_spec(cfg, cfg.machines.front());
    const AlgorithmCost cost = resolve_cost(cfg, cfg.algorithms.front());
    const double n0 = cfg.n_values.front();
    const double v0 = cfg.v0.value_or(default_baseline_volume(spec));
    const std::vector<double> vols = cfg.volumes.empty() ? detail::log_spaced(v0, spec.volume(), cfg.v_points) : cfg.volumes;

    const auto pts = cfg.mode == "weak" ? weak_scaling_series(spec, cost, cfg.k, n0, v0, vols)
                                        : strong_scaling_series(spec, cost, n0, v0, vols);
    detail::Sink sink(cfg, out);
    std::ostream& os = sink.stream();
    write_provenance(os, cfg);
    os << "# mode=" << cfg.mode << " v0=" << format_sci(v0) << " n0=" << format_sci(n0) << '\n';
    if (cfg.mode == "weak") os << "# k_policy=" << to_string(cfg.k) << '\n';
    write_scale_csv(os, pts);
    sink.flush();
    return kExitOk;
}

inline int cmd_laws(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const ComputerSpec spec = resolve_spec(cfg, cfg.machines.front());
    const AlgorithmCost cost = resolve_cost(cfg, cfg.algorithms.front());
    const double n0 = cfg.n_values.front();
    const double v0 = cfg.v0.value_or(default_baseline_volume(spec));
    const std::vector<double> vols = cfg.volumes.empty() ? detail::log_spaced(v0, spec.volume(), cfg.v_points) : cfg.volumes;
    const bool amdahl = cfg.law == "amdahl";

    detail::Sink sink(cfg, out);
    std::ostream& os = sink.stream();
    write_provenance(os, cfg);
    os << "# law=" << cfg.law << " v0=" << format_sci(v0) << " n0=" << format_sci(n0)
       << " t=" << format_sci(sequential_fraction(spec, cost, n0, v0)) << '\n';
    os << (amdahl ? "v,speedup" : "v,scaled_speedup") << '\n';
    for (double v : vols) {
        const double sp = amdahl ? generalized_speedup(spec, cost, n0, v0, v) : scaled_speedup(spec, cost, n0, v0, v);
        os << format_sci(v) << ',' << format_sci(sp) << '\n';
    }
    const SpeedupLimit lim = speedup_limit(spec, cost, n0, v0);
    os << "# speedup_limit=" << (lim.unbounded ? std::string("unbounded") : format_sci(lim.value)) << '\n';
    sink.flush();
    return kExitOk;
}

inline int cmd_machines(const RunConfig& cfg, std::ostream& out, std::ostream&) {
    const std::string action = cfg.args.empty() ? "list" : cfg.args.front();
    const PresetRegistry reg = PresetRegistry::with_search_path();
    detail::Sink sink(cfg, out);
    std::ostream& os = sink.stream();
    if (action == "list") {
        for (const auto& name : reg.names()) os << name << '\n';
    } else if (action == "show" || action == "export") {
        if (cfg.args.size() < 2) throw SpecError("machines " + action + " needs a preset name");
        const MachinePreset& p = reg.get(cfg.args[1]);
        if (action == "export") {
            os << p.source;
        } else {
            auto row = [&](const char* k, const std::string& v) { os << std::left << std::setw(20) << k << v << '\n'; };
            row("name", p.name);
            row("Pi_total [flop/s]", format_sci(p.pi_total));
            row("B_total [B/s]", format_sci(p.b_total));
            row("S_total [B]", format_sci(p.s_total));
            row("V", format_sci(p.volume));
            row("c [m/s]", format_sci(p.c));
            row("D(v)", format_sci(p.distance.prefactor) + " * v^" + format_sci(p.distance.exponent));
            row("word_bytes", format_sci(p.word_bytes));
            row("pi [flop/(V s)]", format_sci(p.pi()));
            row("beta [word/(V s)]", format_sci(p.beta()));
            row("s [word/V]", format_sci(p.s()));
            row("notes", p.notes);
        }
    } else {
        throw SpecError("machines: action must be list, show or export");
    }
    sink.flush();
    return kExitOk;
}

/// Dispatches on cfg.subcommand and maps exceptions to exit codes.
inline int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (cfg.subcommand == "solve") return cmd_solve(cfg, out, err);
        if (cfg.subcommand == "sweep") return cmd_sweep(cfg, out, err);
        if (cfg.subcommand == "scale") return cmd_scale(cfg, out, err);
        if (cfg.subcommand == "laws") return cmd_laws(cfg, out, err);
        if (cfg.subcommand == "machines") return cmd_machines(cfg, out, err);
        err << "error: unknown subcommand '" << cfg.subcommand << "'\n";
        return kExitConfigError;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::exception& e) {
        err << "computation failed: " << e.what() << '\n';
        return kExitComputeFailure;
    }
}

/// Config parsing plus dispatch; configuration errors exit with 2.
inline int run(const std::string& subcommand, const KeyValues& kv, const std::vector<std::string>& args,
               std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    try {
        cfg = config_from_key_values(subcommand, kv, args);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfigError;
    }
    return run_command(cfg, out, err);
}

}  // namespace homlim::cli
