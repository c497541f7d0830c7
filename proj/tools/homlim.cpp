// homlim: best-case run times of scientific kernels on homogeneous computers.
//
//   homlim solve    --machine fugaku --alg cg --n 1e12
//   homlim sweep    --axis pi --alg cg --n 1e3,1e6,1e9,1e12
//   homlim scale    --mode weak --k output --machine frontier --alg cg
//   homlim laws     --law amdahl --machine fugaku --alg cg --n 1e12
//   homlim machines list | show <name> | export <name>

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "homlim/commands.hpp"

namespace {

struct OptionSet {
    std::map<std::string, std::string> single;
    std::map<std::string, std::vector<std::string>> multi;
};

std::string key_of(std::string flag) {
    for (char& ch : flag) {
        if (ch == '-') ch = '_';
    }
    return flag;
}

void add_string(CLI::App* app, OptionSet& set, const std::string& flag, const std::string& help) {
    app->add_option("--" + flag, set.single[key_of(flag)], help);
}

void add_list(CLI::App* app, OptionSet& set, const std::string& flag, const std::string& help) {
    app->add_option("--" + flag, set.multi[key_of(flag)], help)->allow_extra_args(false);
}

void add_common(CLI::App* app, OptionSet& set) {
    add_string(app, set, "config", "key=value configuration file; flags override it");
    add_list(app, set, "machine", "preset name(s) or 'ideal'; comma-separated or repeated");
    add_list(app, set, "alg", "mxm, cg, fft or custom; comma-separated or repeated");
    add_list(app, set, "n", "problem size(s)");
    add_string(app, set, "v", "active volume, or 'auto' to optimize");
    add_string(app, set, "pi", "override compute density [flop/(V s)]");
    add_string(app, set, "beta", "override bandwidth density [word/(V s)]");
    add_string(app, set, "s", "override memory density [word/V]");
    add_string(app, set, "c", "override signal speed (m/s)");
    add_string(app, set, "V", "override total volume (m2, mm2, m3 ...)");
    add_string(app, set, "distance-exponent", "D(v) = prefactor * v^exponent");
    add_string(app, set, "distance-prefactor", "D(v) = prefactor * v^exponent");
    add_string(app, set, "format", "output format");
    add_string(app, set, "output", "write to this file instead of stdout");
    add_string(app, set, "seed", "seed for randomized checks");
    for (const auto& k : homlim::cli::custom_keys()) {
        std::string flag = k;
        for (char& ch : flag) {
            if (ch == '_') ch = '-';
        }
        add_string(app, set, flag, "custom cost coefficient");
    }
}

void add_scaling(CLI::App* app, OptionSet& set) {
    add_string(app, set, "v0", "baseline volume (default V * 1e-6)");
    add_list(app, set, "v-list", "volumes to evaluate");
    add_string(app, set, "v-points", "log-spaced points from v0 to V when no --v-list");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"homlim - homogeneous computer performance model"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");

    std::map<std::string, OptionSet> sets;
    auto* solve = app.add_subcommand("solve", "optimal active volume and time breakdown");
    add_common(solve, sets["solve"]);

    auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep as CSV");
    add_common(sweep, sets["sweep"]);
    add_list(sweep, sets["sweep"], "axis", "name[:lo:hi:points[:log|lin]], name in pi,beta,s,c,V,n,v");
    add_string(sweep, sets["sweep"], "metric", "total_time, performance or efficiency (table format)");
    add_string(sweep, sets["sweep"], "spot-check", "re-evaluate this many random records");
    add_string(sweep, sets["sweep"], "max-points", "refuse sweeps larger than this");
    add_string(sweep, sets["sweep"], "threads", "worker threads (0 = all cores)");

    auto* scale = app.add_subcommand("scale", "strong or weak scaling efficiency");
    add_common(scale, sets["scale"]);
    add_scaling(scale, sets["scale"]);
    add_string(scale, sets["scale"], "mode", "strong or weak");
    add_string(scale, sets["scale"], "k", "weak-scaling metric: output, input or work");

    auto* laws = app.add_subcommand("laws", "generalized Amdahl / Gustafson speedups");
    add_common(laws, sets["laws"]);
    add_scaling(laws, sets["laws"]);
    add_string(laws, sets["laws"], "law", "amdahl or gustafson");

    auto* machines = app.add_subcommand("machines", "list, show or export machine presets");
    std::vector<std::string> machine_args;
    machines->add_option("action", machine_args, "list | show <name> | export <name>");
    add_string(machines, sets["machines"], "output", "write to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return homlim::cli::kExitConfigError;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    OptionSet& set = sets[name];

    homlim::KeyValues kv;
    try {
        if (auto it = set.single.find("config"); it != set.single.end() && !it->second.empty()) {
            kv = homlim::load_key_values(it->second);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return homlim::cli::kExitConfigError;
    }
    for (const auto& [key, value] : set.single) {
        if (key == "config") continue;
        if (chosen->count("--" + [&] {
                std::string f = key;
                for (char& ch : f) {
                    if (ch == '_') ch = '-';
                }
                return f;
            }()) > 0) {
            kv[key] = value;
        }
    }
    for (const auto& [key, values] : set.multi) {
        if (values.empty()) continue;
        std::string joined;
        for (const auto& v : values) joined += (joined.empty() ? "" : ",") + v;
        kv[key] = joined;
    }
    return homlim::cli::run(name, kv, machine_args, std::cout, std::cerr);
}
