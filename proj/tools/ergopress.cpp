// ergopress: relative weighted pressure computations on towers of one-sided
// SFTs, plus the randomized property suite. See README.md for file formats.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ergopress/harness.hpp"
#include "ergopress/random_tower.hpp"
#include "ergopress/tower_io.hpp"

namespace {

using namespace ergopress;

struct CommonArgs {
    std::string tower_file;
    std::string potential_file;
    std::string omega_list = "0.5";
    int n_min = 1;
    int n_max = 8;
    std::string mode = "sup";
    std::string base_word;
    std::string config_file;
    std::uint64_t seed = 42;
    std::string out_file;
    std::string format = "csv";
    int count = 25;
};

std::vector<double> parse_omegas(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t pos = 0;
        double v = std::stod(item, &pos);
        if (pos != item.size()) throw ValidationError("bad omega value: " + item);
        if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("omega must be in [0,1]");
        out.push_back(v);
    }
    if (out.empty()) throw ValidationError("empty omega list");
    return out;
}

Word parse_base(const std::string& text, const Sft& z) {
    Word base;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int idx = z.symbol_index(item);
        if (idx < 0) throw ValidationError("base symbol '" + item + "' is not in the z alphabet");
        base.push_back(idx);
    }
    if (base.empty()) throw ValidationError("empty base word");
    return base;
}

std::string scenario_id(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string stem = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = stem.find_last_of('.');
    return dot == std::string::npos ? stem : stem.substr(0, dot);
}

void write_output(const std::string& text, const std::string& out_file) {
    if (out_file.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_file, std::ios::binary);
    if (!out) throw ValidationError("cannot write to " + out_file);
    out << text;
}

struct Loaded {
    Tower tower;
    Potential potential;
    Scenario scenario;
};

Loaded load_scenario(const CommonArgs& args) {
    if (args.tower_file.empty()) throw ValidationError("--tower is required");
    Json tj = parse_file(args.tower_file);
    Tower tower = tower_from_json(tj);
    Potential f = Potential::zero(tower.x);
    if (tj.contains("potential")) f = potential_from_json(tj["potential"], tower.x);
    if (!args.potential_file.empty()) f = load_potential(args.potential_file, tower.x);

    Scenario s;
    s.id = scenario_id(args.tower_file);
    s.omegas = parse_omegas(args.omega_list);
    s.n_min = args.n_min;
    s.n_max = args.n_max;
    if (s.n_min < 1 || s.n_max < s.n_min) throw ValidationError("need 1 <= n-min <= n-max");
    s.mode = args.mode;
    if (s.mode != "sup" && s.mode != "orbit") throw ValidationError("mode must be sup or orbit");
    if (s.mode == "orbit") {
        if (args.base_word.empty()) throw ValidationError("orbit mode needs --base");
        s.base = parse_base(args.base_word, tower.z);
    }
    if (!args.config_file.empty()) s.config = load_config(args.config_file);
    s.config.seed = args.seed;
    s.format = args.format;
    if (s.format != "csv" && s.format != "json")
        throw ValidationError("format must be csv or json");
    return Loaded{std::move(tower), std::move(f), std::move(s)};
}

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_tower) {
    if (needs_tower) {
        cmd->add_option("--tower", args.tower_file, "tower description file (JSON)");
        cmd->add_option("--potential", args.potential_file, "potential table file (JSON)");
        cmd->add_option("--omega", args.omega_list, "comma-separated list of weights in [0,1]");
        cmd->add_option("--n-min", args.n_min, "first reported level");
        cmd->add_option("--n-max", args.n_max, "last reported level");
        cmd->add_option("--config", args.config_file, "optimizer config file (JSON)");
    }
    cmd->add_option("--seed", args.seed, "root seed");
    cmd->add_option("--out", args.out_file, "output file (default stdout)");
    cmd->add_option("--format", args.format, "csv or json");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"relative weighted pressure on towers of one-sided SFTs"};
    app.require_subcommand(1);

    CommonArgs args;

    CLI::App* pressure = app.add_subcommand("pressure", "finite-level pressure + Fekete bracket");
    add_common(pressure, args, true);

    CLI::App* weighted = app.add_subcommand("weighted", "weighted fiber sums over z");
    add_common(weighted, args, true);
    weighted->add_option("--mode", args.mode, "sup or orbit");
    weighted->add_option("--base", args.base_word, "periodic base block over z (comma-separated)");

    CLI::App* vp = app.add_subcommand("vp-check", "two-sided variational check");
    add_common(vp, args, true);

    CLI::App* sweep = app.add_subcommand("sweep-omega", "omega sweep curve (needs >= 3 points)");
    add_common(sweep, args, true);

    CLI::App* suite = app.add_subcommand("property-suite", "randomized property suite");
    add_common(suite, args, false);
    suite->add_option("--count", args.count, "number of random towers");

    CLI::App* gen = app.add_subcommand("gen-random", "emit random tower files");
    add_common(gen, args, false);
    gen->add_option("--count", args.count, "number of towers to generate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (pressure->parsed() || weighted->parsed() || vp->parsed() || sweep->parsed()) {
            Loaded loaded = load_scenario(args);
            if (pressure->parsed()) {
                write_output(run_pressure(loaded.tower, loaded.potential, loaded.scenario),
                             args.out_file);
            } else if (weighted->parsed()) {
                write_output(run_weighted(loaded.tower, loaded.potential, loaded.scenario),
                             args.out_file);
            } else if (sweep->parsed()) {
                write_output(run_sweep_omega(loaded.tower, loaded.potential, loaded.scenario),
                             args.out_file);
            } else {
                bool all_pass = true;
                std::string report =
                    run_vp_check(loaded.tower, loaded.potential, loaded.scenario, all_pass);
                write_output(report, args.out_file);
                if (!all_pass) return 1;
            }
        } else if (suite->parsed()) {
            bool all_pass = true;
            std::string report = run_property_suite(args.seed, args.count, args.format, all_pass);
            write_output(report, args.out_file);
            if (!all_pass) return 1;
        } else if (gen->parsed()) {
            Rng root(args.seed);
            std::string prefix = args.out_file.empty() ? "tower_" : args.out_file;
            for (int i = 0; i < args.count; ++i) {
                Rng stream = root.split(i);
                RandomTower rt = random_tower(stream);
                char path[512];
                std::snprintf(path, sizeof(path), "%s%03d.json", prefix.c_str(), i);
                std::ofstream out(path, std::ios::binary);
                if (!out) throw ValidationError(std::string("cannot write to ") + path);
                out << tower_to_json(rt.tower, rt.potential).dump(2) << '\n';
                std::cout << path << '\n';
            }
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
