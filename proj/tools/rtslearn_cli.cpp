// rtslearn command-line front end. Talks to the core only through the C API.
#include "rtslearn/rtslearn.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumeric = 2, kIo = 3 };

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_for(rts_status s) {
    switch (s) {
        case RTS_OK: return kOk;
        case RTS_ERR_CONFIG:
        case RTS_ERR_ARGUMENT: return kConfig;
        default: return kNumeric;
    }
}

struct Failure {
    int code;
};

void check(rts_status s, const char* what) {
    if (s == RTS_OK) return;
    std::cerr << "error: " << what << ": " << rts_last_error() << "\n";
    throw Failure{exit_for(s)};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

struct Common {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int reps = 100;
    int threads = 0;
    bool force = false;
};

struct ResultGuard {
    rts_result* r = nullptr;
    ~ResultGuard() { rts_result_free(r); }
};

struct ConfigGuard {
    rts_config* c = nullptr;
    ~ConfigGuard() { rts_config_free(c); }
};

// Writes every table, the summary and the manifest. Refuses to replace
// existing files unless forced.
void emit(const Common& o, const rts_result* r, const std::string& command, json resolved,
          std::optional<std::uint64_t> seed, std::chrono::steady_clock::time_point start) {
    const fs::path dir(o.out_dir);
    std::vector<std::pair<fs::path, std::string>> files;
    for (std::size_t i = 0; i < rts_result_count(r); ++i)
        files.emplace_back(dir / (std::string(rts_result_name(r, i)) + ".csv"), rts_result_csv(r, i));
    files.emplace_back(dir / "summary.json", std::string(rts_result_summary_json(r)) + "\n");

    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
    if (!o.force) {
        for (const auto& [path, _] : files)
            if (fs::exists(path)) throw UsageError("'" + path.string() + "' exists; pass --force to overwrite");
        if (fs::exists(dir / "manifest.json"))
            throw UsageError("'" + (dir / "manifest.json").string() + "' exists; pass --force to overwrite");
    }
    for (const auto& [path, text] : files) write_file(path, text);

    json m;
    m["command"] = command;
    m["version"] = rts_version();
    if (seed) m["seed"] = *seed;
    m["config"] = std::move(resolved);
    auto outputs = json::array();
    for (const auto& [path, _] : files) outputs.push_back(path.filename().string());
    m["outputs"] = outputs;
    m["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file(dir / "manifest.json", m.dump(2) + "\n");
}

ConfigGuard load_config(const Common& o) {
    ConfigGuard g;
    const std::string text = read_file(o.config_path);
    check(rts_config_from_json(text.c_str(), &g.c), o.config_path.c_str());
    if (o.seed) check(rts_config_set_seed(g.c, *o.seed), "seed");
    return g;
}

json resolved_json(const rts_config* c) {
    const char* text = nullptr;
    check(rts_config_to_json(c, &text), "config");
    return json::parse(text);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rtslearn: learning returns to scale in a multi-sector economy"};
    app.require_subcommand(1);
    Common o;
    std::uint64_t replication = 0;
    std::string scenario_name;
    int horizon = 0;
    bool list = false;

    auto add_out = [&](CLI::App* s) {
        s->add_option("--out", o.out_dir, "Output directory (created if absent)")->required();
        s->add_flag("--force", o.force, "Overwrite existing output files");
    };
    auto add_seed = [&](CLI::App* s) {
        s->add_option("--seed", o.seed, "Seed; overrides the seed in the config");
    };

    auto* sim = app.add_subcommand("simulate", "Run one trajectory");
    sim->add_option("--config", o.config_path, "Economy config (JSON)")->required();
    sim->add_option("--replication", replication, "Replication index of the shock stream");
    add_out(sim);
    add_seed(sim);

    auto* ens = app.add_subcommand("ensemble", "Run a Monte Carlo ensemble");
    ens->add_option("--config", o.config_path, "Economy config (JSON)")->required();
    ens->add_option("--reps", o.reps, "Replications")->check(CLI::PositiveNumber);
    ens->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    add_out(ens);
    add_seed(ens);

    auto* mom = app.add_subcommand("moments", "Closed-form belief moments along the mean-field path");
    mom->add_option("--config", o.config_path, "Economy config (JSON)")->required();
    add_out(mom);

    auto* sc = app.add_subcommand("scenario", "Run a named preset");
    sc->add_option("name", scenario_name, "Scenario name");
    sc->add_flag("--list", list, "List scenario names");
    sc->add_option("--reps", o.reps, "Replications")->check(CLI::PositiveNumber);
    sc->add_option("--threads", o.threads, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    sc->add_option("--horizon", horizon, "Override the preset horizon")->check(CLI::PositiveNumber);
    sc->add_option("--out", o.out_dir, "Output directory (created if absent)");
    sc->add_flag("--force", o.force, "Overwrite existing output files");
    add_seed(sc);

    auto* hd = app.add_subcommand("highdim", "Learn input elasticities for several firms");
    hd->add_option("--config", o.config_path, "High-dimensional config (JSON)")->required();
    add_out(hd);
    add_seed(hd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kConfig;
    }

    const auto start = std::chrono::steady_clock::now();
    try {
        ResultGuard res;
        if (sim->parsed()) {
            auto cfg = load_config(o);
            check(rts_simulate(cfg.c, replication, &res.r), "simulate");
            json resolved = resolved_json(cfg.c);
            const std::uint64_t seed = resolved.at("seed");
            emit(o, res.r, "simulate", resolved, seed, start);
        } else if (ens->parsed()) {
            auto cfg = load_config(o);
            check(rts_ensemble(cfg.c, o.reps, o.threads, &res.r), "ensemble");
            json resolved = resolved_json(cfg.c);
            resolved["reps"] = o.reps;
            const std::uint64_t seed = resolved.at("seed");
            emit(o, res.r, "ensemble", resolved, seed, start);
        } else if (mom->parsed()) {
            auto cfg = load_config(o);
            check(rts_moments(cfg.c, &res.r), "moments");
            emit(o, res.r, "moments", resolved_json(cfg.c), std::nullopt, start);
        } else if (sc->parsed()) {
            if (list) {
                for (std::size_t i = 0; i < rts_scenario_count(); ++i) std::cout << rts_scenario_name(i) << "\n";
                return kOk;
            }
            if (scenario_name.empty()) throw UsageError("scenario: name required (see --list)");
            if (o.out_dir.empty()) throw UsageError("scenario: --out is required");
            const std::uint64_t seed = o.seed.value_or(1);
            check(rts_scenario(scenario_name.c_str(), seed, o.reps, o.threads, horizon, &res.r), "scenario");
            json resolved = json::parse(rts_result_summary_json(res.r));
            emit(o, res.r, "scenario " + scenario_name, resolved, seed, start);
        } else if (hd->parsed()) {
            const std::string text = read_file(o.config_path);
            check(rts_highdim(text.c_str(), o.seed.has_value(), o.seed.value_or(0), &res.r), "highdim");
            json resolved = json::parse(rts_result_summary_json(res.r));
            const std::uint64_t seed = resolved.at("seed");
            emit(o, res.r, "highdim", resolved, seed, start);
        }
    } catch (const Failure& f) {
        return f.code;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfig;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kOk;
}
