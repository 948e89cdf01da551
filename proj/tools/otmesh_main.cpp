// Command-line driver: one subcommand per scenario, flat key=value settings
// files (--config), and exit codes 1 (bad configuration), 2 (solver failure),
// 3 (file I/O failure).
#include <cstdlib>
#include <functional>
#include <iostream>
#include <list>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "otmesh/cli_io.hpp"
#include "otmesh/errors.hpp"

namespace {

using otmesh::ConfigError;

double to_double(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size())
        throw ConfigError(key + ": expected a number, got '" + s + "'");
    return v;
}

int to_int(const std::string& s, const std::string& key) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size())
        throw ConfigError(key + ": expected an integer, got '" + s + "'");
    return static_cast<int>(v);
}

/// One subcommand: its parsed configuration plus the settings-file keys it
/// accepts (the same names as its long options, without the dashes).
struct SubCfg {
    CLI::App* sub = nullptr;
    otmesh::ScenarioConfig cfg;
    std::string config_path;
    std::map<std::string, std::function<void(const std::string&)>> keys;
};

void add_d(SubCfg& s, const std::string& key, double& ref, const std::string& desc) {
    s.sub->add_option("--" + key, ref, desc);
    s.keys[key] = [&ref, key](const std::string& v) { ref = to_double(v, key); };
}

void add_i(SubCfg& s, const std::string& key, int& ref, const std::string& desc) {
    s.sub->add_option("--" + key, ref, desc);
    s.keys[key] = [&ref, key](const std::string& v) { ref = to_int(v, key); };
}

void add_s(SubCfg& s, const std::string& key, std::string& ref,
           const std::string& desc) {
    s.sub->add_option("--" + key, ref, desc);
    s.keys[key] = [&ref](const std::string& v) { ref = v; };
}

SubCfg& add_scenario(CLI::App& app, std::list<SubCfg>& subs,
                     const std::string& name, const std::string& desc) {
    SubCfg& s = subs.emplace_back();
    s.cfg.scenario = name;
    if (const char* env = std::getenv("OTMESH_OUT"); env && *env)
        s.cfg.out_dir = env;
    s.sub = app.add_subcommand(name, desc);
    add_s(s, "out", s.cfg.out_dir, "output directory (default: $OTMESH_OUT or .)");
    add_s(s, "formats", s.cfg.formats, "comma-separated outputs: csv,vtk,json");
    add_i(s, "stride", s.cfg.stride, "ellipse sampling stride");
    s.sub->add_option("--config", s.config_path,
                      "settings file (key = value lines; flags take precedence)");
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "otmesh: analytic and numeric optimal-transport mesh redistribution"};
    app.require_subcommand(1);
    std::list<SubCfg> subs;

    {
        SubCfg& s = add_scenario(app, subs, "linear-shock",
                                 "mesh adapted to one straight interior layer");
        add_d(s, "alpha", s.cfg.alpha, "layer strength");
        add_i(s, "n", s.cfg.n, "nodes per side");
    }
    {
        SubCfg& s = add_scenario(app, subs, "linear-cross",
                                 "mesh adapted to two crossing straight layers");
        add_d(s, "alpha", s.cfg.alpha, "first layer strength");
        add_d(s, "magnitude2", s.cfg.magnitude2, "second layer strength");
        add_d(s, "width2", s.cfg.width2, "second layer inverse width");
        add_i(s, "n", s.cfg.n, "nodes per side");
    }
    {
        SubCfg& s = add_scenario(app, subs, "radial-blowup",
                                 "polar mesh focused on a density peak at the origin");
        add_d(s, "alpha1", s.cfg.alpha1, "peak strength");
        add_d(s, "alpha2", s.cfg.alpha2, "peak inverse width");
        add_i(s, "nr", s.cfg.nr, "radial nodes");
        add_i(s, "nphi", s.cfg.nphi, "angular nodes");
    }
    {
        SubCfg& s = add_scenario(app, subs, "radial-ring",
                                 "polar mesh focused on an annular density ring");
        add_d(s, "alpha1", s.cfg.alpha1, "ring strength");
        add_d(s, "alpha2", s.cfg.alpha2, "ring inverse width");
        add_d(s, "a", s.cfg.a, "ring radius");
        add_i(s, "nr", s.cfg.nr, "radial nodes");
        add_i(s, "nphi", s.cfg.nphi, "angular nodes");
    }
    {
        SubCfg& s = add_scenario(app, subs, "ma-numeric",
                                 "relaxation solve of the mesh equation on a square");
        s.cfg.n = 61;
        add_s(s, "density", s.cfg.density, "target density: ring | blowup");
        add_d(s, "alpha1", s.cfg.alpha1, "feature strength");
        add_d(s, "alpha2", s.cfg.alpha2, "feature inverse width");
        add_d(s, "a", s.cfg.a, "ring radius (ring density only)");
        add_i(s, "grid", s.cfg.n, "nodes per side");
        add_d(s, "tol", s.cfg.tol, "residual target");
    }
    {
        SubCfg& s = add_scenario(app, subs, "sine-feature",
                                 "relaxation solve for a sinusoidal curved layer");
        s.cfg.alpha1 = 20.0;
        s.cfg.alpha2 = 100.0;
        s.cfg.n = 120;
        add_d(s, "alpha1", s.cfg.alpha1, "layer strength");
        add_d(s, "alpha2", s.cfg.alpha2, "layer inverse width");
        add_d(s, "amplitude", s.cfg.amplitude, "feature amplitude");
        add_i(s, "n", s.cfg.n, "columns");
        add_i(s, "ny", s.cfg.ny, "rows (default: columns + 1)");
        add_d(s, "tol", s.cfg.tol, "residual target");
    }
    {
        SubCfg& s = add_scenario(app, subs, "buckley-leverett",
                                 "two-phase flow demo on a moving mesh");
        s.cfg.n = 80;
        add_i(s, "n", s.cfg.n, "nodes per side");
        add_d(s, "tend", s.cfg.tend, "end time");
        add_d(s, "viscosity", s.cfg.viscosity, "diffusion coefficient");
        add_d(s, "cfl", s.cfg.cfl, "advective CFL number");
        add_i(s, "max-steps", s.cfg.max_steps, "time-step budget");
        add_s(s, "snapshots", s.cfg.snapshots,
              "comma-separated output times, e.g. 0.2,0.4");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        for (SubCfg& s : subs) {
            if (!s.sub->parsed()) continue;
            if (!s.config_path.empty()) {
                for (const auto& [k, v] : otmesh::parse_config_file(s.config_path)) {
                    auto it = s.keys.find(k);
                    if (it == s.keys.end())
                        throw ConfigError("settings file '" + s.config_path +
                                          "': unknown key '" + k + "'");
                    if (s.sub->count("--" + k) > 0) continue;  // flag wins
                    it->second(v);
                }
            }
            std::cout << otmesh::run_scenario(s.cfg).dump(2) << "\n";
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const otmesh::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const otmesh::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
