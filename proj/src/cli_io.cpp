#include "otmesh/cli_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "otmesh/analytic_linear.hpp"
#include "otmesh/analytic_radial.hpp"
#include "otmesh/bl_sim.hpp"
#include "otmesh/density.hpp"
#include "otmesh/errors.hpp"
#include "otmesh/feature_analysis.hpp"
#include "otmesh/ma_solver.hpp"

namespace otmesh {

namespace {

using nlohmann::ordered_json;

constexpr const char* kMeshHeader = "i,j,xi,eta,x,y,Qs,lambda1,lambda2,e1x,e1y";

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_double(const std::string& s, const std::string& field) {
    const std::string t = trim(s);
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size())
        throw ConfigError(field + ": expected a number, got '" + s + "'");
    return v;
}

long parse_long(const std::string& s, const std::string& field) {
    const std::string t = trim(s);
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        throw ConfigError(field + ": expected an integer, got '" + s + "'");
    return v;
}

std::FILE* open_for_write(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    return f;
}

/// Formats selected by the run; also validates the format list.
struct FormatSet {
    bool csv = false, vtk = false, json = false;
};

FormatSet parse_formats(const std::string& formats) {
    FormatSet fs;
    for (const std::string& tok : split(formats, ',')) {
        if (tok == "csv") fs.csv = true;
        else if (tok == "vtk") fs.vtk = true;
        else if (tok == "json") fs.json = true;
        else if (!tok.empty())
            throw ConfigError("formats: unknown format '" + tok +
                              "' (expected csv, vtk, json)");
    }
    if (!fs.csv && !fs.vtk && !fs.json)
        throw ConfigError("formats: at least one of csv, vtk, json is required");
    return fs;
}

std::vector<double> parse_times(const std::string& s, const std::string& field) {
    std::vector<double> out;
    if (trim(s).empty()) return out;
    for (const std::string& tok : split(s, ','))
        out.push_back(parse_double(tok, field));
    return out;
}

/// Collects the files of one run and writes them into the output directory.
class Emitter {
  public:
    Emitter(const ScenarioConfig& cfg)
        : dir_(cfg.out_dir), base_(cfg.scenario), fs_(parse_formats(cfg.formats)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec)
            throw IoError("cannot create output directory '" + dir_ +
                          "': " + ec.message());
    }

    bool csv() const { return fs_.csv; }
    bool vtk() const { return fs_.vtk; }
    bool json() const { return fs_.json; }

    std::string path(const std::string& suffix) {
        written_.push_back(base_ + suffix);
        return dir_ + "/" + base_ + suffix;
    }

    /// Standard trio for one mesh: CSV + VTK + sampled ellipses.
    void mesh(const MeshExport& mex, const std::string& tag,
              const std::vector<std::pair<std::string, const std::vector<double>*>>&
                  scalars = {}) {
        if (fs_.csv) write_mesh_csv(path(tag + "_mesh.csv"), mex);
        if (fs_.vtk) write_mesh_vtk(path(tag + "_mesh.vtk"), mex, scalars);
    }

    void ellipses(const std::vector<Ellipse>& es, const std::string& tag) {
        if (fs_.csv) write_ellipses_csv(path(tag + "_ellipses.csv"), es);
    }

    void manifest(ordered_json& m) {
        if (!fs_.json) return;
        const std::string p = path("_manifest.json");
        m["outputs"] = outputs();  // the manifest lists itself
        std::FILE* f = open_for_write(p);
        const std::string text = m.dump(2) + "\n";
        std::fwrite(text.data(), 1, text.size(), f);
        std::fclose(f);
    }

    ordered_json outputs() const { return ordered_json(written_); }

  private:
    std::string dir_, base_;
    FormatSet fs_;
    std::vector<std::string> written_;
};

ordered_json max_qs_entry(const QualityReport& rep) {
    const size_t k = static_cast<size_t>(rep.grid.idx(rep.max_i, rep.max_j));
    return ordered_json{{"value", rep.max_qs},
                        {"i", rep.max_i},
                        {"j", rep.max_j},
                        {"x", rep.xs[k]},
                        {"y", rep.ys[k]}};
}

// ---------------------------------------------------------------- linear --

ordered_json scenario_linear(const ScenarioConfig& cfg, Emitter& em, bool cross) {
    const LinearDensity d =
        cross ? crossing_shock_density(cfg.alpha, cfg.magnitude2, cfg.width2)
              : single_shock_density(cfg.alpha);
    const LinearMap map(d);
    const Grid2D g{cfg.n,           cfg.n,         0.0, 1.0, 0.0, 1.0,
                   AxisBC::periodic, AxisBC::periodic};
    const MeshMapping mesh = map.mesh(g);
    DensityField rho = DensityField::from_function(
        [d](double x, double y) { return d.rho({x, y}); }, map.theta());
    const QualityReport rep = quality_report(mesh, rho);
    const MeshExport mex = mesh_export(rep);

    em.mesh(mex, "");
    em.ellipses(ellipse_field(rep, cfg.stride), "");

    ordered_json m;
    m["scenario"] = cfg.scenario;
    ordered_json params{{"alpha", cfg.alpha}, {"n", cfg.n}};
    if (cross) {
        params["magnitude2"] = cfg.magnitude2;
        params["width2"] = cfg.width2;
    }
    m["parameters"] = params;
    m["theta"] = map.theta();
    m["theta_components"] = {map.theta1(), map.theta2()};
    if (cross) {
        // The characteristic sample points: inside the first layer only,
        // inside the second only, at the intersection, and in the background.
        const struct {
            const char* label;
            Vec2 x;
        } pts[] = {{"layer1", {0.25, 0.75}},
                   {"layer2", {0.25, 0.25}},
                   {"intersection", {0.5, 0.5}},
                   {"background", {0.125, 0.375}}};
        ordered_json samples = ordered_json::array();
        for (const auto& p : pts)
            samples.push_back(ordered_json{{"label", p.label},
                                           {"x", p.x.x},
                                           {"y", p.x.y},
                                           {"Qs", map.skewness_at(p.x)}});
        m["qs_samples"] = samples;
    } else {
        m["qs_feature"] = shock_width_skewness(cfg.alpha, map.theta());
        const double th = map.theta();
        m["qs_background"] = 0.5 * (th + 1.0 / th);
    }
    m["max_qs"] = max_qs_entry(rep);
    m["max_residual"] = rep.max_resid;
    return m;
}

// ---------------------------------------------------------------- radial --

ordered_json scenario_radial(const ScenarioConfig& cfg, Emitter& em, bool ring) {
    RadialDensity d;
    d.alpha1 = cfg.alpha1;
    d.alpha2 = cfg.alpha2;
    d.a = ring ? cfg.a : 0.0;
    d.r_star = 0.5;
    d.R_star = 0.5;
    d.check();
    const RadialMap map(d);
    const MeshMapping mesh = map.polar_mesh(cfg.nr, cfg.nphi);
    const Grid2D& g = mesh.grid;

    MeshExport mex;
    mex.grid = g;
    mex.rows.reserve(static_cast<size_t>(g.size()));
    std::vector<Ellipse> ellipses;
    const double hr = g.hx(), hphi = g.hy();
    for (int i = 0; i < g.nx; ++i) {
        const double r = g.xi(i);
        const double qs = map.skewness_exact(r);
        for (int j = 0; j < g.ny; ++j) {
            const double phi = g.eta(j);
            const size_t k = static_cast<size_t>(g.idx(i, j));
            const EigenPair2 ep =
                map.eigenpairs({r * std::cos(phi), r * std::sin(phi)});
            MeshRow row;
            row.i = i;
            row.j = j;
            row.xi = r;
            row.eta = phi;
            row.x = mesh.xs[k];
            row.y = mesh.ys[k];
            row.qs = qs;
            row.lambda1 = ep.lambda1;
            row.lambda2 = ep.lambda2;
            row.e1x = ep.e1.x;
            row.e1y = ep.e1.y;
            mex.rows.push_back(row);
            if (i % cfg.stride == 0 && j % cfg.stride == 0)
                ellipses.push_back(Ellipse{{row.x, row.y},
                                           0.5 * ep.lambda1 * hr,
                                           0.5 * ep.lambda2 * r * hphi,
                                           ep.e1});
        }
    }
    em.mesh(mex, "");
    em.ellipses(ellipses, "");

    // Skewness profile scan over the computational radius.
    const int scan = 4096;
    double qs_max = 0.0, r_at_max = 0.0;
    for (int s = 0; s <= scan; ++s) {
        const double r = d.r_star * s / scan;
        const double q = map.skewness_exact(r);
        if (q > qs_max) {
            qs_max = q;
            r_at_max = r;
        }
    }

    ordered_json m;
    m["scenario"] = cfg.scenario;
    ordered_json params{{"alpha1", cfg.alpha1},
                        {"alpha2", cfg.alpha2},
                        {"nr", cfg.nr},
                        {"nphi", cfg.nphi}};
    if (ring) params["a"] = cfg.a;
    m["parameters"] = params;
    m["theta"] = map.theta();
    m["qs_center"] = map.skewness_exact(0.0);
    m["qs_boundary"] = map.skewness_exact(d.r_star);
    if (ring) {
        // Skewness on the feature crest, where R(r) = a.
        const double rc = std::sqrt(F_of_R(d, d.a) / map.theta());
        m["qs_crest"] = map.skewness_exact(rc);
        m["crest_R"] = d.a;
    } else {
        try {
            m["qs_max_formula"] = qs_max_blowup(cfg.alpha1);
        } catch (const std::domain_error& e) {
            throw ConfigError(std::string("alpha1: ") + e.what());
        }
    }
    m["qs_max_profile"] = qs_max;
    m["qs_max_at_R"] = map.R_of_r(r_at_max);
    return m;
}

// ------------------------------------------------------------ ma-numeric --

ordered_json scenario_ma(const ScenarioConfig& cfg, Emitter& em) {
    const bool ring = cfg.density == "ring";
    RadialDensity d;
    d.alpha1 = cfg.alpha1;
    d.alpha2 = cfg.alpha2;
    d.a = ring ? cfg.a : 0.0;
    d.r_star = 0.5;
    d.R_star = 0.5;
    d.check();
    const Grid2D g{cfg.n,          cfg.n,         -0.5, 0.5, -0.5, 0.5,
                   AxisBC::neumann, AxisBC::neumann};
    DensityField rho = DensityField::from_function(
        [d](double x, double y) { return d.rho_at({x, y}); });
    SolverConfig sc;
    sc.tol = cfg.tol;
    const SolveResult sol = solve_ma(g, rho, sc);
    rho.theta = sol.stats.theta;
    const QualityReport rep = quality_report(sol.mesh, rho);
    const MeshExport mex = mesh_export(rep);

    em.mesh(mex, "");
    em.ellipses(ellipse_field(rep, cfg.stride), "");

    ordered_json m;
    m["scenario"] = cfg.scenario;
    m["parameters"] = ordered_json{{"density", cfg.density},
                                   {"alpha1", cfg.alpha1},
                                   {"alpha2", cfg.alpha2},
                                   {"a", ring ? cfg.a : 0.0},
                                   {"n", cfg.n},
                                   {"tol", cfg.tol}};
    m["theta"] = sol.stats.theta;
    m["iterations"] = sol.stats.iterations;
    m["residual"] = sol.stats.residual;
    if (ring) {
        // Skewness along the positive x-axis: the center, the ring crest,
        // and the domain boundary, each sampled at the physically nearest
        // mesh node (robust regardless of grid parity).
        const auto node_qs = [&](double x, double y) {
            size_t best = 0;
            double bd = 1e300;
            for (size_t k = 0; k < rep.qs.size(); ++k) {
                const double dx = rep.xs[k] - x, dy = rep.ys[k] - y;
                const double dd = dx * dx + dy * dy;
                if (dd < bd) {
                    bd = dd;
                    best = k;
                }
            }
            return ordered_json{{"x", rep.xs[best]},
                                {"y", rep.ys[best]},
                                {"Qs", rep.qs[best]}};
        };
        m["qs_samples"] = ordered_json::array(
            {node_qs(0.0, 0.0), node_qs(d.a, 0.0), node_qs(0.5, 0.0)});
    }
    ordered_json mq = max_qs_entry(rep);
    mq["R"] = std::hypot(double(mq["x"]), double(mq["y"]));
    m["max_qs"] = mq;
    m["max_residual"] = rep.max_resid;
    return m;
}

// ------------------------------------------------------------------ sine --

ordered_json scenario_sine(const ScenarioConfig& cfg, Emitter& em) {
    const int ny = cfg.ny > 0 ? cfg.ny : cfg.n + 1;
    const Grid2D g{cfg.n,           ny,            -0.5, 0.5, -0.5, 0.5,
                   AxisBC::periodic, AxisBC::neumann};
    const FeatureCurve curve = sine_feature_curve(cfg.amplitude);
    DensityField rho = feature_density(curve, cfg.alpha1, cfg.alpha2);
    SolverConfig sc;
    sc.tol = cfg.tol;
    const SolveResult sol = solve_ma(g, rho, sc);
    rho.theta = sol.stats.theta;
    const QualityReport rep = quality_report(sol.mesh, rho);
    const MeshExport mex = mesh_export(rep);

    em.mesh(mex, "");
    em.ellipses(ellipse_field(rep, cfg.stride), "");

    // Compare the mesh with the straight-layer model where the feature is
    // nearly straight (large curvature radius).
    const double theta = sol.stats.theta;
    const DensityField rho_model = rho;
    const auto model = [rho_model, theta, curve](Vec2 x) {
        return linear_surrogate(rho_model, theta, x, curve);
    };
    const auto nearly_straight = [curve](Vec2 x) {
        return curve.curvature_radius(x) > 0.5;
    };
    const AlignmentReport align = alignment_diagnostics(
        sol.mesh, rho, 1.0 + 0.5 * cfg.alpha1, model, nearly_straight);

    ordered_json m;
    m["scenario"] = cfg.scenario;
    m["parameters"] = ordered_json{{"alpha1", cfg.alpha1},
                                   {"alpha2", cfg.alpha2},
                                   {"amplitude", cfg.amplitude},
                                   {"n", cfg.n},
                                   {"ny", ny},
                                   {"tol", cfg.tol}};
    m["theta"] = theta;
    m["iterations"] = sol.stats.iterations;
    m["residual"] = sol.stats.residual;
    m["max_qs"] = max_qs_entry(rep);
    m["straight_section_alignment"] =
        ordered_json{{"band_nodes", align.band_count},
                     {"interior_nodes", align.interior_count},
                     {"max_angle", align.max_angle_interior},
                     {"mean_eig_err", align.mean_eig_err_interior},
                     {"max_err_tangential", align.max_err_tangential_interior},
                     {"max_err_normal", align.max_err_normal_interior}};
    return m;
}

// -------------------------------------------------------- buckley-leverett --

ordered_json scenario_bl(const ScenarioConfig& cfg, Emitter& em) {
    BLConfig b;
    b.n = cfg.n;
    b.tend = cfg.tend;
    b.viscosity = cfg.viscosity;
    b.cfl = cfg.cfl;
    b.max_steps = cfg.max_steps;
    b.snapshot_times = parse_times(cfg.snapshots, "snapshots");
    const BLResult r = run_buckley_leverett(b);
    const QualityReport rep = quality_report(r.mesh);
    const MeshExport mex = mesh_export(rep);

    em.mesh(mex, "", {{"u", &r.u}});
    em.ellipses(ellipse_field(rep, cfg.stride), "");
    if (em.csv())
        write_scalar_csv(em.path("_solution.csv"), r.mesh.grid, r.u, "u");

    ordered_json snaps = ordered_json::array();
    for (size_t s = 0; s < r.snapshots.size(); ++s) {
        const BLSnapshot& snap = r.snapshots[s];
        const std::string tag = "_snap" + std::to_string(s);
        const QualityReport srep = quality_report(snap.mesh);
        em.mesh(mesh_export(srep), tag, {{"u", &snap.u}});
        if (em.csv())
            write_scalar_csv(em.path(tag + "_solution.csv"), snap.mesh.grid,
                             snap.u, "u");
        snaps.push_back(ordered_json{{"time", snap.time}, {"max_qs", srep.max_qs}});
    }

    const std::vector<double> dens = arc_length_density(r.mesh, r.u);
    double umin = r.u[0], umax = r.u[0];
    for (double v : r.u) {
        umin = std::min(umin, v);
        umax = std::max(umax, v);
    }

    ordered_json m;
    m["scenario"] = cfg.scenario;
    m["parameters"] = ordered_json{{"n", cfg.n},
                                   {"tend", cfg.tend},
                                   {"viscosity", cfg.viscosity},
                                   {"cfl", cfg.cfl},
                                   {"max_steps", cfg.max_steps}};
    m["steps"] = r.steps;
    m["time"] = r.time;
    m["mesh_residual"] = r.final_residual;
    m["max_qs"] = max_qs_entry(rep);
    m["u_range"] = {umin, umax};
    m["max_front_density"] = *std::max_element(dens.begin(), dens.end());
    m["snapshots"] = snaps;
    return m;
}

}  // namespace

// ------------------------------------------------------------ serializers --

MeshExport mesh_export(const QualityReport& rep) {
    MeshExport mex;
    mex.grid = rep.grid;
    mex.rows.reserve(rep.qs.size());
    for (int i = 0; i < rep.grid.nx; ++i)
        for (int j = 0; j < rep.grid.ny; ++j) {
            const size_t k = static_cast<size_t>(rep.grid.idx(i, j));
            MeshRow row;
            row.i = i;
            row.j = j;
            row.xi = rep.grid.xi(i);
            row.eta = rep.grid.eta(j);
            row.x = rep.xs[k];
            row.y = rep.ys[k];
            row.qs = rep.qs[k];
            row.lambda1 = rep.eig[k].lambda1;
            row.lambda2 = rep.eig[k].lambda2;
            row.e1x = rep.eig[k].e1.x;
            row.e1y = rep.eig[k].e1.y;
            mex.rows.push_back(row);
        }
    return mex;
}

void write_mesh_csv(const std::string& path, const MeshExport& mex) {
    std::FILE* f = open_for_write(path);
    std::fprintf(f, "%s\n", kMeshHeader);
    for (const MeshRow& r : mex.rows)
        std::fprintf(f,
                     "%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,"
                     "%.17g\n",
                     r.i, r.j, r.xi, r.eta, r.x, r.y, r.qs, r.lambda1, r.lambda2,
                     r.e1x, r.e1y);
    std::fclose(f);
}

MeshExport read_mesh_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(in, line)) throw IoError("'" + path + "': empty file");
    if (trim(line) != kMeshHeader)
        throw IoError("'" + path + "': expected header '" + kMeshHeader + "'");
    MeshExport mex;
    int max_i = 0, max_j = 0;
    size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cols = split(line, ',');
        if (cols.size() != 11)
            throw IoError("'" + path + "' line " + std::to_string(lineno) +
                          ": expected 11 columns, got " +
                          std::to_string(cols.size()));
        const std::string where = "'" + path + "' line " + std::to_string(lineno);
        MeshRow r;
        try {
            r.i = static_cast<int>(parse_long(cols[0], where));
            r.j = static_cast<int>(parse_long(cols[1], where));
            r.xi = parse_double(cols[2], where);
            r.eta = parse_double(cols[3], where);
            r.x = parse_double(cols[4], where);
            r.y = parse_double(cols[5], where);
            r.qs = parse_double(cols[6], where);
            r.lambda1 = parse_double(cols[7], where);
            r.lambda2 = parse_double(cols[8], where);
            r.e1x = parse_double(cols[9], where);
            r.e1y = parse_double(cols[10], where);
        } catch (const ConfigError& e) {
            throw IoError(e.what());  // corrupt file, not a usage problem
        }
        max_i = std::max(max_i, r.i);
        max_j = std::max(max_j, r.j);
        mex.rows.push_back(r);
    }
    if (mex.rows.empty()) throw IoError("'" + path + "': no data rows");
    mex.grid.nx = max_i + 1;
    mex.grid.ny = max_j + 1;
    mex.grid.x0 = mex.rows.front().xi;
    mex.grid.x1 = mex.rows.back().xi;
    mex.grid.y0 = mex.rows.front().eta;
    mex.grid.y1 = mex.rows.back().eta;
    if (static_cast<int>(mex.rows.size()) != mex.grid.nx * mex.grid.ny)
        throw IoError("'" + path + "': expected " +
                      std::to_string(mex.grid.nx * mex.grid.ny) +
                      " rows for a " + std::to_string(mex.grid.nx) + "x" +
                      std::to_string(mex.grid.ny) + " grid, got " +
                      std::to_string(mex.rows.size()));
    return mex;
}

void write_scalar_csv(const std::string& path, const Grid2D& g,
                      const std::vector<double>& values, const std::string& name) {
    if (values.size() != static_cast<size_t>(g.size()))
        throw ConfigError("scalar field size does not match the grid");
    std::FILE* f = open_for_write(path);
    std::fprintf(f, "i,j,%s\n", name.c_str());
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j)
            std::fprintf(f, "%d,%d,%.17g\n", i, j,
                         values[static_cast<size_t>(g.idx(i, j))]);
    std::fclose(f);
}

void write_ellipses_csv(const std::string& path, const std::vector<Ellipse>& es) {
    std::FILE* f = open_for_write(path);
    std::fprintf(f, "x,y,semi1,semi2,axis1x,axis1y\n");
    for (const Ellipse& e : es)
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", e.center.x,
                     e.center.y, e.semi1, e.semi2, e.axis1.x, e.axis1.y);
    std::fclose(f);
}

void write_mesh_vtk(
    const std::string& path, const MeshExport& mex,
    const std::vector<std::pair<std::string, const std::vector<double>*>>& scalars) {
    const int nx = mex.grid.nx, ny = mex.grid.ny;
    const size_t n = mex.rows.size();
    for (const auto& [name, vals] : scalars)
        if (!vals || vals->size() != n)
            throw ConfigError("VTK scalar '" + name +
                              "' does not match the mesh size");
    std::FILE* f = open_for_write(path);
    std::fprintf(f, "# vtk DataFile Version 3.0\n");
    std::fprintf(f, "otmesh structured mesh\n");
    std::fprintf(f, "ASCII\n");
    std::fprintf(f, "DATASET STRUCTURED_GRID\n");
    std::fprintf(f, "DIMENSIONS %d %d 1\n", nx, ny);
    std::fprintf(f, "POINTS %zu double\n", n);
    // VTK expects the first dimension (i) to vary fastest.
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            const MeshRow& r = mex.rows[static_cast<size_t>(i) * ny + j];
            std::fprintf(f, "%.17g %.17g 0\n", r.x, r.y);
        }
    std::fprintf(f, "POINT_DATA %zu\n", n);
    const auto scalar = [&](const char* name, auto&& get) {
        std::fprintf(f, "SCALARS %s double 1\n", name);
        std::fprintf(f, "LOOKUP_TABLE default\n");
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                std::fprintf(f, "%.17g\n", get(static_cast<size_t>(i) * ny + j));
    };
    scalar("Qs", [&](size_t k) { return mex.rows[k].qs; });
    scalar("lambda1", [&](size_t k) { return mex.rows[k].lambda1; });
    scalar("lambda2", [&](size_t k) { return mex.rows[k].lambda2; });
    for (const auto& [name, vals] : scalars)
        scalar(name.c_str(), [&](size_t k) { return (*vals)[k]; });
    std::fclose(f);
}

std::vector<std::pair<std::string, std::string>> parse_config_file(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open settings file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const size_t eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("settings file '" + path + "' line " +
                              std::to_string(lineno) +
                              ": expected 'key = value'");
        out.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return out;
}

// -------------------------------------------------------------- scenarios --

void ScenarioConfig::check() const {
    static const std::set<std::string> known{
        "linear-shock", "linear-cross",    "radial-blowup",   "radial-ring",
        "ma-numeric",   "sine-feature",    "buckley-leverett"};
    if (!known.count(scenario))
        throw ConfigError("scenario: unknown scenario '" + scenario + "'");
    parse_formats(formats);
    if (out_dir.empty()) throw ConfigError("out: output directory must not be empty");
    if (n < 3) throw ConfigError("n: need at least 3 nodes per side");
    if (ny != 0 && ny < 3) throw ConfigError("ny: need at least 3 rows");
    if (nr < 2) throw ConfigError("nr: need at least 2 radial nodes");
    if (nphi < 4) throw ConfigError("nphi: need at least 4 angular nodes");
    if (stride < 1) throw ConfigError("stride: must be at least 1");
    if (!(tol > 0.0)) throw ConfigError("tol: must be positive");
    if (density != "ring" && density != "blowup")
        throw ConfigError("density: expected 'ring' or 'blowup', got '" +
                          density + "'");
    if (!(tend >= 0.0)) throw ConfigError("tend: must be non-negative");
    if (!(viscosity >= 0.0)) throw ConfigError("viscosity: must be non-negative");
    if (!(cfl > 0.0)) throw ConfigError("cfl: must be positive");
    if (max_steps < 1) throw ConfigError("max-steps: must be at least 1");
    parse_times(snapshots, "snapshots");
}

nlohmann::ordered_json run_scenario(const ScenarioConfig& cfg) {
    cfg.check();
    Emitter em(cfg);
    ordered_json m;
    if (cfg.scenario == "linear-shock") m = scenario_linear(cfg, em, false);
    else if (cfg.scenario == "linear-cross") m = scenario_linear(cfg, em, true);
    else if (cfg.scenario == "radial-blowup") m = scenario_radial(cfg, em, false);
    else if (cfg.scenario == "radial-ring") m = scenario_radial(cfg, em, true);
    else if (cfg.scenario == "ma-numeric") m = scenario_ma(cfg, em);
    else if (cfg.scenario == "sine-feature") m = scenario_sine(cfg, em);
    else m = scenario_bl(cfg, em);
    m["outputs"] = em.outputs();
    em.manifest(m);
    return m;
}

}  // namespace otmesh
