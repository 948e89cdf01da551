#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "otmesh/linalg.hpp"
#include "otmesh/mesh.hpp"
#include "otmesh/quality.hpp"

namespace otmesh {

/// The per-node columns of a mesh CSV file, in file order.
struct MeshRow {
    int i = 0, j = 0;
    double xi = 0.0, eta = 0.0;   ///< computational coordinates
    double x = 0.0, y = 0.0;      ///< physical coordinates
    double qs = 0.0;              ///< skewness at the node
    double lambda1 = 0.0, lambda2 = 0.0;  ///< stretch factors (ellipse semis)
    double e1x = 1.0, e1y = 0.0;  ///< direction of the first stretch
};

/// Everything needed to serialize one mesh: the computational grid plus the
/// node table in row-major (i-outer) order.
struct MeshExport {
    Grid2D grid;
    std::vector<MeshRow> rows;
};

/// Assembles the export table from a quality report (analytic or numeric).
MeshExport mesh_export(const QualityReport& rep);

/// Writes `i,j,xi,eta,x,y,Qs,lambda1,lambda2,e1x,e1y` rows with full
/// round-trip precision (17 significant digits). Throws IoError on failure.
void write_mesh_csv(const std::string& path, const MeshExport& mex);

/// Reads a mesh CSV back; values are bit-identical to what was written.
/// The grid is reconstructed from the index and coordinate columns with
/// all-Neumann axes (boundary kinds are not stored in the file).
MeshExport read_mesh_csv(const std::string& path);

/// Writes a scalar field sampled on the grid as `i,j,<name>` rows.
void write_scalar_csv(const std::string& path, const Grid2D& g,
                      const std::vector<double>& values, const std::string& name);

/// Writes sampled element ellipses as
/// `x,y,semi1,semi2,axis1x,axis1y` rows.
void write_ellipses_csv(const std::string& path, const std::vector<Ellipse>& ellipses);

/// Legacy VTK structured-grid file (ASCII) with the mesh points and one
/// POINT_DATA scalar per entry of `scalars` (Qs, lambda1, lambda2 are always
/// included first).
void write_mesh_vtk(
    const std::string& path, const MeshExport& mex,
    const std::vector<std::pair<std::string, const std::vector<double>*>>& scalars = {});

/// Flat `key = value` settings file with `#` comments and blank lines.
/// Returns keys in file order. Throws IoError if unreadable, ConfigError on
/// a malformed line (naming the line number).
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path);

/// One run request: which scenario, where to write, which formats, and the
/// union of scenario parameters (each scenario reads the ones it uses;
/// defaults differ per scenario and are applied by the CLI).
struct ScenarioConfig {
    std::string scenario;
    std::string out_dir = ".";
    std::string formats = "csv,vtk,json";

    double alpha = 50.0;       ///< linear layer strength
    double magnitude2 = 10.0;  ///< second crossing layer: bump height
    double width2 = 25.0;      ///<   and width
    double alpha1 = 10.0;      ///< radial / curved feature strength
    double alpha2 = 200.0;     ///<   and width parameter
    double a = 0.25;           ///< ring radius (0 = blow-up at the origin)
    double amplitude = 0.2;    ///< sinusoidal feature amplitude

    int n = 60;          ///< nodes per side (columns for sine-feature)
    int ny = 0;          ///< rows; 0 = scenario default
    int nr = 60;         ///< polar: radial nodes
    int nphi = 128;      ///< polar: angular nodes
    int stride = 4;      ///< ellipse sampling stride

    std::string density = "ring";  ///< ma-numeric: ring | blowup
    double tol = 1e-3;             ///< relaxation residual target

    double tend = 0.4;        ///< buckley-leverett end time
    double viscosity = 1.1e-3;
    double cfl = 0.4;
    int max_steps = 20000;
    std::string snapshots;    ///< comma-separated times, e.g. "0.2,0.4"

    void check() const;  ///< throws ConfigError naming the offending field
};

/// Runs one scenario: computes the requested mesh/solution, writes the files
/// selected by `formats` into `out_dir`, and returns the manifest (which is
/// also written when "json" is selected). Throws ConfigError / SolverError /
/// IoError; the CLI maps these to exit codes 1 / 2 / 3.
nlohmann::ordered_json run_scenario(const ScenarioConfig& cfg);

}  // namespace otmesh
