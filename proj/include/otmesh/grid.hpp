#pragma once

#include <stdexcept>
#include <string>

namespace otmesh {

/// Boundary handling for one computational axis.
enum class AxisBC { neumann, periodic };

inline const char* to_string(AxisBC bc) {
    return bc == AxisBC::periodic ? "periodic" : "neumann";
}

inline AxisBC axis_bc_from_string(const std::string& s) {
    if (s == "periodic") return AxisBC::periodic;
    if (s == "neumann") return AxisBC::neumann;
    throw std::invalid_argument("unknown boundary kind: " + s);
}

/// Uniform structured computational grid on [x0,x1] x [y0,y1].
///
/// A Neumann axis carries nx nodes including both endpoints,
/// h = (x1-x0)/(nx-1). A periodic axis carries nx distinct nodes covering
/// one period, h = (x1-x0)/nx (the node at x1 is identified with x0).
/// Node storage is row-major over (i, j) with j fastest: idx = i*ny + j.
struct Grid2D {
    int nx = 3, ny = 3;
    double x0 = 0.0, x1 = 1.0;
    double y0 = 0.0, y1 = 1.0;
    AxisBC bcx = AxisBC::neumann;
    AxisBC bcy = AxisBC::neumann;

    void check() const {
        if (nx < 3 || ny < 3) throw std::invalid_argument("Grid2D: need nx >= 3 and ny >= 3");
        if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("Grid2D: empty domain");
    }

    double hx() const { return (x1 - x0) / (bcx == AxisBC::periodic ? nx : nx - 1); }
    double hy() const { return (y1 - y0) / (bcy == AxisBC::periodic ? ny : ny - 1); }

    double xi(int i) const { return x0 + i * hx(); }
    double eta(int j) const { return y0 + j * hy(); }

    int idx(int i, int j) const { return i * ny + j; }
    int size() const { return nx * ny; }

    bool operator==(const Grid2D& o) const {
        return nx == o.nx && ny == o.ny && x0 == o.x0 && x1 == o.x1 && y0 == o.y0 &&
               y1 == o.y1 && bcx == o.bcx && bcy == o.bcy;
    }
};

}  // namespace otmesh
