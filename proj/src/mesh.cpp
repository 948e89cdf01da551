#include "otmesh/mesh.hpp"

#include <stdexcept>

namespace otmesh {

MeshMapping MeshMapping::identity(const Grid2D& g) {
    g.check();
    MeshMapping m(g);
    for (int i = 0; i < g.nx; ++i)
        for (int j = 0; j < g.ny; ++j) m.set_pos(i, j, {g.xi(i), g.eta(j)});
    return m;
}

namespace {

/// Fetch a node position with periodic wrap; `jump` accumulates the period
/// offset applied to the wrapped component.
Vec2 wrapped_pos(const MeshMapping& m, int i, int j) {
    const Grid2D& g = m.grid;
    Vec2 shift{0.0, 0.0};
    if (i < 0) {
        i += g.nx;
        shift.x -= (g.x1 - g.x0);
    } else if (i >= g.nx) {
        i -= g.nx;
        shift.x += (g.x1 - g.x0);
    }
    if (j < 0) {
        j += g.ny;
        shift.y -= (g.y1 - g.y0);
    } else if (j >= g.ny) {
        j -= g.ny;
        shift.y += (g.y1 - g.y0);
    }
    return m.pos(i, j) + shift;
}

}  // namespace

Jacobian2 discrete_jacobian(const MeshMapping& mesh, int i, int j) {
    const Grid2D& g = mesh.grid;
    if (i < 0 || i >= g.nx || j < 0 || j >= g.ny)
        throw std::out_of_range("discrete_jacobian: node index outside grid");

    const double hx = g.hx(), hy = g.hy();
    Vec2 d_xi, d_eta;

    if (g.bcx == AxisBC::periodic) {
        d_xi = (wrapped_pos(mesh, i + 1, j) - wrapped_pos(mesh, i - 1, j)) / (2.0 * hx);
    } else if (i == 0) {
        d_xi = (mesh.pos(0, j) * -3.0 + mesh.pos(1, j) * 4.0 - mesh.pos(2, j)) / (2.0 * hx);
    } else if (i == g.nx - 1) {
        d_xi = (mesh.pos(i, j) * 3.0 - mesh.pos(i - 1, j) * 4.0 + mesh.pos(i - 2, j)) / (2.0 * hx);
    } else {
        d_xi = (mesh.pos(i + 1, j) - mesh.pos(i - 1, j)) / (2.0 * hx);
    }

    if (g.bcy == AxisBC::periodic) {
        d_eta = (wrapped_pos(mesh, i, j + 1) - wrapped_pos(mesh, i, j - 1)) / (2.0 * hy);
    } else if (j == 0) {
        d_eta = (mesh.pos(i, 0) * -3.0 + mesh.pos(i, 1) * 4.0 - mesh.pos(i, 2)) / (2.0 * hy);
    } else if (j == g.ny - 1) {
        d_eta = (mesh.pos(i, j) * 3.0 - mesh.pos(i, j - 1) * 4.0 + mesh.pos(i, j - 2)) / (2.0 * hy);
    } else {
        d_eta = (mesh.pos(i, j + 1) - mesh.pos(i, j - 1)) / (2.0 * hy);
    }

    return Jacobian2{d_xi.x, d_eta.x, d_xi.y, d_eta.y};
}

}  // namespace otmesh
