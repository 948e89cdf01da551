#pragma once

#include <vector>

#include "otmesh/grid.hpp"
#include "otmesh/linalg.hpp"

namespace otmesh {

/// Discrete mesh map x(xi): physical node coordinates over a computational
/// grid. Along a periodic axis the map is periodic up to the domain period:
/// crossing the i-seam adds (x1-x0, 0) to the position, crossing the j-seam
/// adds (0, y1-y0); discrete derivatives account for that jump.
struct MeshMapping {
    Grid2D grid;
    std::vector<double> xs, ys;  // idx = i*ny + j

    MeshMapping() = default;
    explicit MeshMapping(const Grid2D& g)
        : grid(g), xs(static_cast<size_t>(g.size()), 0.0), ys(static_cast<size_t>(g.size()), 0.0) {}

    static MeshMapping identity(const Grid2D& g);

    Vec2 pos(int i, int j) const {
        const int k = grid.idx(i, j);
        return {xs[static_cast<size_t>(k)], ys[static_cast<size_t>(k)]};
    }
    void set_pos(int i, int j, Vec2 p) {
        const int k = grid.idx(i, j);
        xs[static_cast<size_t>(k)] = p.x;
        ys[static_cast<size_t>(k)] = p.y;
    }
};

/// Second-order discrete Jacobian at node (i, j): central differences in the
/// interior, second-order one-sided stencils at Neumann edges, wraparound
/// (with the period jump) at periodic edges.
Jacobian2 discrete_jacobian(const MeshMapping& mesh, int i, int j);

}  // namespace otmesh
