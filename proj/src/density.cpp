#include "otmesh/density.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

namespace otmesh {

DensityField DensityField::from_function(std::function<double(double, double)> f,
                                         std::optional<double> theta) {
    DensityField d;
    d.rho = std::move(f);
    d.theta = theta;
    return d;
}

DensityField DensityField::from_samples(double x0, double x1, double y0, double y1,
                                        int nx, int ny, std::vector<double> values,
                                        std::optional<double> theta) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("from_samples: need nx, ny >= 2");
    if (!(x1 > x0) || !(y1 > y0)) throw std::invalid_argument("from_samples: empty rectangle");
    if (static_cast<int>(values.size()) != nx * ny)
        throw std::invalid_argument("from_samples: value count does not match nx*ny");

    struct Table {
        double x0, y0, hx, hy;
        int nx, ny;
        std::vector<double> v;
    };
    auto tab = std::make_shared<const Table>(Table{
        x0, y0, (x1 - x0) / (nx - 1), (y1 - y0) / (ny - 1), nx, ny, std::move(values)});

    DensityField d;
    d.theta = theta;
    d.rho = [tab](double x, double y) {
        double fx = (x - tab->x0) / tab->hx;
        double fy = (y - tab->y0) / tab->hy;
        fx = std::clamp(fx, 0.0, static_cast<double>(tab->nx - 1));
        fy = std::clamp(fy, 0.0, static_cast<double>(tab->ny - 1));
        const int i = std::min(static_cast<int>(fx), tab->nx - 2);
        const int j = std::min(static_cast<int>(fy), tab->ny - 2);
        const double tx = fx - i;
        const double ty = fy - j;
        const auto& v = tab->v;
        const int ny = tab->ny;
        const double v00 = v[i * ny + j], v01 = v[i * ny + j + 1];
        const double v10 = v[(i + 1) * ny + j], v11 = v[(i + 1) * ny + j + 1];
        return (1 - tx) * ((1 - ty) * v00 + ty * v01) + tx * ((1 - ty) * v10 + ty * v11);
    };
    return d;
}

}  // namespace otmesh
