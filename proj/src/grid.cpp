#include "isoflat/grid.hpp"

#include <cmath>

namespace isoflat {

Grid Grid::spanning(int nx, int ny, double x_min, double x_max, double y_min, double y_max) {
  if (nx < 2 || ny < 2) throw InputError("grid: need at least two nodes per direction");
  Grid g{nx, ny, (x_max - x_min) / (nx - 1), (y_max - y_min) / (ny - 1), x_min, y_min};
  g.validate();
  return g;
}

Grid Grid::refined() const {
  return Grid{2 * nx - 1, 2 * ny - 1, hx / 2.0, hy / 2.0, x0, y0};
}

void Grid::validate() const {
  if (nx < kMinGridNodes || ny < kMinGridNodes) {
    throw InputError("grid: nx and ny must be at least " + std::to_string(kMinGridNodes) +
                     " (got " + std::to_string(nx) + " x " + std::to_string(ny) + ")");
  }
  if (!(hx > 0.0) || !(hy > 0.0) || !std::isfinite(hx) || !std::isfinite(hy)) {
    throw InputError("grid: spacings hx, hy must be positive and finite");
  }
  if (!std::isfinite(x0) || !std::isfinite(y0)) throw InputError("grid: origin must be finite");
}

}  // namespace isoflat
