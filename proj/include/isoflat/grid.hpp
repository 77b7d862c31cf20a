#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "isoflat/errors.hpp"

namespace isoflat {

/// Uniform rectangular grid over the canonical coordinates (x, y).
/// Node (i, j) sits at (x0 + i hx, y0 + j hy), 0 <= i < nx, 0 <= j < ny.
struct Grid {
  int nx = 0;
  int ny = 0;
  double hx = 0.0;
  double hy = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;

  /// nx by ny nodes spanning [x_min, x_max] x [y_min, y_max].
  static Grid spanning(int nx, int ny, double x_min, double x_max, double y_min, double y_max);

  /// Same domain with the spacing halved.
  Grid refined() const;

  /// Throws InputError unless nx, ny >= 5 and hx, hy are positive and finite.
  void validate() const;

  double x(int i) const { return x0 + i * hx; }
  double y(int j) const { return y0 + j * hy; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }

  friend bool operator==(const Grid&, const Grid&) = default;
};

inline constexpr int kMinGridNodes = 5;

/// Node-centred field on a grid, stored row-major (rows along y).
template <class T>
class Field {
 public:
  Field() = default;
  Field(const Grid& grid, const T& init) : grid_(grid), values_(grid.size(), init) {}

  template <class Fn>
  static Field generate(const Grid& grid, Fn&& fn) {
    std::vector<T> values;
    values.reserve(grid.size());
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) values.push_back(fn(i, j));
    Field f;
    f.grid_ = grid;
    f.values_ = std::move(values);
    return f;
  }

  const Grid& grid() const { return grid_; }
  T& operator()(int i, int j) { return values_[grid_.index(i, j)]; }
  const T& operator()(int i, int j) const { return values_[grid_.index(i, j)]; }
  const std::vector<T>& values() const { return values_; }
  std::vector<T>& values() { return values_; }

 private:
  Grid grid_;
  std::vector<T> values_;
};

using ScalarField = Field<double>;

/// Throws InputError when the field's grid differs from the expected one.
template <class T>
void require_grid(const Field<T>& f, const Grid& grid, const char* what) {
  if (!(f.grid() == grid)) throw InputError(std::string(what) + ": field grid does not match");
}

}  // namespace isoflat
