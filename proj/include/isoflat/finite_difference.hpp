#pragma once

// Second-order finite differences on uniform grids: central stencils in the
// interior, second-order one-sided stencils on the boundary rows/columns so
// every node gets a value. Works for any value type closed under addition
// and scalar multiplication (double, Eigen vectors, algebra elements).

#include "isoflat/grid.hpp"

namespace isoflat::fd {

namespace detail {

template <class T, class Get>
T first_derivative(Get&& at, int k, int n, double h) {
  const double s = 1.0 / (2.0 * h);
  if (k == 0) return (at(1) * 4.0 - at(0) * 3.0 - at(2)) * s;
  if (k == n - 1) return (at(n - 1) * 3.0 - at(n - 2) * 4.0 + at(n - 3)) * s;
  return (at(k + 1) - at(k - 1)) * s;
}

template <class T, class Get>
T second_derivative(Get&& at, int k, int n, double h) {
  const double s = 1.0 / (h * h);
  if (k == 0) return (at(0) * 2.0 - at(1) * 5.0 + at(2) * 4.0 - at(3)) * s;
  if (k == n - 1) return (at(n - 1) * 2.0 - at(n - 2) * 5.0 + at(n - 3) * 4.0 - at(n - 4)) * s;
  return (at(k + 1) - at(k) * 2.0 + at(k - 1)) * s;
}

}  // namespace detail

template <class T>
Field<T> d_dx(const Field<T>& f) {
  const Grid& g = f.grid();
  return Field<T>::generate(g, [&](int i, int j) {
    return detail::first_derivative<T>([&](int k) -> const T& { return f(k, j); }, i, g.nx, g.hx);
  });
}

template <class T>
Field<T> d_dy(const Field<T>& f) {
  const Grid& g = f.grid();
  return Field<T>::generate(g, [&](int i, int j) {
    return detail::first_derivative<T>([&](int k) -> const T& { return f(i, k); }, j, g.ny, g.hy);
  });
}

template <class T>
Field<T> d2_dx2(const Field<T>& f) {
  const Grid& g = f.grid();
  return Field<T>::generate(g, [&](int i, int j) {
    return detail::second_derivative<T>([&](int k) -> const T& { return f(k, j); }, i, g.nx, g.hx);
  });
}

template <class T>
Field<T> d2_dy2(const Field<T>& f) {
  const Grid& g = f.grid();
  return Field<T>::generate(g, [&](int i, int j) {
    return detail::second_derivative<T>([&](int k) -> const T& { return f(i, k); }, j, g.ny, g.hy);
  });
}

/// Mixed derivative; reduces to the four-point cross stencil in the interior.
template <class T>
Field<T> d2_dxdy(const Field<T>& f) {
  return d_dx(d_dy(f));
}

template <class T>
Field<T> laplacian(const Field<T>& f) {
  Field<T> out = d2_dx2(f);
  const Field<T> yy = d2_dy2(f);
  for (std::size_t n = 0; n < out.values().size(); ++n) out.values()[n] = out.values()[n] + yy.values()[n];
  return out;
}

}  // namespace isoflat::fd
